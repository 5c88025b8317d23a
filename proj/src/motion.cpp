#include "stc/motion.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <stdexcept>

namespace stc {

namespace {

constexpr double kMinAspect = 1e-6;
constexpr double kMinHeight = 1.0;

bool is_aspect_index(int i) { return i % 4 == 2; }

}  // namespace

KalmanParams KalmanParams::with_weights(double std_weight_position, double std_weight_velocity) {
  KalmanParams p;
  p.transition.setIdentity();
  for (int i = 0; i < 4; ++i) p.transition(i, i + 4) = 1.0;
  p.observation.setZero();
  for (int i = 0; i < 4; ++i) p.observation(i, i) = 1.0;

  const double wp = std_weight_position;
  const double wv = std_weight_velocity;
  p.initial_std_scale << 2 * wp, 2 * wp, 1e-2, 2 * wp, 10 * wv, 10 * wv, 1e-5, 10 * wv;
  p.process_noise_scale << wp, wp, 1e-2, wp, wv, wv, 1e-5, wv;
  p.measurement_noise_scale << wp, wp, 1e-1, wp;
  return p;
}

KalmanParams KalmanParams::defaults() { return with_weights(1.0 / 20.0, 1.0 / 160.0); }

StateCovariance KalmanParams::process_noise(double height) const {
  StateVector std_dev;
  for (int i = 0; i < 8; ++i) {
    std_dev(i) = is_aspect_index(i) ? process_noise_scale(i) : process_noise_scale(i) * height;
  }
  return std_dev.array().square().matrix().asDiagonal();
}

Eigen::Matrix4d KalmanParams::measurement_noise(double height) const {
  MeasurementVector std_dev;
  for (int i = 0; i < 4; ++i) {
    std_dev(i) = is_aspect_index(i) ? measurement_noise_scale(i)
                                    : measurement_noise_scale(i) * height;
  }
  return std_dev.array().square().matrix().asDiagonal();
}

CenterBox KalmanState::center_box() const { return {mean(0), mean(1), mean(2), mean(3)}; }

BBox KalmanState::box() const { return BBox::from_center(center_box()); }

MeasurementVector to_measurement(const CenterBox& c) {
  return MeasurementVector(c.x_c, c.y_c, c.aspect, c.height);
}

KalmanState initiate(const CenterBox& measurement, const KalmanParams& params) {
  KalmanState s;
  s.mean.setZero();
  s.mean.head<4>() = to_measurement(measurement);
  StateVector std_dev;
  for (int i = 0; i < 8; ++i) {
    std_dev(i) = is_aspect_index(i) ? params.initial_std_scale(i)
                                    : params.initial_std_scale(i) * measurement.height;
  }
  s.covariance = std_dev.array().square().matrix().asDiagonal();
  return s;
}

KalmanState predict(const KalmanState& state, const KalmanParams& params) {
  const auto& F = params.transition;
  KalmanState out;
  out.mean = F * state.mean;
  out.covariance = F * state.covariance * F.transpose() + params.process_noise(state.mean(3));
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();
  out.mean(2) = std::max(out.mean(2), kMinAspect);
  out.mean(3) = std::max(out.mean(3), kMinHeight);
  return out;
}

KalmanState update(const KalmanState& state, const MeasurementVector& measurement,
                   const KalmanParams& params) {
  if (!measurement.allFinite()) {
    throw std::invalid_argument("Kalman update: non-finite measurement");
  }
  const auto& H = params.observation;
  const auto& P = state.covariance;
  const Eigen::Matrix4d R = params.measurement_noise(state.mean(3));
  const Eigen::Matrix4d S = H * P * H.transpose() + R;

  // K = P H^T S^-1, solved as S K^T = H P.
  const Eigen::Matrix<double, 8, 4> gain =
      S.ldlt().solve(H * P).transpose();
  const MeasurementVector innovation = measurement - H * state.mean;

  KalmanState out;
  out.mean = state.mean + gain * innovation;
  const StateCovariance I_KH = StateCovariance::Identity() - gain * H;
  out.covariance = I_KH * P * I_KH.transpose() + gain * R * gain.transpose();
  out.covariance = 0.5 * (out.covariance + out.covariance.transpose()).eval();

  out.mean(2) = std::max(out.mean(2), kMinAspect);
  out.mean(3) = std::max(out.mean(3), kMinHeight);
  return out;
}

}  // namespace stc

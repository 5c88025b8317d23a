#pragma once

#include <Eigen/Core>

#include "stc/geometry.hpp"

namespace stc {

using StateVector = Eigen::Matrix<double, 8, 1>;
using StateCovariance = Eigen::Matrix<double, 8, 8>;
using MeasurementVector = Eigen::Matrix<double, 4, 1>;
using ObservationMatrix = Eigen::Matrix<double, 4, 8>;

/// Constant-velocity filter over (x_c, y_c, a, h, and their rates).
///
/// Noise standard deviations follow the height-proportional model: entry i of
/// each scale vector is multiplied by the current box height, except the
/// aspect-ratio entries (index 2 and 6 of the state, 2 of the measurement)
/// which are absolute.
struct KalmanParams {
  StateCovariance transition;
  ObservationMatrix observation;
  StateVector initial_std_scale;
  StateVector process_noise_scale;
  MeasurementVector measurement_noise_scale;

  /// Unit-dt transition with position weight 1/20 and velocity weight 1/160.
  static KalmanParams with_weights(double std_weight_position, double std_weight_velocity);
  static KalmanParams defaults();

  StateCovariance process_noise(double height) const;
  Eigen::Matrix4d measurement_noise(double height) const;
};

struct KalmanState {
  StateVector mean;
  StateCovariance covariance;

  CenterBox center_box() const;
  BBox box() const;
};

KalmanState initiate(const CenterBox& measurement, const KalmanParams& params);

/// Clamps aspect and height like update() does.
KalmanState predict(const KalmanState& state, const KalmanParams& params);

/// Measurement update in Joseph form, symmetrized. Throws
/// std::invalid_argument on a non-finite measurement. Afterwards the aspect
/// ratio is kept positive and the height at least one pixel.
KalmanState update(const KalmanState& state, const MeasurementVector& measurement,
                   const KalmanParams& params);

MeasurementVector to_measurement(const CenterBox& c);

}  // namespace stc

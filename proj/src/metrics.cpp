#include "stc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "stc/association.hpp"

namespace stc {

namespace {

double safe_ratio(double num, double den) { return num / std::max(1.0, den); }

struct FrameBoxes {
  std::vector<int> ids;  // dense indices
  std::vector<const BBox*> boxes;
};

// Trajectories re-indexed by frame with dense ids (position in the input).
struct Indexed {
  std::vector<int> ids;
  std::vector<long> lengths;
  std::map<int, FrameBoxes> frames;
  long total = 0;
};

Indexed index(std::span<const Trajectory> trajs, const char* side) {
  Indexed out;
  std::set<int> seen;
  for (std::size_t k = 0; k < trajs.size(); ++k) {
    const auto& t = trajs[k];
    if (!seen.insert(t.id).second) {
      throw std::invalid_argument(std::string("duplicate ") + side + " trajectory id " +
                                  std::to_string(t.id));
    }
    out.ids.push_back(t.id);
    out.lengths.push_back(static_cast<long>(t.samples.size()));
    out.total += static_cast<long>(t.samples.size());
    for (const auto& [frame, s] : t.samples) {
      auto& f = out.frames[frame];
      f.ids.push_back(static_cast<int>(k));
      f.boxes.push_back(&s.box);
    }
  }
  return out;
}

std::vector<int> all_frames(const Indexed& a, const Indexed& b) {
  std::set<int> frames;
  for (const auto& [f, _] : a.frames) frames.insert(f);
  for (const auto& [f, _] : b.frames) frames.insert(f);
  return {frames.begin(), frames.end()};
}

const FrameBoxes& at(const Indexed& idx, int frame) {
  static const FrameBoxes kEmpty;
  auto it = idx.frames.find(frame);
  return it == idx.frames.end() ? kEmpty : it->second;
}

std::vector<double> iou_matrix(const FrameBoxes& g, const FrameBoxes& p) {
  std::vector<double> m(g.ids.size() * p.ids.size());
  for (std::size_t i = 0; i < g.ids.size(); ++i) {
    for (std::size_t j = 0; j < p.ids.size(); ++j) {
      m[i * p.ids.size() + j] = iou(*g.boxes[i], *p.boxes[j]);
    }
  }
  return m;
}

}  // namespace

double ClearReport::mt_fraction() const { return safe_ratio(static_cast<double>(mt), gt_tracks); }
double ClearReport::ml_fraction() const { return safe_ratio(static_cast<double>(ml), gt_tracks); }

void finish(ClearReport& r) {
  const double gt = static_cast<double>(r.gt_count);
  r.mota = gt > 0 ? 1.0 - static_cast<double>(r.fn + r.fp + r.idsw) / gt
                  : -static_cast<double>(r.fn + r.fp + r.idsw);
  r.motp = safe_ratio(r.iou_sum, static_cast<double>(r.matches));
  r.motp_distance = r.matches > 0 ? 1.0 - r.motp : 0.0;
}

void finish(IdReport& r) {
  r.idf1 = safe_ratio(2.0 * static_cast<double>(r.idtp),
                      static_cast<double>(2 * r.idtp + r.idfp + r.idfn));
}

void finish(HotaReport& r) {
  double sum = 0.0;
  for (auto& a : r.per_alpha) {
    const double den = static_cast<double>(a.tp + a.fn + a.fp);
    a.det_a = safe_ratio(static_cast<double>(a.tp), den);
    a.ass_a = safe_ratio(a.assoc_sum, static_cast<double>(a.tp));
    a.hota = std::sqrt(safe_ratio(a.assoc_sum, den));
    sum += a.hota;
  }
  r.hota = r.per_alpha.empty() ? 0.0 : sum / static_cast<double>(r.per_alpha.size());
}

ClearReport clear_mot(std::span<const Trajectory> gt, std::span<const Trajectory> pred,
                      double iou_threshold, FrameMatches* matches_out) {
  const Indexed g = index(gt, "ground-truth");
  const Indexed p = index(pred, "predicted");
  ClearReport r;
  r.gt_count = g.total;
  r.gt_tracks = static_cast<long>(g.ids.size());

  std::vector<std::optional<int>> last_match(g.ids.size());
  std::vector<long> matched_frames(g.ids.size(), 0);
  std::unordered_map<int, int> prev;  // gt -> pred, previous frame only
  std::optional<int> prev_frame;

  for (int frame : all_frames(g, p)) {
    const FrameBoxes& gf = at(g, frame);
    const FrameBoxes& pf = at(p, frame);
    const std::size_t ng = gf.ids.size(), np = pf.ids.size();
    const auto sim = iou_matrix(gf, pf);
    if (!prev_frame || *prev_frame != frame - 1) prev.clear();

    std::vector<std::optional<std::size_t>> g_to_p(ng);
    std::vector<char> p_used(np, 0);
    for (std::size_t i = 0; i < ng; ++i) {
      auto it = prev.find(gf.ids[i]);
      if (it == prev.end()) continue;
      for (std::size_t j = 0; j < np; ++j) {
        if (pf.ids[j] == it->second && !p_used[j] && sim[i * np + j] >= iou_threshold) {
          g_to_p[i] = j;
          p_used[j] = 1;
          break;
        }
      }
    }
    std::vector<std::size_t> rest_g, rest_p;
    for (std::size_t i = 0; i < ng; ++i) {
      if (!g_to_p[i]) rest_g.push_back(i);
    }
    for (std::size_t j = 0; j < np; ++j) {
      if (!p_used[j]) rest_p.push_back(j);
    }
    CostMatrix cost(rest_g.size(), rest_p.size());
    for (std::size_t a = 0; a < rest_g.size(); ++a) {
      for (std::size_t b = 0; b < rest_p.size(); ++b) {
        const double s = sim[rest_g[a] * np + rest_p[b]];
        cost(a, b) = s >= iou_threshold ? 1.0 - s : CostMatrix::kInfeasible;
      }
    }
    const auto assigned = linear_assignment(cost);
    for (std::size_t a = 0; a < rest_g.size(); ++a) {
      if (assigned[a]) g_to_p[rest_g[a]] = rest_p[*assigned[a]];
    }

    prev.clear();
    long n_match = 0;
    for (std::size_t i = 0; i < ng; ++i) {
      if (!g_to_p[i]) continue;
      const std::size_t j = *g_to_p[i];
      const int gi = gf.ids[i], pj = pf.ids[j];
      ++n_match;
      r.iou_sum += sim[i * np + j];
      if (last_match[gi] && *last_match[gi] != pj) ++r.idsw;
      last_match[gi] = pj;
      ++matched_frames[gi];
      prev[gi] = pj;
      if (matches_out) (*matches_out)[frame].emplace_back(g.ids[gi], p.ids[pj]);
    }
    r.matches += n_match;
    r.fn += static_cast<long>(ng) - n_match;
    r.fp += static_cast<long>(np) - n_match;
    prev_frame = frame;
  }

  for (std::size_t k = 0; k < g.ids.size(); ++k) {
    const double ratio = static_cast<double>(matched_frames[k]) / static_cast<double>(g.lengths[k]);
    if (ratio >= 0.8) ++r.mt;
    if (ratio <= 0.2) ++r.ml;
  }
  finish(r);
  return r;
}

IdReport idf1(std::span<const Trajectory> gt, std::span<const Trajectory> pred,
              double iou_threshold) {
  const Indexed g = index(gt, "ground-truth");
  const Indexed p = index(pred, "predicted");
  const std::size_t ng = g.ids.size(), np = p.ids.size();
  std::vector<long> overlap(ng * np, 0);
  for (int frame : all_frames(g, p)) {
    const FrameBoxes& gf = at(g, frame);
    const FrameBoxes& pf = at(p, frame);
    for (std::size_t i = 0; i < gf.ids.size(); ++i) {
      for (std::size_t j = 0; j < pf.ids.size(); ++j) {
        if (iou(*gf.boxes[i], *pf.boxes[j]) >= iou_threshold) {
          ++overlap[static_cast<std::size_t>(gf.ids[i]) * np + static_cast<std::size_t>(pf.ids[j])];
        }
      }
    }
  }
  // Pairing gt i with pred j removes 2 * overlap(i, j) identity errors
  // relative to leaving both unpaired, so maximize the summed overlap.
  CostMatrix cost(ng, np);
  for (std::size_t i = 0; i < ng; ++i) {
    for (std::size_t j = 0; j < np; ++j) cost(i, j) = -static_cast<double>(overlap[i * np + j]);
  }
  IdReport r;
  const auto assigned = linear_assignment(cost);
  for (std::size_t i = 0; i < ng; ++i) {
    if (assigned[i]) r.idtp += overlap[i * np + *assigned[i]];
  }
  r.idfn = g.total - r.idtp;
  r.idfp = p.total - r.idtp;
  finish(r);
  return r;
}

std::vector<double> default_hota_alphas() {
  std::vector<double> a;
  for (int k = 1; k <= 19; ++k) a.push_back(k / 20.0);
  return a;
}

HotaReport hota(std::span<const Trajectory> gt, std::span<const Trajectory> pred) {
  const auto alphas = default_hota_alphas();
  return hota(gt, pred, alphas);
}

HotaReport hota(std::span<const Trajectory> gt, std::span<const Trajectory> pred,
                std::span<const double> alphas) {
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("hota: alphas must lie in (0, 1)");
  }
  const Indexed g = index(gt, "ground-truth");
  const Indexed p = index(pred, "predicted");
  const std::size_t ng = g.ids.size(), np = p.ids.size();
  const auto frames = all_frames(g, p);

  // Global alignment score between identities from soft per-frame overlaps.
  std::vector<double> potential(ng * np, 0.0);
  for (int frame : frames) {
    const FrameBoxes& gf = at(g, frame);
    const FrameBoxes& pf = at(p, frame);
    const std::size_t fg = gf.ids.size(), fp = pf.ids.size();
    const auto sim = iou_matrix(gf, pf);
    std::vector<double> row_sum(fg, 0.0), col_sum(fp, 0.0);
    for (std::size_t i = 0; i < fg; ++i) {
      for (std::size_t j = 0; j < fp; ++j) {
        row_sum[i] += sim[i * fp + j];
        col_sum[j] += sim[i * fp + j];
      }
    }
    for (std::size_t i = 0; i < fg; ++i) {
      for (std::size_t j = 0; j < fp; ++j) {
        const double s = sim[i * fp + j];
        const double den = row_sum[i] + col_sum[j] - s;
        if (den > 0.0) {
          potential[static_cast<std::size_t>(gf.ids[i]) * np + static_cast<std::size_t>(pf.ids[j])] +=
              s / den;
        }
      }
    }
  }
  std::vector<double> alignment(ng * np, 0.0);
  for (std::size_t i = 0; i < ng; ++i) {
    for (std::size_t j = 0; j < np; ++j) {
      const double pot = potential[i * np + j];
      const double den = static_cast<double>(g.lengths[i] + p.lengths[j]) - pot;
      alignment[i * np + j] = den > 0.0 ? pot / den : 0.0;
    }
  }

  HotaReport report;
  for (double alpha : alphas) {
    HotaAlphaResult res;
    res.alpha = alpha;
    std::vector<long> pair_tp(ng * np, 0);
    for (int frame : frames) {
      const FrameBoxes& gf = at(g, frame);
      const FrameBoxes& pf = at(p, frame);
      const std::size_t fg = gf.ids.size(), fp = pf.ids.size();
      const auto sim = iou_matrix(gf, pf);
      // Most true positives first, then the highest summed alignment.
      CostMatrix cost(fg, fp);
      for (std::size_t i = 0; i < fg; ++i) {
        for (std::size_t j = 0; j < fp; ++j) {
          cost(i, j) = sim[i * fp + j] >= alpha
                           ? -alignment[static_cast<std::size_t>(gf.ids[i]) * np +
                                        static_cast<std::size_t>(pf.ids[j])]
                           : CostMatrix::kInfeasible;
        }
      }
      const auto assigned = linear_assignment(cost);
      long n = 0;
      for (std::size_t i = 0; i < fg; ++i) {
        if (!assigned[i]) continue;
        ++n;
        ++pair_tp[static_cast<std::size_t>(gf.ids[i]) * np +
                  static_cast<std::size_t>(pf.ids[*assigned[i]])];
      }
      res.tp += n;
      res.fn += static_cast<long>(fg) - n;
      res.fp += static_cast<long>(fp) - n;
    }
    for (std::size_t i = 0; i < ng; ++i) {
      for (std::size_t j = 0; j < np; ++j) {
        const long tpa = pair_tp[i * np + j];
        if (tpa == 0) continue;
        const long fna = g.lengths[i] - tpa;
        const long fpa = p.lengths[j] - tpa;
        res.assoc_sum += static_cast<double>(tpa) * static_cast<double>(tpa) /
                         static_cast<double>(tpa + fna + fpa);
        res.tpa += tpa * tpa;
        res.fna += tpa * fna;
        res.fpa += tpa * fpa;
      }
    }
    report.per_alpha.push_back(res);
  }
  finish(report);
  return report;
}

TrajectorySet remove_ignored(const GroundTruth& gt, std::span<const Trajectory> pred,
                             double threshold) {
  TrajectorySet out(pred.begin(), pred.end());
  if (gt.ignore_regions.empty()) return out;
  for (const auto& [frame, regions] : gt.ignore_regions) {
    std::vector<const BBox*> gt_boxes;
    std::vector<char> is_ignore;
    for (const auto& t : gt.tracks) {
      auto it = t.samples.find(frame);
      if (it != t.samples.end()) {
        gt_boxes.push_back(&it->second.box);
        is_ignore.push_back(0);
      }
    }
    for (const auto& b : regions) {
      gt_boxes.push_back(&b);
      is_ignore.push_back(1);
    }
    std::vector<Trajectory*> owners;
    for (auto& t : out) {
      if (t.samples.count(frame)) owners.push_back(&t);
    }
    CostMatrix cost(gt_boxes.size(), owners.size());
    for (std::size_t i = 0; i < gt_boxes.size(); ++i) {
      for (std::size_t j = 0; j < owners.size(); ++j) {
        const double s = iou(*gt_boxes[i], owners[j]->samples.at(frame).box);
        cost(i, j) = s >= threshold ? 1.0 - s : CostMatrix::kInfeasible;
      }
    }
    const auto assigned = linear_assignment(cost);
    for (std::size_t i = 0; i < gt_boxes.size(); ++i) {
      if (assigned[i] && is_ignore[i]) owners[*assigned[i]]->samples.erase(frame);
    }
  }
  std::erase_if(out, [](const Trajectory& t) { return t.samples.empty(); });
  return out;
}

MetricsReport evaluate(std::string name, std::span<const Trajectory> gt,
                       std::span<const Trajectory> pred, double iou_threshold) {
  MetricsReport r;
  r.name = std::move(name);
  r.clear = clear_mot(gt, pred, iou_threshold);
  r.id = idf1(gt, pred, iou_threshold);
  r.hota = hota(gt, pred);
  return r;
}

MetricsReport combine(std::span<const MetricsReport> reports, std::string name) {
  MetricsReport out;
  out.name = std::move(name);
  for (const auto& r : reports) {
    auto& c = out.clear;
    c.fp += r.clear.fp;
    c.fn += r.clear.fn;
    c.idsw += r.clear.idsw;
    c.gt_count += r.clear.gt_count;
    c.matches += r.clear.matches;
    c.iou_sum += r.clear.iou_sum;
    c.gt_tracks += r.clear.gt_tracks;
    c.mt += r.clear.mt;
    c.ml += r.clear.ml;
    out.id.idtp += r.id.idtp;
    out.id.idfp += r.id.idfp;
    out.id.idfn += r.id.idfn;
    if (out.hota.per_alpha.empty()) {
      out.hota.per_alpha.resize(r.hota.per_alpha.size());
      for (std::size_t k = 0; k < r.hota.per_alpha.size(); ++k) {
        out.hota.per_alpha[k].alpha = r.hota.per_alpha[k].alpha;
      }
    }
    if (out.hota.per_alpha.size() != r.hota.per_alpha.size()) {
      throw std::invalid_argument("combine: sequences evaluated with different alpha sets");
    }
    for (std::size_t k = 0; k < r.hota.per_alpha.size(); ++k) {
      auto& a = out.hota.per_alpha[k];
      const auto& b = r.hota.per_alpha[k];
      a.tp += b.tp;
      a.fn += b.fn;
      a.fp += b.fp;
      a.assoc_sum += b.assoc_sum;
      a.tpa += b.tpa;
      a.fna += b.fna;
      a.fpa += b.fpa;
    }
  }
  finish(out.clear);
  finish(out.id);
  finish(out.hota);
  return out;
}

}  // namespace stc

#include "gfm/search/keyposes.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace gfm::search {

namespace {

double point_segment_distance(const Eigen::Vector2d& p,
                              const Eigen::Vector2d& a,
                              const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 < 1e-18) {
    return (p - a).norm();
  }
  const double s = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - a - s * ab).norm();
}

// Ramer-Douglas-Peucker over path indices [lo, hi], collecting kept indices.
void rdp(const PosePath& path, std::size_t lo, std::size_t hi, double eps,
         std::set<std::size_t>& keep) {
  if (hi <= lo + 1) return;
  double worst = -1.0;
  std::size_t split = lo;
  for (std::size_t i = lo + 1; i < hi; ++i) {
    const double d = point_segment_distance(
        path[i].position(), path[lo].position(), path[hi].position());
    if (d > worst) {
      worst = d;
      split = i;
    }
  }
  if (worst > eps) {
    keep.insert(split);
    rdp(path, lo, split, eps, keep);
    rdp(path, split, hi, eps, keep);
  }
}

}  // namespace

std::vector<Eigen::Vector3d> extract_keyposes(const PosePath& path,
                                              const KeyposeConfig& config) {
  if (path.empty()) {
    throw std::invalid_argument("extract_keyposes needs a non-empty path");
  }

  std::set<std::size_t> keep;
  keep.insert(0);
  keep.insert(path.size() - 1);
  rdp(path, 0, path.size() - 1, config.rdp_epsilon, keep);

  // Spacing cap: subdivide long gaps with original path poses.
  std::vector<std::size_t> selected(keep.begin(), keep.end());
  std::vector<std::size_t> final_idx;
  final_idx.push_back(selected.front());
  for (std::size_t s = 0; s + 1 < selected.size(); ++s) {
    const std::size_t ia = selected[s];
    const std::size_t ib = selected[s + 1];
    double gap = 0.0;
    std::vector<double> cum(ib - ia + 1, 0.0);
    for (std::size_t i = ia; i < ib; ++i) {
      gap += (path[i + 1].position() - path[i].position()).norm();
      cum[i - ia + 1] = gap;
    }
    if (gap > config.max_spacing) {
      const int pieces = static_cast<int>(std::ceil(gap / config.max_spacing));
      std::size_t cursor = ia;
      for (int k = 1; k < pieces; ++k) {
        const double target = gap * k / pieces;
        std::size_t best = cursor;
        double best_err = std::numeric_limits<double>::infinity();
        for (std::size_t i = cursor + 1; i < ib; ++i) {
          const double err = std::abs(cum[i - ia] - target);
          if (err < best_err) {
            best_err = err;
            best = i;
          }
        }
        if (best > cursor) {
          final_idx.push_back(best);
          cursor = best;
        }
      }
    }
    final_idx.push_back(ib);
  }

  std::vector<Eigen::Vector3d> keyposes;
  keyposes.reserve(final_idx.size());
  double prev_yaw = path[final_idx.front()].theta;
  for (const std::size_t i : final_idx) {
    const double yaw = unwrap_near(path[i].theta, prev_yaw);
    keyposes.emplace_back(path[i].x, path[i].y, yaw);
    prev_yaw = yaw;
  }
  return keyposes;
}

}  // namespace gfm::search

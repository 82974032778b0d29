#include "gfm/search/hybrid_astar.hpp"

#include "gfm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace gfm::search {

namespace {

struct Node {
  PoseSE2 pose;
  double g = 0.0;
  double h = 0.0;
  int32_t parent = -1;
};

struct OpenItem {
  double f;
  double h;
  uint64_t seq;  // FIFO tie-break
  int32_t node;
};
struct OpenGreater {
  bool operator()(const OpenItem& a, const OpenItem& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.h != b.h) return a.h > b.h;
    return a.seq > b.seq;
  }
};

}  // namespace

SearchResult hybrid_astar(const world::DistanceField& df,
                          const mem::MetricEncodingMap& mem,
                          const HeuristicField& hfield, const PoseSE2& start,
                          const PoseSE2& goal, const SigmoidParams& sigmoid_p,
                          const SearchConfig& config) {
  const double res = df.resolution();
  const Eigen::Vector2d origin = df.origin();
  const int w = df.width();
  const int h = df.height();
  const int bins = config.theta_bins;

  auto clearance_ok = [&](const Eigen::Vector2d& p) {
    return df.sample(p).distance >= config.safety_margin;
  };
  if (!clearance_ok(start.position())) {
    throw ConfigError("hybrid A* start violates the safety margin");
  }
  if (!clearance_ok(goal.position())) {
    throw ConfigError("hybrid A* goal violates the safety margin");
  }

  auto cell_of = [&](const Eigen::Vector2d& p) {
    return world::CellIndex{
        static_cast<int>(std::floor((p.x() - origin.x()) / res)),
        static_cast<int>(std::floor((p.y() - origin.y()) / res))};
  };
  auto key_of = [&](const PoseSE2& p) -> int64_t {
    const world::CellIndex c = cell_of(p.position());
    if (c.x < 0 || c.x >= w || c.y < 0 || c.y >= h) return -1;
    int tb = static_cast<int>(std::floor((p.theta + kPi) / (kTwoPi / bins)));
    tb = std::clamp(tb, 0, bins - 1);
    return (static_cast<int64_t>(c.y) * w + c.x) * bins + tb;
  };
  auto step_cost = [&](const PoseSE2& p) {
    if (!config.perception_aware) {
      return 0.5;  // sigmoid with eps -> 0: plain per-step cost
    }
    return sigmoid(gfm_continuous(mem, p, config.fov).value, sigmoid_p);
  };
  // The pre-search accumulates one sigmoid per 8-connected cell hop while g
  // accumulates one per motion primitive; the fixed ratio of their spatial
  // granularities aligns the two scales.
  const double h_scale = res / config.step_length;
  auto heuristic = [&](const PoseSE2& p) {
    return h_scale * hfield.at(cell_of(p.position()));
  };
  auto at_goal = [&](const PoseSE2& p) {
    return (p.position() - goal.position()).norm() <= config.goal_xy_tol &&
           std::abs(normalize_angle(p.theta - goal.theta)) <= config.goal_yaw_tol;
  };

  // Successor poses of one expansion: arcs at five yaw rates, two lateral
  // steps, two pure rotations.
  auto successors = [&](const PoseSE2& p, std::vector<PoseSE2>& out) {
    out.clear();
    const double s = config.step_length;
    const double rates[5] = {-config.arc_yaw_step, -0.5 * config.arc_yaw_step,
                             0.0, 0.5 * config.arc_yaw_step,
                             config.arc_yaw_step};
    for (const double dpsi : rates) {
      double lx, ly;
      if (std::abs(dpsi) < 1e-9) {
        lx = s;
        ly = 0.0;
      } else {
        const double radius = s / dpsi;
        lx = radius * std::sin(dpsi);
        ly = radius * (1.0 - std::cos(dpsi));
      }
      const double c = std::cos(p.theta), sn = std::sin(p.theta);
      out.emplace_back(p.x + c * lx - sn * ly, p.y + sn * lx + c * ly,
                       p.theta + dpsi);
    }
    out.emplace_back(p.x - std::sin(p.theta) * s, p.y + std::cos(p.theta) * s,
                     p.theta);  // strafe left
    out.emplace_back(p.x + std::sin(p.theta) * s, p.y - std::cos(p.theta) * s,
                     p.theta);  // strafe right
    out.emplace_back(p.x, p.y, p.theta + config.rotation_step);
    out.emplace_back(p.x, p.y, p.theta - config.rotation_step);
  };

  std::vector<Node> nodes;
  nodes.reserve(4096);
  std::vector<double> best_g(static_cast<std::size_t>(w) * h * bins,
                             std::numeric_limits<double>::infinity());
  std::priority_queue<OpenItem, std::vector<OpenItem>, OpenGreater> open;
  uint64_t seq = 0;

  nodes.push_back({start, 0.0, heuristic(start), -1});
  const int64_t start_key = key_of(start);
  if (start_key >= 0) best_g[start_key] = 0.0;
  open.push({nodes[0].g + nodes[0].h, nodes[0].h, seq++, 0});

  SearchStats stats;
  int32_t goal_node = -1;
  std::vector<PoseSE2> succ;

  while (!open.empty()) {
    const OpenItem item = open.top();
    open.pop();
    const Node snapshot = nodes[item.node];
    const int64_t key = key_of(snapshot.pose);
    if (key >= 0 && snapshot.g > best_g[key] + 1e-12) {
      continue;  // superseded entry
    }

    if (at_goal(snapshot.pose)) {
      goal_node = item.node;
      break;
    }
    if (++stats.nodes_expanded > config.max_nodes) {
      throw IterationLimitError("hybrid A* exceeded its node budget");
    }

    successors(snapshot.pose, succ);
    for (const PoseSE2& next : succ) {
      if (!clearance_ok(next.position())) continue;
      // Midpoint probe guards against skipping through thin obstacles.
      const Eigen::Vector2d mid =
          0.5 * (snapshot.pose.position() + next.position());
      if (!clearance_ok(mid)) continue;
      const int64_t nkey = key_of(next);
      if (nkey < 0) continue;
      const double ng = snapshot.g + step_cost(next);
      if (ng >= best_g[nkey] - 1e-12) continue;
      const double nh = heuristic(next);
      if (!std::isfinite(nh)) continue;
      best_g[nkey] = ng;
      nodes.push_back({next, ng, nh, item.node});
      open.push({ng + nh, nh, seq++, static_cast<int32_t>(nodes.size() - 1)});
    }
  }

  if (goal_node < 0) {
    throw NoPathError("hybrid A* exhausted its open set");
  }

  SearchResult result;
  result.g_cost = nodes[goal_node].g;
  for (int32_t n = goal_node; n >= 0; n = nodes[n].parent) {
    result.path.push_back(nodes[n].pose);
  }
  std::reverse(result.path.begin(), result.path.end());

  // Admissibility report: h against the realized remaining g along the
  // returned path (logged only; the heuristic is not provably admissible).
  double remaining = 0.0;
  std::vector<double> suffix(result.path.size(), 0.0);
  for (std::size_t i = result.path.size(); i-- > 1;) {
    remaining += step_cost(result.path[i]);
    suffix[i - 1] = remaining;
  }
  for (std::size_t i = 0; i < result.path.size(); ++i) {
    const double hv = heuristic(result.path[i]);
    if (std::isfinite(hv) && hv > suffix[i] + 1e-9) {
      ++stats.admissibility_violations;
      stats.max_admissibility_gap =
          std::max(stats.max_admissibility_gap, hv - suffix[i]);
    }
  }
  result.stats = stats;
  return result;
}

}  // namespace gfm::search

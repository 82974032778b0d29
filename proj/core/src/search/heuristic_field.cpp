#include "gfm/search/heuristic_field.hpp"

#include "gfm/errors.hpp"

#include <queue>
#include <tuple>

namespace gfm::search {

HeuristicField heuristic_presearch(const mem::MetricEncodingMap& mem,
                                   const world::OccupancyGrid& grid,
                                   const PoseSE2& goal,
                                   const SigmoidParams& params) {
  const int w = grid.width();
  const int h = grid.height();
  const world::CellIndex source = grid.world_to_cell(goal.position());
  if (!grid.in_bounds(source)) {
    throw ConfigError("heuristic goal outside map bounds");
  }
  if (grid.occupied(source)) {
    throw ConfigError("heuristic goal inside an obstacle");
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(w) * h, kInf);
  std::vector<uint8_t> done(dist.size(), 0);

  // (distance, cell index); the index breaks ties deterministically.
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> open;

  const std::size_t src = grid.index_of(source);
  dist[src] = 0.0;
  open.emplace(0.0, src);

  while (!open.empty()) {
    const auto [d, idx] = open.top();
    open.pop();
    if (done[idx]) continue;
    done[idx] = 1;
    const int cx = static_cast<int>(idx % w);
    const int cy = static_cast<int>(idx / w);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const world::CellIndex nb{cx + dx, cy + dy};
        if (!grid.in_bounds(nb) || grid.occupied(nb)) continue;
        const std::size_t nidx = grid.index_of(nb);
        if (done[nidx]) continue;
        const double weight =
            sigmoid(static_cast<double>(mem.full_window_count(nb)), params);
        const double nd = d + weight;
        if (nd < dist[nidx]) {
          dist[nidx] = nd;
          open.emplace(nd, nidx);
        }
      }
    }
  }

  return HeuristicField(w, h, source, std::move(dist));
}

}  // namespace gfm::search

#include "gfm/planner/render.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace gfm::planner {

io::ImageRgb8 render_mem_heatmap(const mem::MetricEncodingMap& mem) {
  io::ImageRgb8 img;
  img.width = mem.width();
  img.height = mem.height();
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height * 3);
  for (int y = 0; y < mem.height(); ++y) {
    const int row = mem.height() - 1 - y;
    for (int x = 0; x < mem.width(); ++x) {
      const double v = mem.full_window_count({x, y}) /
                       static_cast<double>(mem::kAngleCount);
      const std::size_t o = img.offset(x, row);
      img.pixels[o + 0] = static_cast<uint8_t>(std::lround(255.0 * v));
      img.pixels[o + 1] = static_cast<uint8_t>(std::lround(64.0 * (1.0 - v)));
      img.pixels[o + 2] = static_cast<uint8_t>(std::lround(255.0 * (1.0 - v)));
    }
  }
  return img;
}

namespace {

void fmt(std::ostringstream& out, const char* spec, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), spec, a, b);
  out << buf;
}

}  // namespace

std::string render_scene_svg(const world::OccupancyGrid& grid,
                             const search::PosePath* path,
                             const minco::MincoTrajectory* traj,
                             const localizer::EvalReport* eval) {
  const double res = grid.resolution();
  const double w = grid.width() * res;
  const double h = grid.height() * res;
  const double ox = grid.origin().x();
  const double oy = grid.origin().y();
  std::ostringstream svg;
  svg.setf(std::ios::fixed);

  char head[256];
  std::snprintf(head, sizeof(head),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 %.4f "
                "%.4f\" width=\"%d\" height=\"%d\">\n",
                w, h, static_cast<int>(w * 60), static_cast<int>(h * 60));
  svg << head;
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

  // Obstacles, merged into horizontal runs. The y axis is flipped so the
  // map renders right side up.
  svg << "<g fill=\"#333333\">\n";
  for (int y = 0; y < grid.height(); ++y) {
    int run_start = -1;
    for (int x = 0; x <= grid.width(); ++x) {
      const bool occ = x < grid.width() && grid.occupied({x, y});
      if (occ && run_start < 0) {
        run_start = x;
      } else if (!occ && run_start >= 0) {
        char rect[160];
        std::snprintf(rect, sizeof(rect),
                      "<rect x=\"%.4f\" y=\"%.4f\" width=\"%.4f\" "
                      "height=\"%.4f\"/>\n",
                      run_start * res, h - (y + 1) * res,
                      (x - run_start) * res, res);
        svg << rect;
        run_start = -1;
      }
    }
  }
  svg << "</g>\n";

  auto to_svg_x = [&](double wx) { return wx - ox; };
  auto to_svg_y = [&](double wy) { return h - (wy - oy); };

  if (path && !path->empty()) {
    svg << "<polyline fill=\"none\" stroke=\"#2a7f2a\" stroke-width=\"0.04\" "
           "points=\"";
    for (const PoseSE2& p : *path) {
      fmt(svg, "%.4f,%.4f ", to_svg_x(p.x), to_svg_y(p.y));
    }
    svg << "\"/>\n";
  }

  if (traj && traj->segment_count() > 0) {
    const double total = traj->total_time();
    svg << "<polyline fill=\"none\" stroke=\"#1f4fd8\" stroke-width=\"0.05\" "
           "points=\"";
    const int n = std::max(2, static_cast<int>(total / 0.05));
    for (int i = 0; i <= n; ++i) {
      const Eigen::Vector3d p = traj->evaluate(total * i / n, 0);
      fmt(svg, "%.4f,%.4f ", to_svg_x(p.x()), to_svg_y(p.y()));
    }
    svg << "\"/>\n";
    // Yaw ticks every half second.
    svg << "<g stroke=\"#d86a1f\" stroke-width=\"0.03\">\n";
    for (double t = 0.0; t <= total; t += 0.5) {
      const Eigen::Vector3d p = traj->evaluate(t, 0);
      const double len = 0.25;
      char line[160];
      std::snprintf(line, sizeof(line),
                    "<line x1=\"%.4f\" y1=\"%.4f\" x2=\"%.4f\" y2=\"%.4f\"/>\n",
                    to_svg_x(p.x()), to_svg_y(p.y()),
                    to_svg_x(p.x() + len * std::cos(p.z())),
                    to_svg_y(p.y() + len * std::sin(p.z())));
      svg << line;
    }
    svg << "</g>\n";
  }

  if (eval && !eval->samples.empty()) {
    svg << "<g fill=\"none\" stroke=\"#c02020\" stroke-width=\"0.02\">\n";
    for (const auto& s : eval->samples) {
      char circle[160];
      std::snprintf(circle, sizeof(circle),
                    "<circle cx=\"%.4f\" cy=\"%.4f\" r=\"%.4f\"/>\n",
                    to_svg_x(s.true_pose.x), to_svg_y(s.true_pose.y),
                    std::max(s.error, 0.005));
      svg << circle;
    }
    svg << "</g>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace gfm::planner

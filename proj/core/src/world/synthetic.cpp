#include "gfm/world/synthetic.hpp"

#include "gfm/errors.hpp"

#include <cmath>
#include <functional>

namespace gfm::world {

namespace {

// Rasterizes world-space shapes onto cell centers.
class GridBuilder {
 public:
  GridBuilder(double width_m, double height_m, double res)
      : res_(res),
        width_(static_cast<int>(std::lround(width_m / res))),
        height_(static_cast<int>(std::lround(height_m / res))),
        cells_(static_cast<std::size_t>(width_) * height_, 0) {}

  void fill(const std::function<bool(double, double)>& inside) {
    for (int y = 0; y < height_; ++y) {
      for (int x = 0; x < width_; ++x) {
        const double cx = (x + 0.5) * res_;
        const double cy = (y + 0.5) * res_;
        if (inside(cx, cy)) {
          cells_[static_cast<std::size_t>(y) * width_ + x] = 1;
        }
      }
    }
  }

  void rect(double x0, double y0, double x1, double y1) {
    fill([=](double x, double y) {
      return x >= x0 && x < x1 && y >= y0 && y < y1;
    });
  }

  void diamond(double cx, double cy, double r) {
    fill([=](double x, double y) {
      return std::abs(x - cx) + std::abs(y - cy) <= r;
    });
  }

  void border(double thickness) {
    const double w = width_ * res_, h = height_ * res_;
    rect(0, 0, w, thickness);
    rect(0, h - thickness, w, h);
    rect(0, 0, thickness, h);
    rect(w - thickness, 0, w, h);
  }

  // Sawtooth strip of 45-degree teeth pointing up from base_y.
  void sawtooth(double x0, double x1, double base_y, double amplitude,
                double period) {
    fill([=](double x, double y) {
      if (x < x0 || x >= x1 || y < base_y || y >= base_y + amplitude) {
        return false;
      }
      const double phase = std::fmod(x - x0, period) / period;  // [0,1)
      const double tooth = amplitude * (phase < 0.5 ? 2.0 * phase : 2.0 - 2.0 * phase);
      return y - base_y <= tooth;
    });
  }

  OccupancyGrid build() const {
    return OccupancyGrid(width_, height_, res_, {0.0, 0.0}, cells_);
  }

 private:
  double res_;
  int width_;
  int height_;
  std::vector<uint8_t> cells_;
};

}  // namespace

OccupancyGrid make_corridor_detour_map(double resolution) {
  GridBuilder b(16.0, 8.0, resolution);
  b.border(0.2);

  // Straight corridor between the chambers, plain parallel walls.
  b.rect(2.8, 4.6, 13.2, 5.0);   // lower corridor wall
  b.rect(2.8, 6.6, 13.2, 8.0);   // solid block above the corridor

  // Feature-rich detour passage below the corridor: diamond pillars and a
  // sawtooth south wall leave a clear lane around y = 3.6..4.2, with open
  // swing room near both chamber openings.
  b.sawtooth(3.0, 13.0, 0.2, 0.8, 1.2);
  b.diamond(5.4, 2.2, 0.5);
  b.diamond(7.0, 2.6, 0.45);
  b.diamond(8.6, 2.0, 0.5);
  b.diamond(10.2, 2.6, 0.45);
  b.diamond(6.2, 1.2, 0.35);
  b.diamond(9.4, 1.2, 0.35);

  return b.build();
}

OccupancyGrid make_corner_room_map(double resolution) {
  GridBuilder b(7.0, 7.0, resolution);
  b.border(0.2);
  return b.build();
}

OccupancyGrid make_corridor_map(double resolution) {
  GridBuilder b(16.0, 2.8, resolution);
  b.border(0.2);
  return b.build();
}

DemoScenario demo_scenario(const std::string& name, double resolution) {
  if (name == "corridor_detour") {
    return {make_corridor_detour_map(resolution), PoseSE2(1.4, 5.8, 0.0),
            PoseSE2(14.6, 5.8, 0.0)};
  }
  if (name == "corner_room") {
    return {make_corner_room_map(resolution), PoseSE2(1.5, 1.5, 0.0),
            PoseSE2(5.5, 5.5, 0.0)};
  }
  if (name == "corridor") {
    return {make_corridor_map(resolution), PoseSE2(1.5, 1.4, 0.0),
            PoseSE2(14.5, 1.4, 0.0)};
  }
  throw ConfigError("unknown demo scenario: " + name);
}

std::vector<std::string> demo_scenario_names() {
  return {"corridor_detour", "corner_room", "corridor"};
}

}  // namespace gfm::world

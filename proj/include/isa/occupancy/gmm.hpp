#pragma once

#include <string>
#include <vector>

#include "isa/world/lanes.hpp"

namespace isa {

struct Box {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  bool contains(double x, double y, double tol = 0.0) const {
    return x >= x_min - tol && x <= x_max + tol && y >= y_min - tol && y <= y_max + tol;
  }
  bool contains(const Box& o, double tol = 0.0) const {
    return o.x_min >= x_min - tol && o.x_max <= x_max + tol && o.y_min >= y_min - tol &&
           o.y_max <= y_max + tol;
  }
};

struct GmmComponent {
  double weight = 1.0;
  double mean_x = 0.0;
  double mean_y = 0.0;
  double sigma_x = 1.0;
  double sigma_y = 1.0;
};

/// Truncated mixture whose components are scaled so each one peaks at its
/// weight. Built by make_slice, which floors the sigmas and sets the
/// truncation box to the union of mean +- 4 sigma.
struct GmmSlice {
  std::string sv;
  int t = 0;
  std::vector<GmmComponent> components;
  Box box;
};

inline constexpr double kTruncationSigmas = 4.0;

/// Throws std::invalid_argument on an empty component list, negative weights
/// or weights that do not sum to 1 (1e-9).
GmmSlice make_slice(std::vector<GmmComponent> components, double sigma_floor, std::string sv = {},
                    int t = 0);

/// sum_m p_m exp(-(dx^2 / 2 sx^2 + dy^2 / 2 sy^2)); 0 outside the box.
double eval_pdf(const GmmSlice& slice, double x, double y);

/// Axis-aligned rectangle by center and size.
struct OccupancyRect {
  double ox = 0.0;
  double oy = 0.0;
  double length = 0.0;  // along x
  double width = 0.0;   // along y

  double x_min() const { return ox - 0.5 * length; }
  double x_max() const { return ox + 0.5 * length; }
  double y_min() const { return oy - 0.5 * width; }
  double y_max() const { return oy + 0.5 * width; }
  Box box() const { return {x_min(), x_max(), y_min(), y_max()}; }
  static OccupancyRect from_box(const Box& b);
};

struct GridSpec {
  double dx = 0.1;
  double dy = 0.05;
};

/// Bounding box of the grid points with f >= eps * f_max, where f_max is
/// the largest grid value. The grid spans the truncation box at the given
/// spacing and also contains every component mean. Throws on eps outside
/// (0, 1] or nonpositive spacing.
OccupancyRect level_rect(const GmmSlice& slice, double eps, const GridSpec& grid = {});

/// Minkowski sum with the vehicle footprint.
OccupancyRect dilate(const OccupancyRect& rect, const VehicleShape& shape);

}  // namespace isa

#include "isa/occupancy/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace isa {

GmmSlice make_slice(std::vector<GmmComponent> components, double sigma_floor, std::string sv,
                    int t) {
  if (components.empty()) throw std::invalid_argument("make_slice: no components");
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.weight >= 0.0)) throw std::invalid_argument("make_slice: negative weight");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("make_slice: weights must sum to 1");

  GmmSlice s;
  s.sv = std::move(sv);
  s.t = t;
  s.box = {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (auto c : components) {
    c.sigma_x = std::max(c.sigma_x, sigma_floor);
    c.sigma_y = std::max(c.sigma_y, sigma_floor);
    s.box.x_min = std::min(s.box.x_min, c.mean_x - kTruncationSigmas * c.sigma_x);
    s.box.x_max = std::max(s.box.x_max, c.mean_x + kTruncationSigmas * c.sigma_x);
    s.box.y_min = std::min(s.box.y_min, c.mean_y - kTruncationSigmas * c.sigma_y);
    s.box.y_max = std::max(s.box.y_max, c.mean_y + kTruncationSigmas * c.sigma_y);
    s.components.push_back(c);
  }
  return s;
}

double eval_pdf(const GmmSlice& slice, double x, double y) {
  if (!slice.box.contains(x, y)) return 0.0;
  double f = 0.0;
  for (const auto& c : slice.components) {
    const double ex = (x - c.mean_x) / c.sigma_x;
    const double ey = (y - c.mean_y) / c.sigma_y;
    f += c.weight * std::exp(-0.5 * (ex * ex + ey * ey));
  }
  return f;
}

OccupancyRect OccupancyRect::from_box(const Box& b) {
  return {0.5 * (b.x_min + b.x_max), 0.5 * (b.y_min + b.y_max), b.x_max - b.x_min, b.y_max - b.y_min};
}

namespace {
// Regular axis from lo to hi (both included) with the extra points merged in.
std::vector<double> axis_points(double lo, double hi, double step, const std::vector<double>& extra) {
  std::vector<double> pts;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  pts.reserve(n + 2 + extra.size());
  for (std::size_t i = 0; i <= n; ++i) pts.push_back(lo + double(i) * step);
  if (pts.back() < hi) pts.push_back(hi);
  for (double e : extra) {
    if (e >= lo && e <= hi) pts.push_back(e);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}
}  // namespace

OccupancyRect level_rect(const GmmSlice& slice, double eps, const GridSpec& grid) {
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("level_rect: eps must lie in (0, 1]");
  if (!(grid.dx > 0.0 && grid.dy > 0.0)) throw std::invalid_argument("level_rect: bad grid");
  std::vector<double> mx, my;
  for (const auto& c : slice.components) {
    mx.push_back(c.mean_x);
    my.push_back(c.mean_y);
  }
  const auto xs = axis_points(slice.box.x_min, slice.box.x_max, grid.dx, mx);
  const auto ys = axis_points(slice.box.y_min, slice.box.y_max, grid.dy, my);
  const std::size_t nx = xs.size();
  const std::size_t ny = ys.size();
  const std::size_t nc = slice.components.size();

  // Components are separable: f(x_i, y_j) = sum_m p_m gx_m(i) gy_m(j).
  std::vector<double> gx(nc * nx), gy(nc * ny);
  for (std::size_t m = 0; m < nc; ++m) {
    const auto& c = slice.components[m];
    for (std::size_t i = 0; i < nx; ++i) {
      const double e = (xs[i] - c.mean_x) / c.sigma_x;
      gx[m * nx + i] = c.weight * std::exp(-0.5 * e * e);
    }
    for (std::size_t j = 0; j < ny; ++j) {
      const double e = (ys[j] - c.mean_y) / c.sigma_y;
      gy[m * ny + j] = std::exp(-0.5 * e * e);
    }
  }
  std::vector<double> f(nx * ny, 0.0);
  double f_max = 0.0;
  for (std::size_t j = 0; j < ny; ++j) {
    double* row = &f[j * nx];
    for (std::size_t m = 0; m < nc; ++m) {
      const double wy = gy[m * ny + j];
      if (wy == 0.0) continue;
      const double* gxm = &gx[m * nx];
      for (std::size_t i = 0; i < nx; ++i) row[i] += gxm[i] * wy;
    }
    for (std::size_t i = 0; i < nx; ++i) f_max = std::max(f_max, row[i]);
  }
  const double level = eps * f_max;
  std::size_t i_lo = nx, i_hi = 0, j_lo = ny, j_hi = 0;
  for (std::size_t j = 0; j < ny; ++j) {
    const double* row = &f[j * nx];
    for (std::size_t i = 0; i < nx; ++i) {
      if (row[i] >= level) {
        i_lo = std::min(i_lo, i);
        i_hi = std::max(i_hi, i);
        j_lo = std::min(j_lo, j);
        j_hi = std::max(j_hi, j);
      }
    }
  }
  return OccupancyRect::from_box({xs[i_lo], xs[i_hi], ys[j_lo], ys[j_hi]});
}

OccupancyRect dilate(const OccupancyRect& r, const VehicleShape& shape) {
  return {r.ox, r.oy, r.length + shape.length, r.width + shape.width};
}

}  // namespace isa

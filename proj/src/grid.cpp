#include "ehs/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace ehs {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;
}

Grid make_cartesian_grid(const DomainSpec& domain, int n, double tol) {
  if (n < 2) throw geometry_error("grid needs at least 2 nodes per dimension");
  Grid g;
  g.kind = Chart::Cartesian;
  g.nx = n;
  g.ny = n;
  g.x0 = domain.xmin;
  g.y0 = domain.ymin;
  g.hx = (domain.xmax - domain.xmin) / (n - 1);
  g.hy = (domain.ymax - domain.ymin) / (n - 1);
  g.mask.assign(static_cast<std::size_t>(n) * n, 0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (domain.contains(g.point(i, j), tol)) g.mask[g.idx(i, j)] = 1;
  return g;
}

Grid make_polar_grid(const DomainSpec& domain, int n) {
  if (domain.chart != Chart::Polar) throw geometry_error("polar grid needs a polar domain");
  if (n < 2) throw geometry_error("grid needs at least 2 nodes per dimension");
  Grid g;
  g.kind = Chart::Polar;
  g.nx = n + 1;
  g.ny = n;
  g.periodic_y = true;
  g.x0 = domain.eps0;
  g.hx = (kSqrt2 - domain.eps0) / n;
  g.hy = 2.0 * kPi / n;
  g.y0 = g.hy; // theta in (0, 2pi]
  g.mask.assign(static_cast<std::size_t>(g.nx) * g.ny, 1);
  return g;
}

int prune_for_stencils(Grid& g) {
  int removed = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        if (!g.mask[g.idx(i, j)]) continue;
        bool has_x = g.in(i - 1, j) || g.in(i + 1, j);
        bool has_y = g.in(i, j - 1) || g.in(i, j + 1);
        if (!has_x || !has_y) {
          g.mask[g.idx(i, j)] = 0;
          ++removed;
          changed = true;
        }
      }
  }
  return removed;
}

std::vector<BoundaryNode> boundary_ring_nodes(const Grid& g, const DomainSpec& domain) {
  std::vector<BoundaryNode> out;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!g.mask[g.idx(i, j)]) continue;
      bool edge = !g.in(i - 1, j) || !g.in(i + 1, j) || !g.in(i, j - 1) || !g.in(i, j + 1);
      if (!edge) continue;
      Point2 p = g.point(i, j);
      BoundaryNode bn;
      bn.i = i;
      bn.j = j;
      double best = 1e300;
      for (std::size_t s = 0; s < domain.segments.size(); ++s) {
        const auto& seg = domain.segments[s];
        for (std::size_t k = 0; k < seg.pts.size(); ++k) {
          double dx = seg.pts[k].x - p.x, dy = seg.pts[k].y - p.y;
          if (g.kind == Chart::Polar) {
            // compare in the chart; wrap the angular difference
            dy = std::remainder(dy, 2.0 * kPi);
          }
          double d2 = dx * dx + dy * dy;
          if (d2 < best) {
            best = d2;
            bn.seg = s;
            bn.sample = k;
          }
        }
      }
      bn.dist = std::sqrt(best);
      out.push_back(bn);
    }
  return out;
}

} // namespace ehs

#pragma once

#include <cstdint>
#include <vector>

#include "ehs/geometry.hpp"

namespace ehs {

// Structured node-centered grid, optionally masked to a domain and periodic
// in the second direction (theta on polar charts).
struct Grid {
  Chart kind = Chart::Cartesian;
  int nx = 0, ny = 0;
  double x0 = 0.0, y0 = 0.0, hx = 0.0, hy = 0.0;
  bool periodic_y = false;
  std::vector<std::uint8_t> mask;

  int idx(int i, int j) const { return j * nx + i; }
  int wrap_j(int j) const {
    if (!periodic_y) return j;
    if (j < 0) return j + ny;
    if (j >= ny) return j - ny;
    return j;
  }
  bool in(int i, int j) const {
    if (i < 0 || i >= nx) return false;
    j = wrap_j(j);
    if (j < 0 || j >= ny) return false;
    return mask[idx(i, j)] != 0;
  }
  Point2 point(int i, int j) const { return {x0 + i * hx, y0 + j * hy}; }
  long masked_count() const {
    long c = 0;
    for (auto m : mask) c += m;
    return c;
  }
};

// n x n nodes over the domain bounding box, masked by containment (boundary
// nodes included). No stencil pruning: scans may use every node.
Grid make_cartesian_grid(const DomainSpec& domain, int n, double tol = 1e-9);

// Annulus grid: n+1 radial nodes on [eps0, sqrt2], n periodic theta nodes
// with theta_j in (0, 2pi].
Grid make_polar_grid(const DomainSpec& domain, int n);

// Drops masked nodes lacking an in-mask neighbor in either direction until
// stable, so every surviving node supports one-sided stencils. Returns the
// number of nodes removed.
int prune_for_stencils(Grid& g);

// Two components per node, interleaved (u1, u2).
struct DiscreteField {
  int nx = 0, ny = 0;
  std::vector<double> v;

  static DiscreteField zeros(const Grid& g) {
    return {g.nx, g.ny, std::vector<double>(2 * static_cast<std::size_t>(g.nx) * g.ny, 0.0)};
  }
  double& at(int i, int j, int c) { return v[2 * (static_cast<std::size_t>(j) * nx + i) + c]; }
  double at(int i, int j, int c) const {
    return v[2 * (static_cast<std::size_t>(j) * nx + i) + c];
  }
};

// In-mask node adjacent to the mask edge, matched to the nearest boundary
// sample of the owning domain.
struct BoundaryNode {
  int i = 0, j = 0;
  std::size_t seg = 0;
  std::size_t sample = 0;
  double dist = 0.0;
};

std::vector<BoundaryNode> boundary_ring_nodes(const Grid& g, const DomainSpec& domain);

} // namespace ehs

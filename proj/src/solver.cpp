#include "ehs/solver.hpp"

#include <cmath>

namespace ehs {

namespace {
constexpr double kSqrt2 = 1.41421356237309504880;
}

std::vector<double> DiscreteOperator::pack(const DiscreteField& f) const {
  std::vector<double> x(ndofs, 0.0);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      int base = dof_of_node[grid.idx(i, j)];
      if (base < 0) continue;
      x[base] = f.at(i, j, 0);
      x[base + 1] = f.at(i, j, 1);
    }
  return x;
}

DiscreteField DiscreteOperator::unpack(const std::vector<double>& x) const {
  DiscreteField f = DiscreteField::zeros(grid);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      int base = dof_of_node[grid.idx(i, j)];
      if (base < 0) continue;
      f.at(i, j, 0) = x[base];
      f.at(i, j, 1) = x[base + 1];
    }
  return f;
}

DiscreteOperator discretize(const SystemSpec& sys, const DomainSpec& domain, int n) {
  if (n < 8) throw system_error("discretization needs at least 8 nodes per dimension");
  if ((sys.chart == Chart::Polar) != (domain.chart == Chart::Polar))
    throw system_error("system and domain charts disagree");

  DiscreteOperator op;
  op.grid = (domain.chart == Chart::Polar) ? make_polar_grid(domain, n)
                                           : make_cartesian_grid(domain, n);
  long before = op.grid.masked_count();
  int removed = prune_for_stencils(op.grid);
  if (op.grid.masked_count() == 0 || removed > before / 2)
    throw system_error("domain too thin for stencil support at this resolution");
  Grid& g = op.grid;

  op.dof_of_node.assign(static_cast<std::size_t>(g.nx) * g.ny, -1);
  long next = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (g.mask[g.idx(i, j)]) {
        op.dof_of_node[g.idx(i, j)] = static_cast<int>(next);
        next += 2;
      }
  op.ndofs = next;

  double area = g.hx * g.hy;
  struct Entry {
    int node;
    Mat2 coef;
  };
  std::vector<Entry> entries;

  // Centered differencing across an interior degeneracy of the direction
  // coefficient (the sonic radius on the annulus) amplifies truncation; the
  // bounded branch there is determined at the degeneracy, so rows within a
  // two-cell band difference one-sidedly toward it.
  auto sonic_side = [](double dm, double d0, double dp) {
    double slope = std::max(std::fabs(dp - d0), std::fabs(d0 - dm));
    bool near = dm * dp <= 0.0 || std::fabs(d0) <= 2.0 * slope;
    if (!near) return 0;
    return std::fabs(dm) < std::fabs(dp) ? -1 : +1;
  };

  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      int id = g.idx(i, j);
      if (!g.mask[id]) continue;
      Point2 p = g.point(i, j);
      entries.clear();
      entries.push_back({id, sys.B(p) - sys.dA1(p) - sys.dA2(p)});
      bool centered = true;

      if (g.in(i - 1, j) && g.in(i + 1, j)) {
        int side = sonic_side(sys.A1(g.point(i - 1, j)).det(), sys.A1(p).det(),
                              sys.A1(g.point(i + 1, j)).det());
        if (side < 0) {
          entries.push_back({id, sys.A1(p) * (1.0 / g.hx)});
          entries.push_back({g.idx(i - 1, j), sys.A1(g.point(i - 1, j)) * (-1.0 / g.hx)});
          centered = false;
        } else if (side > 0) {
          entries.push_back({g.idx(i + 1, j), sys.A1(g.point(i + 1, j)) * (1.0 / g.hx)});
          entries.push_back({id, sys.A1(p) * (-1.0 / g.hx)});
          centered = false;
        } else {
          entries.push_back({g.idx(i + 1, j), sys.A1(g.point(i + 1, j)) * (0.5 / g.hx)});
          entries.push_back({g.idx(i - 1, j), sys.A1(g.point(i - 1, j)) * (-0.5 / g.hx)});
        }
      } else if (g.in(i + 1, j)) {
        entries.push_back({g.idx(i + 1, j), sys.A1(g.point(i + 1, j)) * (1.0 / g.hx)});
        entries.push_back({id, sys.A1(p) * (-1.0 / g.hx)});
        centered = false;
      } else {
        entries.push_back({id, sys.A1(p) * (1.0 / g.hx)});
        entries.push_back({g.idx(i - 1, j), sys.A1(g.point(i - 1, j)) * (-1.0 / g.hx)});
        centered = false;
      }

      int jm = g.wrap_j(j - 1), jp = g.wrap_j(j + 1);
      if (g.in(i, j - 1) && g.in(i, j + 1)) {
        int side = sonic_side(sys.A2(g.point(i, jm)).det(), sys.A2(p).det(),
                              sys.A2(g.point(i, jp)).det());
        if (side < 0) {
          entries.push_back({id, sys.A2(p) * (1.0 / g.hy)});
          entries.push_back({g.idx(i, jm), sys.A2(g.point(i, jm)) * (-1.0 / g.hy)});
          centered = false;
        } else if (side > 0) {
          entries.push_back({g.idx(i, jp), sys.A2(g.point(i, jp)) * (1.0 / g.hy)});
          entries.push_back({id, sys.A2(p) * (-1.0 / g.hy)});
          centered = false;
        } else {
          entries.push_back({g.idx(i, jp), sys.A2(g.point(i, jp)) * (0.5 / g.hy)});
          entries.push_back({g.idx(i, jm), sys.A2(g.point(i, jm)) * (-0.5 / g.hy)});
        }
      } else if (g.in(i, j + 1)) {
        entries.push_back({g.idx(i, jp), sys.A2(g.point(i, jp)) * (1.0 / g.hy)});
        entries.push_back({id, sys.A2(p) * (-1.0 / g.hy)});
        centered = false;
      } else {
        entries.push_back({id, sys.A2(p) * (1.0 / g.hy)});
        entries.push_back({g.idx(i, jm), sys.A2(g.point(i, jm)) * (-1.0 / g.hy)});
        centered = false;
      }

      for (int c = 0; c < 2; ++c) {
        op.A.start_row();
        for (const auto& e : entries) {
          int base = op.dof_of_node[e.node];
          double c1 = (c == 0) ? e.coef.a11 : e.coef.a21;
          double c2 = (c == 0) ? e.coef.a12 : e.coef.a22;
          if (c1 != 0.0) op.A.push(base, c1);
          if (c2 != 0.0) op.A.push(base + 1, c2);
        }
        op.A.end_row();
        op.w.push_back(area);
        op.row_pt.push_back(p);
        op.node_of_row.push_back(id);
      }
    }
  op.A.cols = static_cast<int>(op.ndofs);
  return op;
}

std::vector<double> sample_rows(const DiscreteOperator& op,
                                const std::function<Vec2(Point2)>& f) {
  std::vector<double> out(op.A.rows);
  for (int r = 0; r < op.A.rows; r += 2) {
    Vec2 v = f(op.row_pt[r]);
    out[r] = v.x;
    out[r + 1] = v.y;
  }
  return out;
}

ConstraintRows boundary_rows(const DiscreteOperator& op, const DomainSpec& domain,
                             BoundaryCondition::Kind kind,
                             const std::function<double(double)>& sigma,
                             const std::function<double(double)>& tau,
                             const std::function<Vec2(Point2)>& exact_trace,
                             double lambda_b) {
  ConstraintRows out;
  out.B.cols = static_cast<int>(op.ndofs);
  if (kind == BoundaryCondition::Kind::None) return out;

  SegmentRole want;
  switch (kind) {
    case BoundaryCondition::Kind::TangentialZero: want = SegmentRole::DataC; break;
    case BoundaryCondition::Kind::NormalAligned: want = SegmentRole::CurveF; break;
    case BoundaryCondition::Kind::OuterSigmaTau: want = SegmentRole::AnnulusOuter; break;
    default: return out;
  }
  if (!domain.segment_with_role(want))
    throw system_error(std::string("no segment with role ") + segment_role_name(want) +
                       " for this boundary condition");

  double lb = lambda_b > 0.0 ? lambda_b : 1e3 / std::min(op.grid.hx, op.grid.hy);
  auto ring = boundary_ring_nodes(op.grid, domain);
  for (const auto& bn : ring) {
    const BoundarySegment& seg = domain.segments[bn.seg];
    if (seg.role != want) continue;
    Point2 p = op.grid.point(bn.i, bn.j);
    double c1 = 0.0, c2 = 0.0;
    switch (kind) {
      case BoundaryCondition::Kind::TangentialZero: {
        Vec2 t = seg.tangent[bn.sample];
        c1 = t.x;
        c2 = t.y;
        break;
      }
      case BoundaryCondition::Kind::NormalAligned: {
        Vec2 nv = seg.normal[bn.sample];
        c1 = nv.y;
        c2 = -nv.x;
        break;
      }
      case BoundaryCondition::Kind::OuterSigmaTau:
        c1 = tau(p.y);
        c2 = sigma(p.y);
        break;
      default: break;
    }
    int base = op.dof_of_node[op.grid.idx(bn.i, bn.j)];
    if (base < 0) continue;
    out.B.start_row();
    if (c1 != 0.0) out.B.push(base, c1);
    if (c2 != 0.0) out.B.push(base + 1, c2);
    out.B.end_row();
    double g = 0.0;
    if (exact_trace) {
      Vec2 u = exact_trace(p);
      g = c1 * u.x + c2 * u.y;
    }
    out.rhs.push_back(g);
    out.w.push_back(lb);
    ++out.count;
  }
  return out;
}

std::pair<DiscreteField, SolveDiagnostics> solve_least_squares(
    const DiscreteOperator& op, const std::vector<double>& f,
    const ConstraintRows& rows, const DiscreteField* init) {
  long nd = op.ndofs;
  std::vector<double> tmpA(op.A.rows), tmpB(rows.B.rows);

  auto applyN = [&](const std::vector<double>& x, std::vector<double>& y) {
    op.A.apply(x, tmpA);
    for (int r = 0; r < op.A.rows; ++r) tmpA[r] *= op.w[r];
    y.assign(x.size(), 0.0);
    op.A.apply_transpose_add(tmpA, y);
    if (rows.B.rows > 0) {
      rows.B.apply(x, tmpB);
      for (int r = 0; r < rows.B.rows; ++r) tmpB[r] *= rows.w[r];
      rows.B.apply_transpose_add(tmpB, y);
    }
  };

  std::vector<double> b(nd, 0.0);
  {
    std::vector<double> wf(op.A.rows);
    for (int r = 0; r < op.A.rows; ++r) wf[r] = op.w[r] * f[r];
    op.A.apply_transpose_add(wf, b);
    if (rows.B.rows > 0) {
      std::vector<double> wg(rows.B.rows);
      for (int r = 0; r < rows.B.rows; ++r) wg[r] = rows.w[r] * rows.rhs[r];
      rows.B.apply_transpose_add(wg, b);
    }
  }

  std::vector<double> diag(nd, 0.0);
  for (int r = 0; r < op.A.rows; ++r)
    for (int k = op.A.ptr[r]; k < op.A.ptr[r + 1]; ++k)
      diag[op.A.col[k]] += op.w[r] * op.A.val[k] * op.A.val[k];
  for (int r = 0; r < rows.B.rows; ++r)
    for (int k = rows.B.ptr[r]; k < rows.B.ptr[r + 1]; ++k)
      diag[rows.B.col[k]] += rows.w[r] * rows.B.val[k] * rows.B.val[k];

  std::vector<double> x =
      init ? op.pack(*init) : std::vector<double>(nd, 0.0);
  PcgResult pr = pcg(applyN, diag, b, x, 1e-10, static_cast<int>(20 * nd));

  SolveDiagnostics d;
  d.iterations = pr.iterations;
  d.rel_residual = pr.rel_residual;
  d.converged = pr.converged;

  op.A.apply(x, tmpA);
  double obj = 0.0;
  for (int r = 0; r < op.A.rows; ++r) {
    double res = tmpA[r] - f[r];
    obj += op.w[r] * res * res;
  }
  if (rows.B.rows > 0) {
    rows.B.apply(x, tmpB);
    for (int r = 0; r < rows.B.rows; ++r) {
      double res = tmpB[r] - rows.rhs[r];
      obj += rows.w[r] * res * res;
    }
  }
  d.objective = obj;

  std::vector<double> grad(nd);
  applyN(x, grad);
  double gn = 0.0;
  for (long i = 0; i < nd; ++i) {
    double gi = grad[i] - b[i];
    gn += gi * gi;
  }
  d.grad_norm = std::sqrt(gn);

  double dmin = 1e300, dmax = 0.0;
  for (double v : diag)
    if (v > 0.0) {
      dmin = std::min(dmin, v);
      dmax = std::max(dmax, v);
    }
  d.diag_ratio = dmax / dmin;
  return {op.unpack(x), d};
}

ManufacturedCase optics_polar_manufactured(double eps0) {
  ManufacturedCase mc;
  mc.name = "optics-polar:V=r^2";
  mc.sys = assemble_system(SystemId::OpticsPolar);
  mc.domain = build_omega5(eps0, 720);
  mc.exact = [](Point2 p) { return Vec2{2.0 * p.x, 0.0}; };
  mc.forcing = [](Point2 p) { return Vec2{4.0 * p.x * p.x - 2.0, 0.0}; };
  mc.cond = BoundaryCondition::Kind::OuterSigmaTau;
  mc.sigma = 1.0;
  mc.tau = 0.0;
  return mc;
}

ManufacturedCase hodge3_manufactured() {
  ManufacturedCase mc;
  mc.name = "hodge-case3:u=(1,0)";
  mc.sys = assemble_system(SystemId::HodgeCase3);
  mc.domain = omega3_fixture();
  mc.exact = [](Point2) { return Vec2{1.0, 0.0}; };
  mc.forcing = [](Point2 p) { return Vec2{-2.0 * p.x, 0.0}; };
  mc.cond = BoundaryCondition::Kind::TangentialZero;
  return mc;
}

void field_errors(const DiscreteOperator& op, const DiscreteField& u,
                  const std::function<Vec2(Point2)>& exact, double& err_max,
                  double& err_l2) {
  const Grid& g = op.grid;
  double area = g.hx * g.hy;
  err_max = 0.0;
  double acc = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!g.mask[g.idx(i, j)]) continue;
      Vec2 ex = exact(g.point(i, j));
      double e1 = u.at(i, j, 0) - ex.x;
      double e2 = u.at(i, j, 1) - ex.y;
      err_max = std::max({err_max, std::fabs(e1), std::fabs(e2)});
      acc += area * (e1 * e1 + e2 * e2);
    }
  err_l2 = std::sqrt(acc);
}

ConvergenceTable convergence_study(const ManufacturedCase& mc,
                                   const std::vector<int>& resolutions) {
  if (resolutions.size() < 2)
    throw system_error("convergence study needs at least two resolutions");
  ConvergenceTable table;
  auto sg = [&](double) { return mc.sigma; };
  auto tu = [&](double) { return mc.tau; };
  for (int n : resolutions) {
    DiscreteOperator op = discretize(mc.sys, mc.domain, n);
    std::vector<double> f = sample_rows(op, mc.forcing);
    ConstraintRows rows = boundary_rows(op, mc.domain, mc.cond, sg, tu, mc.exact);
    auto [u, diag] = solve_least_squares(op, f, rows);
    if (!diag.converged)
      throw system_error("least-squares CG did not converge at n=" + std::to_string(n));
    ConvergenceRow row;
    row.n = n;
    row.iterations = diag.iterations;
    field_errors(op, u, mc.exact, row.err_max, row.err_l2);
    table.rows.push_back(row);
  }
  for (std::size_t k = 0; k + 1 < table.rows.size(); ++k) {
    table.order_l2.push_back(std::log2(table.rows[k].err_l2 / table.rows[k + 1].err_l2));
    table.order_max.push_back(
        std::log2(table.rows[k].err_max / table.rows[k + 1].err_max));
  }
  return table;
}

} // namespace ehs

#include "ehs/energy.hpp"

#include <cmath>
#include <sstream>

#include "ehs/linalg.hpp"
#include "ehs/rng.hpp"

namespace ehs {

namespace {

SystemId case_system(int case_id) {
  switch (case_id) {
    case 1: return SystemId::HodgeCase1;
    case 2: return SystemId::HodgeCase2;
    case 3: return SystemId::HodgeCase3;
  }
  throw system_error("case must be 1, 2 or 3");
}

} // namespace

double NormSpec::w1(Point2 p) const {
  switch (case_id) {
    case 1: return std::fabs(2.0 * p.x * p.x - 1.0);
    case 2: return p.x;
    default: return 1.0;
  }
}

double NormSpec::w2(Point2 p) const {
  switch (case_id) {
    case 1: return std::fabs(2.0 * p.y * p.y - 1.0);
    case 2: return std::fabs(p.y);
    default: return 1.0;
  }
}

double case_multiplier(int case_id, Point2 p) {
  switch (case_id) {
    case 1: return p.x * p.x;
    case 2: return 1.0;
    case 3: return p.x * p.y;
  }
  throw system_error("case must be 1, 2 or 3");
}

FormCoefficients form_coefficients(int case_id, Point2 p) {
  double x = p.x, y = p.y;
  switch (case_id) {
    case 1:
      return {x * (3.0 * x * x - 1.0), x * x * y, x * (1.0 - y * y)};
    case 2:
      return {2.0 * x, 0.0, -2.0 * y};
    case 3:
      return {0.5 * y * (3.0 * x * x - 1.0), -0.5 * x * (1.0 - y * y),
              0.5 * y * (1.0 - y * y)};
  }
  throw system_error("case must be 1, 2 or 3");
}

VerificationReport scan_quadratic_form(int case_id, const DomainSpec& domain, int nx,
                                       int ny, double tol, std::uint64_t seed) {
  case_system(case_id);
  VerificationReport rep;
  rep.condition = "quadratic-form-nonnegative";
  rep.grid_nx = nx;
  rep.grid_ny = ny;
  rep.tol = tol;

  double hx = (domain.xmax - domain.xmin) / (nx - 1);
  double hy = (domain.ymax - domain.ymin) / (ny - 1);
  double min_disc = 1e300;
  Point2 argmin{};
  long count = 0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      Point2 p{domain.xmin + i * hx, domain.ymin + j * hy};
      if (!domain.contains(p, 1e-9)) continue;
      ++count;
      double d = form_coefficients(case_id, p).disc();
      if (d < min_disc) {
        min_disc = d;
        argmin = p;
      }
    }
  if (count == 0) throw system_error("quadratic-form scan saw an empty grid");

  rep.worst = min_disc;
  rep.where = argmin;
  rep.pass = min_disc >= -tol;

  if (case_id == 1) {
    // 2 beta w1 w2 >= -(x^3 w1^2 + x y^2 w2^2) on random samples
    CounterRng rng(seed);
    double worst_margin = 1e300;
    for (int t = 0; t < 200; ++t) {
      Point2 p{rng.uniform(domain.xmin, domain.xmax),
               rng.uniform(domain.ymin, domain.ymax)};
      if (!domain.contains(p, 1e-9)) continue;
      double w1 = rng.uniform(-2.0, 2.0), w2 = rng.uniform(-2.0, 2.0);
      double beta = form_coefficients(case_id, p).beta;
      double lhs = 2.0 * beta * w1 * w2;
      double rhs = -(p.x * p.x * p.x * w1 * w1 + p.x * p.y * p.y * w2 * w2);
      double scale = std::fabs(lhs) + std::fabs(rhs) + 1.0;
      worst_margin = std::min(worst_margin, (lhs - rhs) / scale);
    }
    std::ostringstream os;
    os << "case1 bound-identity worst margin=" << worst_margin;
    rep.note = os.str();
    if (worst_margin < -1e-12) rep.pass = false;
  }
  return rep;
}

GammaIntegrand characteristic_integrand(int case_id, Point2 p, Vec2 w, Vec2 t) {
  double wn = w.norm();
  if (std::fabs(w.dot(t)) > 1e-9 * std::max(wn, 1e-300) * std::max(t.norm(), 1e-300))
    throw system_error("w violates the characteristic relation w1 dx + w2 dy = 0");
  double a = case_multiplier(case_id, p);
  double x = p.x, y = p.y;
  double term1 = (1.0 - x * x) * w.x * w.x * t.y;
  double term2 = 2.0 * x * y * w.x * w.x * t.x;
  double term3 = -(1.0 - y * y) * w.x * w.y * t.x;
  GammaIntegrand out;
  out.value = 0.5 * a * (term1 + term2 + term3);
  out.scale =
      0.5 * std::fabs(a) * (std::fabs(term1) + std::fabs(term2) + std::fabs(term3)) +
      1e-300;
  return out;
}

CBoundaryIntegral data_boundary_integral(int case_id, const BoundarySegment& c_seg,
                                         const std::function<Vec2(Point2)>& w) {
  CBoundaryIntegral out;
  std::size_t n = c_seg.size();
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    Point2 p = c_seg.pts[i];
    Vec2 wv = w(p);
    if (std::fabs(wv.x) > 1e-10 * (1.0 + std::fabs(wv.y)))
      throw system_error("w1 must vanish on C");
    double a = case_multiplier(case_id, p);
    g[i] = -0.5 * a * (1.0 - p.y * p.y) * wv.y * wv.y;
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double dy = c_seg.pts[i + 1].y - c_seg.pts[i].y;
    if (dy > 1e-12) out.hypothesis_ok = false;
    total += 0.5 * (g[i] + g[i + 1]) * dy;
  }
  out.value = total;
  return out;
}

namespace {

// constraint embedding at one node: columns of P restricted to the node
struct NodeDofs {
  int count = 0;        // 1 or 2 reduced dofs
  Vec2 dir[2];          // full-space direction of each reduced dof
};

struct KhatAssembly {
  Grid grid;
  std::vector<int> node_dof;    // first reduced dof of node, -1 if unmasked
  std::vector<NodeDofs> dofs;   // per node
  long total_dofs = 0;
  Csr S;                        // D*^{1/2} L P, rows = 2 per masked node
  std::vector<double> mdiag;    // P^T D_* P (diagonal)
  long excluded = 0, rows_total = 0;
};

KhatAssembly assemble_khat(int case_id, const DomainSpec& domain, int n) {
  SystemSpec lstar = adjoint(assemble_system(case_system(case_id)));
  NormSpec norms{case_id};

  KhatAssembly ka;
  ka.grid = make_cartesian_grid(domain, n);
  prune_for_stencils(ka.grid);
  if (ka.grid.masked_count() < 16)
    throw system_error("basic-constant grid resolves too little of the domain");
  Grid& g = ka.grid;

  auto ring = boundary_ring_nodes(g, domain);
  std::vector<int> ring_of(static_cast<std::size_t>(g.nx) * g.ny, -1);
  for (std::size_t k = 0; k < ring.size(); ++k)
    ring_of[g.idx(ring[k].i, ring[k].j)] = static_cast<int>(k);

  ka.node_dof.assign(static_cast<std::size_t>(g.nx) * g.ny, -1);
  ka.dofs.assign(static_cast<std::size_t>(g.nx) * g.ny, {});
  int next = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      int id = g.idx(i, j);
      if (!g.mask[id]) continue;
      NodeDofs nd;
      int rk = ring_of[id];
      if (rk >= 0) {
        const auto& seg = domain.segments[ring[rk].seg];
        if (seg.role == SegmentRole::GammaChar) {
          nd.count = 1;
          nd.dir[0] = seg.normal[ring[rk].sample]; // w.T = 0 on characteristics
        } else if (seg.role == SegmentRole::DataC) {
          nd.count = 1;
          nd.dir[0] = {0.0, 1.0}; // w1 = 0 on C
        } else {
          nd.count = 2;
          nd.dir[0] = {1.0, 0.0};
          nd.dir[1] = {0.0, 1.0};
        }
      } else {
        nd.count = 2;
        nd.dir[0] = {1.0, 0.0};
        nd.dir[1] = {0.0, 1.0};
      }
      ka.dofs[id] = nd;
      ka.node_dof[id] = next;
      next += nd.count;
    }
  ka.total_dofs = next;

  double area = g.hx * g.hy;
  ka.mdiag.assign(next, 0.0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      int id = g.idx(i, j);
      if (!g.mask[id]) continue;
      Point2 p = g.point(i, j);
      double w1 = norms.w1(p), w2 = norms.w2(p);
      const NodeDofs& nd = ka.dofs[id];
      for (int d = 0; d < nd.count; ++d)
        ka.mdiag[ka.node_dof[id] + d] +=
            area * (w1 * nd.dir[d].x * nd.dir[d].x + w2 * nd.dir[d].y * nd.dir[d].y);
    }

  // rows: advection-form L* at every masked node, centered where possible
  struct Entry {
    int node;
    Mat2 coef; // acts on the full 2-vector at that node
  };
  auto push_row = [&](int row_comp, const std::vector<Entry>& entries, double wdual) {
    ka.S.start_row();
    double sq = std::sqrt(wdual);
    for (const auto& e : entries) {
      const NodeDofs& nd = ka.dofs[e.node];
      int base = ka.node_dof[e.node];
      for (int d = 0; d < nd.count; ++d) {
        double c = (row_comp == 0)
                       ? e.coef.a11 * nd.dir[d].x + e.coef.a12 * nd.dir[d].y
                       : e.coef.a21 * nd.dir[d].x + e.coef.a22 * nd.dir[d].y;
        if (c != 0.0) ka.S.push(base + d, sq * c);
      }
    }
    ka.S.end_row();
  };

  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      int id = g.idx(i, j);
      if (!g.mask[id]) continue;
      Point2 p = g.point(i, j);
      Mat2 A1 = lstar.A1(p), A2 = lstar.A2(p), B0 = lstar.B(p);

      std::vector<Entry> entries;
      entries.push_back({id, B0});
      auto add = [&](int node, Mat2 m) { entries.push_back({node, m}); };

      if (g.in(i - 1, j) && g.in(i + 1, j)) {
        add(g.idx(i + 1, j), A1 * (0.5 / g.hx));
        add(g.idx(i - 1, j), A1 * (-0.5 / g.hx));
      } else if (g.in(i + 1, j)) {
        add(g.idx(i + 1, j), A1 * (1.0 / g.hx));
        add(id, A1 * (-1.0 / g.hx));
      } else {
        add(id, A1 * (1.0 / g.hx));
        add(g.idx(i - 1, j), A1 * (-1.0 / g.hx));
      }
      int jm = g.wrap_j(j - 1), jp = g.wrap_j(j + 1);
      if (g.in(i, j - 1) && g.in(i, j + 1)) {
        add(g.idx(i, jp), A2 * (0.5 / g.hy));
        add(g.idx(i, jm), A2 * (-0.5 / g.hy));
      } else if (g.in(i, j + 1)) {
        add(g.idx(i, jp), A2 * (1.0 / g.hy));
        add(id, A2 * (-1.0 / g.hy));
      } else {
        add(id, A2 * (1.0 / g.hy));
        add(g.idx(i, jm), A2 * (-1.0 / g.hy));
      }

      double w1 = norms.w1(p), w2 = norms.w2(p);
      ka.rows_total += 2;
      double wd1 = 0.0, wd2 = 0.0;
      if (w1 >= 1e-8)
        wd1 = area / w1;
      else
        ++ka.excluded;
      if (w2 >= 1e-8)
        wd2 = area / w2;
      else
        ++ka.excluded;
      push_row(0, entries, wd1);
      push_row(1, entries, wd2);
    }
  ka.S.cols = static_cast<int>(next);
  return ka;
}

} // namespace

KhatResult estimate_basic_constant(int case_id, const DomainSpec& domain, int n,
                                   std::uint64_t seed) {
  KhatAssembly ka = assemble_khat(case_id, domain, n);
  long nd = ka.total_dofs;
  if (nd == 0) throw system_error("constrained test space is empty");

  std::vector<double> diagA(nd, 0.0);
  for (int r = 0; r < ka.S.rows; ++r)
    for (int k = ka.S.ptr[r]; k < ka.S.ptr[r + 1]; ++k)
      diagA[ka.S.col[k]] += ka.S.val[k] * ka.S.val[k];

  double trA = 0.0, trM = 0.0;
  for (long i = 0; i < nd; ++i) {
    trA += diagA[i];
    trM += ka.mdiag[i];
  }
  double shift = 1e-12 * (trA / std::max(trM, 1e-300));

  std::vector<double> tmp(ka.S.rows);
  auto applyA = [&](const std::vector<double>& x, std::vector<double>& y) {
    ka.S.apply(x, tmp);
    y.assign(x.size(), 0.0);
    ka.S.apply_transpose_add(tmp, y);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += shift * ka.mdiag[i] * x[i];
  };
  std::vector<double> pdiag(nd);
  for (long i = 0; i < nd; ++i) pdiag[i] = diagA[i] + shift * ka.mdiag[i];

  CounterRng rng(seed);
  std::vector<double> v(nd), z(nd), Mv(nd), Av(nd);
  for (long i = 0; i < nd; ++i) v[i] = rng.uniform(-1.0, 1.0);

  auto m_norm = [&](const std::vector<double>& x) {
    double s = 0.0;
    for (long i = 0; i < nd; ++i) s += x[i] * ka.mdiag[i] * x[i];
    return std::sqrt(s);
  };
  double nv = m_norm(v);
  for (long i = 0; i < nd; ++i) v[i] /= nv;

  KhatResult out;
  out.grid_n = n;
  out.dofs = nd;
  out.excluded_fraction =
      ka.rows_total > 0 ? double(ka.excluded) / double(ka.rows_total) : 0.0;

  double lam_prev = -1.0;
  int it = 0;
  z.assign(nd, 0.0);
  for (it = 1; it <= 500; ++it) {
    for (long i = 0; i < nd; ++i) Mv[i] = ka.mdiag[i] * v[i];
    pcg(applyA, pdiag, Mv, z, 1e-10, static_cast<int>(10 * nd));
    double nz = m_norm(z);
    if (!(nz > 0.0)) break;
    for (long i = 0; i < nd; ++i) v[i] = z[i] / nz;

    // Rayleigh quotient of the unshifted pencil
    ka.S.apply(v, tmp);
    double num = 0.0;
    for (double t : tmp) num += t * t;
    double den = 0.0;
    for (long i = 0; i < nd; ++i) den += v[i] * ka.mdiag[i] * v[i];
    double lam = num / den;
    if (lam_prev > 0.0 && std::fabs(lam - lam_prev) <= 1e-8 * lam) {
      lam_prev = lam;
      out.converged = true;
      break;
    }
    lam_prev = lam;
  }
  out.iterations = it;
  out.khat = std::sqrt(std::max(lam_prev, 0.0));

  // expand the minimizer and evaluate the Rayleigh quotient directly
  out.minimizer = DiscreteField::zeros(ka.grid);
  for (int j = 0; j < ka.grid.ny; ++j)
    for (int i = 0; i < ka.grid.nx; ++i) {
      int id = ka.grid.idx(i, j);
      if (ka.node_dof[id] < 0) continue;
      const NodeDofs& dofs = ka.dofs[id];
      Vec2 w{0.0, 0.0};
      for (int d = 0; d < dofs.count; ++d) {
        double c = v[ka.node_dof[id] + d];
        w = w + dofs.dir[d] * c;
      }
      out.minimizer.at(i, j, 0) = w.x;
      out.minimizer.at(i, j, 1) = w.y;
    }
  ka.S.apply(v, tmp);
  double num = 0.0;
  for (double t : tmp) num += t * t;
  double den = 0.0;
  for (long i = 0; i < nd; ++i) den += v[i] * ka.mdiag[i] * v[i];
  out.rayleigh_direct = std::sqrt(num / den);
  return out;
}

} // namespace ehs

#include "ehs/friedrichs.hpp"

#include <cmath>
#include <sstream>

namespace ehs {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;

// grid nodes over a domain; polar domains use (r, theta) with theta in (0, 2pi]
template <typename F>
void for_domain_nodes(const DomainSpec& d, int nx, int ny, F&& fn) {
  if (d.chart == Chart::Polar) {
    double hr = (kSqrt2 - d.eps0) / (nx - 1);
    double ht = 2.0 * kPi / ny;
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) fn(Point2{d.eps0 + i * hr, (j + 1) * ht});
    return;
  }
  double hx = (d.xmax - d.xmin) / (nx - 1);
  double hy = (d.ymax - d.ymin) / (ny - 1);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      Point2 p{d.xmin + i * hx, d.ymin + j * hy};
      if (d.contains(p, 1e-9)) fn(p);
    }
}

} // namespace

Mat2 compute_Q(const SystemSpec& sys, Point2 p) {
  Mat2 B = sys.B(p);
  Mat2 twoBs = B + B.transpose();
  return twoBs - sys.dA1(p) - sys.dA2(p);
}

VerificationReport check_symmetric_positive(const SystemSpec& sys_in,
                                            const DomainSpec& domain, int nx, int ny,
                                            double tol) {
  const SystemSpec sys = (sys_in.mult && !sys_in.multiplied && sys_in.is_polar_optics())
                             ? apply_multiplier(*sys_in.mult, sys_in)
                             : sys_in;

  VerificationReport rep;
  rep.condition = sys.multiplied ? "symmetric-positive(EL)" : "symmetric-positive";
  rep.grid_nx = nx;
  rep.grid_ny = ny;

  double min_eig = 1e300;
  double max_trace = 0.0;
  double max_asym = 0.0;
  Point2 argmin{};
  long count = 0;
  for_domain_nodes(domain, nx, ny, [&](Point2 p) {
    ++count;
    Mat2 Q = compute_Q(sys, p);
    double lo = Q.eig_sym()[0];
    if (lo < min_eig) {
      min_eig = lo;
      argmin = p;
    }
    max_trace = std::max(max_trace, std::fabs(Q.trace()));
    max_asym = std::max(max_asym, std::fabs(sys.A1(p).a12 - sys.A1(p).a21));
    max_asym = std::max(max_asym, std::fabs(sys.A2(p).a12 - sys.A2(p).a21));
  });
  if (count == 0) throw system_error("symmetric-positive scan saw an empty grid");

  rep.tol = tol < 0.0 ? 1e-10 * (1.0 + max_trace) : tol;
  rep.worst = min_eig;
  rep.where = argmin;
  rep.pass = min_eig >= -rep.tol;
  std::ostringstream os;
  os << "nodes=" << count << " max|A-A^t|=" << max_asym;
  rep.note = os.str();
  return rep;
}

Mat2 boundary_matrix(const SystemSpec& sys, Point2 p, Vec2 n) {
  return sys.A1(p) * n.x + sys.A2(p) * n.y;
}

double boundary_alpha(Point2 p, Vec2 n) {
  double scale = std::max(std::fabs(n.x), std::fabs(n.y));
  if (scale == 0.0) throw system_error("alpha needs a nonzero normal");
  if (std::fabs(n.y) <= 1e-14 * scale) return -(1.0 - p.x * p.x) * n.x;
  if (std::fabs(n.x) <= 1e-14 * scale)
    throw system_error("alpha is singular at n1 = 0; use the beta-level form");
  double w = 1.0 - p.y * p.y;
  return -w * n.y * n.y / n.x + 2.0 * p.x * p.y * n.y - (1.0 - p.x * p.x) * n.x;
}

namespace {

// the rank-1 style block shared by the E/F splits, in removable form
Mat2 ef_offdiag_block(Point2 p, Vec2 n) {
  double scale = std::max(std::fabs(n.x), std::fabs(n.y));
  if (std::fabs(n.x) <= 1e-14 * scale)
    throw system_error("E/F decomposition singular at n1 = 0");
  double w = 1.0 - p.y * p.y;
  return Mat2{-w * n.y * n.y / n.x, w * n.y, w * n.y, -w * n.x};
}

} // namespace

BoundaryDecomposition ef_decomposition(const SystemSpec& sys,
                                       const BoundarySegment& seg) {
  if (!sys.is_hodge()) throw system_error("E/F decomposition is for the disc systems");
  if (seg.role != SegmentRole::CurveE && seg.role != SegmentRole::CurveF)
    throw system_error("segment role must be E or F");
  bool on_f = seg.role == SegmentRole::CurveF;
  const BoundarySegment* s = &seg;

  BoundaryDecomposition d;
  d.seg = s;
  d.normal_used = [s](std::size_t i) { return s->normal[i]; };
  auto alpha_block = [s](std::size_t i) {
    double al = boundary_alpha(s->pts[i], s->normal[i]);
    return Mat2{-al, 0.0, 0.0, 0.0};
  };
  auto off_block = [s](std::size_t i) {
    return ef_offdiag_block(s->pts[i], s->normal[i]);
  };
  if (on_f) {
    d.beta_plus = alpha_block;
    d.beta_minus = off_block;
    d.cond.kind = BoundaryCondition::Kind::NormalAligned;
  } else {
    d.beta_plus = off_block;
    d.beta_minus = alpha_block;
    d.cond.kind = BoundaryCondition::Kind::None; // nothing is imposed on E
  }
  return d;
}

BoundaryDecomposition annulus_outer_decomposition(const SystemSpec& multiplied,
                                                  const BoundarySegment& seg,
                                                  std::function<double(double)> sigma,
                                                  std::function<double(double)> tau) {
  if (!multiplied.multiplied || !multiplied.mult)
    throw system_error("outer decomposition needs the multiplied system");
  if (seg.role != SegmentRole::AnnulusOuter)
    throw system_error("segment role must be annulus-outer");
  const BoundarySegment* s = &seg;
  MultiplierSpec m = *multiplied.mult;

  BoundaryDecomposition d;
  d.seg = s;
  d.normal_used = [](std::size_t) { return Vec2{1.0, 0.0}; }; // n = dr
  d.beta_minus = [s, m, sigma, tau](std::size_t i) {
    double th = s->pts[i].y;
    double sg = sigma(th), tu = tau(th);
    double den = sg * sg + tu * tu;
    double a = m.a(th), c = m.c;
    return Mat2{(sg * tu * c + tu * tu * a) / den, (sg * sg * c + sg * tu * a) / den,
                (-sg * tu * a + tu * tu * c) / den, (-sg * sg * a + sg * tu * c) / den};
  };
  d.beta_plus = [s, m, sigma, tau](std::size_t i) {
    double th = s->pts[i].y;
    double sg = sigma(th), tu = tau(th);
    double den = sg * sg + tu * tu;
    double a = m.a(th), c = m.c;
    return Mat2{(-sg * tu * c + sg * sg * a) / den, (tu * tu * c - sg * tu * a) / den,
                (sg * tu * a + sg * sg * c) / den, (-tu * tu * a - sg * tu * c) / den};
  };
  d.cond.kind = BoundaryCondition::Kind::OuterSigmaTau;
  d.cond.sigma = std::move(sigma);
  d.cond.tau = std::move(tau);
  return d;
}

BoundaryDecomposition annulus_inner_decomposition(const SystemSpec& multiplied,
                                                  const BoundarySegment& seg,
                                                  double eps0) {
  if (!multiplied.multiplied || !multiplied.mult)
    throw system_error("inner decomposition needs the multiplied system");
  if (seg.role != SegmentRole::AnnulusInner)
    throw system_error("segment role must be annulus-inner");
  const BoundarySegment* s = &seg;
  SystemSpec m = multiplied;
  double scale = 1.0 / (eps0 * eps0 - 1.0);

  BoundaryDecomposition d;
  d.seg = s;
  d.normal_used = [scale](std::size_t) { return Vec2{scale, 0.0}; };
  d.beta_minus = [](std::size_t) { return Mat2{}; };
  d.beta_plus = [s, m, scale](std::size_t i) {
    return boundary_matrix(m, s->pts[i], {scale, 0.0});
  };
  d.cond.kind = BoundaryCondition::Kind::None;
  return d;
}

AdmissibilityReport check_admissibility(const SystemSpec& sys,
                                        const BoundarySegment& seg,
                                        const BoundaryDecomposition& decomp,
                                        double mu_tol) {
  if (decomp.seg != &seg)
    throw system_error("decomposition does not belong to this segment");

  AdmissibilityReport out;
  auto& [recon, span, ranges, mu, annih] = out.checks;
  std::size_t n = seg.size();
  int gn = static_cast<int>(n);

  recon = {"beta-reconstruction", true, 0.0, {}, gn, 1, 1e-10, ""};
  span = {"null-spaces-span", true, 1e300, {}, gn, 1, 1e-9, ""};
  ranges = {"ranges-intersect-trivially", true, 0.0, {}, gn, 1, 0.5, ""};
  mu = {"mu-star-nonnegative", true, 1e300, {}, gn, 1, mu_tol, ""};
  annih = {"condition-annihilates-beta-minus", true, 0.0, {}, gn, 1, 1e-10, ""};

  double worst_recon = 0.0, worst_span = 1e300, worst_rank = 0.0, worst_mu = 1e300,
         worst_annih = 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    Point2 p = seg.pts[i];
    Mat2 bp = decomp.beta_plus(i);
    Mat2 bm = decomp.beta_minus(i);
    Mat2 beta = boundary_matrix(sys, p, decomp.normal_used(i));

    // (i) reconstruction
    double err = (bp + bm - beta).max_abs() / (1.0 + beta.max_abs());
    if (err > worst_recon) {
      worst_recon = err;
      recon.where = p;
    }

    // (ii) direct sum of null spaces spans the state space
    Vec2 basis[4];
    Vec2 nb[2];
    int cnt = 0;
    int k = bp.null_basis(nb);
    for (int t = 0; t < k; ++t) basis[cnt++] = nb[t];
    k = bm.null_basis(nb);
    for (int t = 0; t < k; ++t) basis[cnt++] = nb[t];
    double smin = 0.0;
    if (cnt >= 2) {
      // second singular value of the 2 x cnt stacked basis via its 2x2 Gram
      Mat2 g{};
      for (int t = 0; t < cnt; ++t) {
        g.a11 += basis[t].x * basis[t].x;
        g.a12 += basis[t].x * basis[t].y;
        g.a21 += basis[t].x * basis[t].y;
        g.a22 += basis[t].y * basis[t].y;
      }
      smin = std::sqrt(std::max(0.0, g.eig_sym()[0]));
    }
    if (smin < worst_span) {
      worst_span = smin;
      span.where = p;
    }

    // (iii) ranges intersect only in {0}
    Mat2 gram = bp * bp.transpose() + bm * bm.transpose();
    auto ev = gram.eig_sym();
    double top = std::sqrt(std::max(ev[1], 0.0));
    double cut = 1e-9 * std::max(top, 1e-30);
    int rank_sum = bp.rank() + bm.rank();
    int rank_stack = (std::sqrt(std::max(ev[1], 0.0)) > cut ? 1 : 0) +
                     (std::sqrt(std::max(ev[0], 0.0)) > cut ? 1 : 0);
    double ok = (rank_sum == rank_stack) ? 0.0 : -1.0;
    if (ok < worst_rank) {
      worst_rank = ok;
      ranges.where = p;
    }

    // (iv) mu* = sym(beta_+ - beta_-) nonnegative
    double lo = (bp - bm).eig_sym()[0];
    if (lo < worst_mu) {
      worst_mu = lo;
      mu.where = p;
    }

    // (v) the boundary condition annihilates beta_-
    double viol = 0.0;
    double bscale = 1.0 + bm.max_abs();
    switch (decomp.cond.kind) {
      case BoundaryCondition::Kind::None:
        viol = bm.max_abs() / (1.0 + beta.max_abs());
        break;
      case BoundaryCondition::Kind::OuterSigmaTau: {
        double sg = decomp.cond.sigma(p.y), tu = decomp.cond.tau(p.y);
        Vec2 u{sg, -tu}; // satisfies tau u1 + sigma u2 = 0
        viol = (bm * u).norm() / (bscale * std::max(u.norm(), 1e-30));
        break;
      }
      case BoundaryCondition::Kind::NormalAligned:
      case BoundaryCondition::Kind::TangentialZero: {
        Vec2 u = seg.normal[i]; // u parallel to n satisfies both conditions
        viol = (bm * u).norm() / bscale;
        break;
      }
    }
    if (viol > worst_annih) {
      worst_annih = viol;
      annih.where = p;
    }
  }

  recon.worst = -worst_recon;
  recon.pass = worst_recon <= recon.tol;
  span.worst = worst_span;
  span.pass = worst_span >= span.tol;
  ranges.worst = worst_rank;
  ranges.pass = worst_rank >= -ranges.tol;
  mu.worst = worst_mu;
  mu.pass = worst_mu >= -mu.tol;
  annih.worst = -worst_annih;
  annih.pass = worst_annih <= annih.tol;

  out.pass = recon.pass && span.pass && ranges.pass && mu.pass && annih.pass;
  return out;
}

VerificationReport validate_perturbation(const PerturbationParams& params,
                                         const DomainSpec& domain, int ny) {
  VerificationReport rep;
  rep.condition = "perturbation-feasible";
  rep.grid_nx = 1;
  rep.grid_ny = ny;
  rep.tol = 0.0;

  if (params.form == PerturbationParams::Form::TwoEps) {
    rep.worst = std::min(params.e1, params.e2);
    rep.pass = params.e1 > 0.0 && params.e2 > 0.0;
    rep.note = "requires eps1 > 0 and eps2 > 0";
    return rep;
  }
  if (params.form != PerturbationParams::Form::FourEps) {
    rep.pass = false;
    rep.worst = -1.0;
    rep.note = "no perturbation supplied";
    return rep;
  }

  double worst = std::min(params.e1, params.e4);
  Point2 argmin{0.0, domain.ymin};
  std::string which = params.e1 <= params.e4 ? "eps1 > 0" : "eps4 > 0";
  for (int j = 0; j < ny; ++j) {
    double y = domain.ymin + (domain.ymax - domain.ymin) * double(j) / (ny - 1);
    double w = 1.0 - y * y;
    double lin = params.e2 + w * params.e3;
    double quad = 4.0 * w * params.e1 * params.e4 - lin * lin;
    if (lin < worst) {
      worst = lin;
      argmin = {0.0, y};
      which = "eps2 + (1-y^2) eps3 >= 0";
    }
    if (quad < worst) {
      worst = quad;
      argmin = {0.0, y};
      which = "[eps2 + (1-y^2) eps3]^2 <= 4 (1-y^2) eps1 eps4";
    }
  }
  rep.worst = worst;
  rep.where = argmin;
  rep.pass = worst > 0.0 || (worst == 0.0 && params.e1 > 0.0 && params.e4 > 0.0);
  rep.note = "binding constraint: " + which;
  return rep;
}

SelectMResult select_M(double c, double e1, double e2, double sigma, double tau,
                       double eps0, double margin, int grid_n, int boundary_samples) {
  if (!(c > 0.0) || !(e1 > 0.0) || !(e2 > 0.0) || !(margin > 0.0))
    throw system_error("select_M requires c, eps1, eps2, margin > 0");

  SystemSpec base = assemble_system(SystemId::OpticsPolarPerturbed,
                                    {std::nullopt, PerturbationParams::two(e1, e2), {}});
  DomainSpec annulus = build_omega5(eps0, boundary_samples);
  const BoundarySegment& outer = *annulus.segment_with_role(SegmentRole::AnnulusOuter);
  const BoundarySegment& inner = *annulus.segment_with_role(SegmentRole::AnnulusInner);
  auto sg = [sigma](double) { return sigma; };
  auto tu = [tau](double) { return tau; };

  auto passes = [&](double M) {
    MultiplierSpec mult{c, M, e1, e2};
    SystemSpec sys = apply_multiplier(mult, base);
    auto sp = check_symmetric_positive(sys, annulus, grid_n, grid_n, margin);
    if (sp.worst < margin) return false;
    auto dec_out = annulus_outer_decomposition(sys, outer, sg, tu);
    auto rep_out = check_admissibility(sys, outer, dec_out, margin);
    if (!rep_out.pass || rep_out.checks[3].worst < margin) return false;
    auto dec_in = annulus_inner_decomposition(sys, inner, eps0);
    auto rep_in = check_admissibility(sys, inner, dec_in, margin);
    if (!rep_in.pass || rep_in.checks[3].worst < margin) return false;
    return true;
  };

  double M = 10.0 * c;
  double lo = 0.0;
  while (!passes(M)) {
    lo = M;
    M *= 2.0;
    if (M > 1e12) {
      SelectMResult r;
      r.feasible = false;
      r.M = M;
      r.note = "doubling search exceeded 1e12; constraints look infeasible";
      return r;
    }
  }
  double hi = M;
  if (lo > 0.0) {
    while ((hi - lo) / hi > 1e-3) {
      double mid = 0.5 * (hi + lo);
      if (passes(mid))
        hi = mid;
      else
        lo = mid;
    }
  }
  SelectMResult r;
  r.feasible = true;
  r.M = hi;
  return r;
}

} // namespace ehs

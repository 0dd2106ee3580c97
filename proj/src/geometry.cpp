#include "ehs/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ehs {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kInvSqrt2 = 0.70710678118654752440;

// residual of the characteristic ODE along a direction (tx,ty) at (x,y)
double char_residual(Point2 p, Vec2 t) {
  return (1.0 - p.y * p.y) * t.x * t.x + 2.0 * p.x * p.y * t.x * t.y +
         (1.0 - p.x * p.x) * t.y * t.y;
}

std::vector<Point2> boundary_ring(const DomainSpec& d) {
  std::vector<Point2> ring;
  for (const auto& seg : d.segments) {
    for (const auto& p : seg.pts) {
      if (!ring.empty()) {
        double dx = p.x - ring.back().x, dy = p.y - ring.back().y;
        if (dx * dx + dy * dy < 1e-28) continue;
      }
      ring.push_back(p);
    }
  }
  if (ring.size() > 2) {
    double dx = ring.front().x - ring.back().x, dy = ring.front().y - ring.back().y;
    if (dx * dx + dy * dy < 1e-28) ring.pop_back();
  }
  return ring;
}

double dist2_point_segment(Point2 p, Point2 a, Point2 b) {
  double vx = b.x - a.x, vy = b.y - a.y;
  double wx = p.x - a.x, wy = p.y - a.y;
  double vv = vx * vx + vy * vy;
  double t = vv > 0.0 ? std::clamp((wx * vx + wy * vy) / vv, 0.0, 1.0) : 0.0;
  double dx = wx - t * vx, dy = wy - t * vy;
  return dx * dx + dy * dy;
}

bool point_in_ring(const std::vector<Point2>& ring, Point2 p, double tol) {
  // even-odd crossing test, with a distance fallback so boundary points count
  bool inside = false;
  std::size_t n = ring.size();
  double mind2 = 1e300;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2& a = ring[j];
    const Point2& b = ring[i];
    mind2 = std::min(mind2, dist2_point_segment(p, a, b));
    if ((b.y > p.y) != (a.y > p.y)) {
      double xi = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
      if (p.x < xi) inside = !inside;
    }
  }
  return inside || mind2 <= tol * tol;
}

std::vector<Point2> line_samples(Point2 a, Point2 b, int n) {
  std::vector<Point2> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    double t = double(i) / (n - 1);
    out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
  }
  return out;
}

void check(bool ok, const char* constraint, Point2 p) {
  if (!ok) throw build_error(constraint, p);
}

} // namespace

const char* segment_role_name(SegmentRole r) {
  switch (r) {
    case SegmentRole::GammaChar: return "gamma-characteristic";
    case SegmentRole::DataC: return "c-data";
    case SegmentRole::CurveE: return "e";
    case SegmentRole::CurveF: return "f";
    case SegmentRole::AnnulusOuter: return "annulus-outer";
    case SegmentRole::AnnulusInner: return "annulus-inner";
  }
  return "?";
}

Point2 BoundarySegment::point_at(double at) const {
  if (at < s.front() - 1e-12 || at > s.back() + 1e-12)
    throw geometry_error("arc length out of segment range");
  auto it = std::upper_bound(s.begin(), s.end(), at);
  std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - s.begin(), 1), s.size() - 1);
  double h = s[i] - s[i - 1];
  double t = h > 0 ? std::clamp((at - s[i - 1]) / h, 0.0, 1.0) : 0.0;
  return {pts[i - 1].x + t * (pts[i].x - pts[i - 1].x),
          pts[i - 1].y + t * (pts[i].y - pts[i - 1].y)};
}

Vec2 BoundarySegment::tangent_at(double at) const {
  if (at < s.front() - 1e-12 || at > s.back() + 1e-12)
    throw geometry_error("arc length out of segment range");
  auto it = std::upper_bound(s.begin(), s.end(), at);
  std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - s.begin(), 1), s.size() - 1);
  double h = s[i] - s[i - 1];
  double t = h > 0 ? std::clamp((at - s[i - 1]) / h, 0.0, 1.0) : 0.0;
  Vec2 v{tangent[i - 1].x + t * (tangent[i].x - tangent[i - 1].x),
         tangent[i - 1].y + t * (tangent[i].y - tangent[i - 1].y)};
  return v.normalized();
}

Vec2 BoundarySegment::normal_at(double at) const {
  if (at < s.front() - 1e-12 || at > s.back() + 1e-12)
    throw geometry_error("arc length out of segment range");
  auto it = std::upper_bound(s.begin(), s.end(), at);
  std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - s.begin(), 1), s.size() - 1);
  double h = s[i] - s[i - 1];
  double t = h > 0 ? std::clamp((at - s[i - 1]) / h, 0.0, 1.0) : 0.0;
  Vec2 v{normal[i - 1].x + t * (normal[i].x - normal[i - 1].x),
         normal[i - 1].y + t * (normal[i].y - normal[i - 1].y)};
  return v.normalized();
}

BoundarySegment make_segment(SegmentRole role, std::vector<Point2> pts,
                             Point2 interior_witness,
                             const std::vector<Vec2>* tangents) {
  if (pts.size() < 2) throw geometry_error("segment needs at least two samples");
  BoundarySegment seg;
  seg.role = role;
  seg.pts = std::move(pts);
  std::size_t n = seg.pts.size();

  seg.s.resize(n);
  seg.s[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    double dx = seg.pts[i].x - seg.pts[i - 1].x;
    double dy = seg.pts[i].y - seg.pts[i - 1].y;
    seg.s[i] = seg.s[i - 1] + std::hypot(dx, dy);
  }

  seg.tangent.resize(n);
  if (tangents) {
    if (tangents->size() != n) throw geometry_error("tangent count mismatch");
    for (std::size_t i = 0; i < n; ++i) seg.tangent[i] = (*tangents)[i].normalized();
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t a = (i == 0) ? 0 : i - 1;
      std::size_t b = (i + 1 == n) ? n - 1 : i + 1;
      Vec2 d{seg.pts[b].x - seg.pts[a].x, seg.pts[b].y - seg.pts[a].y};
      seg.tangent[i] = d.normalized();
    }
  }

  seg.normal.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 nvec = seg.tangent[i].perp();
    Vec2 away{seg.pts[i].x - interior_witness.x, seg.pts[i].y - interior_witness.y};
    if (nvec.dot(away) < 0.0) nvec = nvec * -1.0;
    seg.normal[i] = nvec;
  }
  return seg;
}

bool DomainSpec::contains(Point2 p, double tol) const {
  if (kind == DomainKind::Omega5)
    return p.x >= eps0 - tol && p.x <= kSqrt2 + tol;
  if (kind == DomainKind::Omega4)
    return p.x >= xmin - tol && p.x <= xmax + tol && p.y >= ymin - tol &&
           p.y <= ymax + tol;
  return point_in_ring(boundary_ring(*this), p, std::max(tol, 1e-12));
}

const BoundarySegment* DomainSpec::segment_with_role(SegmentRole r) const {
  for (const auto& seg : segments)
    if (seg.role == r) return &seg;
  return nullptr;
}

Line2 characteristic_line(double theta) {
  if (theta < 0.0 || theta >= 2.0 * kPi)
    throw geometry_error("characteristic angle must lie in [0, 2pi)");
  return {std::cos(theta), std::sin(theta), 1.0, theta};
}

Point2 tangency_point(double theta) { return {std::cos(theta), std::sin(theta)}; }

Point2 pole_of_chord(Point2 p1, Point2 p2) {
  double r1 = std::hypot(p1.x, p1.y), r2 = std::hypot(p2.x, p2.y);
  if (std::fabs(r1 - 1.0) > 1e-10 || std::fabs(r2 - 1.0) > 1e-10)
    throw geometry_error("chord endpoints must lie on the unit circle");
  if (std::hypot(p1.x - p2.x, p1.y - p2.y) < 1e-12)
    throw geometry_error("chord endpoints coincide");
  // tangent lines x*p.x + y*p.y = 1 at each endpoint
  double det = p1.x * p2.y - p1.y * p2.x;
  if (std::fabs(det) < 1e-12) throw pole_at_infinity(Vec2{-p1.y, p1.x}.normalized());
  double x = (p2.y - p1.y) / det;
  double y = (p1.x - p2.x) / det;
  return {x, y};
}

MetricTensor beltrami_metric(Point2 p) {
  double r = std::hypot(p.x, p.y);
  if (std::fabs(r - 1.0) < 1e-8) throw singular_metric(p);
  double D = 1.0 - p.x * p.x - p.y * p.y;
  double D2 = D * D;
  MetricTensor g;
  g.g11 = (1.0 - p.y * p.y) / D2;
  g.g12 = p.x * p.y / D2;
  g.g22 = (1.0 - p.x * p.x) / D2;
  g.det = g.g11 * g.g22 - g.g12 * g.g12;
  return g;
}

Vec2 boundary_normal(const BoundarySegment& seg, double at) { return seg.normal_at(at); }

namespace {

void set_bbox(DomainSpec& d) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& seg : d.segments)
    for (const auto& p : seg.pts) {
      x0 = std::min(x0, p.x);
      x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y);
      y1 = std::max(y1, p.y);
    }
  d.xmin = x0;
  d.xmax = x1;
  d.ymin = y0;
  d.ymax = y1;
}

DomainSpec omega1_from_pieces(double theta, std::vector<Point2> c_samples,
                              const std::vector<Vec2>* c_tangents, int gamma_samples) {
  Point2 c1 = c_samples.front();
  Point2 c2 = c_samples.back();
  Point2 pole{1.0 / std::cos(theta), 0.0};
  Line2 g1 = characteristic_line(theta);
  Line2 g2{std::cos(theta), -std::sin(theta), 1.0, -theta};

  check(std::fabs(g1.eval(c1)) <= 1e-8, "c1 must lie on Gamma1", c1);
  check(std::fabs(g2.eval(c2)) <= 1e-8, "c2 must lie on Gamma2", c2);

  // witness: nudge from the pole toward the mid point of C
  Point2 mid = c_samples[c_samples.size() / 2];
  Point2 witness{pole.x + 0.5 * (mid.x - pole.x), pole.y + 0.5 * (mid.y - pole.y)};

  DomainSpec d;
  d.kind = DomainKind::Omega1;
  d.chart = Chart::Cartesian;
  d.theta = theta;
  d.interior = witness;

  bool degenerate = std::fabs(theta) < 1e-14; // Gamma1 = Gamma2 = {x = 1}
  if (degenerate) {
    check(std::fabs(c1.x - 1.0) <= 1e-10 && std::fabs(c2.x - 1.0) <= 1e-10,
          "degenerate characteristics require c1,c2 on x=1", c1);
    Point2 midwall{1.0, 0.5 * (c1.y + c2.y)};
    d.segments.push_back(make_segment(SegmentRole::GammaChar,
                                      line_samples(midwall, c1, gamma_samples), witness));
    d.segments.push_back(make_segment(SegmentRole::DataC, std::move(c_samples), witness,
                                      c_tangents));
    d.segments.push_back(make_segment(SegmentRole::GammaChar,
                                      line_samples(c2, midwall, gamma_samples), witness));
  } else {
    d.segments.push_back(make_segment(SegmentRole::GammaChar,
                                      line_samples(pole, c1, gamma_samples), witness));
    d.segments.push_back(make_segment(SegmentRole::DataC, std::move(c_samples), witness,
                                      c_tangents));
    d.segments.push_back(make_segment(SegmentRole::GammaChar,
                                      line_samples(c2, pole, gamma_samples), witness));
  }
  set_bbox(d);
  validate_domain(d);
  return d;
}

} // namespace

DomainSpec build_omega1(double theta, const std::vector<Point2>& c_samples,
                        int gamma_samples) {
  if (theta < 0.0 || theta > kPi / 4.0 + 1e-12)
    throw geometry_error("Omega1 requires theta in [0, pi/4]");
  if (c_samples.size() < 2) throw geometry_error("data curve needs samples");
  return omega1_from_pieces(theta, c_samples, nullptr, gamma_samples);
}

DomainSpec omega1_fixture(double theta, int n) {
  if (theta < 0.0 || theta > kPi / 4.0 + 1e-12)
    throw geometry_error("Omega1 requires theta in [0, pi/4]");

  bool cusp = std::fabs(theta - kPi / 4.0) <= 1e-12;
  std::vector<Point2> c;
  std::vector<Vec2> ct;
  c.reserve(n);
  ct.reserve(n);
  if (cusp) {
    // unit-circle arc between the tangency points; cusps at both ends
    for (int i = 0; i < n; ++i) {
      double a = kPi / 4.0 - (kPi / 2.0) * double(i) / (n - 1);
      c.push_back({std::cos(a), std::sin(a)});
      ct.push_back({std::sin(a), -std::cos(a)}); // decreasing-angle traversal
    }
  } else {
    double sec = 1.0 / std::cos(theta);
    double R = 0.95 * std::min(sec - kInvSqrt2, 1.0 / (kSqrt2 * std::cos(theta)));
    Point2 pole{sec, 0.0};
    double phi0 = kPi / 2.0 + theta, phi1 = 3.0 * kPi / 2.0 - theta;
    for (int i = 0; i < n; ++i) {
      double phi = phi0 + (phi1 - phi0) * double(i) / (n - 1);
      c.push_back({pole.x + R * std::cos(phi), pole.y + R * std::sin(phi)});
      ct.push_back({-std::sin(phi), std::cos(phi)});
    }
  }
  return omega1_from_pieces(theta, std::move(c), &ct, n);
}

namespace {

// Curvilinear triangle: pole P outside the unit disc, legs along the two
// tangent lines through P, straight data chord closing it (dy < 0 traversal).
DomainSpec tangent_triangle(DomainKind kind, Point2 P, double leg_a, double leg_b, int n) {
  double rP = std::hypot(P.x, P.y);
  if (rP <= 1.0) throw geometry_error("pole must lie outside the unit disc");
  double base = std::atan2(P.y, P.x);
  double half = std::acos(1.0 / rP);
  double phi1 = base + half, phi2 = base - half; // tangency angles
  Vec2 d1{-std::sin(phi1), std::cos(phi1)};
  Vec2 d2{std::sin(phi2), -std::cos(phi2)};
  Point2 A{P.x + leg_a * d1.x, P.y + leg_a * d1.y};
  Point2 B{P.x + leg_b * d2.x, P.y + leg_b * d2.y};
  Point2 witness{(P.x + A.x + B.x) / 3.0, (P.y + A.y + B.y) / 3.0};

  DomainSpec d;
  d.kind = kind;
  d.chart = Chart::Cartesian;
  d.interior = witness;
  d.segments.push_back(
      make_segment(SegmentRole::GammaChar, line_samples(P, A, n), witness));
  d.segments.push_back(
      make_segment(SegmentRole::DataC, line_samples(A, B, n), witness));
  d.segments.push_back(
      make_segment(SegmentRole::GammaChar, line_samples(B, P, n), witness));
  set_bbox(d);
  return d;
}

} // namespace

DomainSpec omega2_fixture(int n) {
  DomainSpec d = tangent_triangle(DomainKind::Omega2, {0.85, -0.85}, 0.1, 0.1, n);
  validate_domain(d);
  return d;
}

DomainSpec omega3_fixture(int n) {
  DomainSpec d = tangent_triangle(DomainKind::Omega3, {0.9, 0.83}, 0.19, 0.104, n);
  d.delta = 0.1;
  d.eps = 0.1;
  validate_domain(d);
  return d;
}

DomainSpec build_omega4(std::vector<BoundarySegment> ef_segments, double xmin,
                        double xmax, double ybound) {
  DomainSpec d;
  d.kind = DomainKind::Omega4;
  d.chart = Chart::Cartesian;
  d.segments = std::move(ef_segments);
  d.xmin = xmin;
  d.xmax = xmax;
  d.ymin = -ybound;
  d.ymax = ybound;
  d.interior = {0.5 * (xmin + xmax), 0.0};
  validate_domain(d);
  return d;
}

BoundarySegment omega4_E_fixture(int n) {
  // vertical piece of x = 1 with outward normal (-1, 0); alpha = 0 exactly
  std::vector<Point2> pts;
  std::vector<Vec2> tg;
  for (int i = 0; i < n; ++i) {
    double y = -0.5 + double(i) / (n - 1);
    pts.push_back({1.0, y});
    tg.push_back({0.0, 1.0});
  }
  BoundarySegment seg = make_segment(SegmentRole::CurveE, pts, {1.5, 0.0}, &tg);
  return seg;
}

BoundarySegment omega4_F_fixture(int n) {
  // diagonal with outward normal (1,-1)/sqrt2; alpha = -sqrt2 along it
  std::vector<Point2> pts;
  std::vector<Vec2> tg;
  for (int i = 0; i < n; ++i) {
    double t = -0.3 + 0.6 * double(i) / (n - 1);
    pts.push_back({t, t});
    tg.push_back({kInvSqrt2, kInvSqrt2});
  }
  BoundarySegment seg = make_segment(SegmentRole::CurveF, pts, {-0.5, 0.5}, &tg);
  return seg;
}

DomainSpec build_omega5(double eps0, int n) {
  if (!(eps0 > 0.0 && eps0 < kSqrt2))
    throw geometry_error("Omega5 requires eps0 in (0, sqrt2)");
  DomainSpec d;
  d.kind = DomainKind::Omega5;
  d.chart = Chart::Polar;
  d.eps0 = eps0;
  d.interior = {0.5 * (eps0 + kSqrt2), kPi};

  // theta in (0, 2pi]; outer circle traversed with increasing theta (ccw),
  // inner circle with decreasing theta so the annulus stays on the left
  BoundarySegment outer, inner;
  outer.role = SegmentRole::AnnulusOuter;
  inner.role = SegmentRole::AnnulusInner;
  double h = 2.0 * kPi / n;
  for (int i = 0; i <= n; ++i) {
    double th_out = h + i * h;
    double th_in = 2.0 * kPi - i * h;
    if (th_out > 2.0 * kPi) th_out -= 2.0 * kPi;
    if (th_in <= 0.0) th_in += 2.0 * kPi;
    outer.pts.push_back({kSqrt2, th_out});
    outer.tangent.push_back({0.0, 1.0});
    outer.normal.push_back({1.0, 0.0});
    outer.s.push_back(kSqrt2 * i * h);
    inner.pts.push_back({eps0, th_in});
    inner.tangent.push_back({0.0, -1.0});
    inner.normal.push_back({-1.0, 0.0});
    inner.s.push_back(eps0 * i * h);
  }
  d.segments.push_back(std::move(outer));
  d.segments.push_back(std::move(inner));
  d.xmin = eps0;
  d.xmax = kSqrt2;
  d.ymin = 0.0;
  d.ymax = 2.0 * kPi;
  validate_domain(d);
  return d;
}

void validate_domain(const DomainSpec& d) {
  const double tol = 1e-9;

  for (const auto& seg : d.segments) {
    if (seg.pts.size() < 2) throw build_error("segment too short", {0, 0});
    for (std::size_t i = 0; i < seg.pts.size(); ++i) {
      Vec2 nv = seg.normal[i], tv = seg.tangent[i];
      check(std::fabs(nv.norm() - 1.0) <= 1e-12, "normal must be unit", seg.pts[i]);
      check(std::fabs(tv.norm() - 1.0) <= 1e-12, "tangent must be unit", seg.pts[i]);
      check(std::fabs(nv.dot(tv)) <= 1e-10, "normal must be orthogonal to tangent",
            seg.pts[i]);
    }
    if (seg.role == SegmentRole::GammaChar && d.chart == Chart::Cartesian) {
      for (std::size_t i = 0; i < seg.pts.size(); ++i)
        check(std::fabs(char_residual(seg.pts[i], seg.tangent[i])) <= 1e-10,
              "characteristic residual exceeds 1e-10", seg.pts[i]);
    }
    if (seg.role == SegmentRole::DataC) {
      for (std::size_t i = 1; i < seg.pts.size(); ++i)
        check(seg.pts[i].y - seg.pts[i - 1].y <= 1e-12,
              "dy must be <= 0 along C (counterclockwise)", seg.pts[i]);
    }
  }

  switch (d.kind) {
    case DomainKind::Omega1:
      for (const auto& seg : d.segments)
        for (const auto& p : seg.pts) {
          check(p.x >= kInvSqrt2 - tol && p.x <= kSqrt2 + tol,
                "Omega1 requires 1/sqrt2 <= x < sqrt2", p);
          check(p.y >= -kInvSqrt2 - tol && p.y <= kInvSqrt2 + tol,
                "Omega1 requires -1/sqrt2 <= y < 1/sqrt2", p);
        }
      break;
    case DomainKind::Omega2:
      for (const auto& seg : d.segments)
        for (const auto& p : seg.pts) {
          check(p.x >= -tol && p.y <= tol, "Omega2 must lie in the fourth quadrant", p);
          check(p.y * p.y < 1.0 - 1e-12, "Omega2 requires y^2 != 1", p);
        }
      break;
    case DomainKind::Omega3:
      for (const auto& seg : d.segments)
        for (const auto& p : seg.pts) {
          check(p.x >= kInvSqrt2 - tol, "Omega3 requires x > 1/sqrt2", p);
          check(p.y >= 1.0 / std::sqrt(2.0 - d.delta) - tol,
                "Omega3 requires y > 1/sqrt(2-delta)", p);
          check(p.y <= std::sqrt(1.0 - d.eps) + tol,
                "Omega3 requires y <= sqrt(1-eps)", p);
        }
      break;
    case DomainKind::Omega4:
      check(d.ymax < 1.0 && d.ymin > -1.0, "Omega4 requires y^2 < 1",
            {d.xmin, d.ymax});
      for (const auto& seg : d.segments) {
        for (std::size_t i = 0; i < seg.pts.size(); ++i) {
          const Point2& p = seg.pts[i];
          check(p.y * p.y < 1.0, "Omega4 requires y^2 < 1 on the boundary", p);
          Vec2 nv = seg.normal[i];
          if (seg.role == SegmentRole::CurveE)
            check(nv.x <= tol && nv.y >= -tol, "E requires n1 <= 0 and n2 >= 0", p);
          else if (seg.role == SegmentRole::CurveF)
            check(nv.x >= -tol && nv.y <= tol, "F requires n1 >= 0 and n2 <= 0", p);
          else
            throw build_error("Omega4 segments must have role E or F", p);
        }
      }
      break;
    case DomainKind::Omega5:
      for (const auto& seg : d.segments)
        for (const auto& p : seg.pts) {
          check(p.x >= d.eps0 - tol && p.x <= kSqrt2 + tol,
                "Omega5 requires eps0 <= r <= sqrt2", p);
          check(p.y > 0.0 && p.y <= 2.0 * kPi + tol, "theta must lie in (0, 2pi]", p);
        }
      check(d.segment_with_role(SegmentRole::AnnulusOuter) != nullptr,
            "Omega5 needs an outer circle", {kSqrt2, 0});
      check(d.segment_with_role(SegmentRole::AnnulusInner) != nullptr,
            "Omega5 needs an inner circle", {d.eps0, 0});
      break;
  }

  // outwardness probe at each segment's mid sample (polygon domains only)
  if (d.chart == Chart::Cartesian && d.kind != DomainKind::Omega4) {
    for (const auto& seg : d.segments) {
      std::size_t m = seg.pts.size() / 2;
      double h = 1e-6 * std::max(1.0, seg.length());
      Point2 pin{seg.pts[m].x - h * seg.normal[m].x, seg.pts[m].y - h * seg.normal[m].y};
      Point2 pout{seg.pts[m].x + h * seg.normal[m].x, seg.pts[m].y + h * seg.normal[m].y};
      check(d.contains(pin, 0.0) && !d.contains(pout, 0.0),
            "normal must point outward", seg.pts[m]);
    }
  }
}

std::vector<Point2> load_polyline_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw geometry_error("cannot open polyline file: " + path);
  std::vector<Point2> pts;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.find_first_not_of("0123456789+-.eE, \t") != std::string::npos)
        continue; // header row
    }
    std::istringstream ss(line);
    double s, x, y;
    char comma;
    if (ss >> s >> comma >> x >> comma >> y) pts.push_back({x, y});
  }
  if (pts.size() < 2) throw geometry_error("polyline file has fewer than 2 rows");
  return pts;
}

} // namespace ehs

#include "ehs/optics.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <vector>

#include "ehs/system.hpp"

namespace ehs {

namespace {

using quad = __float128;

struct QuadAiry {
  quad Z, dZ;
};

quad quad_Z0() {
  quad g23 = tgammaq(quad(2) / 3);
  return powq(quad(3), -quad(2) / 3) / g23;
}

quad quad_dZ0() {
  quad g13 = tgammaq(quad(1) / 3);
  return -powq(quad(3), -quad(1) / 3) / g13;
}

// power series about 0: a_{k+3} = a_k / ((k+3)(k+2)), adaptive truncation
QuadAiry airy_series_quad(quad t) {
  quad a0 = quad_Z0(), a1 = quad_dZ0();
  quad Z = a0 + a1 * t;
  quad dZ = a1;
  quad t3 = t * t * t;
  quad termf = a0; // degree 3k
  quad termg = a1 * t; // degree 3k+1
  int kf = 0, kg = 1;
  quad at = fabsq(t);
  for (int it = 0; it < 4000; ++it) {
    termf = termf * t3 / quad((kf + 3) * (kf + 2));
    kf += 3;
    termg = termg * t3 / quad((kg + 3) * (kg + 2));
    kg += 3;
    Z += termf + termg;
    if (at > 0) dZ += (quad(kf) * termf + quad(kg) * termg) / t;
    if (fabsq(termf) + fabsq(termg) < quad(1e-40) * (fabsq(Z) + quad(1e-300)) &&
        quad(kf) > at * at * at / quad(kf + 1))
      break;
  }
  return {Z, dZ};
}

struct OdeRecorder {
  // 4th-order finite difference of the stored dZ trajectory against t Z
  std::deque<std::array<quad, 3>> window; // (t, Z, dZ)
  double max_resid = 0.0;

  void push(quad t, quad Z, quad dZ) {
    window.push_back({t, Z, dZ});
    if (window.size() > 5) window.pop_front();
    if (window.size() == 5) {
      quad h = window[1][0] - window[0][0];
      // the landing steps are shortened; difference only uniform windows
      for (int k = 1; k < 4; ++k)
        if (fabsq(window[k + 1][0] - window[k][0] - h) > fabsq(h) * quad(1e-12))
          return;
      quad num = -window[4][2] + 8 * window[3][2] - 8 * window[1][2] + window[0][2];
      quad zpp = num / (12 * h);
      quad resid = fabsq(zpp - window[2][0] * window[2][1]);
      double r = (double)(resid / (1 + fabsq(window[2][1])));
      max_resid = std::max(max_resid, r);
    }
  }
};

// classic RK4 with fixed step, shortened final step to land exactly
void rk4_to(quad& t, QuadAiry& y, quad target, quad h_mag, OdeRecorder* rec) {
  quad dir = target > t ? quad(1) : quad(-1);
  while (fabsq(target - t) > quad(1e-30)) {
    quad h = dir * h_mag;
    if (fabsq(target - t) < h_mag) h = target - t;
    quad k1z = y.dZ, k1p = t * y.Z;
    quad k2z = y.dZ + h / 2 * k1p, k2p = (t + h / 2) * (y.Z + h / 2 * k1z);
    quad k3z = y.dZ + h / 2 * k2p, k3p = (t + h / 2) * (y.Z + h / 2 * k2z);
    quad k4z = y.dZ + h * k3p, k4p = (t + h) * (y.Z + h * k3z);
    y.Z += h / 6 * (k1z + 2 * k2z + 2 * k3z + k4z);
    y.dZ += h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
    t += h;
    if (rec) rec->push(t, y.Z, y.dZ);
  }
}

} // namespace

double gamma_lanczos(double x) {
  // g = 7, 9 coefficients
  static const double c[9] = {0.99999999999980993, 676.5203681218851,
                              -1259.1392167224028, 771.32342877765313,
                              -176.61502916214059, 12.507343278686905,
                              -0.13857109526572012, 9.9843695780195716e-6,
                              1.5056327351493116e-7};
  const double pi = 3.14159265358979323846;
  if (x < 0.5) return pi / (std::sin(pi * x) * gamma_lanczos(1.0 - x));
  x -= 1.0;
  double acc = c[0];
  for (int i = 1; i < 9; ++i) acc += c[i] / (x + i);
  double t = x + 7.5;
  return std::sqrt(2.0 * pi) * std::pow(t, x + 0.5) * std::exp(-t) * acc;
}

double airy_Z0() { return std::pow(3.0, -2.0 / 3.0) / gamma_lanczos(2.0 / 3.0); }

double airy_dZ0() { return -std::pow(3.0, -1.0 / 3.0) / gamma_lanczos(1.0 / 3.0); }

AiryState airy(double t) {
  if (std::fabs(t) > 20.0)
    throw std::domain_error("airy: |t| <= 20 is the supported range");
  QuadAiry qa = airy_series_quad(quad(t));
  return {t, (double)qa.Z, (double)qa.dZ};
}

AiryCheck airy_dual_path_check(double t_lo, double t_hi, int nsamples) {
  if (t_lo > t_hi || std::fabs(t_lo) > 20.0 || std::fabs(t_hi) > 20.0)
    throw std::domain_error("airy check range invalid");
  AiryCheck out;
  out.samples = nsamples;

  std::vector<double> neg, pos;
  for (int i = 0; i < nsamples; ++i) {
    double t = t_lo + (t_hi - t_lo) * double(i) / (nsamples - 1);
    (t <= 0.0 ? neg : pos).push_back(t);
  }
  std::sort(neg.rbegin(), neg.rend()); // toward more negative
  std::sort(pos.rbegin(), pos.rend()); // descending for the backward pass

  OdeRecorder rec;
  const quad h = quad(1) / 1000;

  auto compare = [&](double ts, const QuadAiry& ode) {
    QuadAiry ser = airy_series_quad(quad(ts));
    quad dev = fabsq(ser.Z - ode.Z) + fabsq(ser.dZ - ode.dZ);
    quad scale = fabsq(ser.Z) + fabsq(ser.dZ);
    out.max_rel_dev = std::max(out.max_rel_dev, (double)(dev / scale));
  };

  if (!neg.empty()) {
    quad t = 0;
    QuadAiry y{quad_Z0(), quad_dZ0()};
    for (double ts : neg) {
      rk4_to(t, y, quad(ts), h, &rec);
      compare(ts, y);
    }
  }
  if (!pos.empty()) {
    double anchor = pos.front();
    quad t = quad(anchor);
    QuadAiry y = airy_series_quad(t); // anchor; backward flow is stable
    for (double ts : pos) {
      rk4_to(t, y, quad(ts), h, &rec);
      compare(ts, y);
    }
    rk4_to(t, y, quad(0), h, &rec);
    quad dev = fabsq(y.Z - quad_Z0()) + fabsq(y.dZ - quad_dZ0());
    out.origin_rel_dev = (double)(dev / (fabsq(quad_Z0()) + fabsq(quad_dZ0())));
    out.max_rel_dev = std::max(out.max_rel_dev, out.origin_rel_dev);
  }
  out.max_ode_residual = rec.max_resid;
  return out;
}

Vec2 field_grad(const ScalarField2& f, Point2 p) {
  if (f.grad) return f.grad(p);
  double h = 1e-6 * (1.0 + std::fabs(p.x) + std::fabs(p.y));
  return {(f.value({p.x + h, p.y}) - f.value({p.x - h, p.y})) / (2 * h),
          (f.value({p.x, p.y + h}) - f.value({p.x, p.y - h})) / (2 * h)};
}

Mat2 field_hess(const ScalarField2& f, Point2 p) {
  if (f.hess) return f.hess(p);
  double h = 1e-5 * (1.0 + std::fabs(p.x) + std::fabs(p.y));
  auto v = [&](double x, double y) { return f.value({x, y}); };
  double fxx = (v(p.x + h, p.y) - 2 * v(p.x, p.y) + v(p.x - h, p.y)) / (h * h);
  double fyy = (v(p.x, p.y + h) - 2 * v(p.x, p.y) + v(p.x, p.y - h)) / (h * h);
  double fxy = (v(p.x + h, p.y + h) - v(p.x + h, p.y - h) - v(p.x - h, p.y + h) +
                v(p.x - h, p.y - h)) /
               (4 * h * h);
  return {fxx, fxy, fxy, fyy};
}

ScalarField2 field_constant(double c) {
  return {[c](Point2) { return c; }, [](Point2) { return Vec2{0, 0}; },
          [](Point2) { return Mat2{}; }};
}

ScalarField2 field_linear(double a, double b, double c) {
  return {[a, b, c](Point2 p) { return a * p.x + b * p.y + c; },
          [a, b](Point2) { return Vec2{a, b}; }, [](Point2) { return Mat2{}; }};
}

ScalarField2 field_radial() {
  return {[](Point2 p) { return std::hypot(p.x, p.y); },
          [](Point2 p) {
            double r = std::hypot(p.x, p.y);
            return Vec2{p.x / r, p.y / r};
          },
          [](Point2 p) {
            double r = std::hypot(p.x, p.y);
            double r3 = r * r * r;
            return Mat2{p.y * p.y / r3, -p.x * p.y / r3, -p.x * p.y / r3,
                        p.x * p.x / r3};
          }};
}

ScalarField2 field_half_square() {
  return {[](Point2 p) { return 0.5 * (p.x * p.x + p.y * p.y); },
          [](Point2 p) { return Vec2{p.x, p.y}; },
          [](Point2) { return Mat2::identity(); }};
}

ScalarField2 field_product() {
  return {[](Point2 p) { return p.x * p.y; },
          [](Point2 p) { return Vec2{p.y, p.x}; },
          [](Point2) { return Mat2{0, 1, 1, 0}; }};
}

ScalarField2 field_square_x() {
  return {[](Point2 p) { return p.x * p.x; },
          [](Point2 p) { return Vec2{2 * p.x, 0}; },
          [](Point2) { return Mat2{2, 0, 0, 0}; }};
}

Vec2 eikonal_residual(const ScalarField2& u, const ScalarField2& v, Point2 p) {
  Vec2 gu = field_grad(u, p), gv = field_grad(v, p);
  double r1 = u.value(p) * (gu.x * gu.x + gu.y * gu.y) - (gv.x * gv.x + gv.y * gv.y) + 1.0;
  double r2 = gu.dot(gv);
  return {r1, r2};
}

double legendre_residual(const ScalarField2& v, const ScalarField2& V, Point2 p) {
  Mat2 H = field_hess(v, p);
  double J = H.det();
  if (std::fabs(J) < 1e-12 * (1.0 + H.max_abs() * H.max_abs()))
    throw system_error("legendre check: forward map degenerate (Jacobian ~ 0)");
  Vec2 pq = field_grad(v, p);
  double lhs = V.value({pq.x, pq.y});
  double rhs = p.x * pq.x + p.y * pq.y - v.value(p);
  return std::fabs(lhs - rhs);
}

double hodograph_jacobian(const ScalarField2& V, Point2 pq) {
  Mat2 H = field_hess(V, pq);
  return H.a11 * H.a22 - H.a12 * H.a21;
}

Vec2 hodograph_system_residual(Point2 pq, const Mat2& hessV) {
  double p = pq.x, q = pq.y;
  double f = (p * p + q * q) * (p * p + q * q);
  double r1 = (f - p * p) * hessV.a11 - 2.0 * p * q * hessV.a12 + (f - q * q) * hessV.a22;
  double r2 = hessV.a21 - hessV.a12; // x_q - y_p, zero by symmetry
  return {r1, r2};
}

Vec2 hodograph_system_residual(const ScalarField2& V, Point2 pq) {
  return hodograph_system_residual(pq, field_hess(V, pq));
}

} // namespace ehs

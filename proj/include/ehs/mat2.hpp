#pragma once

#include <array>
#include <cmath>

namespace ehs {

struct Vec2 {
  double x = 0.0, y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
  Vec2 normalized() const {
    double n = norm();
    return {x / n, y / n};
  }
  // +90 degree rotation
  Vec2 perp() const { return {-y, x}; }
};

// Dense 2x2 matrix, the workhorse for coefficient fields.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }

  Mat2 operator+(const Mat2& o) const {
    return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
  }
  Mat2 operator-(const Mat2& o) const {
    return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
  }
  Mat2 operator*(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }
  Mat2 operator*(const Mat2& o) const {
    return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
            a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
  }
  Vec2 operator*(const Vec2& v) const {
    return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
  }

  Mat2 transpose() const { return {a11, a21, a12, a22}; }
  Mat2 sym() const {
    double off = 0.5 * (a12 + a21);
    return {a11, off, off, a22};
  }
  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - a12 * a21; }
  double max_abs() const {
    return std::max(std::max(std::fabs(a11), std::fabs(a12)),
                    std::max(std::fabs(a21), std::fabs(a22)));
  }
  bool is_symmetric(double tol = 0.0) const { return std::fabs(a12 - a21) <= tol; }

  // Eigenvalues of the symmetric part, ascending. Closed form via trace/det.
  std::array<double, 2> eig_sym() const {
    Mat2 s = sym();
    double m = 0.5 * (s.a11 + s.a22);
    double d = 0.5 * (s.a11 - s.a22);
    double rad = std::sqrt(d * d + s.a12 * s.a12);
    return {m - rad, m + rad};
  }

  // Singular values, descending (eigenvalues of sqrt(A^T A)).
  std::array<double, 2> singular_values() const {
    Mat2 g{a11 * a11 + a21 * a21, a11 * a12 + a21 * a22,
           a11 * a12 + a21 * a22, a12 * a12 + a22 * a22};
    auto ev = g.eig_sym();
    double lo = std::max(ev[0], 0.0), hi = std::max(ev[1], 0.0);
    return {std::sqrt(hi), std::sqrt(lo)};
  }

  // Numerical rank with a threshold relative to the largest singular value.
  int rank(double rel_tol = 1e-9) const {
    auto sv = singular_values();
    double cut = rel_tol * std::max(sv[0], 1e-30);
    int r = 0;
    for (double s : sv)
      if (s > cut) ++r;
    return r;
  }

  // Unit null-space basis vectors (0, 1 or 2 of them) under the same threshold.
  int null_basis(Vec2 out[2], double rel_tol = 1e-9) const {
    int r = rank(rel_tol);
    if (r == 2) return 0;
    if (r == 0) {
      out[0] = {1.0, 0.0};
      out[1] = {0.0, 1.0};
      return 2;
    }
    // rank 1: null vector orthogonal to the dominant row
    Vec2 row = (std::hypot(a11, a12) >= std::hypot(a21, a22)) ? Vec2{a11, a12}
                                                              : Vec2{a21, a22};
    out[0] = row.perp().normalized();
    return 1;
  }
};

} // namespace ehs

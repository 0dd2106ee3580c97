#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace ehs {

// Minimal CSR matrix; rows are appended in order during assembly.
struct Csr {
  int rows = 0, cols = 0;
  std::vector<int> ptr{0};
  std::vector<int> col;
  std::vector<double> val;

  void start_row() { ++rows; }
  void push(int c, double v) {
    col.push_back(c);
    val.push_back(v);
  }
  void end_row() { ptr.push_back(static_cast<int>(col.size())); }

  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    y.assign(rows, 0.0);
    for (int r = 0; r < rows; ++r) {
      double acc = 0.0;
      for (int k = ptr[r]; k < ptr[r + 1]; ++k) acc += val[k] * x[col[k]];
      y[r] = acc;
    }
  }

  // y += A^T x
  void apply_transpose_add(const std::vector<double>& x, std::vector<double>& y) const {
    for (int r = 0; r < rows; ++r) {
      double xr = x[r];
      if (xr == 0.0) continue;
      for (int k = ptr[r]; k < ptr[r + 1]; ++k) y[col[k]] += val[k] * xr;
    }
  }
};

struct PcgResult {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
};

// Preconditioned CG with a diagonal preconditioner and fixed-order reductions.
// Checks convergence before the first iteration, so a solved initial guess
// costs zero iterations.
inline PcgResult pcg(const std::function<void(const std::vector<double>&,
                                              std::vector<double>&)>& apply,
                     const std::vector<double>& diag, const std::vector<double>& b,
                     std::vector<double>& x, double rel_tol, int max_iter) {
  std::size_t n = b.size();
  std::vector<double> r(n), z(n), p(n), Ap(n);
  std::vector<double> invd(n);
  for (std::size_t i = 0; i < n; ++i) invd[i] = diag[i] > 0.0 ? 1.0 / diag[i] : 1.0;

  if (x.size() != n) x.assign(n, 0.0);
  apply(x, Ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];

  double b_norm2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) b_norm2 += b[i] * invd[i] * b[i];
  double stop = rel_tol * rel_tol * std::max(b_norm2, 1e-300);

  double rz = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = invd[i] * r[i];
    rz += r[i] * z[i];
  }

  PcgResult res;
  if (rz <= stop) {
    res.converged = true;
    res.rel_residual = std::sqrt(rz / std::max(b_norm2, 1e-300));
    return res;
  }

  p = z;
  for (int it = 1; it <= max_iter; ++it) {
    apply(p, Ap);
    double pAp = 0.0;
    for (std::size_t i = 0; i < n; ++i) pAp += p[i] * Ap[i];
    if (pAp <= 0.0) break; // matrix lost positive definiteness numerically
    double alpha = rz / pAp;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    double rz_new = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = invd[i] * r[i];
      rz_new += r[i] * z[i];
    }
    res.iterations = it;
    if (rz_new <= stop) {
      res.converged = true;
      rz = rz_new;
      break;
    }
    double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  res.rel_residual = std::sqrt(std::max(rz, 0.0) / std::max(b_norm2, 1e-300));
  return res;
}

} // namespace ehs

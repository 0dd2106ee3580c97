#pragma once

#include <cstdint>
#include <functional>

#include "ehs/friedrichs.hpp"
#include "ehs/grid.hpp"

namespace ehs {

// Weight pair of the case norms; dual norms use reciprocal weights.
struct NormSpec {
  int case_id = 3;
  double w1(Point2 p) const;
  double w2(Point2 p) const;
};

// Energy multiplier a for each lower-order case: x^2, 1, xy.
double case_multiplier(int case_id, Point2 p);

struct FormCoefficients {
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  double disc() const { return alpha * gamma - beta * beta; }
};

FormCoefficients form_coefficients(int case_id, Point2 p);

// Minimum of alpha*gamma - beta^2 over the domain grid; for case 1 the report
// note also carries the worst margin of 2*beta*w1*w2 >= -(x^3 w1^2 + x y^2 w2^2)
// over seeded random (point, w) samples.
VerificationReport scan_quadratic_form(int case_id, const DomainSpec& domain, int nx,
                                       int ny, double tol = 1e-12,
                                       std::uint64_t seed = 7);

struct GammaIntegrand {
  double value = 0.0;
  double scale = 0.0; // sum of absolute terms, for relative-zero checks
};

// Full boundary integrand on a characteristic sample after the w2 dy = -w1 dx
// substitution; vanishes identically. Throws if w violates that relation.
GammaIntegrand characteristic_integrand(int case_id, Point2 p, Vec2 w, Vec2 tangent);

struct CBoundaryIntegral {
  double value = 0.0;
  bool hypothesis_ok = true; // dy <= 0 along the traversal
};

// C-portion of the boundary integral for w = (0, w2(s)); reduces to
// -(1/2) \int a (1-y^2) w2^2 dy, composite trapezoid over the samples.
CBoundaryIntegral data_boundary_integral(int case_id, const BoundarySegment& c_seg,
                                         const std::function<Vec2(Point2)>& w);

struct KhatResult {
  double khat = 0.0;
  int grid_n = 0;
  long dofs = 0;
  int iterations = 0;
  bool converged = false;
  double excluded_fraction = 0.0; // dual-norm rows dropped by the weight floor
  double rayleigh_direct = 0.0;   // ||L* w||_* dual / ||w||_* at the minimizer
  DiscreteField minimizer;
};

// Discrete estimate of the basic-inequality constant: smallest generalized
// singular value of the discrete adjoint between the case norms over the
// constrained test space (w.T = 0 on characteristics, w1 = 0 on C), via
// shifted inverse power iteration on the normal-equations pencil.
KhatResult estimate_basic_constant(int case_id, const DomainSpec& domain, int n,
                                   std::uint64_t seed = 41);

} // namespace ehs

#pragma once

#include <array>
#include <functional>
#include <string>

#include "ehs/geometry.hpp"
#include "ehs/system.hpp"

namespace ehs {

struct VerificationReport {
  std::string condition;
  bool pass = false;
  // signed margin-style quantity; pass <=> worst >= -tol
  double worst = 0.0;
  Point2 where;
  int grid_nx = 0, grid_ny = 0;
  double tol = 0.0;
  std::string note;
};

// Q = 2 B* - A1' - A2' (primes: x,y derivatives, or r,theta on polar charts).
// Exact zero matrices for the unperturbed self-balanced systems.
Mat2 compute_Q(const SystemSpec& sys, Point2 p);

// Scans grid nodes of the domain and reports the minimum eigenvalue of Q.
// If the system carries a MultiplierSpec but is not yet multiplied, the scan
// runs on EL. tol < 0 selects the default -1e-10 * (1 + |trace|) threshold.
VerificationReport check_symmetric_positive(const SystemSpec& sys,
                                            const DomainSpec& domain, int nx, int ny,
                                            double tol = -1.0);

// beta = n1 A1 + n2 A2 at a boundary point; n may carry a non-unit scale.
Mat2 boundary_matrix(const SystemSpec& sys, Point2 p, Vec2 n);

// Boundary quadratic-form coefficient alpha for the disc systems. The n2 -> 0
// limit is removable (alpha = -(1-x^2) n1); n1 = 0 is not and throws, callers
// must work at the beta level there.
double boundary_alpha(Point2 p, Vec2 n);

struct BoundaryCondition {
  enum class Kind { None, TangentialZero, NormalAligned, OuterSigmaTau };
  Kind kind = Kind::None;
  std::function<double(double)> sigma, tau; // functions of theta, outer condition
};

// Pointwise admissibility split beta = beta_+ + beta_- over one segment.
struct BoundaryDecomposition {
  const BoundarySegment* seg = nullptr;
  std::function<Mat2(std::size_t)> beta_plus;
  std::function<Mat2(std::size_t)> beta_minus;
  std::function<Vec2(std::size_t)> normal_used; // normal entering beta
  BoundaryCondition cond;
};

// Split for the E/F boundary pieces of the disc system (beta_+ diagonal -alpha
// block on F, roles swapped on E; no condition is imposed on E).
BoundaryDecomposition ef_decomposition(const SystemSpec& sys,
                                       const BoundarySegment& seg);

// Splits for the multiplied polar system on the annulus circles. The inner
// circle uses the scaled normal (eps0^2 - 1)^{-1} dr and beta_- = 0.
BoundaryDecomposition annulus_outer_decomposition(const SystemSpec& multiplied,
                                                  const BoundarySegment& seg,
                                                  std::function<double(double)> sigma,
                                                  std::function<double(double)> tau);
BoundaryDecomposition annulus_inner_decomposition(const SystemSpec& multiplied,
                                                  const BoundarySegment& seg,
                                                  double eps0);

struct AdmissibilityReport {
  // reconstruction, null-span, range-intersection, mu*-nonnegativity,
  // condition-annihilates-beta_-
  std::array<VerificationReport, 5> checks;
  bool pass = false;
};

AdmissibilityReport check_admissibility(const SystemSpec& sys,
                                        const BoundarySegment& seg,
                                        const BoundaryDecomposition& decomp,
                                        double mu_tol = 1e-10);

VerificationReport validate_perturbation(const PerturbationParams& params,
                                         const DomainSpec& domain, int ny = 256);

struct SelectMResult {
  bool feasible = false;
  double M = 0.0;
  std::string note;
};

// Smallest M (3 significant figures, doubling then bisection) for which the
// multiplied perturbed polar system passes the Q scan and both admissibility
// checks with margin to spare on the sampled annulus.
SelectMResult select_M(double c, double e1, double e2, double sigma, double tau,
                       double eps0, double margin, int grid_n = 64,
                       int boundary_samples = 720);

} // namespace ehs

#pragma once

#include <functional>

#include "ehs/geometry.hpp"
#include "ehs/mat2.hpp"

namespace ehs {

struct AiryState {
  double t = 0.0;
  double Z = 0.0;
  double dZ = 0.0;
};

// Lanczos approximation (g = 7, 9 coefficients); serves the closed-form
// initial data Z(0) = 3^(-2/3)/Gamma(2/3), Z'(0) = -3^(-1/3)/Gamma(1/3).
double gamma_lanczos(double x);

double airy_Z0();
double airy_dZ0();

// Series evaluation of Z'' = t Z with the stated initial data, |t| <= 20.
// Internally quad precision: the positive axis cancels catastrophically in
// double (terms reach ~e^(2/3 t^(3/2)) while Z decays).
AiryState airy(double t);

struct AiryCheck {
  double max_rel_dev = 0.0;   // series vs ODE, relative to |Z| + |Z'|
  double max_ode_residual = 0.0; // |Z'' - t Z| / (1 + |Z|) along integration
  double origin_rel_dev = 0.0;   // backward pass landing on the closed forms
  int samples = 0;
};

// Dual-path cross-check: fixed-step RK4 (h = 1e-3, quad) forward from 0 on
// the negative side and backward from a series anchor on the positive side,
// which is the stable direction there; the backward pass must land on the
// closed-form initial data.
AiryCheck airy_dual_path_check(double t_lo, double t_hi, int samples);

// Scalar test field with optional closed-form derivatives; finite-difference
// fallbacks are second order.
struct ScalarField2 {
  std::function<double(Point2)> value;
  std::function<Vec2(Point2)> grad;   // may be empty
  std::function<Mat2(Point2)> hess;   // may be empty
};

Vec2 field_grad(const ScalarField2& f, Point2 p);
Mat2 field_hess(const ScalarField2& f, Point2 p);

ScalarField2 field_constant(double c);
ScalarField2 field_linear(double a, double b, double c = 0.0);
ScalarField2 field_radial();
ScalarField2 field_half_square(); // (x^2 + y^2)/2
ScalarField2 field_product();     // x y
ScalarField2 field_square_x();    // x^2

// Residuals of u(|grad u|^2) - |grad v|^2 + 1 = 0 and grad u . grad v = 0.
Vec2 eikonal_residual(const ScalarField2& u, const ScalarField2& v, Point2 p);

// |V(grad v(p)) - (x vx + y vy - v)|; throws when the forward map x -> grad v
// is degenerate (Jacobian below threshold).
double legendre_residual(const ScalarField2& v, const ScalarField2& V, Point2 p);

double hodograph_jacobian(const ScalarField2& V, Point2 pq);

// Residual pair of the transformed system at (p,q) given the second
// derivatives of V; the second component is x_q - y_p and vanishes for any
// twice-differentiable V.
Vec2 hodograph_system_residual(Point2 pq, const Mat2& hessV);
Vec2 hodograph_system_residual(const ScalarField2& V, Point2 pq);

} // namespace ehs

#include "ehs/system.hpp"

#include <cmath>

namespace ehs {

namespace {
constexpr double kSqrt2 = 1.41421356237309504880;
}

const char* system_id_name(SystemId id) {
  switch (id) {
    case SystemId::HodgeCase1: return "hodge-case1";
    case SystemId::HodgeCase2: return "hodge-case2";
    case SystemId::HodgeCase3: return "hodge-case3";
    case SystemId::HodgePerturbed: return "hodge-perturbed";
    case SystemId::OpticsCartesian: return "optics-cartesian";
    case SystemId::OpticsPolar: return "optics-polar";
    case SystemId::OpticsPolarPerturbed: return "optics-polar-perturbed";
  }
  return "?";
}

std::optional<SystemId> system_id_from_name(const std::string& name) {
  for (SystemId id : {SystemId::HodgeCase1, SystemId::HodgeCase2, SystemId::HodgeCase3,
                      SystemId::HodgePerturbed, SystemId::OpticsCartesian,
                      SystemId::OpticsPolar, SystemId::OpticsPolarPerturbed})
    if (name == system_id_name(id)) return id;
  return std::nullopt;
}

double MultiplierSpec::a(double theta) const {
  return M * std::exp(e2 * theta) + (kSqrt2 - e1) * c / e2;
}

double MultiplierSpec::a_theta(double theta) const {
  return M * e2 * std::exp(e2 * theta);
}

Mat2 MultiplierSpec::E(Point2 p) const {
  double av = a(p.y);
  return {av, c * (1.0 - p.x * p.x), c, av};
}

namespace {

Vec2 zero_forcing(Point2) { return {0.0, 0.0}; }

void wire_hodge(SystemSpec& s) {
  double k1 = s.k1, k2 = s.k2, k3 = s.k3, k4 = s.k4;
  s.chart = Chart::Cartesian;
  s.A1f = [](Point2 p) {
    return Mat2{1.0 - p.x * p.x, 0.0, 0.0, -(1.0 - p.y * p.y)};
  };
  s.A2f = [](Point2 p) {
    double w = 1.0 - p.y * p.y;
    return Mat2{-2.0 * p.x * p.y, w, w, 0.0};
  };
  s.dA1f = [](Point2 p) { return Mat2{-2.0 * p.x, 0.0, 0.0, 0.0}; };
  s.dA2f = [](Point2 p) {
    return Mat2{-2.0 * p.x, -2.0 * p.y, -2.0 * p.y, 0.0};
  };
  if (s.id == SystemId::HodgePerturbed) {
    PerturbationParams e = s.pert;
    s.Bf = [e](Point2 p) {
      double w = 1.0 - p.y * p.y;
      return Mat2{-2.0 * p.x + e.e1, -2.0 * p.y + e.e2, w * e.e3, w * e.e4};
    };
  } else {
    // divergence expansion of row 1 contributes -2x, -2y on top of the k-terms
    s.Bf = [k1, k2, k3, k4](Point2 p) {
      return Mat2{(k1 - 2.0) * p.x, (k2 - 2.0) * p.y, k3 * p.x, k4 * p.y};
    };
  }
}

void wire_optics_cartesian(SystemSpec& s) {
  s.chart = Chart::Cartesian;
  auto f = [](Point2 p) {
    double r2 = p.x * p.x + p.y * p.y;
    return r2 * r2;
  };
  s.A1f = [f](Point2 p) {
    double fv = f(p);
    return Mat2{fv - p.x * p.x, 0.0, 0.0, -(fv - p.y * p.y)};
  };
  s.A2f = [f](Point2 p) {
    double fv = f(p);
    double w = fv - p.y * p.y;
    return Mat2{-2.0 * p.x * p.y, w, w, 0.0};
  };
  s.dA1f = [](Point2 p) {
    double fx = 4.0 * p.x * (p.x * p.x + p.y * p.y);
    return Mat2{fx - 2.0 * p.x, 0.0, 0.0, -fx};
  };
  s.dA2f = [](Point2 p) {
    double fy = 4.0 * p.y * (p.x * p.x + p.y * p.y);
    return Mat2{-2.0 * p.x, fy - 2.0 * p.y, fy - 2.0 * p.y, 0.0};
  };
  s.Bf = [](Point2) { return Mat2{}; };
}

void wire_optics_polar(SystemSpec& s) {
  s.chart = Chart::Polar;
  s.A1f = [](Point2 p) { return Mat2{p.x * p.x - 1.0, 0.0, 0.0, -1.0}; };
  s.A2f = [](Point2) { return Mat2{0.0, 1.0, 1.0, 0.0}; };
  s.dA1f = [](Point2 p) { return Mat2{2.0 * p.x, 0.0, 0.0, 0.0}; };
  s.dA2f = [](Point2) { return Mat2{}; };
  if (s.id == SystemId::OpticsPolarPerturbed) {
    PerturbationParams e = s.pert;
    s.Bf = [e](Point2 p) { return Mat2{p.x + e.e1, e.e2, 0.0, 0.0}; };
  } else {
    s.Bf = [](Point2 p) { return Mat2{p.x, 0.0, 0.0, 0.0}; };
  }
}

} // namespace

SystemSpec assemble_system(SystemId id, const SystemParams& params) {
  SystemSpec s;
  s.id = id;
  s.pert = params.pert;
  s.mult = params.mult;
  s.forcing = zero_forcing;

  switch (id) {
    case SystemId::HodgeCase1:
      s.k1 = -2; s.k2 = -2; s.k3 = 0; s.k4 = 0;
      break;
    case SystemId::HodgeCase2:
      s.k1 = -2; s.k2 = 0; s.k3 = 0; s.k4 = 2;
      break;
    case SystemId::HodgeCase3:
      s.k1 = s.k2 = s.k3 = s.k4 = 0;
      break;
    case SystemId::HodgePerturbed:
      if (s.pert.form != PerturbationParams::Form::FourEps)
        throw system_error("hodge-perturbed needs the four-epsilon perturbation");
      if (!(s.pert.e1 > 0.0) || !(s.pert.e4 > 0.0))
        throw system_error("perturbation requires eps1 > 0 and eps4 > 0");
      break;
    case SystemId::OpticsPolarPerturbed:
      if (s.pert.form != PerturbationParams::Form::TwoEps)
        throw system_error("optics-polar-perturbed needs the two-epsilon perturbation");
      if (!(s.pert.e1 > 0.0) || !(s.pert.e2 > 0.0))
        throw system_error("perturbation requires eps1 > 0 and eps2 > 0");
      break;
    default:
      break;
  }
  if (params.k_override) {
    auto& k = *params.k_override;
    s.k1 = k[0]; s.k2 = k[1]; s.k3 = k[2]; s.k4 = k[3];
  }

  switch (id) {
    case SystemId::HodgeCase1:
    case SystemId::HodgeCase2:
    case SystemId::HodgeCase3:
    case SystemId::HodgePerturbed:
      wire_hodge(s);
      break;
    case SystemId::OpticsCartesian:
      wire_optics_cartesian(s);
      break;
    case SystemId::OpticsPolar:
    case SystemId::OpticsPolarPerturbed:
      wire_optics_polar(s);
      break;
  }
  return s;
}

std::array<double, 3> characteristic_coefficients(const SystemSpec& sys, Point2 p) {
  Mat2 A1 = sys.A1(p), A2 = sys.A2(p);
  double a = A2.det();
  double b = -(A1.a11 * A2.a22 + A2.a11 * A1.a22 - A1.a12 * A2.a21 - A2.a12 * A1.a21);
  double c = A1.det();
  return {a, b, c};
}

TypeClass classify_point(const SystemSpec& sys, Point2 p) {
  auto [a, b, c] = characteristic_coefficients(sys, p);
  double m = std::max({std::fabs(a), std::fabs(b), std::fabs(c)});
  if (m < 1e-14)
    throw system_error("classification undefined: characteristic polynomial vanishes");
  double disc = b * b - 4.0 * a * c;
  double tol = 1e-10 * std::max(1.0, m * m);
  if (std::fabs(a) <= 1e-14 * m) return TypeClass::Parabolic; // linear pencil
  if (std::fabs(disc) <= tol) return TypeClass::Parabolic;
  return disc > 0.0 ? TypeClass::Hyperbolic : TypeClass::Elliptic;
}

const char* type_class_name(TypeClass t) {
  switch (t) {
    case TypeClass::Elliptic: return "elliptic";
    case TypeClass::Hyperbolic: return "hyperbolic";
    case TypeClass::Parabolic: return "parabolic";
  }
  return "?";
}

std::vector<double> characteristic_roots(const SystemSpec& sys, Point2 p) {
  auto [a, b, c] = characteristic_coefficients(sys, p);
  TypeClass t = classify_point(sys, p);
  if (t == TypeClass::Elliptic) return {};
  double m = std::max({std::fabs(a), std::fabs(b), std::fabs(c)});
  if (std::fabs(a) <= 1e-14 * m) return {-c / b};
  if (t == TypeClass::Parabolic) return {-b / (2.0 * a)};
  // sign-aware quadratic formula, no cancellation
  double disc = b * b - 4.0 * a * c;
  double sq = std::sqrt(disc);
  double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
  double r1, r2;
  if (std::fabs(q) > 0.0) {
    r1 = q / a;
    r2 = c / q;
  } else { // b == 0
    r1 = sq / (2.0 * a);
    r2 = -r1;
  }
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

SystemSpec adjoint(const SystemSpec& sys) {
  if (!sys.is_hodge()) throw system_error("adjoint supported for hodge systems only");
  SystemSpec s = sys;
  s.adjointed = !sys.adjointed;
  auto dA1 = sys.dA1f, dA2 = sys.dA2f, B = sys.Bf;
  s.Bf = [dA1, dA2, B](Point2 p) {
    return dA1(p) + dA2(p) - B(p).transpose();
  };
  return s;
}

SystemSpec apply_multiplier(const MultiplierSpec& mult, const SystemSpec& sys) {
  if (!sys.is_polar_optics())
    throw system_error("multiplier applies to the polar optics systems only");
  if (sys.multiplied) throw system_error("system is already multiplied");
  SystemSpec s = sys;
  s.mult = mult;
  s.multiplied = true;

  auto A1 = sys.A1f, A2 = sys.A2f, B = sys.Bf;
  auto f = sys.forcing;
  MultiplierSpec E = mult;

  s.A1f = [E, A1](Point2 p) { return E.E(p) * A1(p); };
  s.A2f = [E, A2](Point2 p) { return E.E(p) * A2(p); };
  s.Bf = [E, B](Point2 p) { return E.E(p) * B(p); };
  s.forcing = [E, f](Point2 p) { return E.E(p) * f(p); };
  // a depends on theta only, so d(EA1)/dr has no a' term
  s.dA1f = [E](Point2 p) {
    double av = E.a(p.y);
    return Mat2{2.0 * p.x * av, 2.0 * p.x * E.c, 2.0 * p.x * E.c, 0.0};
  };
  s.dA2f = [E](Point2 p) {
    double at = E.a_theta(p.y);
    return Mat2{0.0, at, at, 0.0};
  };
  return s;
}

} // namespace ehs

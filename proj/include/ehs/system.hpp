#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ehs/geometry.hpp"
#include "ehs/mat2.hpp"

namespace ehs {

struct system_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SystemId {
  HodgeCase1,
  HodgeCase2,
  HodgeCase3,
  HodgePerturbed,
  OpticsCartesian,
  OpticsPolar,
  OpticsPolarPerturbed,
};

const char* system_id_name(SystemId id);
std::optional<SystemId> system_id_from_name(const std::string& name);

enum class TypeClass { Elliptic, Hyperbolic, Parabolic };

struct PerturbationParams {
  enum class Form { None, FourEps, TwoEps };
  Form form = Form::None;
  double e1 = 0.0, e2 = 0.0, e3 = 0.0, e4 = 0.0;

  static PerturbationParams four(double e1, double e2, double e3, double e4) {
    return {Form::FourEps, e1, e2, e3, e4};
  }
  static PerturbationParams two(double e1, double e2) {
    return {Form::TwoEps, e1, e2, 0.0, 0.0};
  }
};

// Multiplier data for the polar system: E = [[a, c(1-r^2)],[c, a]] with
// a(theta) = M e^{e2 theta} + (sqrt2 - e1) c / e2, c > 0 constant, M >> c.
struct MultiplierSpec {
  double c = 1.0;
  double M = 10.0;
  double e1 = 0.1;
  double e2 = 0.1;

  double a(double theta) const;
  double a_theta(double theta) const;
  Mat2 E(Point2 p) const; // p = (r, theta)
};

struct SystemParams {
  std::optional<std::array<double, 4>> k_override;
  PerturbationParams pert;
  std::optional<MultiplierSpec> mult;
};

// A named first-order system L u = A^1 u_1' + A^2 u_2' + B u with closed-form
// coefficient evaluators and hand-coded analytic derivatives of A^1, A^2.
struct SystemSpec {
  SystemId id;
  Chart chart = Chart::Cartesian;
  double k1 = 0, k2 = 0, k3 = 0, k4 = 0;
  PerturbationParams pert;
  std::optional<MultiplierSpec> mult;
  bool multiplied = false;
  bool adjointed = false;

  std::function<Mat2(Point2)> A1f, A2f, Bf;
  std::function<Mat2(Point2)> dA1f; // d A1 / d(x or r)
  std::function<Mat2(Point2)> dA2f; // d A2 / d(y or theta)
  std::function<Vec2(Point2)> forcing;

  Mat2 A1(Point2 p) const { return A1f(p); }
  Mat2 A2(Point2 p) const { return A2f(p); }
  Mat2 B(Point2 p) const { return Bf(p); }
  Mat2 dA1(Point2 p) const { return dA1f(p); }
  Mat2 dA2(Point2 p) const { return dA2f(p); }
  Vec2 f(Point2 p) const { return forcing(p); }

  bool is_hodge() const {
    return id == SystemId::HodgeCase1 || id == SystemId::HodgeCase2 ||
           id == SystemId::HodgeCase3 || id == SystemId::HodgePerturbed;
  }
  bool is_polar_optics() const {
    return id == SystemId::OpticsPolar || id == SystemId::OpticsPolarPerturbed;
  }
};

SystemSpec assemble_system(SystemId id, const SystemParams& params = {});

// Coefficients (a, b, c) of the characteristic polynomial
// |A1 - lambda A2| = a lambda^2 + b lambda + c at a point.
std::array<double, 3> characteristic_coefficients(const SystemSpec& sys, Point2 p);

TypeClass classify_point(const SystemSpec& sys, Point2 p);
const char* type_class_name(TypeClass t);

std::vector<double> characteristic_roots(const SystemSpec& sys, Point2 p);

// Formal adjoint in the sense -(w, f) = (L* w, u): same principal part,
// zeroth-order matrix (A1' + A2') - B^t. Hodge systems only.
SystemSpec adjoint(const SystemSpec& sys);

// Replace L by EL for the polar optics systems; the products EA1, EA2 are
// symmetric by construction of E.
SystemSpec apply_multiplier(const MultiplierSpec& mult, const SystemSpec& sys);

} // namespace ehs

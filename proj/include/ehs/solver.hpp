#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ehs/friedrichs.hpp"
#include "ehs/grid.hpp"
#include "ehs/linalg.hpp"

namespace ehs {

// First-order system in conservative form on a masked structured grid:
// rows realize D1(A1 u) + D2(A2 u) + (B - A1' - A2') u, centered in the
// interior and one-sided first order at mask edges.
struct DiscreteOperator {
  Grid grid;
  std::vector<int> dof_of_node; // base column of a node's (u1,u2), -1 unmasked
  std::vector<int> node_of_row; // one entry per row pair owner
  Csr A;                        // 2 rows per masked node
  std::vector<double> w;        // per-row quadrature weight
  std::vector<Point2> row_pt;   // evaluation point per row
  long ndofs = 0;

  // residual rows A x - rhs for a nodal field given as compact dof vector
  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    A.apply(x, y);
  }
  std::vector<double> pack(const DiscreteField& f) const;
  DiscreteField unpack(const std::vector<double>& x) const;
};

DiscreteOperator discretize(const SystemSpec& sys, const DomainSpec& domain, int n);

// Forcing sampled at the operator's row points.
std::vector<double> sample_rows(const DiscreteOperator& op,
                                const std::function<Vec2(Point2)>& f);

struct ConstraintRows {
  Csr B;
  std::vector<double> rhs;
  std::vector<double> w;
  int count = 0;
};

// One scalar penalty row per boundary node of the segments matching the
// condition kind: (10) u.T = g on C, (15) u1 n2 - u2 n1 = g on F,
// (34) tau u1 + sigma u2 = g on the outer circle. Nothing is imposed on
// characteristics, E, or the inner circle. lambda_b <= 0 picks 1e3/h.
ConstraintRows boundary_rows(const DiscreteOperator& op, const DomainSpec& domain,
                             BoundaryCondition::Kind kind,
                             const std::function<double(double)>& sigma,
                             const std::function<double(double)>& tau,
                             const std::function<Vec2(Point2)>& exact_trace,
                             double lambda_b = -1.0);

struct SolveDiagnostics {
  int iterations = 0;
  double rel_residual = 0.0;
  bool converged = false;
  double objective = 0.0;
  double grad_norm = 0.0;  // normal-equation residual at the returned solution
  double diag_ratio = 0.0; // crude conditioning proxy
};

// Weighted least squares min ||W^(1/2)(A u - f)||^2 + ||L^(1/2)(B u - g)||^2
// by diagonally preconditioned CG on the normal equations.
std::pair<DiscreteField, SolveDiagnostics> solve_least_squares(
    const DiscreteOperator& op, const std::vector<double>& f,
    const ConstraintRows& rows, const DiscreteField* init = nullptr);

struct ManufacturedCase {
  std::string name;
  SystemSpec sys;
  DomainSpec domain;
  std::function<Vec2(Point2)> exact;
  std::function<Vec2(Point2)> forcing;
  BoundaryCondition::Kind cond = BoundaryCondition::Kind::None;
  double sigma = 1.0, tau = 0.0;
};

// V = r^2 on the annulus: u = (2r, 0), f = (4r^2 - 2, 0), outer trace u2 = 0.
ManufacturedCase optics_polar_manufactured(double eps0 = 0.1);
// u = (1, 0) for the self-adjoint disc case: f = (-2x, 0) with the data-curve
// condition evaluated on the exact field.
ManufacturedCase hodge3_manufactured();

struct ConvergenceRow {
  int n = 0;
  double err_max = 0.0, err_l2 = 0.0;
  int iterations = 0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  std::vector<double> order_l2, order_max; // log2(e_h / e_{h/2}) per pair
};

ConvergenceTable convergence_study(const ManufacturedCase& mc,
                                   const std::vector<int>& resolutions);

// errors of a field against a reference function, over masked nodes
void field_errors(const DiscreteOperator& op, const DiscreteField& u,
                  const std::function<Vec2(Point2)>& exact, double& err_max,
                  double& err_l2);

} // namespace ehs

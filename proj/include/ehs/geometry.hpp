#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ehs/mat2.hpp"

namespace ehs {

// Coordinate chart a point lives in: (x,y) or (r,theta).
enum class Chart { Cartesian, Polar };

struct Point2 {
  double x = 0.0, y = 0.0; // (x,y) or (r,theta) depending on chart
};

// Normalized line c1*x + c2*y = c0 with c1^2 + c2^2 = 1. Characteristic
// lines of the disc geometry carry their angle parameter and have c0 = 1.
struct Line2 {
  double c1 = 1.0, c2 = 0.0, c0 = 0.0;
  double theta = 0.0;

  double eval(Point2 p) const { return c1 * p.x + c2 * p.y - c0; }
  double distance_from_origin() const { return std::fabs(c0); }
};

struct MetricTensor {
  double g11 = 1.0, g12 = 0.0, g22 = 1.0;
  double det = 1.0;
};

struct geometry_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Chord whose tangent lines are parallel: the pole is an ideal direction.
struct pole_at_infinity : geometry_error {
  Vec2 direction;
  explicit pole_at_infinity(Vec2 d)
      : geometry_error("pole at infinity: tangent lines are parallel"), direction(d) {}
};

struct singular_metric : geometry_error {
  Point2 where;
  explicit singular_metric(Point2 p)
      : geometry_error("metric singular on the unit circle"), where(p) {}
};

struct build_error : geometry_error {
  Point2 where;
  build_error(const std::string& constraint, Point2 p)
      : geometry_error("domain constraint violated: " + constraint + " at (" +
                       std::to_string(p.x) + ", " + std::to_string(p.y) + ")"),
        where(p) {}
};

enum class SegmentRole { GammaChar, DataC, CurveE, CurveF, AnnulusOuter, AnnulusInner };

const char* segment_role_name(SegmentRole r);

// Sampled boundary piece with arc-length parameterization, unit tangents and
// unit outward normals at every sample. Points are in the owning domain's chart.
struct BoundarySegment {
  SegmentRole role = SegmentRole::DataC;
  std::vector<double> s;
  std::vector<Point2> pts;
  std::vector<Vec2> tangent;
  std::vector<Vec2> normal;

  std::size_t size() const { return pts.size(); }
  double length() const { return s.empty() ? 0.0 : s.back(); }
  Point2 point_at(double at) const;
  Vec2 tangent_at(double at) const;
  Vec2 normal_at(double at) const;
};

// Arc length from cumulative chord; tangents by centered differences unless
// supplied; normals oriented away from the interior witness.
BoundarySegment make_segment(SegmentRole role, std::vector<Point2> pts,
                             Point2 interior_witness,
                             const std::vector<Vec2>* tangents = nullptr);

enum class DomainKind { Omega1, Omega2, Omega3, Omega4, Omega5 };

struct DomainSpec {
  DomainKind kind = DomainKind::Omega1;
  Chart chart = Chart::Cartesian;
  double theta = 0.0;           // Omega1 opening parameter
  double delta = 0.0, eps = 0.0; // Omega3 strip parameters
  double eps0 = 0.0;            // Omega5 inner radius
  std::vector<BoundarySegment> segments; // counterclockwise order
  Point2 interior;              // witness interior point
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0; // chart bounding box

  bool contains(Point2 p, double tol = 1e-9) const;
  const BoundarySegment* segment_with_role(SegmentRole r) const;
};

// --- projective-disc primitives ---

Line2 characteristic_line(double theta);
Point2 tangency_point(double theta); // (cos t, sin t)

Point2 pole_of_chord(Point2 p1, Point2 p2);

MetricTensor beltrami_metric(Point2 p);

Vec2 boundary_normal(const BoundarySegment& seg, double at);

// --- domain builders ---

// Omega1 from a user-supplied data curve C (samples from c1 on Gamma1 down to
// c2 on Gamma2, dy <= 0). Validates every stated constraint.
DomainSpec build_omega1(double theta, const std::vector<Point2>& c_samples,
                        int gamma_samples = 129);

// Default Omega1 fixtures. For theta < pi/4 the data curve is a circular arc
// centered at the pole (sec t, 0); at theta = pi/4 it is the unit-circle arc
// between the tangency points (cusp configuration).
DomainSpec omega1_fixture(double theta, int samples_per_segment = 129);

DomainSpec omega2_fixture(int samples_per_segment = 129);
DomainSpec omega3_fixture(int samples_per_segment = 129);

// Omega4 is accepted from the user and verified only: a y^2 < 1 scan box plus
// E/F boundary segments with the required normal sign pattern.
DomainSpec build_omega4(std::vector<BoundarySegment> ef_segments,
                        double xmin = -1.0, double xmax = 1.0,
                        double ybound = 0.99499);
BoundarySegment omega4_E_fixture(int samples = 65);
BoundarySegment omega4_F_fixture(int samples = 65);

DomainSpec build_omega5(double eps0, int samples_per_circle = 720);

// Re-runs every invariant check; throws build_error naming the violated
// constraint and the offending sample.
void validate_domain(const DomainSpec& d);

// CSV polyline loader, columns s,x,y with one header line.
std::vector<Point2> load_polyline_csv(const std::string& path);

} // namespace ehs

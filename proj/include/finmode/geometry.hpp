#pragma once

#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "finmode/frequency.hpp"
#include "finmode/interaction.hpp"

namespace finmode {

class DegenerateInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Point2 {
  Rational x, y;
  friend bool operator==(const Point2&, const Point2&) = default;
  friend auto operator<=>(const Point2&, const Point2&) = default;
};

// Exact coordinates of coplanar frequencies w.r.t. the two lexicographically
// smallest independent members of the set (not orthonormalized).
class PlaneBasis {
 public:
  PlaneBasis(const Frequency& b1, const Frequency& b2);
  static PlaneBasis from_support(std::span<const Frequency> points);

  const Frequency& first() const { return b1_; }
  const Frequency& second() const { return b2_; }
  Frequency normal() const { return b1_.cross(b2_); }
  bool contains(const Frequency& n) const { return normal().dot(n).is_zero(); }
  // Throws std::invalid_argument for points off the plane.
  Point2 coords(const Frequency& n) const;
  Frequency lift(const Point2& p) const;

 private:
  Frequency b1_, b2_;
  Frequency c_;
  Rational c2_;
};

struct PlanarHull {
  std::vector<Point2> vertices;  // counterclockwise
  // a_e with a_e . v = 1 along each edge (vertices[i], vertices[i+1]); set iff the origin is interior.
  std::optional<std::vector<Point2>> edge_functionals;

  bool contains(const Point2& p) const;
  bool origin_interior() const { return edge_functionals.has_value(); }
};

PlanarHull convex_hull_planar(std::span<const Point2> points);
Rational minkowski_functional(const PlanarHull& hull, const Point2& p);

struct SpatialHull {
  std::vector<Frequency> vertices;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> faces;  // counterclockwise seen from outside

  int euler_characteristic() const {
    return int(vertices.size()) - int(edges.size()) + int(faces.size());
  }
  bool contains(const Frequency& p) const;
};

SpatialHull convex_hull_3d(std::span<const Frequency> points);

// Exact sign of det(b - a, c - a, d - a).
int orientation3d(const Frequency& a, const Frequency& b, const Frequency& c, const Frequency& d);
bool coplanar(std::span<const Frequency> points);
bool collinear_with_origin(std::span<const Frequency> points);

bool is_sip(const std::set<Frequency>& support, const Frequency& n1, const Frequency& n2);
bool is_sip(std::span<const Frequency> support, const Frequency& n1, const Frequency& n2);

struct SphericalPolygonMeasure {
  double angle_sum;
  double area;
};

SphericalPolygonMeasure spherical_polygon_measure(std::span<const Vec3> vertices);
double spherical_polygon_area(std::span<const Vec3> vertices);
// +1 when the vertices run counterclockwise seen from outside the sphere, -1 otherwise.
int spherical_polygon_orientation(std::span<const Vec3> vertices);

struct RotationLoop {
  Rotation rotation;
  Vec3 axis;
  double angle;  // signed, about axis = first vertex
};

// Composition R_{w_p -> w_1} o ... o R_{w_1 -> w_2}.
RotationLoop rotation_loop(std::span<const Vec3> vertices);

}  // namespace finmode

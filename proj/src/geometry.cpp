#include "finmode/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <boost/multiprecision/cpp_int.hpp>

namespace finmode {

using boost::multiprecision::cpp_int;

namespace {

Rational cross2(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

using IPoint = std::array<cpp_int, 3>;

cpp_int lcm_int(const cpp_int& a, const cpp_int& b) { return a / boost::multiprecision::gcd(a, b) * b; }

std::vector<IPoint> to_integer_points(std::span<const Frequency> points) {
  cpp_int scale = 1;
  for (const auto& p : points)
    for (const auto& c : p.components()) scale = lcm_int(scale, cpp_int(c.den()));
  std::vector<IPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    IPoint q;
    for (int k = 0; k < 3; ++k) q[k] = cpp_int(p[k].num()) * (scale / cpp_int(p[k].den()));
    out.push_back(std::move(q));
  }
  return out;
}

IPoint isub(const IPoint& a, const IPoint& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
IPoint icross(const IPoint& a, const IPoint& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
cpp_int idot(const IPoint& a, const IPoint& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
bool izero(const IPoint& a) { return a[0] == 0 && a[1] == 0 && a[2] == 0; }

struct Plane {
  IPoint normal;
  cpp_int offset;
  int side(const IPoint& p) const {
    const cpp_int v = idot(normal, p) - offset;
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
  }
};

Plane plane_through(const IPoint& a, const IPoint& b, const IPoint& c) {
  IPoint n = icross(isub(b, a), isub(c, a));
  cpp_int off = idot(n, a);
  return {std::move(n), std::move(off)};
}

struct Tri {
  int a, b, c;
  Plane plane;
  bool alive = true;
};

// Reduced key of an oriented plane, shared by all coplanar faces of the hull.
std::array<cpp_int, 4> plane_key(const Plane& p) {
  cpp_int g = 0;
  for (const auto& v : p.normal) g = boost::multiprecision::gcd(g, v);
  g = boost::multiprecision::gcd(g, p.offset);
  if (g < 0) g = -g;
  return {p.normal[0] / g, p.normal[1] / g, p.normal[2] / g, p.offset / g};
}

// Counterclockwise 2D hull of integer points (strictly convex), returning input indices.
std::vector<int> hull2d_indices(const std::vector<std::pair<cpp_int, cpp_int>>& pts, std::vector<int> idx) {
  std::sort(idx.begin(), idx.end(), [&](int i, int j) { return pts[i] < pts[j]; });
  idx.erase(std::unique(idx.begin(), idx.end(), [&](int i, int j) { return pts[i] == pts[j]; }), idx.end());
  auto turn = [&](int o, int a, int b) {
    return (pts[a].first - pts[o].first) * (pts[b].second - pts[o].second) -
           (pts[a].second - pts[o].second) * (pts[b].first - pts[o].first);
  };
  std::vector<int> h(2 * idx.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    while (k >= 2 && turn(h[k - 2], h[k - 1], idx[i]) <= 0) --k;
    h[k++] = idx[i];
  }
  for (std::size_t i = idx.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && turn(h[k - 2], h[k - 1], idx[i]) <= 0) --k;
    h[k++] = idx[i];
  }
  h.resize(k > 1 ? k - 1 : k);
  return h;
}

}  // namespace

PlaneBasis::PlaneBasis(const Frequency& b1, const Frequency& b2) : b1_(b1), b2_(b2), c_(b1.cross(b2)) {
  if (c_.is_zero()) throw DegenerateInput("PlaneBasis: dependent basis vectors");
  c2_ = c_.norm2();
}

PlaneBasis PlaneBasis::from_support(std::span<const Frequency> points) {
  std::vector<Frequency> sorted;
  for (const auto& p : points)
    if (!p.is_zero()) sorted.push_back(p);
  std::sort(sorted.begin(), sorted.end());
  if (sorted.empty()) throw DegenerateInput("PlaneBasis: no nonzero points");
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (!sorted[0].parallel_to(sorted[i])) return PlaneBasis(sorted[0], sorted[i]);
  throw DegenerateInput("PlaneBasis: points are collinear with the origin");
}

Point2 PlaneBasis::coords(const Frequency& n) const {
  if (!contains(n)) throw std::invalid_argument("PlaneBasis: " + n.to_string() + " is off the plane");
  return {n.cross(b2_).dot(c_) / c2_, b1_.cross(n).dot(c_) / c2_};
}

Frequency PlaneBasis::lift(const Point2& p) const { return p.x * b1_ + p.y * b2_; }

bool PlanarHull::contains(const Point2& p) const {
  const std::size_t m = vertices.size();
  for (std::size_t i = 0; i < m; ++i)
    if (cross2(vertices[i], vertices[(i + 1) % m], p).sign() < 0) return false;
  return true;
}

PlanarHull convex_hull_planar(std::span<const Point2> points) {
  std::vector<Point2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) throw DegenerateInput("convex_hull_planar: fewer than 3 distinct points");
  std::vector<Point2> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross2(h[k - 2], h[k - 1], pts[i]).sign() <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross2(h[k - 2], h[k - 1], pts[i]).sign() <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  if (h.size() < 3) throw DegenerateInput("convex_hull_planar: points are collinear");

  PlanarHull hull;
  hull.vertices = std::move(h);
  const std::size_t m = hull.vertices.size();
  std::vector<Point2> functionals;
  for (std::size_t i = 0; i < m; ++i) {
    const Point2& a = hull.vertices[i];
    const Point2& b = hull.vertices[(i + 1) % m];
    const Rational d = a.x * b.y - b.x * a.y;
    if (d.sign() <= 0) return hull;
    functionals.push_back({(b.y - a.y) / d, (a.x - b.x) / d});
  }
  hull.edge_functionals = std::move(functionals);
  return hull;
}

Rational minkowski_functional(const PlanarHull& hull, const Point2& p) {
  if (!hull.edge_functionals) throw std::invalid_argument("minkowski_functional: origin is not interior to the hull");
  Rational best = 0;
  for (const auto& a : *hull.edge_functionals) best = std::max(best, a.x * p.x + a.y * p.y);
  return best;
}

int orientation3d(const Frequency& a, const Frequency& b, const Frequency& c, const Frequency& d) {
  const std::array<Frequency, 4> pts{a, b, c, d};
  const auto q = to_integer_points(pts);
  return plane_through(q[0], q[1], q[2]).side(q[3]);
}

bool coplanar(std::span<const Frequency> points) {
  const auto q = to_integer_points(points);
  for (std::size_t i = 1; i < q.size(); ++i) {
    const IPoint u = isub(q[i], q[0]);
    if (izero(u)) continue;
    for (std::size_t j = i + 1; j < q.size(); ++j) {
      const IPoint n = icross(u, isub(q[j], q[0]));
      if (izero(n)) continue;
      for (std::size_t k = j + 1; k < q.size(); ++k)
        if (idot(n, isub(q[k], q[0])) != 0) return false;
      return true;
    }
    return true;
  }
  return true;
}

bool collinear_with_origin(std::span<const Frequency> points) {
  const Frequency* ref = nullptr;
  for (const auto& p : points) {
    if (p.is_zero()) continue;
    if (!ref) {
      ref = &p;
      continue;
    }
    if (!ref->parallel_to(p)) return false;
  }
  return true;
}

bool SpatialHull::contains(const Frequency& p) const {
  for (const auto& f : faces) {
    if (orientation3d(vertices[f[0]], vertices[f[1]], vertices[f[2]], p) > 0) return false;
  }
  return true;
}

SpatialHull convex_hull_3d(std::span<const Frequency> input) {
  std::vector<Frequency> uniq(input.begin(), input.end());
  std::sort(uniq.begin(), uniq.end());
  uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
  const auto P = to_integer_points(uniq);
  const int n = int(P.size());
  if (n < 4) throw DegenerateInput("convex_hull_3d: fewer than 4 distinct points");

  int i1 = 1;
  int i2 = -1, i3 = -1;
  for (int i = 2; i < n && i2 < 0; ++i)
    if (!izero(icross(isub(P[i1], P[0]), isub(P[i], P[0])))) i2 = i;
  if (i2 < 0) throw DegenerateInput("convex_hull_3d: points are collinear");
  const Plane base = plane_through(P[0], P[i1], P[i2]);
  for (int i = 2; i < n && i3 < 0; ++i)
    if (base.side(P[i]) != 0) i3 = i;
  if (i3 < 0) throw DegenerateInput("convex_hull_3d: points are coplanar");

  std::vector<Tri> tris;
  auto add_tri = [&](int a, int b, int c) { tris.push_back({a, b, c, plane_through(P[a], P[b], P[c])}); };
  // Orient the initial tetrahedron so every face has the fourth vertex behind it.
  if (base.side(P[i3]) > 0) {
    add_tri(0, i2, i1);
    add_tri(0, i1, i3);
    add_tri(i1, i2, i3);
    add_tri(i2, 0, i3);
  } else {
    add_tri(0, i1, i2);
    add_tri(0, i3, i1);
    add_tri(i1, i3, i2);
    add_tri(i2, i3, 0);
  }

  for (int p = 1; p < n; ++p) {
    if (p == i1 || p == i2 || p == i3) continue;
    std::vector<int> visible;
    for (int t = 0; t < int(tris.size()); ++t)
      if (tris[t].alive && tris[t].plane.side(P[p]) > 0) visible.push_back(t);
    if (visible.empty()) continue;
    std::map<std::pair<int, int>, int> edge_count;
    for (int t : visible) {
      const Tri& tr = tris[t];
      for (auto e : {std::pair{tr.a, tr.b}, std::pair{tr.b, tr.c}, std::pair{tr.c, tr.a}}) edge_count[e]++;
    }
    for (int t : visible) tris[t].alive = false;
    for (const auto& [e, count] : edge_count) {
      if (edge_count.count({e.second, e.first})) continue;
      add_tri(e.first, e.second, p);
    }
  }

  // Merge coplanar triangles into polygonal faces.
  std::map<std::array<cpp_int, 4>, std::vector<int>> groups;
  for (const auto& t : tris) {
    if (!t.alive) continue;
    auto& g = groups[plane_key(t.plane)];
    g.insert(g.end(), {t.a, t.b, t.c});
  }

  SpatialHull hull;
  std::map<int, int> remap;
  std::set<std::pair<int, int>> edges;
  for (auto& [key, members] : groups) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    int drop = 0;
    for (int k = 1; k < 3; ++k)
      if (boost::multiprecision::abs(key[k]) > boost::multiprecision::abs(key[drop])) drop = k;
    const int ax = (drop + 1) % 3, ay = (drop + 2) % 3;
    std::vector<std::pair<cpp_int, cpp_int>> pts(n);
    for (int v : members) pts[v] = {P[v][ax], P[v][ay]};
    std::vector<int> cycle = hull2d_indices(pts, members);
    if (key[drop] < 0) std::reverse(cycle.begin(), cycle.end());
    std::vector<int> face;
    for (int v : cycle) {
      auto [it, inserted] = remap.emplace(v, int(hull.vertices.size()));
      if (inserted) hull.vertices.push_back(uniq[v]);
      face.push_back(it->second);
    }
    for (std::size_t k = 0; k < face.size(); ++k) {
      int a = face[k], b = face[(k + 1) % face.size()];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
    hull.faces.push_back(std::move(face));
  }
  hull.edges.assign(edges.begin(), edges.end());
  return hull;
}

bool is_sip(const std::set<Frequency>& support, const Frequency& n1, const Frequency& n2) {
  if (!support.count(n1) || !support.count(n2)) throw std::invalid_argument("is_sip: frequency not in the set");
  if (n1 == n2) throw std::invalid_argument("is_sip: frequencies must be distinct");
  const Frequency sum = n1 + n2;
  if (support.count(sum)) return false;
  for (const auto& m : support) {
    if (m == n1 || m == n2) continue;
    const Frequency partner = sum - m;
    if (partner != m && support.count(partner)) return false;
  }
  return true;
}

bool is_sip(std::span<const Frequency> support, const Frequency& n1, const Frequency& n2) {
  return is_sip(std::set<Frequency>(support.begin(), support.end()), n1, n2);
}

namespace {

void check_spherical_polygon(std::span<const Vec3> v) {
  const std::size_t p = v.size();
  if (p < 3) throw std::invalid_argument("spherical polygon: fewer than 3 vertices");
  for (std::size_t i = 0; i < p; ++i) {
    if (std::abs(v[i].norm() - 1.0) > 1e-10) throw std::invalid_argument("spherical polygon: vertex not on the unit sphere");
    const Vec3& next = v[(i + 1) % p];
    if ((v[i] - next).norm() < 1e-12 || (v[i] + next).norm() < 1e-12)
      throw std::invalid_argument("spherical polygon: consecutive vertices equal or antipodal");
  }
  Vec3 normal = Vec3::Zero();
  for (std::size_t i = 0; i < p; ++i) normal += (v[i] - v[0]).cross(v[(i + 1) % p] - v[0]);
  const double len = normal.norm();
  if (len < 1e-14) throw std::invalid_argument("spherical polygon: vertices are collinear");
  normal /= len;
  const double offset = normal.dot(v[0]);
  for (std::size_t i = 1; i < p; ++i)
    if (std::abs(normal.dot(v[i]) - offset) > 1e-9)
      throw std::invalid_argument("spherical polygon: vertices do not lie on a common circle");
  if (std::abs(offset) < 1e-12) throw std::invalid_argument("spherical polygon: vertices lie on a great circle");
}

}  // namespace

SphericalPolygonMeasure spherical_polygon_measure(std::span<const Vec3> v) {
  check_spherical_polygon(v);
  const std::size_t p = v.size();
  double theta = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    const Vec3& c = v[i];
    const Vec3& prev = v[(i + p - 1) % p];
    const Vec3& next = v[(i + 1) % p];
    const Vec3 t1 = prev - prev.dot(c) * c;
    const Vec3 t2 = next - next.dot(c) * c;
    theta += std::atan2(t1.cross(t2).norm(), t1.dot(t2));
  }
  return {theta, theta - double(p - 2) * std::numbers::pi};
}

double spherical_polygon_area(std::span<const Vec3> vertices) { return spherical_polygon_measure(vertices).area; }

int spherical_polygon_orientation(std::span<const Vec3> v) {
  check_spherical_polygon(v);
  Vec3 center = Vec3::Zero();
  for (const auto& w : v) center += w;
  Vec3 turn = Vec3::Zero();
  for (std::size_t i = 0; i < v.size(); ++i) turn += v[i].cross(v[(i + 1) % v.size()]);
  return turn.dot(center) > 0.0 ? 1 : -1;
}

RotationLoop rotation_loop(std::span<const Vec3> v) {
  const int orientation = spherical_polygon_orientation(v);
  const std::size_t p = v.size();
  Rotation r;
  for (std::size_t i = 0; i < p; ++i) r = rotation_geodesic(v[i], v[(i + 1) % p]) * r;
  const Vec3& axis = v[0];
  const Vec3 helper = std::abs(axis(0)) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 t = (helper - helper.dot(axis) * axis).normalized();
  const Vec3 rt = r.apply(t);
  double angle = std::atan2(axis.dot(t.cross(rt)), t.dot(rt));
  if (orientation > 0 && angle <= 0.0) angle += 2.0 * std::numbers::pi;
  if (orientation < 0 && angle >= 0.0) angle -= 2.0 * std::numbers::pi;
  return {r, axis, angle};
}

}  // namespace finmode

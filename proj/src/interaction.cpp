#include "finmode/interaction.hpp"

#include <cmath>
#include <stdexcept>

namespace finmode {

PlanarFrame::PlanarFrame(const Vec3& normal) {
  const double len = normal.norm();
  if (!(len > 0.0)) throw std::invalid_argument("PlanarFrame: zero normal");
  normal_ = normal / len;
}

PlanarFrame PlanarFrame::from_pair(const Frequency& n1, const Frequency& n2) {
  const Frequency c = n1.cross(n2);
  if (c.is_zero()) throw std::invalid_argument("PlanarFrame: linearly dependent frequencies");
  return PlanarFrame(c.to_vector());
}

PlanarFrame PlanarFrame::from_plane_normal(const Frequency& normal) {
  if (normal.is_zero()) throw std::invalid_argument("PlanarFrame: zero normal");
  return PlanarFrame((lex_positive(normal) ? normal : -normal).to_vector());
}

Vec3 PlanarFrame::tangent(const Frequency& n) const {
  const Vec3 v = n.to_vector();
  return normal_.cross(v / v.norm());
}

CVec3 helmholtz_project(const Vec3& n, const CVec3& v) {
  const double n2 = n.squaredNorm();
  if (!(n2 > 0.0)) throw std::invalid_argument("helmholtz_project: zero frequency");
  return v - (bdot(v, n) / n2) * to_complex(n);
}

CVec3 helmholtz_project(const Frequency& n, const CVec3& v) {
  if (n.is_zero()) throw std::invalid_argument("helmholtz_project: zero frequency");
  return helmholtz_project(n.to_vector(), v);
}

CVec3 pair_bracket(const Frequency& n1, const CVec3& u1, const Frequency& n2, const CVec3& u2) {
  if (n1.is_zero() || n2.is_zero()) throw std::invalid_argument("pair_bracket: zero frequency");
  const Frequency n = n1 + n2;
  if (n.is_zero()) throw std::invalid_argument("pair_bracket: n1 + n2 = 0");
  const Vec3 a = n1.to_vector(), b = n2.to_vector();
  return helmholtz_project(n, bdot(u1, b) * u2 + bdot(u2, a) * u1);
}

DecomposedBracket pair_bracket_decomposed(const Frequency& n1, const CVec3& u1, const Frequency& n2,
                                          const CVec3& u2, const PlanarFrame& frame) {
  const Frequency c = n1.cross(n2);
  if (c.is_zero()) throw std::invalid_argument("pair_bracket_decomposed: linearly dependent frequencies");
  const Vec3& e = frame.normal();
  const Vec3 a = n1.to_vector(), b = n2.to_vector();
  if (std::abs(e.dot(a)) > 1e-12 * a.norm() || std::abs(e.dot(b)) > 1e-12 * b.norm())
    throw std::invalid_argument("pair_bracket_decomposed: frame not built from n1, n2");
  const double r1 = a.norm(), r2 = b.norm();
  const double factor = c.to_vector().dot(e) / (r1 * r2);
  const Complex p1 = frame.parallel_component(n1, u1), p2 = frame.parallel_component(n2, u2);
  const Complex q1 = frame.perpendicular_component(u1), q2 = frame.perpendicular_component(u2);
  const double radial = (n2.norm2() - n1.norm2()).to_double() / (a + b).norm();
  return {factor * p1 * p2 * radial, factor * (p1 * q2 * r2 - p2 * q1 * r1)};
}

CVec3 recombine(const DecomposedBracket& d, const PlanarFrame& frame, const Frequency& n) {
  return d.parallel * to_complex(frame.tangent(n)) + d.perpendicular * to_complex(frame.normal());
}

std::string to_string(const InteractionCase& c) {
  struct V {
    std::string operator()(const Interacting&) const { return "interacting"; }
    std::string operator()(const CaseParallel&) const { return "parallel"; }
    std::string operator()(const CasePerpendicular&) const { return "perpendicular"; }
    std::string operator()(const CaseEqualRadius&) const { return "equal_radius"; }
  };
  return std::visit(V{}, c);
}

double interaction_threshold(const Frequency& n1, const CVec3& u1, const Frequency& n2, const CVec3& u2,
                             double tol) {
  return tol * u1.norm() * u2.norm() * std::max(n1.norm(), n2.norm());
}

InteractionCase classify_pair(const Frequency& n1, const CVec3& u1, const Frequency& n2, const CVec3& u2,
                              double tol) {
  if (n1.is_zero() || n2.is_zero()) throw std::invalid_argument("classify_pair: zero frequency");
  if (!(u1.norm() > 0.0) || !(u2.norm() > 0.0)) throw std::invalid_argument("classify_pair: zero coefficient");
  for (const auto& [n, u] : {std::pair{n1, u1}, std::pair{n2, u2}}) {
    if (std::abs(bdot(u, n.to_vector())) > tol * u.norm() * n.norm())
      throw std::invalid_argument("classify_pair: coefficient at " + n.to_string() + " is not divergence-free");
  }
  if (n1.parallel_to(n2)) return CaseParallel{};
  const CVec3 b = pair_bracket(n1, u1, n2, u2);
  if (!(b.norm() < interaction_threshold(n1, u1, n2, u2, tol))) return Interacting{};

  const PlanarFrame frame = PlanarFrame::from_pair(n1, n2);
  const Complex p1 = frame.parallel_component(n1, u1), p2 = frame.parallel_component(n2, u2);
  if (n1.norm2() != n2.norm2()) return CasePerpendicular{};
  if (std::abs(p1) <= tol * u1.norm()) return CasePerpendicular{};
  return CaseEqualRadius{p2 / p1};
}

double Rotation::angle() const {
  const double c = std::clamp((m_.trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

Vec3 Rotation::axis() const {
  const Vec3 w(m_(2, 1) - m_(1, 2), m_(0, 2) - m_(2, 0), m_(1, 0) - m_(0, 1));
  const double len = w.norm();
  if (len > 1e-12) return w / len;
  // angle 0 or pi: axis from the symmetric part
  const Mat3 s = (m_ + Mat3::Identity()) / 2.0;
  int k = 0;
  s.diagonal().maxCoeff(&k);
  const Vec3 col = s.col(k);
  return col.norm() > 0.0 ? Vec3(col / col.norm()) : Vec3::UnitZ();
}

double Rotation::orthogonality_defect() const {
  return std::max((m_.transpose() * m_ - Mat3::Identity()).cwiseAbs().maxCoeff(),
                  std::abs(m_.determinant() - 1.0));
}

Rotation rotation_geodesic(const Vec3& w1, const Vec3& w2) {
  if (std::abs(w1.norm() - 1.0) > 1e-10 || std::abs(w2.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("rotation_geodesic: inputs must be unit vectors");
  const Vec3 k = w1.cross(w2);
  const double s = k.norm();
  const double c = w1.dot(w2);
  if (s < 1e-14) throw std::invalid_argument("rotation_geodesic: equal or antipodal inputs");
  const Vec3 axis = k / s;
  Mat3 kx;
  kx << 0, -axis(2), axis(1), axis(2), 0, -axis(0), -axis(1), axis(0), 0;
  return Rotation(Mat3::Identity() + s * kx + (1.0 - c) * kx * kx);
}

std::string to_string(BeltramiSign s) {
  switch (s) {
    case BeltramiSign::Plus: return "plus";
    case BeltramiSign::Minus: return "minus";
    case BeltramiSign::Neither: return "neither";
  }
  return "neither";
}

double beltrami_defect(const Frequency& n, const CVec3& u, int s) {
  const Vec3 v = n.to_vector();
  const double r = v.norm();
  const CVec3 lhs = Complex(0.0, 1.0) * cross(v, u);
  return (lhs - double(s) * r * u).norm() / (r * u.norm());
}

BeltramiSign beltrami_sign(const Frequency& n, const CVec3& u, double tol) {
  if (n.is_zero()) throw std::invalid_argument("beltrami_sign: zero frequency");
  if (!(u.norm() > 0.0)) throw std::invalid_argument("beltrami_sign: zero coefficient");
  if (beltrami_defect(n, u, +1) < tol) return BeltramiSign::Plus;
  if (beltrami_defect(n, u, -1) < tol) return BeltramiSign::Minus;
  return BeltramiSign::Neither;
}

CVec3 make_beltrami_coeff(const Frequency& n, BeltramiSign sign, Complex amplitude) {
  if (n.is_zero()) throw std::invalid_argument("make_beltrami_coeff: zero frequency");
  if (sign == BeltramiSign::Neither) throw std::invalid_argument("make_beltrami_coeff: sign must be plus or minus");
  if (amplitude == Complex(0.0)) throw std::invalid_argument("make_beltrami_coeff: zero amplitude");
  const Vec3 nh = n.to_vector().normalized();
  int k = 0;
  for (int j = 1; j < 3; ++j)
    if (std::abs(nh(j)) < std::abs(nh(k))) k = j;
  const Vec3 ek = Vec3::Unit(k);
  const Vec3 ea = (ek - ek.dot(nh) * nh).normalized();
  const Vec3 eb = nh.cross(ea);
  const double s = sign == BeltramiSign::Plus ? 1.0 : -1.0;
  return amplitude * (to_complex(ea) + Complex(0.0, s) * to_complex(eb));
}

}  // namespace finmode

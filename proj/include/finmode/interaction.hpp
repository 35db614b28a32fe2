#pragma once

#include <string>
#include <variant>

#include "finmode/frequency.hpp"
#include "finmode/spectral_field.hpp"

namespace finmode {

// Unit normal e_perp and the tangents e_par(n) = e_perp x n/|n|.
class PlanarFrame {
 public:
  explicit PlanarFrame(const Vec3& normal);
  // e_perp = n1 x n2 normalized.
  static PlanarFrame from_pair(const Frequency& n1, const Frequency& n2);
  // Normal flipped to be lexicographically positive.
  static PlanarFrame from_plane_normal(const Frequency& normal);

  const Vec3& normal() const { return normal_; }
  Vec3 tangent(const Frequency& n) const;
  Complex parallel_component(const Frequency& n, const CVec3& u) const { return bdot(u, tangent(n)); }
  Complex perpendicular_component(const CVec3& u) const { return bdot(u, normal_); }

 private:
  Vec3 normal_;
};

CVec3 helmholtz_project(const Frequency& n, const CVec3& v);
CVec3 helmholtz_project(const Vec3& n, const CVec3& v);

// P_{n1+n2}[(u1.n2)u2 + (u2.n1)u1], without the i/2 prefactor.
CVec3 pair_bracket(const Frequency& n1, const CVec3& u1, const Frequency& n2, const CVec3& u2);

struct DecomposedBracket {
  Complex parallel;       // along e_par(n1+n2)
  Complex perpendicular;  // along e_perp
};

DecomposedBracket pair_bracket_decomposed(const Frequency& n1, const CVec3& u1, const Frequency& n2,
                                          const CVec3& u2, const PlanarFrame& frame);
CVec3 recombine(const DecomposedBracket& d, const PlanarFrame& frame, const Frequency& n);

struct Interacting {};
struct CaseParallel {};
struct CasePerpendicular {};
struct CaseEqualRadius {
  Complex gamma;
};
using InteractionCase = std::variant<Interacting, CaseParallel, CasePerpendicular, CaseEqualRadius>;

std::string to_string(const InteractionCase& c);
inline bool interacts(const InteractionCase& c) { return std::holds_alternative<Interacting>(c); }

// Threshold on the bracket used by classify_pair.
double interaction_threshold(const Frequency& n1, const CVec3& u1, const Frequency& n2, const CVec3& u2,
                             double tol);
InteractionCase classify_pair(const Frequency& n1, const CVec3& u1, const Frequency& n2, const CVec3& u2,
                              double tol = kDefaultTol);

class Rotation {
 public:
  Rotation() : m_(Mat3::Identity()) {}
  explicit Rotation(const Mat3& m) : m_(m) {}

  const Mat3& matrix() const { return m_; }
  Vec3 apply(const Vec3& v) const { return m_ * v; }
  CVec3 apply(const CVec3& v) const { return m_.cast<Complex>() * v; }
  Rotation inverse() const { return Rotation(m_.transpose()); }
  // this after other
  Rotation operator*(const Rotation& other) const { return Rotation(m_ * other.m_); }
  double angle() const;
  Vec3 axis() const;
  double orthogonality_defect() const;

 private:
  Mat3 m_;
};

// Rotation about w1 x w2 by the angle in (0, pi) taking w1 to w2.
Rotation rotation_geodesic(const Vec3& w1, const Vec3& w2);

enum class BeltramiSign { Plus, Minus, Neither };
std::string to_string(BeltramiSign s);

// Relative defect of i n x u = s|n|u for s = +1 or -1.
double beltrami_defect(const Frequency& n, const CVec3& u, int s);
BeltramiSign beltrami_sign(const Frequency& n, const CVec3& u, double tol = kDefaultTol);
CVec3 make_beltrami_coeff(const Frequency& n, BeltramiSign sign, Complex amplitude);

}  // namespace finmode

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "finmode/rational.hpp"

namespace finmode {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3d;

// Bilinear (non-conjugating) products.
inline Complex bdot(const CVec3& a, const CVec3& b) { return a(0) * b(0) + a(1) * b(1) + a(2) * b(2); }
inline Complex bdot(const CVec3& a, const Vec3& b) { return a(0) * b(0) + a(1) * b(1) + a(2) * b(2); }
inline CVec3 cross(const Vec3& a, const CVec3& b) {
  return CVec3(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0));
}
inline CVec3 cross(const CVec3& a, const CVec3& b) {
  return CVec3(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0));
}
inline CVec3 to_complex(const Vec3& v) { return v.cast<Complex>(); }

// A wavevector with exact rational components.
class Frequency {
 public:
  Frequency() = default;
  Frequency(Rational x, Rational y, Rational z) : c_{x, y, z} {}

  const Rational& operator[](std::size_t i) const { return c_[i]; }
  const std::array<Rational, 3>& components() const { return c_; }

  bool is_zero() const { return c_[0].is_zero() && c_[1].is_zero() && c_[2].is_zero(); }

  Frequency operator-() const { return {-c_[0], -c_[1], -c_[2]}; }
  friend Frequency operator+(const Frequency& a, const Frequency& b) {
    return {a.c_[0] + b.c_[0], a.c_[1] + b.c_[1], a.c_[2] + b.c_[2]};
  }
  friend Frequency operator-(const Frequency& a, const Frequency& b) {
    return {a.c_[0] - b.c_[0], a.c_[1] - b.c_[1], a.c_[2] - b.c_[2]};
  }
  friend Frequency operator*(const Rational& s, const Frequency& a) {
    return {s * a.c_[0], s * a.c_[1], s * a.c_[2]};
  }

  Rational dot(const Frequency& o) const { return c_[0] * o.c_[0] + c_[1] * o.c_[1] + c_[2] * o.c_[2]; }
  Rational norm2() const { return dot(*this); }
  Frequency cross(const Frequency& o) const {
    return {c_[1] * o.c_[2] - c_[2] * o.c_[1], c_[2] * o.c_[0] - c_[0] * o.c_[2],
            c_[0] * o.c_[1] - c_[1] * o.c_[0]};
  }
  bool parallel_to(const Frequency& o) const { return cross(o).is_zero(); }

  Vec3 to_vector() const { return {c_[0].to_double(), c_[1].to_double(), c_[2].to_double()}; }
  double norm() const { return to_vector().norm(); }
  std::string to_string() const;

  friend bool operator==(const Frequency&, const Frequency&) = default;
  friend auto operator<=>(const Frequency&, const Frequency&) = default;

 private:
  std::array<Rational, 3> c_{};
};

// Lexicographically positive: first nonzero component is positive.
bool lex_positive(const Frequency& n);

struct FrequencyHash {
  std::size_t operator()(const Frequency& n) const noexcept;
};

std::ostream& operator<<(std::ostream& os, const Frequency& n);

}  // namespace finmode

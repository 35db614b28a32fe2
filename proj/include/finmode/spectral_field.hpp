#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "finmode/frequency.hpp"

namespace finmode {

inline constexpr double kDefaultTol = 1e-10;
inline constexpr double kPruneRatio = 1e-13;

using ModeMap = std::map<Frequency, CVec3>;

// Finite-mode velocity field: coefficients u_n keyed by exact frequency.
class SpectralField {
 public:
  SpectralField() = default;
  // Takes the modes as given; no completion, no pruning.
  explicit SpectralField(ModeMap modes, std::optional<Vec3> zero_mode = std::nullopt,
                         bool real_valued = true);

  const ModeMap& modes() const { return modes_; }
  const std::optional<Vec3>& zero_mode() const { return zero_mode_; }
  bool real_valued() const { return real_valued_; }

  bool empty() const { return modes_.empty(); }
  std::size_t size() const { return modes_.size(); }
  bool contains(const Frequency& n) const { return modes_.count(n) != 0; }
  // Zero vector when n is not in the support.
  CVec3 coefficient(const Frequency& n) const;
  std::vector<Frequency> support() const;
  double max_coefficient_norm() const;
  double max_frequency_norm() const;

  // Drops coefficients below ratio * max norm.
  SpectralField pruned(double ratio = kPruneRatio) const;
  SpectralField with_zero_mode(std::optional<Vec3> u0) const;
  SpectralField with_real_valued(bool real_valued) const;

  friend bool operator==(const SpectralField& a, const SpectralField& b);

 private:
  ModeMap modes_;
  std::optional<Vec3> zero_mode_;
  bool real_valued_ = true;
};

// Incremental construction; add_pair writes u at n and its conjugate at -n.
class FieldBuilder {
 public:
  FieldBuilder& set(const Frequency& n, const CVec3& u);
  FieldBuilder& add(const Frequency& n, const CVec3& u);
  FieldBuilder& add_pair(const Frequency& n, const CVec3& u);
  FieldBuilder& zero_mode(const Vec3& u0);
  FieldBuilder& real_valued(bool flag);
  // Exact zeros are always dropped; tiny coefficients relative to the max by prune_ratio.
  SpectralField build(double prune_ratio = kPruneRatio) const;

 private:
  ModeMap modes_;
  std::optional<Vec3> zero_mode_;
  bool real_valued_ = true;
};

enum class ViolationKind { AsymmetricSupport, BrokenConjugacy, NonzeroDivergence, ZeroCoefficient, ZeroFrequency };

struct Violation {
  ViolationKind kind;
  Frequency n;
  double defect;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

std::string to_string(ViolationKind kind);

ValidationReport validate(const SpectralField& field, double tol = kDefaultTol);

// Pointwise value; the imaginary residual is checked against 1e-12 of the coefficient sum.
Vec3 evaluate(const SpectralField& field, const Vec3& x);

SpectralField curl(const SpectralField& field);
double energy(const SpectralField& field);
double helicity(const SpectralField& field);
// a*F + b*G coefficientwise.
SpectralField combine(double a, const SpectralField& f, double b, const SpectralField& g);

// Zero-mode trajectory for the rotating frame: du0/dt = -Omega e3 x u0, u0(t_star) given.
struct MeanDrift {
  Vec3 u0_star = Vec3::Zero();
  double t_star = 0.0;
  double omega = 0.0;

  Vec3 velocity(double t) const;
  // X(t) = integral of velocity from t_star to t.
  Vec3 displacement(double t) const;
};

struct DriftRemoval {
  SpectralField field;
  MeanDrift drift;
};

// Galilean change of frame at time t: v_n = u_n exp(i n.X(t)). The input carries u0 at t_star.
DriftRemoval remove_mean_drift(const SpectralField& field_at_t, double t_star, double omega,
                               double t);
DriftRemoval remove_mean_drift(const SpectralField& field_with_zero_mode, double t_star,
                               double omega);
SpectralField restore_mean_drift(const SpectralField& mean_zero, const MeanDrift& drift, double t);

}  // namespace finmode

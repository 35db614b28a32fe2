#include "finmode/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace finmode {

SpectralField::SpectralField(ModeMap modes, std::optional<Vec3> zero_mode, bool real_valued)
    : modes_(std::move(modes)), zero_mode_(std::move(zero_mode)), real_valued_(real_valued) {}

CVec3 SpectralField::coefficient(const Frequency& n) const {
  auto it = modes_.find(n);
  return it == modes_.end() ? CVec3::Zero() : it->second;
}

std::vector<Frequency> SpectralField::support() const {
  std::vector<Frequency> s;
  s.reserve(modes_.size());
  for (const auto& [n, u] : modes_) s.push_back(n);
  return s;
}

double SpectralField::max_coefficient_norm() const {
  double m = 0.0;
  for (const auto& [n, u] : modes_) m = std::max(m, u.norm());
  return m;
}

double SpectralField::max_frequency_norm() const {
  double m = 0.0;
  for (const auto& [n, u] : modes_) m = std::max(m, n.norm());
  return m;
}

SpectralField SpectralField::pruned(double ratio) const {
  const double cut = ratio * max_coefficient_norm();
  ModeMap kept;
  for (const auto& [n, u] : modes_)
    if (u.norm() > cut && u.norm() > 0.0) kept.emplace(n, u);
  return SpectralField(std::move(kept), zero_mode_, real_valued_);
}

SpectralField SpectralField::with_zero_mode(std::optional<Vec3> u0) const {
  return SpectralField(modes_, std::move(u0), real_valued_);
}

SpectralField SpectralField::with_real_valued(bool real_valued) const {
  return SpectralField(modes_, zero_mode_, real_valued);
}

bool operator==(const SpectralField& a, const SpectralField& b) {
  if (a.real_valued_ != b.real_valued_ || a.zero_mode_.has_value() != b.zero_mode_.has_value())
    return false;
  if (a.zero_mode_ && *a.zero_mode_ != *b.zero_mode_) return false;
  if (a.modes_.size() != b.modes_.size()) return false;
  return std::equal(a.modes_.begin(), a.modes_.end(), b.modes_.begin(),
                    [](const auto& x, const auto& y) { return x.first == y.first && x.second == y.second; });
}

FieldBuilder& FieldBuilder::set(const Frequency& n, const CVec3& u) {
  modes_[n] = u;
  return *this;
}

FieldBuilder& FieldBuilder::add(const Frequency& n, const CVec3& u) {
  auto [it, inserted] = modes_.emplace(n, u);
  if (!inserted) it->second += u;
  return *this;
}

FieldBuilder& FieldBuilder::add_pair(const Frequency& n, const CVec3& u) {
  if (n.is_zero()) throw std::invalid_argument("add_pair: zero frequency");
  set(n, u);
  set(-n, u.conjugate());
  return *this;
}

FieldBuilder& FieldBuilder::zero_mode(const Vec3& u0) {
  zero_mode_ = u0;
  return *this;
}

FieldBuilder& FieldBuilder::real_valued(bool flag) {
  real_valued_ = flag;
  return *this;
}

SpectralField FieldBuilder::build(double prune_ratio) const {
  return SpectralField(modes_, zero_mode_, real_valued_).pruned(prune_ratio);
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::AsymmetricSupport: return "asymmetric_support";
    case ViolationKind::BrokenConjugacy: return "broken_conjugacy";
    case ViolationKind::NonzeroDivergence: return "nonzero_divergence";
    case ViolationKind::ZeroCoefficient: return "zero_coefficient";
    case ViolationKind::ZeroFrequency: return "zero_frequency";
  }
  return "unknown";
}

ValidationReport validate(const SpectralField& field, double tol) {
  ValidationReport report;
  const double scale = field.max_coefficient_norm();
  for (const auto& [n, u] : field.modes()) {
    if (n.is_zero()) {
      report.violations.push_back({ViolationKind::ZeroFrequency, n, u.norm()});
      continue;
    }
    if (u.norm() <= kPruneRatio * scale || u.norm() == 0.0) {
      report.violations.push_back({ViolationKind::ZeroCoefficient, n, u.norm()});
      continue;
    }
    if (field.real_valued() && !lex_positive(n)) {
      auto partner = field.modes().find(-n);
      if (partner != field.modes().end() && (partner->second - u.conjugate()).norm() <= tol * scale) continue;
    }
    const double div = std::abs(bdot(u, n.to_vector())) / n.norm();
    if (div > tol * scale) report.violations.push_back({ViolationKind::NonzeroDivergence, n, div});
  }
  if (!field.real_valued()) return report;
  for (const auto& [n, u] : field.modes()) {
    if (n.is_zero()) continue;
    auto partner = field.modes().find(-n);
    if (partner == field.modes().end()) {
      report.violations.push_back({ViolationKind::AsymmetricSupport, n, u.norm()});
      continue;
    }
    if (!lex_positive(n)) continue;
    const double defect = (partner->second - u.conjugate()).norm();
    if (defect > tol * scale) report.violations.push_back({ViolationKind::BrokenConjugacy, n, defect});
  }
  return report;
}

Vec3 evaluate(const SpectralField& field, const Vec3& x) {
  if (!field.real_valued()) throw std::invalid_argument("evaluate: field is not real-valued");
  CVec3 sum = CVec3::Zero();
  double magnitude = 0.0;
  for (const auto& [n, u] : field.modes()) {
    const double phase = n.to_vector().dot(x);
    sum += u * Complex(std::cos(phase), std::sin(phase));
    magnitude += u.norm();
  }
  if (sum.imag().norm() > 1e-12 * std::max(magnitude, 1.0))
    throw std::logic_error("evaluate: imaginary residual exceeds 1e-12");
  Vec3 value = sum.real();
  if (field.zero_mode()) value += *field.zero_mode();
  return value;
}

SpectralField curl(const SpectralField& field) {
  ModeMap out;
  const Complex i(0.0, 1.0);
  for (const auto& [n, u] : field.modes()) out.emplace(n, i * cross(n.to_vector(), u));
  return SpectralField(std::move(out), std::nullopt, field.real_valued());
}

double energy(const SpectralField& field) {
  double e = 0.0;
  for (const auto& [n, u] : field.modes()) e += u.squaredNorm();
  if (field.zero_mode()) e += field.zero_mode()->squaredNorm();
  return 0.5 * e;
}

double helicity(const SpectralField& field) {
  Complex h = 0.0;
  const Complex i(0.0, 1.0);
  for (const auto& [n, u] : field.modes()) h += u.dot(i * cross(n.to_vector(), u));
  return h.real();
}

SpectralField combine(double a, const SpectralField& f, double b, const SpectralField& g) {
  ModeMap out;
  for (const auto& [n, u] : f.modes()) out[n] += a * u;
  for (const auto& [n, u] : g.modes()) {
    auto [it, inserted] = out.emplace(n, b * u);
    if (!inserted) it->second += b * u;
  }
  std::optional<Vec3> z;
  if (f.zero_mode() || g.zero_mode()) {
    z = a * f.zero_mode().value_or(Vec3::Zero()) + b * g.zero_mode().value_or(Vec3::Zero());
  }
  return SpectralField(std::move(out), z, f.real_valued() && g.real_valued());
}

Vec3 MeanDrift::velocity(double t) const {
  const double tau = t - t_star;
  const double c = std::cos(omega * tau), s = std::sin(omega * tau);
  const Vec3& u = u0_star;
  return {u(0) * c + u(1) * s, u(1) * c - u(0) * s, u(2)};
}

Vec3 MeanDrift::displacement(double t) const {
  const double tau = t - t_star;
  const Vec3& u = u0_star;
  if (omega == 0.0) return u * tau;
  const double s = std::sin(omega * tau) / omega;
  const double c = (1.0 - std::cos(omega * tau)) / omega;
  return {u(0) * s + u(1) * c, u(1) * s - u(0) * c, u(2) * tau};
}

namespace {

SpectralField shift_phases(const SpectralField& field, const Vec3& displacement, double sign,
                           std::optional<Vec3> zero_mode) {
  ModeMap out;
  for (const auto& [n, u] : field.modes()) {
    const double phase = sign * n.to_vector().dot(displacement);
    out.emplace(n, u * Complex(std::cos(phase), std::sin(phase)));
  }
  return SpectralField(std::move(out), std::move(zero_mode), field.real_valued());
}

}  // namespace

DriftRemoval remove_mean_drift(const SpectralField& field_at_t, double t_star, double omega,
                               double t) {
  if (!field_at_t.zero_mode()) throw std::invalid_argument("remove_mean_drift: no zero mode");
  MeanDrift drift{*field_at_t.zero_mode(), t_star, omega};
  return {shift_phases(field_at_t, drift.displacement(t), 1.0, std::nullopt), drift};
}

DriftRemoval remove_mean_drift(const SpectralField& field_with_zero_mode, double t_star,
                               double omega) {
  return remove_mean_drift(field_with_zero_mode, t_star, omega, t_star);
}

SpectralField restore_mean_drift(const SpectralField& mean_zero, const MeanDrift& drift, double t) {
  return shift_phases(mean_zero, drift.displacement(t), -1.0, drift.u0_star);
}

}  // namespace finmode

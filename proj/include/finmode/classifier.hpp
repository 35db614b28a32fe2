#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "finmode/geometry.hpp"
#include "finmode/interaction.hpp"
#include "finmode/spectral_field.hpp"

namespace finmode {

class RefusesComplexField : public std::invalid_argument {
 public:
  RefusesComplexField() : std::invalid_argument("classifier refuses complex-valued fields") {}
};

class InternalInconsistency : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class NotRepresentable : public std::runtime_error {
 public:
  NotRepresentable(std::string what, int level, std::optional<Frequency> n)
      : std::runtime_error(std::move(what)), level_(level), n_(std::move(n)) {}
  int level() const { return level_; }
  const std::optional<Frequency>& frequency() const { return n_; }

 private:
  int level_;
  std::optional<Frequency> n_;
};

using ScalarModes = std::map<Frequency, Complex>;

struct ResidualReport {
  double norm = 0.0;      // max_n |r_n| / (U^2 max|n|)
  double absolute = 0.0;  // max_n |r_n|
  std::optional<Frequency> worst;
  std::map<Frequency, CVec3> residual;
};

ResidualReport stationarity_residual(const SpectralField& field);

struct PlanarDecomposition {
  Frequency normal;  // exact, lexicographically positive
  Vec3 e_perp;
  SpectralField u_par;
  ScalarModes u_perp;
  Rational radius2;
  double radius = 0.0;
  std::vector<Frequency> circle;  // counterclockwise about e_perp
  std::vector<Complex> alpha;
  double scale = 0.0;             // max coefficient norm of the source field

  // Coefficients i alpha_j of the scalar vorticity.
  ScalarModes vorticity() const;
};

struct LadderLevel {
  int q = 0;
  Complex beta_raw;
  std::vector<Frequency> frequencies;
};

struct QPolynomial {
  std::vector<double> coefficients;  // beta_1, beta_2, ...
  std::vector<LadderLevel> ladder;

  int degree() const { return int(coefficients.size()); }
  double operator()(double w) const;
};

// Exact plane of a non-collinear coplanar support, or nullopt.
std::optional<Frequency> support_plane_normal(const std::vector<Frequency>& support);

// Splits a planar field into u_par and u_perp and reads off the circle data.
// Throws NotRepresentable when the horizontal support is not a circle of at least 4 points.
PlanarDecomposition decompose_planar(const SpectralField& field, const Frequency& normal, double tol = kDefaultTol);

// omega^q by exact convolution over the circle frequencies.
ScalarModes vorticity_power(const PlanarDecomposition& dec, int q);
// sum beta_q (omega^q - <omega^q>)
ScalarModes reconstruct_u_perp(const PlanarDecomposition& dec, const QPolynomial& q);

QPolynomial extract_Q(const PlanarDecomposition& dec, const ScalarModes& u_perp, double tol = kDefaultTol);

struct LineCertificate {
  Frequency direction;
};
struct PlanarPerpCertificate {
  Frequency normal;
};
struct PlanarQCertificate {
  PlanarDecomposition decomposition;
  QPolynomial q;
  std::optional<BeltramiSign> also_beltrami;
};
struct BeltramiCertificate {
  double lambda;
  BeltramiSign sign;
};
struct NonSolutionCertificate {
  double residual;
  std::optional<Frequency> worst;
  std::string reason;
};

using FlowCertificate =
    std::variant<LineCertificate, PlanarPerpCertificate, PlanarQCertificate, BeltramiCertificate, NonSolutionCertificate>;

std::string family_name(const FlowCertificate& c);
inline bool is_solution(const FlowCertificate& c) { return !std::holds_alternative<NonSolutionCertificate>(c); }

enum class QClass { AnyPolynomial, Linear, PlusMinusOmega };
std::string to_string(QClass c);

struct NscCertificate {
  FlowCertificate flow;
  double nu = 0.0;
  double omega = 0.0;
  std::optional<QClass> q_class;
  std::optional<double> witness_time;
};

FlowCertificate classify_euler(const SpectralField& field, double tol = kDefaultTol);
NscCertificate classify_nsc(const SpectralField& field, double nu, double omega, double tol = kDefaultTol);

struct Verification {
  bool ok = true;
  std::string defect;
  explicit operator bool() const { return ok; }
};

Verification verify_certificate(const SpectralField& field, const FlowCertificate& certificate, double tol = kDefaultTol);
Verification verify_certificate(const SpectralField& field, const NscCertificate& certificate, double tol = kDefaultTol);

}  // namespace finmode

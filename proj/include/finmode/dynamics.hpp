#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "finmode/interaction.hpp"
#include "finmode/spectral_field.hpp"

namespace finmode {

// S u ((S + S) \ {0}), sorted.
std::vector<Frequency> extended_support(std::span<const Frequency> support);

// Points of the lattice generated by S (reached from 0 by steps in S inside the
// ball of radius 3 max|n|) with |n| <= 2 max|n|, excluding 0.
std::vector<Frequency> default_truncation(std::span<const Frequency> support);

struct CoriolisMatrix {
  Mat3 m;
  CVec3 apply(const CVec3& v) const { return m.cast<Complex>() * v; }
};

CoriolisMatrix coriolis_matrix(const Frequency& n);

// (i/2) sum over ordered pairs n1 + n2 = n of pair_bracket, for every n in the extended support.
std::map<Frequency, CVec3> nonlinear_term(const SpectralField& field);

struct PressureCoefficient {
  Frequency n;
  Complex p;
};

PressureCoefficient pressure(const SpectralField& field, const Frequency& n, double omega = 0.0);

// u_n(t) = exp(-nu t |n|^2) exp(-Omega t J_n) u_n(0); the zero mode rotates with the frame.
SpectralField nsc_linear_evolution(const SpectralField& field, double nu, double omega, double t);

class GalerkinSystem {
 public:
  using State = std::vector<CVec3>;
  struct Triad {
    std::uint32_t a, b;
  };

  GalerkinSystem(std::vector<Frequency> truncation, double nu = 0.0, double omega = 0.0);

  const std::vector<Frequency>& modes() const { return modes_; }
  std::size_t size() const { return modes_.size(); }
  double nu() const { return nu_; }
  double omega() const { return omega_; }
  std::optional<std::size_t> index_of(const Frequency& n) const;
  std::size_t conjugate_index(std::size_t k) const { return conj_[k]; }
  const std::vector<Triad>& triads(std::size_t k) const { return triads_[k]; }
  std::size_t triad_count() const;

  // Throws std::invalid_argument when the field has modes outside the truncation.
  State state_from(const SpectralField& field) const;
  SpectralField field_from(const State& state, double prune_ratio = kPruneRatio) const;

  // i * sum over unordered triads of the bracket (the truncated nonlinear term N_n).
  State nonlinear(const State& u, unsigned threads = 1) const;
  State rhs(const State& u, unsigned threads = 1) const;

  double energy(const State& u) const;
  double helicity(const State& u) const;
  // max |u_n - conj(u_{-n})|
  double realness_drift(const State& u) const;
  void symmetrize(State& u) const;

 private:
  std::vector<Frequency> modes_;
  std::vector<Vec3> vec_;
  std::vector<Vec3> unit_;
  std::vector<double> k2_;
  std::vector<Mat3> coriolis_;
  std::vector<std::size_t> conj_;
  std::vector<std::vector<Triad>> triads_;
  std::unordered_map<Frequency, std::size_t, FrequencyHash> index_;
  double nu_;
  double omega_;
};

struct ActivationEvent {
  Frequency n;
  double time;
  double peak;
};

struct Diagnostics {
  double t;
  double energy;
  double helicity;
  double realness_drift;
  std::size_t active_modes;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> snapshots;
  std::vector<Diagnostics> diagnostics;
  std::vector<ActivationEvent> activations;
  std::optional<std::string> abort_reason;
  std::size_t steps = 0;
};

struct IntegrateOptions {
  double t_end = 1.0;
  double dt = 1e-3;
  std::size_t snapshot_stride = 1;
  unsigned threads = 1;
  double activation_ratio = 1e-9;
};

// Classic fixed-step RK4; the last step is shortened to land on t_end.
Trajectory integrate(const GalerkinSystem& system, const SpectralField& initial, const IntegrateOptions& options);

std::vector<ActivationEvent> support_growth_report(const Trajectory& trajectory, std::span<const Frequency> original);

}  // namespace finmode

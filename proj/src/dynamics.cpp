#include "finmode/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

namespace finmode {

std::vector<Frequency> extended_support(std::span<const Frequency> support) {
  std::set<Frequency> out(support.begin(), support.end());
  for (std::size_t i = 0; i < support.size(); ++i) {
    for (std::size_t j = i; j < support.size(); ++j) {
      Frequency s = support[i] + support[j];
      if (!s.is_zero()) out.insert(std::move(s));
    }
  }
  out.erase(Frequency{});
  return {out.begin(), out.end()};
}

std::vector<Frequency> default_truncation(std::span<const Frequency> support) {
  Rational m2 = 0;
  std::vector<Frequency> steps;
  for (const auto& n : support) {
    if (n.is_zero()) continue;
    m2 = std::max(m2, n.norm2());
    steps.push_back(n);
    steps.push_back(-n);
  }
  if (steps.empty()) return {};
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  const Rational outer = Rational(9) * m2;
  const Rational inner = Rational(4) * m2;
  std::set<Frequency> seen{Frequency{}};
  std::deque<Frequency> queue{Frequency{}};
  std::vector<Frequency> out;
  while (!queue.empty()) {
    const Frequency p = queue.front();
    queue.pop_front();
    if (!p.is_zero() && p.norm2() <= inner) out.push_back(p);
    for (const auto& s : steps) {
      Frequency q = p + s;
      if (q.norm2() > outer || seen.count(q)) continue;
      seen.insert(q);
      queue.push_back(std::move(q));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

CoriolisMatrix coriolis_matrix(const Frequency& n) {
  if (n.is_zero()) throw std::invalid_argument("coriolis_matrix: zero frequency");
  const Vec3 v = n.to_vector();
  const double s = v(2) / n.norm2().to_double();
  Mat3 m;
  m << 0, -v(2), v(1), v(2), 0, -v(0), -v(1), v(0), 0;
  return {s * m};
}

std::map<Frequency, CVec3> nonlinear_term(const SpectralField& field) {
  std::map<Frequency, CVec3> out;
  const auto support = field.support();
  for (const auto& n : extended_support(support)) out.emplace(n, CVec3::Zero());
  const auto& modes = field.modes();
  std::vector<std::pair<Frequency, CVec3>> entries(modes.begin(), modes.end());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      const Frequency s = entries[i].first + entries[j].first;
      if (s.is_zero()) continue;
      out[s] += pair_bracket(entries[i].first, entries[i].second, entries[j].first, entries[j].second);
    }
  }
  const Complex i(0.0, 1.0);
  for (auto& [n, v] : out) v *= i;
  return out;
}

PressureCoefficient pressure(const SpectralField& field, const Frequency& n, double omega) {
  if (n.is_zero()) throw std::invalid_argument("pressure: zero frequency");
  Complex sum = 0.0;
  for (const auto& [n1, u1] : field.modes()) {
    const Frequency n2 = n - n1;
    auto it = field.modes().find(n2);
    if (it == field.modes().end()) continue;
    sum += bdot(u1, n2.to_vector()) * bdot(it->second, n1.to_vector());
  }
  Complex p = -sum;
  if (omega != 0.0) {
    const CVec3 u = field.coefficient(n);
    const Vec3 v = n.to_vector();
    p += Complex(0.0, omega) * (v(1) * u(0) - v(0) * u(1));
  }
  return {n, p / n.norm2().to_double()};
}

SpectralField nsc_linear_evolution(const SpectralField& field, double nu, double omega, double t) {
  ModeMap out;
  for (const auto& [n, u] : field.modes()) {
    const Vec3 v = n.to_vector();
    const double r = v.norm();
    const double theta = omega * t * v(2) / r;
    const CVec3 rotated = std::cos(theta) * u - std::sin(theta) * cross(Vec3(v / r), u);
    out.emplace(n, std::exp(-nu * t * n.norm2().to_double()) * rotated);
  }
  std::optional<Vec3> zero;
  if (field.zero_mode()) zero = MeanDrift{*field.zero_mode(), 0.0, omega}.velocity(t);
  return SpectralField(std::move(out), zero, field.real_valued());
}

namespace {

// Frequencies scaled by the lcm of their denominators, when that fits comfortably in 64-bit keys.
struct ScaledLattice {
  std::vector<std::array<std::int64_t, 3>> coords;
  std::int64_t width = 0;
  std::int64_t key(const std::array<std::int64_t, 3>& c) const {
    return ((c[0] + width) * (2 * width + 1) + (c[1] + width)) * (2 * width + 1) + (c[2] + width);
  }
};

std::optional<ScaledLattice> scaled_lattice(const std::vector<Frequency>& modes) {
  constexpr std::int64_t kMaxWidth = std::int64_t(1) << 19;
  std::int64_t d = 1;
  for (const auto& n : modes)
    for (int i = 0; i < 3; ++i) {
      d = std::lcm(d, n[i].den());
      if (d > kMaxWidth) return std::nullopt;
    }
  ScaledLattice out;
  out.coords.reserve(modes.size());
  std::int64_t m = 0;
  for (const auto& n : modes) {
    std::array<std::int64_t, 3> c{};
    for (int i = 0; i < 3; ++i) {
      const std::int64_t num = n[i].num(), scale = d / n[i].den();
      if (std::abs(num) > kMaxWidth / scale) return std::nullopt;
      c[i] = num * scale;
      m = std::max(m, std::abs(c[i]));
    }
    out.coords.push_back(c);
  }
  out.width = 2 * m;
  return out;
}

}  // namespace

GalerkinSystem::GalerkinSystem(std::vector<Frequency> truncation, double nu, double omega)
    : modes_(std::move(truncation)), nu_(nu), omega_(omega) {
  std::sort(modes_.begin(), modes_.end());
  modes_.erase(std::unique(modes_.begin(), modes_.end()), modes_.end());
  const std::size_t n = modes_.size();
  index_.reserve(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    if (modes_[k].is_zero()) throw std::invalid_argument("GalerkinSystem: truncation contains the zero frequency");
    index_.emplace(modes_[k], k);
  }
  conj_.resize(n);
  vec_.resize(n);
  unit_.resize(n);
  k2_.resize(n);
  coriolis_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    auto it = index_.find(-modes_[k]);
    if (it == index_.end())
      throw std::invalid_argument("GalerkinSystem: truncation is not symmetric at " + modes_[k].to_string());
    conj_[k] = it->second;
    vec_[k] = modes_[k].to_vector();
    unit_[k] = vec_[k] / vec_[k].norm();
    k2_[k] = modes_[k].norm2().to_double();
    coriolis_[k] = coriolis_matrix(modes_[k]).m;
  }
  triads_.assign(n, {});
  auto add_triad = [&](std::size_t a, std::size_t b, std::size_t k) {
    if (lex_positive(modes_[k])) triads_[k].push_back({std::uint32_t(a), std::uint32_t(b)});
  };
  if (const auto lattice = scaled_lattice(modes_)) {
    std::unordered_map<std::int64_t, std::size_t> by_key;
    by_key.reserve(2 * n);
    for (std::size_t k = 0; k < n; ++k) by_key.emplace(lattice->key(lattice->coords[k]), k);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (b == conj_[a]) continue;
        const auto& x = lattice->coords[a];
        const auto& y = lattice->coords[b];
        auto it = by_key.find(lattice->key({x[0] + y[0], x[1] + y[1], x[2] + y[2]}));
        if (it != by_key.end()) add_triad(a, b, it->second);
      }
    }
  } else {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (b == conj_[a]) continue;
        auto it = index_.find(modes_[a] + modes_[b]);
        if (it != index_.end()) add_triad(a, b, it->second);
      }
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!lex_positive(modes_[k])) continue;
    auto& mirror = triads_[conj_[k]];
    for (const auto& t : triads_[k]) mirror.push_back({std::uint32_t(conj_[t.a]), std::uint32_t(conj_[t.b])});
  }
}

std::optional<std::size_t> GalerkinSystem::index_of(const Frequency& n) const {
  auto it = index_.find(n);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t GalerkinSystem::triad_count() const {
  std::size_t c = 0;
  for (const auto& t : triads_) c += t.size();
  return c;
}

GalerkinSystem::State GalerkinSystem::state_from(const SpectralField& field) const {
  State s(size(), CVec3::Zero());
  for (const auto& [n, u] : field.modes()) {
    auto k = index_of(n);
    if (!k) throw std::invalid_argument("GalerkinSystem: field mode " + n.to_string() + " lies outside the truncation");
    s[*k] = u;
  }
  return s;
}

SpectralField GalerkinSystem::field_from(const State& state, double prune_ratio) const {
  double scale = 0.0;
  for (const auto& u : state) scale = std::max(scale, u.norm());
  ModeMap out;
  for (std::size_t k = 0; k < size(); ++k) {
    const double r = state[k].norm();
    if (r > 0.0 && r > prune_ratio * scale) out.emplace(modes_[k], state[k]);
  }
  return SpectralField(std::move(out));
}

GalerkinSystem::State GalerkinSystem::nonlinear(const State& u, unsigned threads) const {
  State out(size(), CVec3::Zero());
  const Complex i(0.0, 1.0);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      CVec3 acc = CVec3::Zero();
      for (const auto& t : triads_[k]) {
        const CVec3& ua = u[t.a];
        const CVec3& ub = u[t.b];
        acc += bdot(ua, vec_[t.b]) * ub + bdot(ub, vec_[t.a]) * ua;
      }
      const Vec3& e = unit_[k];
      acc -= bdot(acc, e) * to_complex(e);
      out[k] = i * acc;
    }
  };
  if (threads <= 1 || size() < 64) {
    work(0, size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (size() + threads - 1) / threads;
    for (std::size_t begin = 0; begin < size(); begin += chunk)
      pool.emplace_back(work, begin, std::min(size(), begin + chunk));
    for (auto& th : pool) th.join();
  }
  return out;
}

GalerkinSystem::State GalerkinSystem::rhs(const State& u, unsigned threads) const {
  State out = nonlinear(u, threads);
  for (std::size_t k = 0; k < size(); ++k) {
    CVec3 lin = CVec3::Zero();
    if (nu_ != 0.0) lin += nu_ * k2_[k] * u[k];
    if (omega_ != 0.0) lin += omega_ * (coriolis_[k].cast<Complex>() * u[k]);
    out[k] = -lin - out[k];
  }
  return out;
}

double GalerkinSystem::energy(const State& u) const {
  double e = 0.0;
  for (const auto& v : u) e += v.squaredNorm();
  return 0.5 * e;
}

double GalerkinSystem::helicity(const State& u) const {
  Complex h = 0.0;
  const Complex i(0.0, 1.0);
  for (std::size_t k = 0; k < size(); ++k) h += u[k].dot(i * cross(vec_[k], u[k]));
  return h.real();
}

double GalerkinSystem::realness_drift(const State& u) const {
  double d = 0.0;
  for (std::size_t k = 0; k < size(); ++k) d = std::max(d, (u[k] - u[conj_[k]].conjugate()).norm());
  return d;
}

void GalerkinSystem::symmetrize(State& u) const {
  for (std::size_t k = 0; k < size(); ++k) {
    const std::size_t c = conj_[k];
    if (c < k) continue;
    const CVec3 avg = 0.5 * (u[k] + u[c].conjugate());
    u[k] = avg;
    u[c] = avg.conjugate();
  }
}

namespace {

bool finite(const GalerkinSystem::State& u) {
  for (const auto& v : u)
    if (!v.allFinite()) return false;
  return true;
}

void axpy(GalerkinSystem::State& out, const GalerkinSystem::State& x, double a, const GalerkinSystem::State& y) {
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = x[k] + a * y[k];
}

}  // namespace

Trajectory integrate(const GalerkinSystem& system, const SpectralField& initial, const IntegrateOptions& options) {
  if (!(options.dt > 0.0)) throw std::invalid_argument("integrate: dt must be positive");
  if (!(options.t_end >= 0.0)) throw std::invalid_argument("integrate: t_end must be nonnegative");
  if (initial.zero_mode()) throw std::invalid_argument("integrate: initial field has a zero mode; apply remove_mean_drift first");
  const std::size_t stride = std::max<std::size_t>(1, options.snapshot_stride);
  using State = GalerkinSystem::State;
  State u = system.state_from(initial);
  const std::size_t n = system.size();
  double scale = 0.0;
  for (const auto& v : u) scale = std::max(scale, v.norm());
  const double threshold = options.activation_ratio * scale;
  std::vector<bool> initially_active(n);
  for (std::size_t k = 0; k < n; ++k) initially_active[k] = u[k].norm() > threshold;
  std::vector<int> event_of(n, -1);

  Trajectory traj;
  auto record = [&](double t, double drift, bool snapshot) {
    std::size_t active = 0;
    for (const auto& v : u) active += v.norm() > threshold;
    traj.diagnostics.push_back({t, system.energy(u), system.helicity(u), drift, active});
    if (snapshot) {
      traj.times.push_back(t);
      traj.snapshots.push_back(system.field_from(u));
    }
  };
  record(0.0, system.realness_drift(u), true);

  const double eps = 1e-12 * std::max(1.0, options.t_end);
  std::size_t steps = std::size_t(std::ceil(options.t_end / options.dt - 1e-9));
  if (steps > 0 && options.t_end - double(steps - 1) * options.dt <= eps) --steps;
  State k1, k2, k3, k4, tmp(n);
  double t = 0.0;
  for (std::size_t step = 1; step <= steps; ++step) {
    const double h = step == steps ? options.t_end - t : options.dt;
    k1 = system.rhs(u, options.threads);
    axpy(tmp, u, 0.5 * h, k1);
    k2 = system.rhs(tmp, options.threads);
    axpy(tmp, u, 0.5 * h, k2);
    k3 = system.rhs(tmp, options.threads);
    axpy(tmp, u, h, k3);
    k4 = system.rhs(tmp, options.threads);
    State next(n);
    for (std::size_t k = 0; k < n; ++k) next[k] = u[k] + (h / 6.0) * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
    const double t_next = step == steps ? options.t_end : t + h;
    if (!finite(next)) {
      traj.abort_reason = "non-finite coefficient at t=" + std::to_string(t_next);
      if (traj.times.empty() || traj.times.back() != t) {
        traj.times.push_back(t);
        traj.snapshots.push_back(system.field_from(u));
      }
      break;
    }
    const double drift = system.realness_drift(next);
    system.symmetrize(next);
    u = std::move(next);
    t = t_next;
    traj.steps = step;
    for (std::size_t k = 0; k < n; ++k) {
      const double r = u[k].norm();
      if (initially_active[k]) continue;
      if (event_of[k] < 0 && r > threshold) {
        event_of[k] = int(traj.activations.size());
        traj.activations.push_back({system.modes()[k], t, r});
      } else if (event_of[k] >= 0) {
        auto& ev = traj.activations[event_of[k]];
        ev.peak = std::max(ev.peak, r);
      }
    }
    record(t, drift, step % stride == 0 || step == steps);
  }
  return traj;
}

std::vector<ActivationEvent> support_growth_report(const Trajectory& trajectory, std::span<const Frequency> original) {
  const std::set<Frequency> s(original.begin(), original.end());
  std::vector<ActivationEvent> out;
  for (const auto& ev : trajectory.activations)
    if (!s.count(ev.n)) out.push_back(ev);
  return out;
}

}  // namespace finmode

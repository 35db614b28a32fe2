#include "finmode/campaigns.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "finmode/geometry.hpp"
#include "finmode/interaction.hpp"

namespace finmode {

namespace {

constexpr double kPi = std::numbers::pi;

struct Tally {
  CampaignResult& r;
  void deviation(double d) { r.max_deviation = std::max(r.max_deviation, d); }
  void fail(int trial, const std::string& what) {
    ++r.failures;
    if (!r.counterexample) r.counterexample = "trial " + std::to_string(trial) + ": " + what;
  }
};

Frequency random_frequency(Rng& rng, int range) {
  std::uniform_int_distribution<int> c(-range, range);
  while (true) {
    Frequency n(c(rng), c(rng), c(rng));
    if (!n.is_zero()) return n;
  }
}

std::string describe_pair(const Frequency& n1, const CVec3& u1, const Frequency& n2, const CVec3& u2) {
  std::ostringstream os;
  os.precision(17);
  os << "n1=" << n1.to_string() << " u1=" << u1.transpose() << " n2=" << n2.to_string() << " u2=" << u2.transpose();
  return os.str();
}

std::string describe_polygon(const std::vector<Vec3>& v) {
  std::ostringstream os;
  os.precision(17);
  os << "vertices";
  for (const auto& x : v) os << " (" << x.x() << "," << x.y() << "," << x.z() << ")";
  return os.str();
}

// Two distinct, non-antipodal, non-parallel integer points of one sphere.
std::pair<Frequency, Frequency> equal_radius_pair(Rng& rng) {
  static const std::vector<int> radii{2, 3, 5, 6, 9, 11, 14};
  std::uniform_int_distribution<std::size_t> pick(0, radii.size() - 1);
  std::bernoulli_distribution flip(0.5);
  while (true) {
    const auto pts = sphere_points(radii[pick(rng)]);
    std::uniform_int_distribution<std::size_t> idx(0, pts.size() - 1);
    Frequency a = pts[idx(rng)], b = pts[idx(rng)];
    if (flip(rng)) a = -a;
    if (flip(rng)) b = -b;
    if (!a.parallel_to(b)) return {a, b};
  }
}

void two_mode(int trials, Rng& rng, Tally& t) {
  const double tol = kDefaultTol;
  std::uniform_int_distribution<int> mult(2, 3);
  std::bernoulli_distribution flip(0.5);
  for (int trial = 0; trial < trials; ++trial) {
    const int kind = trial % 6;
    Frequency n1, n2;
    CVec3 u1, u2;
    std::optional<bool> expect_interacting;
    switch (kind) {
      case 0: {
        n1 = random_frequency(rng, 3);
        n2 = Rational(flip(rng) ? mult(rng) : -mult(rng)) * n1;
        u1 = random_divergence_free(n1, rng);
        u2 = random_divergence_free(n2, rng);
        expect_interacting = false;
        break;
      }
      case 1: {
        do {
          n1 = random_frequency(rng, 3);
          n2 = random_frequency(rng, 3);
        } while (n1.parallel_to(n2));
        const CVec3 e = to_complex(PlanarFrame::from_pair(n1, n2).normal());
        u1 = random_complex(rng) * e;
        u2 = random_complex(rng) * e;
        expect_interacting = false;
        break;
      }
      case 2:
      case 4: {
        std::tie(n1, n2) = equal_radius_pair(rng);
        u1 = random_divergence_free(n1, rng);
        const Rotation r = rotation_geodesic(n1.to_vector().normalized(), n2.to_vector().normalized());
        u2 = random_complex(rng) * r.apply(u1);
        if (kind == 4) u2 = helmholtz_project(n2, u2 + 1e-3 * random_divergence_free(n2, rng));
        expect_interacting = kind == 4;
        break;
      }
      case 3: {
        std::tie(n1, n2) = equal_radius_pair(rng);
        const BeltramiSign s = flip(rng) ? BeltramiSign::Plus : BeltramiSign::Minus;
        u1 = make_beltrami_coeff(n1, s, random_complex(rng));
        u2 = make_beltrami_coeff(n2, s, random_complex(rng));
        expect_interacting = false;
        break;
      }
      default: {
        do {
          n1 = random_frequency(rng, 3);
          n2 = random_frequency(rng, 3);
        } while (n1 + n2 == Frequency());
        u1 = random_divergence_free(n1, rng);
        u2 = random_divergence_free(n2, rng);
      }
    }
    const InteractionCase verdict = classify_pair(n1, u1, n2, u2, tol);
    if (n1.parallel_to(n2)) {
      if (!std::holds_alternative<CaseParallel>(verdict)) t.fail(trial, "dependent pair not parallel: " + describe_pair(n1, u1, n2, u2));
      continue;
    }
    const double b = pair_bracket(n1, u1, n2, u2).norm();
    const bool quiet = b < interaction_threshold(n1, u1, n2, u2, tol);
    if (quiet == interacts(verdict)) {
      t.fail(trial, "verdict " + to_string(verdict) + " disagrees with bracket norm: " + describe_pair(n1, u1, n2, u2));
      continue;
    }
    if (expect_interacting && *expect_interacting != interacts(verdict)) {
      t.fail(trial, "construction " + std::to_string(kind) + " gave " + to_string(verdict) + ": " +
                        describe_pair(n1, u1, n2, u2));
      continue;
    }
    const PlanarFrame frame = PlanarFrame::from_pair(n1, n2);
    if (std::holds_alternative<CasePerpendicular>(verdict)) {
      const double d = std::max(std::abs(frame.parallel_component(n1, u1)) / u1.norm(),
                                std::abs(frame.parallel_component(n2, u2)) / u2.norm());
      if (d > 1e-8 && n1.norm2() != n2.norm2()) t.fail(trial, "perpendicular case with horizontal parts: " + describe_pair(n1, u1, n2, u2));
    } else if (const auto* eq = std::get_if<CaseEqualRadius>(&verdict)) {
      const Rotation r = rotation_geodesic(n1.to_vector().normalized(), n2.to_vector().normalized());
      const double d = (u2 - eq->gamma * r.apply(u1)).norm() / u2.norm();
      t.deviation(d);
      if (n1.norm2() != n2.norm2() || eq->gamma == Complex(0.0) || !(d < 1e-10))
        t.fail(trial, "gamma reconstruction error " + std::to_string(d) + ": " + describe_pair(n1, u1, n2, u2));
    }
  }
}

void beltrami_noninteraction(int trials, Rng& rng, Tally& t) {
  std::bernoulli_distribution flip(0.5);
  for (int trial = 0; trial < trials; ++trial) {
    const auto [n1, n2] = equal_radius_pair(rng);
    const BeltramiSign s = flip(rng) ? BeltramiSign::Plus : BeltramiSign::Minus;
    const CVec3 u1 = make_beltrami_coeff(n1, s, random_complex(rng));
    const CVec3 u2 = make_beltrami_coeff(n2, s, random_complex(rng));
    const double d = pair_bracket(n1, u1, n2, u2).norm() / (u1.norm() * u2.norm() * n1.norm());
    t.deviation(d);
    if (!(d < 1e-12)) t.fail(trial, "bracket " + std::to_string(d) + ": " + describe_pair(n1, u1, n2, u2));
  }
}

bool brute_force_sip(const std::vector<Frequency>& s, const Frequency& n1, const Frequency& n2) {
  const Frequency sum = n1 + n2;
  if (std::find(s.begin(), s.end(), sum) != s.end()) return false;
  int count = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (s[i] + s[j] == sum) ++count;
  return count == 1;
}

void sip(int trials, Rng& rng, Tally& t) {
  std::uniform_int_distribution<int> pairs(1, 15);
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<Frequency> s;
    if (trial % 10 == 0) {
      // n1 + n3 = n2 + n4 with all four (and their negatives) present
      Frequency n1, n2, n3;
      do {
        n1 = random_frequency(rng, 3);
        n2 = random_frequency(rng, 3);
        n3 = random_frequency(rng, 3);
      } while (coplanar(std::vector<Frequency>{Frequency(), n1, n2, n3}));
      const Frequency n4 = n1 + n3 - n2;
      std::set<Frequency> set;
      for (const auto& n : {n1, n2, n3, n4})
        if (!n.is_zero()) set.insert({n, -n});
      s.assign(set.begin(), set.end());
      if (!n4.is_zero() && n1 != n3 && n2 != n4 && n2 != n1 && n2 != n3 && !set.count(n1 + n3) && is_sip(s, n1, n3))
        t.fail(trial, "parallelogram pair reported simply interacting: " + n1.to_string() + " " + n3.to_string());
    } else {
      std::set<Frequency> set;
      const int m = pairs(rng);
      while (int(set.size()) < 2 * m) {
        const Frequency n = random_frequency(rng, 2);
        set.insert({n, -n});
      }
      s.assign(set.begin(), set.end());
    }
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j)
        if (is_sip(s, s[i], s[j]) != brute_force_sip(s, s[i], s[j])) {
          t.fail(trial, "disagreement on " + s[i].to_string() + " + " + s[j].to_string());
          goto next;
        }
  next:;
  }
}

void rotation_loop_campaign(int trials, Rng& rng, Tally& t) {
  std::uniform_int_distribution<int> sides(3, 8);
  for (int trial = 0; trial < trials; ++trial) {
    const auto v = random_cap_polygon(sides(rng), rng);
    const RotationLoop loop = rotation_loop(v);
    const double area = girard_area(v);
    const double d_angle = std::abs(std::abs(loop.angle) - area);
    const double d_fix = (loop.rotation.apply(v[0]) - v[0]).norm();
    const int orientation = spherical_polygon_orientation(v);
    t.deviation(d_angle);
    if (!(d_angle < 1e-9) || !(d_fix < 1e-10) || (loop.angle > 0) != (orientation > 0)) {
      std::ostringstream os;
      os << "angle " << loop.angle << " area " << area << " fix " << d_fix << " orientation " << orientation << "; "
         << describe_polygon(v);
      t.fail(trial, os.str());
    }
    std::vector<Vec3> rev(v.rbegin(), v.rend());
    std::rotate(rev.begin(), rev.end() - 1, rev.end());
    const RotationLoop back = rotation_loop(rev);
    const double d_rev = std::abs(back.angle + loop.angle);
    t.deviation(d_rev);
    if (!(d_rev < 1e-9)) t.fail(trial, "reversed loop angle " + std::to_string(back.angle) + "; " + describe_polygon(v));
  }
}

void gauss_bonnet(int trials, Rng& rng, Tally& t) {
  std::uniform_int_distribution<int> sides(3, 8);
  for (int trial = 0; trial < trials; ++trial) {
    const auto v = random_cap_polygon(sides(rng), rng);
    const SphericalPolygonMeasure m = spherical_polygon_measure(v);
    const double d = std::abs(m.area - girard_area(v));
    const double identity = std::abs(m.area - (m.angle_sum - (double(v.size()) - 2.0) * kPi));
    t.deviation(std::max(d, identity));
    if (!(d < 1e-10) || !(identity < 1e-12) || !(m.area > 0.0 && m.area < 2.0 * kPi)) {
      std::ostringstream os;
      os << "area " << m.area << " girard " << girard_area(v) << "; " << describe_polygon(v);
      t.fail(trial, os.str());
    }
  }
}

}  // namespace

std::vector<Vec3> random_cap_polygon(int p, Rng& rng) {
  if (p < 3) throw std::invalid_argument("random_cap_polygon: need at least 3 vertices");
  std::uniform_real_distribution<double> radius(0.05, kPi / 2 - 0.05), phase(0.0, 2.0 * kPi);
  std::bernoulli_distribution flip(0.5);
  const Vec3 c = random_unit(rng);
  const Vec3 e1 = c.unitOrthogonal();
  const Vec3 e2 = c.cross(e1);
  const double rho = radius(rng);
  std::vector<double> phi;
  while (true) {
    phi.clear();
    for (int j = 0; j < p; ++j) phi.push_back(phase(rng));
    std::sort(phi.begin(), phi.end());
    double gap = phi.front() + 2.0 * kPi - phi.back();
    for (int j = 1; j < p; ++j) gap = std::min(gap, phi[j] - phi[j - 1]);
    if (gap >= 0.05) break;
  }
  if (flip(rng)) std::reverse(phi.begin(), phi.end());
  std::vector<Vec3> v;
  for (double f : phi)
    v.push_back((std::cos(rho) * c + std::sin(rho) * (std::cos(f) * e1 + std::sin(f) * e2)).normalized());
  return v;
}

double girard_area(const std::vector<Vec3>& v) {
  double total = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const Vec3 &a = v[0], &b = v[i], &c = v[i + 1];
    total += 2.0 * std::atan2(std::abs(a.dot(b.cross(c))), 1.0 + a.dot(b) + b.dot(c) + c.dot(a));
  }
  return total;
}

const std::vector<std::string>& campaign_names() {
  static const std::vector<std::string> names{"two-mode", "rotation-loop", "sip", "beltrami-noninteraction",
                                              "gauss-bonnet"};
  return names;
}

CampaignResult run_campaign(const std::string& lemma, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  std::function<void(int, Rng&, Tally&)> body;
  if (lemma == "two-mode") body = two_mode;
  else if (lemma == "rotation-loop") body = rotation_loop_campaign;
  else if (lemma == "sip") body = sip;
  else if (lemma == "beltrami-noninteraction") body = beltrami_noninteraction;
  else if (lemma == "gauss-bonnet") body = gauss_bonnet;
  else throw std::invalid_argument("unknown lemma '" + lemma + "'");
  CampaignResult r;
  r.lemma = lemma;
  r.trials = trials;
  Rng rng(seed);
  Tally t{r};
  body(trials, rng, t);
  return r;
}

}  // namespace finmode

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "finmode/classifier.hpp"
#include "finmode/dynamics.hpp"
#include "finmode/families.hpp"
#include "finmode/field_io.hpp"
#include "oracles.hpp"

using namespace finmode;

namespace {

const Complex I(0, 1);

std::array<int, 3> ints(const Frequency& n) { return {int(n[0].num()), int(n[1].num()), int(n[2].num())}; }

double max_difference(const SpectralField& a, const SpectralField& b) {
  double d = 0;
  for (const auto& [n, u] : a.modes()) d = std::max(d, (u - b.coefficient(n)).norm());
  for (const auto& [n, u] : b.modes()) d = std::max(d, (u - a.coefficient(n)).norm());
  return d;
}

GalerkinSystem default_system(const SpectralField& f, double nu = 0, double omega = 0) {
  const auto s = f.support();
  return GalerkinSystem(default_truncation(s), nu, omega);
}

}  // namespace

TEST(ExtendedSupport, Examples) {
  const std::vector<Frequency> line{Frequency(1, 0, 0), Frequency(-1, 0, 0)};
  EXPECT_EQ(extended_support(line),
            (std::vector<Frequency>{Frequency(-2, 0, 0), Frequency(-1, 0, 0), Frequency(1, 0, 0), Frequency(2, 0, 0)}));
  const auto abc = make_abc(1, 1, 1).support();
  std::set<Frequency> brute(abc.begin(), abc.end());
  for (const auto& a : abc)
    for (const auto& b : abc)
      if (!(a + b).is_zero()) brute.insert(a + b);
  EXPECT_EQ(brute.size(), 24u);
  EXPECT_EQ(extended_support(abc), std::vector<Frequency>(brute.begin(), brute.end()));
}

TEST(ExtendedSupport, SymmetricOnRandomSets) {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    const auto s = make_random_field(2 * (2 + t % 6), 2, rng).support();
    const auto ext = extended_support(s);
    const std::set<Frequency> set(ext.begin(), ext.end());
    for (const auto& n : ext) {
      EXPECT_FALSE(n.is_zero());
      EXPECT_TRUE(set.count(-n));
    }
    for (const auto& a : s) {
      EXPECT_TRUE(set.count(a));
      for (const auto& b : s)
        if (!(a + b).is_zero()) EXPECT_TRUE(set.count(a + b));
    }
  }
}

TEST(Galerkin, TriadIndexIsCompleteAndDuplicateFree) {
  Rng rng(2);
  const auto s = make_random_field(8, 1, rng).support();
  const GalerkinSystem sys(default_truncation(s));
  for (std::size_t k = 0; k < sys.size(); ++k) {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& t : sys.triads(k)) {
      EXPECT_EQ(sys.modes()[t.a] + sys.modes()[t.b], sys.modes()[k]);
      EXPECT_TRUE(seen.insert({std::min(t.a, t.b), std::max(t.a, t.b)}).second);
    }
    std::size_t expected = 0;
    for (std::size_t a = 0; a < sys.size(); ++a)
      for (std::size_t b = a + 1; b < sys.size(); ++b)
        if (sys.modes()[a] + sys.modes()[b] == sys.modes()[k]) ++expected;
    EXPECT_EQ(seen.size(), expected);
  }
}

TEST(Galerkin, RejectsBadTruncations) {
  EXPECT_THROW(GalerkinSystem({Frequency(1, 0, 0)}), std::invalid_argument);
  EXPECT_THROW(GalerkinSystem({Frequency(0, 0, 0)}), std::invalid_argument);
  const GalerkinSystem sys({Frequency(1, 0, 0), Frequency(-1, 0, 0)});
  EXPECT_THROW(sys.state_from(make_abc(1, 1, 1)), std::invalid_argument);
}

TEST(Rhs, AbcIsStationary) {
  const SpectralField f = make_abc(1, 1, 1);
  const auto ext = extended_support(f.support());
  const GalerkinSystem sys(ext);
  for (const auto& v : sys.rhs(sys.state_from(f))) EXPECT_LT(v.norm(), 1e-12);
}

TEST(Rhs, SingleModePairDecays) {
  const SpectralField f = FieldBuilder().add_pair(Frequency(1, 0, 0), CVec3(0, 1, 0)).build();
  const GalerkinSystem sys({Frequency(1, 0, 0), Frequency(-1, 0, 0)}, 1.0, 0.0);
  const auto u = sys.state_from(f);
  const auto du = sys.rhs(u);
  for (std::size_t k = 0; k < u.size(); ++k) EXPECT_LT((du[k] + u[k]).norm(), 1e-15);
}

TEST(Rhs, TwoModeFieldByHand) {
  const SpectralField f = FieldBuilder()
                              .add_pair(Frequency(1, 0, 0), CVec3(0, 1, 0))
                              .add_pair(Frequency(0, 2, 0), CVec3(0, 0, 1))
                              .build();
  const GalerkinSystem sys(extended_support(f.support()));
  const auto du = sys.rhs(sys.state_from(f));
  // u = (0, 2 cos x1, 2 cos 2x2), so (u.grad)u = (0, 0, -8 cos x1 sin 2x2).
  const std::map<Frequency, CVec3> want{{Frequency(1, 2, 0), CVec3(0, 0, -2.0 * I)},
                                        {Frequency(-1, -2, 0), CVec3(0, 0, 2.0 * I)},
                                        {Frequency(1, -2, 0), CVec3(0, 0, 2.0 * I)},
                                        {Frequency(-1, 2, 0), CVec3(0, 0, -2.0 * I)}};
  for (std::size_t k = 0; k < sys.size(); ++k) {
    auto it = want.find(sys.modes()[k]);
    const CVec3 expected = it == want.end() ? CVec3::Zero() : it->second;
    EXPECT_LT((du[k] - expected).norm(), 1e-14) << sys.modes()[k].to_string();
  }
}

TEST(Rhs, NonlinearTermMatchesQuadrature) {
  Rng rng(3);
  for (int t = 0; t < 5; ++t) {
    const SpectralField f = make_random_field(8, 1, rng);
    const GalerkinSystem sys(extended_support(f.support()));
    const auto n = sys.nonlinear(sys.state_from(f));
    const oracle::Grid g = oracle::sample(f, 9);
    for (std::size_t k = 0; k < sys.size(); ++k)
      EXPECT_LT((n[k] - oracle::advection_coefficient(g, ints(sys.modes()[k]))).norm(), 1e-12);
  }
}

TEST(Rhs, ThreadCountDoesNotChangeTheResult) {
  Rng rng(4);
  const SpectralField f = make_random_field(12, 2, rng);
  const GalerkinSystem sys = default_system(f, 0.1, 0.5);
  const auto u = sys.state_from(f);
  const auto a = sys.rhs(u, 1), b = sys.rhs(u, 4);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k], b[k]);
}

TEST(Rhs, CertifiedFieldsAreStationary) {
  for (const auto& name : {"abc.json", "planar_q.json", "beltrami_random.json", "line.json", "planar_perp.json"}) {
    const SpectralField f = read_field_file(std::string(FIXTURE_DIR) + "/" + name);
    ASSERT_TRUE(is_solution(classify_euler(f))) << name;
    const GalerkinSystem sys(extended_support(f.support()));
    const double scale = f.max_coefficient_norm() * f.max_coefficient_norm() * f.max_frequency_norm();
    for (const auto& v : sys.rhs(sys.state_from(f))) EXPECT_LT(v.norm(), 1e-12 * scale) << name;
  }
}

TEST(Pressure, AbcIsMinusHalfSpeedSquared) {
  const SpectralField f = make_abc(1, 2, 3);
  const oracle::Grid g = oracle::sample(f, 7);
  for (const auto& n : extended_support(f.support()))
    EXPECT_LT(std::abs(pressure(f, n).p - oracle::half_speed_squared(g, ints(n))), 1e-12) << n.to_string();
}

TEST(Pressure, MatchesQuadrature) {
  Rng rng(5);
  const SpectralField f = make_random_field(10, 2, rng);
  const oracle::Grid g = oracle::sample(f, 11);
  for (const auto& n : extended_support(f.support())) {
    EXPECT_LT(std::abs(pressure(f, n).p - oracle::pressure_coefficient(g, ints(n))), 1e-12) << n.to_string();
    EXPECT_LT(std::abs(pressure(f, n, 1.5).p - std::conj(pressure(f, -n, 1.5).p)), 1e-12);
  }
}

TEST(Pressure, LineSupportHasNoPressure) {
  Rng rng(6);
  const SpectralField f = make_line(Frequency(1, 2, 0), 3, rng);
  for (const auto& n : extended_support(f.support())) EXPECT_LT(std::abs(pressure(f, n).p), 1e-14);
}

TEST(Pressure, TetrahedronField) {
  const SpectralField f = make_tetrahedron();
  for (const auto& n : extended_support(f.support())) {
    const Complex p = pressure(f, n).p;
    const bool expected = n == Frequency(2, 0, 0) || n == Frequency(-2, 0, 0) || n == Frequency(0, 2, 0) ||
                          n == Frequency(0, -2, 0);
    EXPECT_LT(std::abs(p - (expected ? 0.5 : 0.0)), 1e-14) << n.to_string();
  }
  EXPECT_THROW(pressure(f, Frequency(0, 0, 0)), std::invalid_argument);
}

TEST(Coriolis, MatrixExamples) {
  Mat3 want;
  want << 0, -1, 0, 1, 0, 0, 0, 0, 0;
  EXPECT_EQ(coriolis_matrix(Frequency(0, 0, 1)).m, want);
  EXPECT_EQ(coriolis_matrix(Frequency(0, 0, 1)).apply(CVec3(1, 0, 0)), CVec3(0, 1, 0));
  EXPECT_TRUE(coriolis_matrix(Frequency(1, 0, 0)).m.isZero());
  EXPECT_THROW(coriolis_matrix(Frequency(0, 0, 0)), std::invalid_argument);
}

TEST(Coriolis, ActsAsScaledCrossProductOnTangentPlane) {
  Rng rng(7);
  for (const Frequency& n : {Frequency(1, 2, 3), Frequency(-2, 1, 1), Frequency(0, 3, -4)}) {
    const Vec3 v = n.to_vector(), hat = v.normalized();
    const CVec3 u = helmholtz_project(n, CVec3(random_complex(rng), random_complex(rng), random_complex(rng)));
    const CVec3 ju = coriolis_matrix(n).apply(u);
    EXPECT_LT((ju - (v(2) / v.norm()) * cross(hat, u)).norm(), 1e-14);
    EXPECT_LT(std::abs(bdot(ju, hat)), 1e-14);
  }
}

TEST(Coriolis, EnergyNeutral) {
  Rng rng(8);
  const SpectralField f = make_random_field(12, 2, rng);
  double acc = 0;
  for (const auto& [n, u] : f.modes()) acc += u.dot(2.5 * coriolis_matrix(n).apply(u)).real();
  EXPECT_LT(std::abs(acc), 1e-12);
}

TEST(LinearEvolution, HalfTurnOfABeltramiMode) {
  const CVec3 u(1, I, 0);
  const SpectralField f = FieldBuilder().add_pair(Frequency(0, 0, 1), u).build();
  ASSERT_NE(beltrami_sign(Frequency(0, 0, 1), u), BeltramiSign::Neither);
  const SpectralField g = nsc_linear_evolution(f, 0, std::numbers::pi, 1);
  const CVec3 v = g.coefficient(Frequency(0, 0, 1));
  EXPECT_LT((v + u).norm(), 1e-14);
  EXPECT_EQ(beltrami_sign(Frequency(0, 0, 1), v), beltrami_sign(Frequency(0, 0, 1), u));
}

TEST(LinearEvolution, HorizontalModesOnlyDecay) {
  // every frequency of the fixture has n3 = 0
  const SpectralField f = read_field_file(std::string(FIXTURE_DIR) + "/planar_q.json");
  const SpectralField g = nsc_linear_evolution(f, 0.5, 3.0, 2.0);
  for (const auto& [n, u] : f.modes())
    EXPECT_LT((g.coefficient(n) - std::exp(-n.norm2().to_double()) * u).norm(), 1e-14);
}

TEST(Galerkin, NonlinearEnergyNeutrality) {
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    const SpectralField f = make_random_field(2 * (3 + t % 5), 2, rng);
    const GalerkinSystem sys = default_system(f);
    const auto u = sys.state_from(f);
    const auto n = sys.nonlinear(u);
    double acc = 0, scale = 0;
    for (std::size_t k = 0; k < u.size(); ++k) {
      acc += u[k].dot(n[k]).real();
      scale += u[k].norm() * n[k].norm();
    }
    EXPECT_LT(std::abs(acc), 1e-11 * std::max(scale, 1.0));
  }
}

TEST(Integrate, AbcIsInert) {
  const SpectralField f = make_abc(1, 1, 1);
  const GalerkinSystem sys = default_system(f);
  const Trajectory tr = integrate(sys, f, {.t_end = 1.0, .dt = 1e-3, .snapshot_stride = 100});
  EXPECT_FALSE(tr.abort_reason);
  EXPECT_EQ(tr.steps, 1000u);
  EXPECT_DOUBLE_EQ(tr.times.back(), 1.0);
  EXPECT_LT(max_difference(tr.snapshots.back(), f), 1e-10);
  EXPECT_TRUE(tr.activations.empty());
  EXPECT_TRUE(support_growth_report(tr, f.support()).empty());
}

TEST(Integrate, PerturbedAbcLeaksButConservesEnergy) {
  const SpectralField f = make_perturbed_abc();
  const GalerkinSystem sys = default_system(f);
  const Trajectory tr = integrate(sys, f, {.t_end = 1.0, .dt = 1e-3, .snapshot_stride = 100});
  ASSERT_FALSE(tr.abort_reason);
  const auto growth = support_growth_report(tr, f.support());
  ASSERT_FALSE(growth.empty());
  const auto support = f.support();
  const std::set<Frequency> s(support.begin(), support.end());
  std::set<Frequency> activated;
  for (const auto& e : growth) {
    EXPECT_FALSE(s.count(e.n));
    activated.insert(e.n);
  }
  for (const auto& [n, r] : nonlinear_term(f))
    if (!s.count(n) && r.norm() > 1e-12) {
      ASSERT_TRUE(activated.count(n)) << n.to_string();
      for (const auto& e : growth)
        if (e.n == n) EXPECT_LE(e.time, 1e-3 + 1e-15);
    }
  const double e0 = tr.diagnostics.front().energy;
  for (const auto& d : tr.diagnostics) {
    EXPECT_LT(std::abs(d.energy - e0), 1e-8 * e0);
    EXPECT_LT(d.realness_drift, 1e-13);
  }
}

TEST(Integrate, ViscousBeltramiDecayAndConvergenceOrder) {
  const SpectralField f = make_abc(1, 1, 1);
  for (double omega : {0.0, 1.5}) {
    const GalerkinSystem sys = default_system(f, 1.0, omega);
    const SpectralField exact = nsc_linear_evolution(f, 1.0, omega, 1.0);
    double err[2];
    for (int h = 0; h < 2; ++h) {
      const double dt = h == 0 ? 0.1 : 0.05;
      const Trajectory tr = integrate(sys, f, {.t_end = 1.0, .dt = dt, .snapshot_stride = 1000});
      err[h] = max_difference(tr.snapshots.back(), exact);
    }
    const double ratio = err[0] / err[1];
    EXPECT_GT(ratio, 14.0) << omega;
    EXPECT_LT(ratio, 18.0) << omega;
    const GalerkinSystem fine = default_system(f, 1.0, omega);
    const Trajectory tr = integrate(fine, f, {.t_end = 1.0, .dt = 1e-3, .snapshot_stride = 1000});
    EXPECT_NEAR(tr.diagnostics.back().energy, std::exp(-2.0) * energy(f), 1e-10);
  }
}

TEST(Integrate, ShortensTheLastStep) {
  const SpectralField f = make_abc(1, 1, 1);
  const Trajectory tr = integrate(default_system(f), f, {.t_end = 0.25, .dt = 0.1});
  EXPECT_EQ(tr.steps, 3u);
  EXPECT_DOUBLE_EQ(tr.times.back(), 0.25);
}

TEST(Integrate, RejectsBadArguments) {
  const SpectralField f = make_abc(1, 1, 1);
  const GalerkinSystem sys = default_system(f);
  EXPECT_THROW(integrate(sys, f, {.t_end = 1.0, .dt = 0.0}), std::invalid_argument);
  EXPECT_THROW(integrate(sys, f.with_zero_mode(Vec3(1, 0, 0)), {}), std::invalid_argument);
}

TEST(Integrate, AbortsOnBlowUp) {
  const SpectralField f = make_perturbed_abc();
  const Trajectory tr = integrate(default_system(f), f, {.t_end = 1000.0, .dt = 5.0});
  ASSERT_TRUE(tr.abort_reason);
  for (const auto& d : tr.diagnostics) EXPECT_TRUE(std::isfinite(d.energy));
}

TEST(SupportGrowth, GenericFieldGrowsWithinOneStep) {
  Rng rng(10);
  const SpectralField f = make_random_field(6, 1, rng);
  const Trajectory tr = integrate(default_system(f), f, {.t_end = 1e-3, .dt = 1e-3});
  EXPECT_FALSE(support_growth_report(tr, f.support()).empty());
}

TEST(SupportGrowth, PlanarQFixtureStaysPut) {
  const SpectralField f = read_field_file(std::string(FIXTURE_DIR) + "/planar_q.json");
  const Trajectory tr = integrate(default_system(f), f, {.t_end = 1.0, .dt = 1e-2});
  EXPECT_TRUE(support_growth_report(tr, f.support()).empty());
}

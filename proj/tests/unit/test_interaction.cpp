#include <gtest/gtest.h>

#include <cmath>

#include "finmode/families.hpp"
#include "finmode/interaction.hpp"
#include "oracles.hpp"

using namespace finmode;

namespace {

const Complex I(0, 1);

CVec3 abc1() { return CVec3(0, -0.5 * I, 0.5); }
CVec3 abc2() { return CVec3(0.5, 0, -0.5 * I); }

Frequency random_frequency(Rng& rng, int range = 3) {
  std::uniform_int_distribution<int> c(-range, range);
  while (true) {
    Frequency n(c(rng), c(rng), c(rng));
    if (!n.is_zero()) return n;
  }
}

// Geometric form of the Beltrami condition: |Re u| = |Im u|, Re u . Im u = 0, (n, Re u, Im u) handedness.
int geometric_sign(const Frequency& n, const CVec3& u, double tol) {
  const Vec3 a = u.real(), b = u.imag();
  const double s = u.norm();
  if (std::abs(a.norm() - b.norm()) > tol * s || std::abs(a.dot(b)) > tol * s * s) return 0;
  const double h = n.to_vector().dot(a.cross(b));
  return h > 0 ? 1 : (h < 0 ? -1 : 0);
}

}  // namespace

TEST(Helmholtz, Examples) {
  EXPECT_LT((helmholtz_project(Frequency(0, 0, 1), CVec3(1, 2, 3)) - CVec3(1, 2, 0)).norm(), 1e-15);
  EXPECT_LT(helmholtz_project(Frequency(1, 0, 0), CVec3(I, 0, 0)).norm(), 1e-15);
  EXPECT_LT((helmholtz_project(Frequency(1, 1, 0), CVec3(1, 0, 0)) - CVec3(0.5, -0.5, 0)).norm(), 1e-15);
  EXPECT_THROW(helmholtz_project(Frequency(), CVec3(1, 0, 0)), std::invalid_argument);
}

TEST(Helmholtz, IdempotentAndOrthogonal) {
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const Frequency n = random_frequency(rng);
    CVec3 v;
    for (int k = 0; k < 3; ++k) v(k) = random_complex(rng);
    const CVec3 w = helmholtz_project(n, v);
    EXPECT_LT(std::abs(bdot(w, n.to_vector())), 1e-13);
    EXPECT_LT((helmholtz_project(n, w) - w).norm(), 1e-13);
    const CVec3 d = v - w;
    EXPECT_LT(cross(n.to_vector(), d).norm(), 1e-12);
  }
}

TEST(PairBracket, Examples) {
  EXPECT_LT((pair_bracket(Frequency(1, 0, 0), CVec3(0, 1, 0), Frequency(0, 2, 0), CVec3(0, 0, 1)) - CVec3(0, 0, 2)).norm(),
            1e-15);
  EXPECT_LT(pair_bracket(Frequency(1, 0, 0), CVec3(0, 0, 1), Frequency(0, 1, 0), CVec3(0, 0, 1)).norm(), 1e-15);
  EXPECT_LT(pair_bracket(Frequency(1, 0, 0), abc1(), Frequency(0, 1, 0), abc2()).norm(), 1e-15);
  EXPECT_THROW(pair_bracket(Frequency(1, 0, 0), CVec3(0, 1, 0), Frequency(-1, 0, 0), CVec3(0, 1, 0)),
               std::invalid_argument);
}

TEST(PairBracket, SymmetricAndSolenoidal) {
  Rng rng(8);
  for (int i = 0; i < 500; ++i) {
    const Frequency n1 = random_frequency(rng), n2 = random_frequency(rng);
    if ((n1 + n2).is_zero()) continue;
    const CVec3 u1 = random_divergence_free(n1, rng), u2 = random_divergence_free(n2, rng);
    const CVec3 a = pair_bracket(n1, u1, n2, u2), b = pair_bracket(n2, u2, n1, u1);
    EXPECT_EQ(a, b);
    EXPECT_LT(std::abs(bdot(a, (n1 + n2).to_vector())), 1e-12 * (1 + a.norm()) * (n1 + n2).norm());
  }
}

TEST(PairBracket, SameSignBeltramiOnOneSphereDoNotInteract) {
  Rng rng(12);
  for (int r2 : {3, 9, 14}) {
    const auto pts = sphere_points(r2);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = 0; j < pts.size(); ++j)
        for (int flip : {1, -1}) {
          const Frequency n1 = pts[i], n2 = Rational(flip) * pts[j];
          if (n1.parallel_to(n2)) continue;
          for (auto s : {BeltramiSign::Plus, BeltramiSign::Minus}) {
            const CVec3 u1 = make_beltrami_coeff(n1, s, random_complex(rng));
            const CVec3 u2 = make_beltrami_coeff(n2, s, random_complex(rng));
            EXPECT_LT(pair_bracket(n1, u1, n2, u2).norm(), 1e-12 * u1.norm() * u2.norm() * n1.norm());
          }
        }
  }
}

TEST(Decomposed, EqualRadiiWithoutVerticalParts) {
  const Frequency n1(1, 0, 0), n2(0, 1, 0);
  const PlanarFrame f = PlanarFrame::from_pair(n1, n2);
  const auto d = pair_bracket_decomposed(n1, to_complex(f.tangent(n1)), n2, Complex(2, 1) * to_complex(f.tangent(n2)), f);
  EXPECT_LT(std::abs(d.parallel), 1e-15);
  EXPECT_LT(std::abs(d.perpendicular), 1e-15);
}

TEST(Decomposed, TangentModesOnDifferentRadii) {
  const Frequency n1(1, 0, 0), n2(0, 2, 0);
  const PlanarFrame f = PlanarFrame::from_pair(n1, n2);
  const auto d = pair_bracket_decomposed(n1, to_complex(f.tangent(n1)), n2, to_complex(f.tangent(n2)), f);
  const double sign = n1.to_vector().cross(n2.to_vector()).dot(f.normal()) > 0 ? 1 : -1;
  EXPECT_NEAR(d.parallel.real(), sign * 3 / std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(d.parallel.imag(), 0, 1e-15);
  EXPECT_LT(std::abs(d.perpendicular), 1e-15);

  const PlanarFrame g(-f.normal());
  const auto e = pair_bracket_decomposed(n1, to_complex(g.tangent(n1)), n2, to_complex(g.tangent(n2)), g);
  EXPECT_NEAR(e.parallel.real(), -3 / std::sqrt(5.0), 1e-15);
}

TEST(Decomposed, VerticalMeetsHorizontal) {
  const Frequency n1(1, 0, 0), n2(0, 2, 0);
  const PlanarFrame f = PlanarFrame::from_pair(n1, n2);
  const Complex a(0.3, -0.7);
  const auto d = pair_bracket_decomposed(n1, to_complex(f.normal()), n2, a * to_complex(f.tangent(n2)), f);
  const double factor = n1.to_vector().cross(n2.to_vector()).dot(f.normal()) / (n1.norm() * n2.norm());
  EXPECT_LT(std::abs(d.parallel), 1e-15);
  EXPECT_LT(std::abs(d.perpendicular - (-factor * a * 1.0 * n1.norm())), 1e-15);
  EXPECT_GT(std::abs(d.perpendicular), 0.1);
}

TEST(Decomposed, RecombinesAndMatchesNonvanishingConditions) {
  Rng rng(21);
  for (int i = 0; i < 2000; ++i) {
    const Frequency n1 = random_frequency(rng), n2 = random_frequency(rng);
    if (n1.parallel_to(n2)) {
      if (!(n1 + n2).is_zero())
        EXPECT_THROW(pair_bracket_decomposed(n1, random_divergence_free(n1, rng), n2, random_divergence_free(n2, rng),
                                             PlanarFrame(Vec3::UnitZ())),
                     std::invalid_argument);
      continue;
    }
    const PlanarFrame f = PlanarFrame::from_pair(n1, n2);
    const CVec3 u1 = random_divergence_free(n1, rng), u2 = random_divergence_free(n2, rng);
    const auto d = pair_bracket_decomposed(n1, u1, n2, u2, f);
    const CVec3 full = pair_bracket(n1, u1, n2, u2);
    EXPECT_LT((recombine(d, f, n1 + n2) - full).norm(), 1e-12 * std::max(1.0, full.norm()));
    const Complex p1 = f.parallel_component(n1, u1), p2 = f.parallel_component(n2, u2);
    const Complex q1 = f.perpendicular_component(u1), q2 = f.perpendicular_component(u2);
    const bool par = std::abs(p1 * p2 * (n1.norm2() - n2.norm2()).to_double()) > 1e-9;
    const bool perp = std::abs(p1 * q2 * n2.norm() - p2 * q1 * n1.norm()) > 1e-9;
    EXPECT_EQ(std::abs(d.parallel) > 1e-12, par);
    EXPECT_EQ(std::abs(d.perpendicular) > 1e-12, perp);
  }
}

TEST(ClassifyPair, Examples) {
  Rng rng(1);
  const Frequency e1(1, 0, 0), e2(0, 1, 0);
  EXPECT_TRUE(std::holds_alternative<CaseParallel>(
      classify_pair(e1, random_divergence_free(e1, rng), Frequency(2, 0, 0), random_divergence_free(Frequency(2, 0, 0), rng))));
  EXPECT_TRUE(std::holds_alternative<CasePerpendicular>(classify_pair(e1, CVec3(0, 0, 1), e2, CVec3(0, 0, 1))));
  const auto c = classify_pair(e1, abc1(), e2, abc2());
  ASSERT_TRUE(std::holds_alternative<CaseEqualRadius>(c));
  const Complex gamma = std::get<CaseEqualRadius>(c).gamma;
  const Mat3 r = oracle::householder_rotation(Vec3::UnitX(), Vec3::UnitY());
  EXPECT_LT((abc2() - gamma * (r.cast<Complex>() * abc1())).norm(), 1e-14);
  EXPECT_EQ(to_string(c).substr(0, 5), "equal");
}

TEST(ClassifyPair, GenericPairsInteract) {
  EXPECT_TRUE(interacts(classify_pair(Frequency(1, 0, 0), CVec3(0, 1, 0), Frequency(0, 2, 0), CVec3(0, 0, 1))));
}

TEST(ClassifyPair, RejectsCompressibleOrZeroInput) {
  EXPECT_THROW(classify_pair(Frequency(1, 0, 0), CVec3(1, 0, 0), Frequency(0, 1, 0), CVec3(1, 0, 0)), std::invalid_argument);
  EXPECT_THROW(classify_pair(Frequency(1, 0, 0), CVec3(0, 0, 0), Frequency(0, 1, 0), CVec3(1, 0, 0)), std::invalid_argument);
}

TEST(Rotation, Examples) {
  const Rotation r = rotation_geodesic(Vec3::UnitX(), Vec3::UnitY());
  EXPECT_LT((r.apply(Vec3(Vec3::UnitZ())) - Vec3::UnitZ()).norm(), 1e-15);
  EXPECT_NEAR(r.angle(), std::numbers::pi / 2, 1e-15);
  EXPECT_LT((r.axis() - Vec3::UnitZ()).norm(), 1e-15);
  EXPECT_THROW(rotation_geodesic(Vec3::UnitX(), -Vec3::UnitX()), std::invalid_argument);
  EXPECT_THROW(rotation_geodesic(Vec3::UnitX(), Vec3::UnitX()), std::invalid_argument);
  EXPECT_THROW(rotation_geodesic(Vec3(2, 0, 0), Vec3::UnitY()), std::invalid_argument);
}

TEST(Rotation, AgreesWithHouseholderOracle) {
  Rng rng(31);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 w1 = random_unit(rng), w2 = random_unit(rng);
    const Rotation r = rotation_geodesic(w1, w2);
    EXPECT_LT((r.apply(w1) - w2).norm(), 1e-12);
    EXPECT_LT((r.matrix() - oracle::householder_rotation(w1, w2)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(r.orthogonality_defect(), 1e-12);
    EXPECT_LT(((rotation_geodesic(w2, w1) * r).matrix() - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(std::cos(r.angle()), w1.dot(w2), 1e-12);
    EXPECT_LT((r.apply(Vec3(w1.cross(w2).normalized())) - w1.cross(w2).normalized()).norm(), 1e-12);
  }
}

TEST(Rotation, CarriesBeltramiVectorsAcrossASphere) {
  Rng rng(13);
  const auto pts = sphere_points(9);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (pts[i].parallel_to(pts[j])) continue;
      const Rotation r = rotation_geodesic(pts[i].to_vector().normalized(), pts[j].to_vector().normalized());
      for (auto s : {BeltramiSign::Plus, BeltramiSign::Minus})
        EXPECT_EQ(beltrami_sign(pts[j], r.apply(make_beltrami_coeff(pts[i], s, random_complex(rng)))), s);
    }
}

TEST(BeltramiSign, Examples) {
  EXPECT_EQ(beltrami_sign(Frequency(1, 0, 0), abc1()), BeltramiSign::Plus);
  EXPECT_EQ(beltrami_sign(Frequency(1, 0, 0), CVec3(0, 0.5 * I, 0.5)), BeltramiSign::Minus);
  EXPECT_EQ(beltrami_sign(Frequency(1, 0, 0), CVec3(0, 1, 0)), BeltramiSign::Neither);
  EXPECT_THROW(beltrami_sign(Frequency(), CVec3(0, 1, 0)), std::invalid_argument);
  EXPECT_THROW(beltrami_sign(Frequency(1, 0, 0), CVec3(0, 0, 0)), std::invalid_argument);
}

TEST(BeltramiSign, AgreesWithGeometricTest) {
  Rng rng(17);
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < 1000; ++i) {
    const Frequency n = random_frequency(rng);
    CVec3 u;
    if (coin(rng)) {
      u = make_beltrami_coeff(n, coin(rng) ? BeltramiSign::Plus : BeltramiSign::Minus, random_complex(rng));
      if (coin(rng)) u = helmholtz_project(n, u + 1e-4 * random_divergence_free(n, rng));
    } else {
      u = random_divergence_free(n, rng);
    }
    const BeltramiSign s = beltrami_sign(n, u, 1e-8);
    const int g = geometric_sign(n, u, 1e-8);
    EXPECT_EQ(s == BeltramiSign::Plus, g == 1);
    EXPECT_EQ(s == BeltramiSign::Minus, g == -1);
  }
}

TEST(MakeBeltrami, UnitNormalExample) {
  const CVec3 u = make_beltrami_coeff(Frequency(0, 0, 1), BeltramiSign::Plus, 0.5);
  EXPECT_LT((u - CVec3(0.5, 0.5 * I, 0)).norm(), 1e-15);
  EXPECT_LT((I * cross(Vec3(Vec3::UnitZ()), u) - u).norm(), 1e-15);
}

TEST(MakeBeltrami, SignNormAndRealAssembly) {
  Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    const Frequency n = random_frequency(rng);
    const Complex a = random_complex(rng);
    for (auto s : {BeltramiSign::Plus, BeltramiSign::Minus}) {
      const CVec3 u = make_beltrami_coeff(n, s, a);
      EXPECT_EQ(beltrami_sign(n, u), s);
      EXPECT_NEAR(u.norm(), std::sqrt(2.0) * std::abs(a), 1e-13);
      EXPECT_EQ(u, make_beltrami_coeff(n, s, a));
      const SpectralField f = FieldBuilder().add_pair(n, u).build();
      EXPECT_TRUE(validate(f).ok());
      const double lambda = (s == BeltramiSign::Plus ? 1 : -1) * n.norm();
      const SpectralField w = curl(f);
      for (const auto& [m, c] : w.modes()) EXPECT_LT((c - lambda * f.coefficient(m)).norm(), 1e-12 * u.norm() * n.norm());
    }
  }
}

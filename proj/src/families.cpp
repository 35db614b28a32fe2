#include "finmode/families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "finmode/classifier.hpp"
#include "finmode/geometry.hpp"

namespace finmode {

namespace {

const Complex I(0.0, 1.0);

Frequency ivec(int x, int y, int z) { return {x, y, z}; }

}  // namespace

SpectralField make_abc(double a, double b, double c) {
  FieldBuilder fb;
  if (a != 0.0) fb.add_pair(ivec(1, 0, 0), a * CVec3(0.0, -0.5 * I, 0.5));
  if (b != 0.0) fb.add_pair(ivec(0, 1, 0), b * CVec3(0.5, 0.0, -0.5 * I));
  if (c != 0.0) fb.add_pair(ivec(0, 0, 1), c * CVec3(-0.5 * I, 0.5, 0.0));
  return fb.build();
}

SpectralField make_perturbed_abc() {
  FieldBuilder fb;
  fb.add_pair(ivec(1, 0, 0), CVec3(0.0, -1.0 * I, 0.5));
  fb.add_pair(ivec(0, 1, 0), CVec3(0.5, 0.0, -0.5 * I));
  fb.add_pair(ivec(0, 0, 1), CVec3(-0.5 * I, 0.5, 0.0));
  return fb.build();
}

SpectralField make_tetrahedron() {
  const Complex f = 1.0 / (2.0 * I);
  FieldBuilder fb;
  for (int s : {1, -1}) {
    fb.set(ivec(s, s, 1), f * double(s) * CVec3(1.0, -1.0, 0.0));
    fb.set(ivec(s, -s, -1), f * double(s) * CVec3(1.0, 1.0, 0.0));
  }
  return fb.real_valued(false).build();
}

Complex random_complex(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  const double im = g(rng);
  return {re, im};
}

Vec3 random_unit(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  while (true) {
    const double x = g(rng), y = g(rng), z = g(rng);
    const Vec3 v(x, y, z);
    if (v.norm() > 1e-3) return v.normalized();
  }
}

CVec3 random_divergence_free(const Frequency& n, Rng& rng) {
  CVec3 v;
  for (int k = 0; k < 3; ++k) v(k) = random_complex(rng);
  return helmholtz_project(n, v);
}

SpectralField make_line(const Frequency& direction, int harmonics, Rng& rng) {
  if (direction.is_zero()) throw std::invalid_argument("make_line: zero direction");
  if (harmonics < 1) throw std::invalid_argument("make_line: harmonics must be positive");
  FieldBuilder fb;
  for (int k = 1; k <= harmonics; ++k) {
    const Frequency n = Rational(k) * direction;
    fb.add_pair(n, random_divergence_free(n, rng));
  }
  return fb.build();
}

namespace {

// Two independent integer vectors spanning the plane orthogonal to `normal`.
std::pair<Frequency, Frequency> plane_lattice(const Frequency& normal) {
  int k = 0;
  for (int j = 1; j < 3; ++j)
    if (abs(normal[j]) < abs(normal[k])) k = j;
  Frequency ek;
  if (k == 0) ek = ivec(1, 0, 0);
  if (k == 1) ek = ivec(0, 1, 0);
  if (k == 2) ek = ivec(0, 0, 1);
  const Frequency a = normal.cross(ek);
  const Frequency b = normal.cross(a);
  return {a, b};
}

}  // namespace

SpectralField make_planar_perp(const Frequency& normal, int modes, Rng& rng) {
  if (normal.is_zero()) throw std::invalid_argument("make_planar_perp: zero normal");
  if (modes < 4 || modes % 2 != 0) throw std::invalid_argument("make_planar_perp: modes must be even and at least 4");
  const auto [a, b] = plane_lattice(normal);
  std::uniform_int_distribution<int> coef(-2, 2);
  const Vec3 e = PlanarFrame::from_plane_normal(normal).normal();
  std::vector<Frequency> list;
  for (int attempt = 0; attempt < 1000 && (list.empty() || collinear_with_origin(list)); ++attempt) {
    std::set<Frequency> chosen;
    for (int guard = 0; int(chosen.size()) * 2 < modes && guard < 10000; ++guard) {
      Frequency n = Rational(coef(rng)) * a + Rational(coef(rng)) * b;
      if (n.is_zero()) continue;
      chosen.insert(lex_positive(n) ? n : -n);
    }
    list.assign(chosen.begin(), chosen.end());
  }
  if (list.empty() || collinear_with_origin(list)) throw std::runtime_error("make_planar_perp: could not draw frequencies");
  FieldBuilder fb;
  for (const auto& n : list) fb.add_pair(n, random_complex(rng) * to_complex(e));
  return fb.build();
}

std::vector<Frequency> rational_circle(const Frequency& normal, int p) {
  if (normal.is_zero()) throw std::invalid_argument("rational_circle: zero normal");
  if (p < 4 || p % 2 != 0) throw std::invalid_argument("rational_circle: p must be even and at least 4");
  const auto [a, b] = plane_lattice(normal);
  const Rational m = normal.norm2();
  std::vector<Rational> ts{0, 1, -1};
  for (int k = 2; k <= 12; ++k) {
    ts.push_back(Rational(1, k));
    ts.push_back(Rational(-1, k));
    ts.push_back(Rational(k));
    ts.push_back(Rational(-k));
  }
  std::vector<Frequency> dirs;
  for (const auto& t : ts) {
    if (int(dirs.size()) * 2 >= p) break;
    const Rational den = Rational(1) + m * t * t;
    const Rational x = (Rational(1) - m * t * t) / den;
    const Rational y = Rational(2) * t / den;
    const Frequency pt = x * a + y * b;
    bool fresh = true;
    for (const auto& d : dirs) fresh = fresh && !d.parallel_to(pt);
    if (fresh) dirs.push_back(pt);
  }
  if (int(dirs.size()) * 2 < p) throw std::runtime_error("rational_circle: not enough rational points");
  std::vector<Frequency> out;
  for (const auto& d : dirs) {
    out.push_back(d);
    out.push_back(-d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

SpectralField make_planar_q(const Frequency& normal, int p, const std::vector<double>& q,
                            const std::optional<std::vector<Complex>>& alpha) {
  const std::vector<Frequency> circle = rational_circle(normal, p);
  std::vector<Frequency> positive;
  for (const auto& n : circle)
    if (lex_positive(n)) positive.push_back(n);
  if (alpha && alpha->size() != positive.size())
    throw std::invalid_argument("make_planar_q: need one amplitude per lexicographically positive circle point");
  PlanarDecomposition dec;
  dec.normal = lex_positive(normal) ? normal : -normal;
  const PlanarFrame frame = PlanarFrame::from_plane_normal(dec.normal);
  dec.e_perp = frame.normal();
  for (std::size_t j = 0; j < positive.size(); ++j) {
    const Complex a = alpha ? (*alpha)[j] : Complex(0.0, -1.0);
    dec.circle.push_back(positive[j]);
    dec.alpha.push_back(a);
    dec.circle.push_back(-positive[j]);
    dec.alpha.push_back(-std::conj(a));
  }
  QPolynomial poly;
  poly.coefficients = q;
  const ScalarModes perp = reconstruct_u_perp(dec, poly);
  std::map<Frequency, CVec3> u;
  for (std::size_t j = 0; j < dec.circle.size(); ++j)
    u[dec.circle[j]] += dec.alpha[j] * to_complex(frame.tangent(dec.circle[j]));
  for (const auto& [n, c] : perp) u[n] += c * to_complex(dec.e_perp);
  FieldBuilder fb;
  for (const auto& [n, c] : u)
    if (lex_positive(n)) fb.add_pair(n, c);
  return fb.build(1e-14);
}

SpectralField make_planar_q_random(const Frequency& normal, int p, const std::vector<double>& q, Rng& rng) {
  std::uniform_real_distribution<double> mag(0.5, 1.5), phase(0.0, 2.0 * std::numbers::pi);
  std::vector<Complex> alpha;
  for (int j = 0; j < p / 2; ++j) alpha.push_back(std::polar(mag(rng), phase(rng)));
  return make_planar_q(normal, p, q, alpha);
}

std::vector<Frequency> sphere_points(int radius2) {
  std::vector<Frequency> out;
  const int r = int(std::sqrt(double(radius2))) + 1;
  for (int x = -r; x <= r; ++x)
    for (int y = -r; y <= r; ++y)
      for (int z = -r; z <= r; ++z)
        if (x * x + y * y + z * z == radius2) {
          const Frequency n = ivec(x, y, z);
          if (lex_positive(n)) out.push_back(n);
        }
  return out;
}

SpectralField make_beltrami_random(int modes, BeltramiSign sign, Rng& rng) {
  if (modes < 6 || modes % 2 != 0) throw std::invalid_argument("make_beltrami_random: modes must be even and at least 6");
  if (sign == BeltramiSign::Neither) throw std::invalid_argument("make_beltrami_random: sign must be plus or minus");
  const int pairs = modes / 2;
  std::vector<int> radii;
  for (int r2 : {3, 5, 6, 9, 11, 14, 17, 18, 21, 22, 26, 27, 29, 30, 33, 34, 35, 38, 41, 42, 45, 49, 50})
    if (int(sphere_points(r2).size()) >= pairs) radii.push_back(r2);
  std::uniform_int_distribution<std::size_t> pick_r(0, radii.size() - 1);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    auto pts = sphere_points(radii[pick_r(rng)]);
    std::shuffle(pts.begin(), pts.end(), rng);
    pts.resize(pairs);
    std::vector<Frequency> all;
    for (const auto& n : pts) {
      all.push_back(n);
      all.push_back(-n);
    }
    if (support_plane_normal(all) || collinear_with_origin(all)) continue;
    FieldBuilder fb;
    for (const auto& n : pts) fb.add_pair(n, make_beltrami_coeff(n, sign, random_complex(rng)));
    return fb.build();
  }
  throw std::runtime_error("make_beltrami_random: no non-coplanar draw");
}

SpectralField make_random_field(int modes, int range, Rng& rng) {
  if (modes < 4 || modes % 2 != 0) throw std::invalid_argument("make_random_field: modes must be even and at least 4");
  std::uniform_int_distribution<int> c(-range, range);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::set<Frequency> chosen;
    int guard = 0;
    while (int(chosen.size()) * 2 < modes && ++guard < 10000) {
      Frequency n = ivec(c(rng), c(rng), c(rng));
      if (n.is_zero()) continue;
      if (!lex_positive(n)) n = -n;
      chosen.insert(n);
    }
    std::vector<Frequency> all;
    for (const auto& n : chosen) {
      all.push_back(n);
      all.push_back(-n);
    }
    if (int(all.size()) != modes || collinear_with_origin(all)) continue;
    FieldBuilder fb;
    for (const auto& n : chosen) fb.add_pair(n, random_divergence_free(n, rng));
    return fb.build();
  }
  throw std::runtime_error("make_random_field: could not draw a non-collinear support");
}

}  // namespace finmode

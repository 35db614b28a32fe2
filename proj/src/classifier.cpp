#include "finmode/classifier.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "finmode/dynamics.hpp"

namespace finmode {

namespace {

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

// Integer direction with coprime components, lexicographically positive.
Frequency primitive(const Frequency& n) {
  if (n.is_zero()) return n;
  std::int64_t l = 1;
  for (const auto& c : n.components()) l = std::lcm(l, c.den());
  std::array<Rational, 3> v;
  std::int64_t g = 0;
  for (int k = 0; k < 3; ++k) {
    v[k] = n[k] * Rational(l);
    g = gcd64(g, v[k].num());
  }
  Frequency p(v[0] / Rational(g), v[1] / Rational(g), v[2] / Rational(g));
  return lex_positive(p) ? p : -p;
}

std::string describe(const Violation& v) {
  std::ostringstream os;
  os << to_string(v.kind) << " at " << v.n.to_string() << " (defect " << v.defect << ")";
  return os.str();
}

void require_classifiable(const SpectralField& field, double tol) {
  if (!field.real_valued()) throw RefusesComplexField();
  if (field.zero_mode()) throw std::invalid_argument("classifier expects a mean-zero field; apply remove_mean_drift first");
  const auto report = validate(field, tol);
  if (!report.ok()) throw std::invalid_argument("invalid field: " + describe(report.violations.front()));
}

NonSolutionCertificate non_solution(const SpectralField& field, std::string reason) {
  const auto r = stationarity_residual(field);
  return {r.norm, r.worst, std::move(reason)};
}

bool is_p3(const Frequency& normal) { return normal[0].is_zero() && normal[1].is_zero(); }

// Counterclockwise order about `normal`, starting from the lexicographically smallest point.
std::vector<Frequency> order_on_circle(std::vector<Frequency> pts, const Frequency& normal) {
  const PlaneBasis basis = PlaneBasis::from_support(pts);
  const bool flip = basis.normal().dot(normal).sign() < 0;
  auto key = [&](const Frequency& n) {
    Point2 p = basis.coords(n);
    if (flip) p.y = -p.y;
    return p;
  };
  auto half = [](const Point2& p) { return (p.y.sign() > 0 || (p.y.is_zero() && p.x.sign() > 0)) ? 0 : 1; };
  std::sort(pts.begin(), pts.end(), [&](const Frequency& a, const Frequency& b) {
    const Point2 pa = key(a), pb = key(b);
    const int ha = half(pa), hb = half(pb);
    if (ha != hb) return ha < hb;
    return (pa.x * pb.y - pa.y * pb.x).sign() > 0;
  });
  auto first = std::min_element(pts.begin(), pts.end());
  std::rotate(pts.begin(), first, pts.end());
  return pts;
}

ScalarModes convolve(const ScalarModes& a, const ScalarModes& b) {
  ScalarModes out;
  for (const auto& [na, xa] : a)
    for (const auto& [nb, xb] : b) out[na + nb] += xa * xb;
  return out;
}

FlowCertificate classify_structure(const SpectralField& field, double tol) {
  const auto support = field.support();
  if (support.empty()) return LineCertificate{Frequency{}};
  if (collinear_with_origin(support)) {
    const Frequency smallest = *std::min_element(support.begin(), support.end(), [](const Frequency& a, const Frequency& b) {
      const bool pa = lex_positive(a), pb = lex_positive(b);
      if (pa != pb) return pa;
      return a < b;
    });
    return LineCertificate{primitive(smallest)};
  }
  const double scale = field.max_coefficient_norm();
  if (auto normal = support_plane_normal(support)) {
    const Vec3 e = normal->to_vector().normalized();
    bool all_perp = true;
    for (const auto& [n, u] : field.modes())
      if ((u - bdot(u, e) * to_complex(e)).norm() > tol * scale) all_perp = false;
    if (all_perp) return PlanarPerpCertificate{*normal};
    try {
      PlanarDecomposition dec = decompose_planar(field, *normal, tol);
      QPolynomial q = extract_Q(dec, dec.u_perp, tol);
      std::optional<BeltramiSign> also;
      if (q.degree() == 1 && std::abs(std::abs(q.coefficients[0]) - 1.0) <= tol) {
        const BeltramiSign s = q.coefficients[0] > 0 ? BeltramiSign::Plus : BeltramiSign::Minus;
        bool uniform = true;
        for (const auto& [n, u] : field.modes()) uniform = uniform && beltrami_sign(n, u, tol) == s;
        if (uniform) also = s;
      }
      return PlanarQCertificate{std::move(dec), std::move(q), also};
    } catch (const NotRepresentable& e) {
      return non_solution(field, std::string("planar field is not of the Q(omega) form: ") + e.what());
    }
  }
  const Rational r2 = support.front().norm2();
  for (const auto& n : support)
    if (n.norm2() != r2) return non_solution(field, "three-dimensional support does not lie on one sphere");
  std::optional<BeltramiSign> sign;
  for (const auto& [n, u] : field.modes()) {
    const BeltramiSign s = beltrami_sign(n, u, tol);
    if (s == BeltramiSign::Neither) return non_solution(field, "coefficient at " + n.to_string() + " is not a Beltrami vector");
    if (sign && *sign != s) return non_solution(field, "Beltrami signs are mixed");
    sign = s;
  }
  const double r = std::sqrt(r2.to_double());
  return BeltramiCertificate{*sign == BeltramiSign::Plus ? r : -r, *sign};
}

}  // namespace

ResidualReport stationarity_residual(const SpectralField& field) {
  ResidualReport report;
  report.residual = nonlinear_term(field);
  const double u = field.max_coefficient_norm();
  const double k = field.max_frequency_norm();
  for (const auto& [n, r] : report.residual) {
    const double a = r.norm();
    if (a > report.absolute) {
      report.absolute = a;
      report.worst = n;
    }
  }
  const double denom = u * u * k;
  report.norm = denom > 0.0 ? report.absolute / denom : 0.0;
  return report;
}

ScalarModes PlanarDecomposition::vorticity() const {
  ScalarModes w;
  for (std::size_t j = 0; j < circle.size(); ++j) w[circle[j]] = Complex(0.0, 1.0) * alpha[j];
  return w;
}

double QPolynomial::operator()(double w) const {
  double acc = 0.0;
  for (std::size_t k = coefficients.size(); k-- > 0;) acc = (acc + coefficients[k]) * w;
  return acc;
}

std::optional<Frequency> support_plane_normal(const std::vector<Frequency>& support) {
  if (collinear_with_origin(support)) return std::nullopt;
  const PlaneBasis basis = PlaneBasis::from_support(support);
  for (const auto& n : support)
    if (!basis.contains(n)) return std::nullopt;
  return primitive(basis.normal());
}

PlanarDecomposition decompose_planar(const SpectralField& field, const Frequency& normal, double tol) {
  PlanarDecomposition dec;
  dec.normal = lex_positive(normal) ? normal : -normal;
  const PlanarFrame frame = PlanarFrame::from_plane_normal(dec.normal);
  dec.e_perp = frame.normal();
  dec.scale = field.max_coefficient_norm();
  const CVec3 e = to_complex(dec.e_perp);
  ModeMap par;
  std::vector<Frequency> horizontal;
  for (const auto& [n, u] : field.modes()) {
    if (!normal.dot(n).is_zero()) throw NotRepresentable("frequency " + n.to_string() + " is off the plane", 0, n);
    const Complex perp = bdot(u, dec.e_perp);
    const CVec3 p = u - perp * e;
    if (perp != Complex(0.0)) dec.u_perp.emplace(n, perp);
    if (p.norm() > tol * dec.scale) {
      par.emplace(n, p);
      horizontal.push_back(n);
    }
  }
  dec.u_par = SpectralField(std::move(par));
  if (horizontal.empty()) throw NotRepresentable("no horizontal component", 0, std::nullopt);
  dec.radius2 = horizontal.front().norm2();
  for (const auto& n : horizontal)
    if (n.norm2() != dec.radius2)
      throw NotRepresentable("horizontal support is not on a single circle", 0, n);
  if (horizontal.size() < 4) throw NotRepresentable("horizontal support has fewer than 4 points", 0, horizontal.front());
  dec.radius = std::sqrt(dec.radius2.to_double());
  dec.circle = order_on_circle(horizontal, dec.normal);
  for (const auto& n : dec.circle) dec.alpha.push_back(frame.parallel_component(n, field.coefficient(n)));
  return dec;
}

ScalarModes vorticity_power(const PlanarDecomposition& dec, int q) {
  const ScalarModes w = dec.vorticity();
  ScalarModes out{{Frequency{}, Complex(1.0)}};
  for (int k = 0; k < q; ++k) out = convolve(out, w);
  return out;
}

ScalarModes reconstruct_u_perp(const PlanarDecomposition& dec, const QPolynomial& q) {
  ScalarModes out;
  const ScalarModes w = dec.vorticity();
  ScalarModes power{{Frequency{}, Complex(1.0)}};
  for (int k = 1; k <= q.degree(); ++k) {
    power = convolve(power, w);
    const double beta = q.coefficients[k - 1];
    if (beta == 0.0) continue;
    for (const auto& [n, c] : power)
      if (!n.is_zero()) out[n] += beta * c;
  }
  return out;
}

QPolynomial extract_Q(const PlanarDecomposition& dec, const ScalarModes& u_perp, double tol) {
  const std::size_t p = dec.circle.size();
  if (p < 4 || dec.alpha.size() != p) throw NotRepresentable("decomposition has fewer than 4 circle points", 0, std::nullopt);
  double scale = dec.scale;
  for (const auto& a : dec.alpha) scale = std::max(scale, std::abs(a));
  for (const auto& [n, c] : u_perp) scale = std::max(scale, std::abs(c));

  const PlaneBasis basis = PlaneBasis::from_support(dec.circle);
  std::vector<Point2> pts;
  for (const auto& n : dec.circle) pts.push_back(basis.coords(n));
  const PlanarHull hull = convex_hull_planar(pts);
  if (!hull.origin_interior()) throw NotRepresentable("origin is not interior to the circle hull", 0, std::nullopt);

  ScalarModes rem = u_perp;
  std::map<int, double> betas;
  QPolynomial result;
  int prev = INT_MAX;
  while (true) {
    std::vector<std::pair<Frequency, Rational>> levels;
    for (const auto& [n, c] : rem) {
      if (std::abs(c) <= tol * scale) continue;
      if (n.is_zero()) continue;
      if (!basis.contains(n)) throw NotRepresentable("frequency " + n.to_string() + " is off the plane", 0, n);
      levels.emplace_back(n, minkowski_functional(hull, basis.coords(n)));
    }
    if (levels.empty()) break;
    const auto top = std::max_element(levels.begin(), levels.end(),
                                      [](const auto& a, const auto& b) { return a.second < b.second; });
    if (!top->second.is_integer())
      throw NotRepresentable("top level " + top->second.to_string() + " is not an integer", -1, top->first);
    const int q = int(top->second.num());
    if (q >= prev)
      throw NotRepresentable("remainder did not drop below level " + std::to_string(prev), q, top->first);

    std::vector<Frequency> ladder;
    std::set<Frequency> ladder_set;
    for (std::size_t j = 0; j < p; ++j) {
      const Frequency& a = dec.circle[j];
      const Frequency& b = dec.circle[(j + 1) % p];
      for (int k = 0; k < q; ++k) {
        const Frequency m = Rational(q - k) * a + Rational(k) * b;
        if (ladder_set.insert(m).second) ladder.push_back(m);
      }
    }
    for (const auto& [n, level] : levels)
      if (level == Rational(q) && !ladder_set.count(n))
        throw NotRepresentable("level-" + std::to_string(q) + " frequency " + n.to_string() + " is off the ladder", q, n);

    const ScalarModes power = vorticity_power(dec, q);
    const Frequency& anchor = ladder.front();
    const Complex c0 = power.at(anchor);
    auto it = rem.find(anchor);
    const Complex r0 = it == rem.end() ? Complex(0.0) : it->second;
    if (std::abs(r0) <= tol * scale)
      throw NotRepresentable("ladder endpoint " + anchor.to_string() + " is missing", q, anchor);
    const Complex beta = r0 / c0;
    if (!(std::abs(beta.imag()) < tol * std::abs(beta)))
      throw NotRepresentable("beta_" + std::to_string(q) + " is not real", q, anchor);
    const double b = beta.real();
    for (const auto& m : ladder) {
      auto found = rem.find(m);
      const Complex have = found == rem.end() ? Complex(0.0) : found->second;
      const Complex want = b * power.at(m);
      if (std::abs(have - want) > tol * std::max(scale, std::abs(want)))
        throw NotRepresentable("ladder coefficient at " + m.to_string() + " breaks the binomial ratio", q, m);
    }
    for (const auto& [n, c] : power) {
      if (n.is_zero()) continue;
      rem[n] -= b * c;
    }
    betas[q] = b;
    result.ladder.push_back({q, beta, ladder});
    prev = q;
  }
  if (!betas.empty()) {
    result.coefficients.assign(betas.rbegin()->first, 0.0);
    for (const auto& [q, b] : betas) result.coefficients[q - 1] = b;
  }
  return result;
}

std::string family_name(const FlowCertificate& c) {
  switch (c.index()) {
    case 0: return "line";
    case 1: return "planar_perp";
    case 2: return "planar_q";
    case 3: return "beltrami";
    default: return "non_solution";
  }
}

std::string to_string(QClass c) {
  switch (c) {
    case QClass::AnyPolynomial: return "any_polynomial";
    case QClass::Linear: return "linear";
    case QClass::PlusMinusOmega: return "plus_minus_omega";
  }
  return "any_polynomial";
}

FlowCertificate classify_euler(const SpectralField& field, double tol) {
  require_classifiable(field, tol);
  FlowCertificate cert = classify_structure(field, tol);
  if (is_solution(cert)) {
    const auto r = stationarity_residual(field);
    if (!(r.norm < tol))
      throw InternalInconsistency(family_name(cert) + " certificate but stationarity residual " + std::to_string(r.norm) +
                                  " at " + (r.worst ? r.worst->to_string() : "?"));
  }
  return cert;
}

namespace {

double witness_time(const SpectralField& field, double nu, double omega) {
  const double k = field.max_frequency_norm();
  const double rate = std::abs(nu) * k * k + std::abs(omega);
  return rate > 0.0 ? 1.0 / rate : 1.0;
}

}  // namespace

NscCertificate classify_nsc(const SpectralField& field, double nu, double omega, double tol) {
  NscCertificate out;
  out.nu = nu;
  out.omega = omega;
  out.flow = classify_euler(field, tol);
  if (nu == 0.0 && omega == 0.0) {
    if (std::holds_alternative<PlanarQCertificate>(out.flow)) out.q_class = QClass::AnyPolynomial;
    return out;
  }
  auto reject = [&](const std::string& reason) {
    const double tw = witness_time(field, nu, omega);
    const auto r = stationarity_residual(nsc_linear_evolution(field, nu, omega, tw));
    out.flow = NonSolutionCertificate{r.norm, r.worst, reason};
    out.witness_time = tw;
    out.q_class.reset();
  };
  if (const auto* perp = std::get_if<PlanarPerpCertificate>(&out.flow)) {
    if (!(omega == 0.0 || is_p3(perp->normal))) reject("planar perpendicular flow needs Omega = 0 or the plane P3");
  } else if (const auto* pq = std::get_if<PlanarQCertificate>(&out.flow)) {
    const auto& q = pq->q;
    if (omega == 0.0 || is_p3(pq->decomposition.normal)) {
      if (nu == 0.0) {
        out.q_class = QClass::AnyPolynomial;
      } else if (q.degree() <= 1) {
        out.q_class = QClass::Linear;
      } else {
        reject("nonzero viscosity needs Q linear, got degree " + std::to_string(q.degree()));
      }
    } else if (q.degree() == 1 && std::abs(std::abs(q.coefficients[0]) - 1.0) <= tol) {
      out.q_class = QClass::PlusMinusOmega;
    } else {
      reject("rotation off the plane P3 needs Q = omega or Q = -omega");
    }
  }
  return out;
}

namespace {

Verification fail(std::string defect) { return {false, std::move(defect)}; }

Verification check_residual(const SpectralField& field, double tol) {
  const auto r = stationarity_residual(field);
  if (!(r.norm < tol)) {
    std::ostringstream os;
    os << "stationarity residual " << r.norm << " at " << (r.worst ? r.worst->to_string() : "?");
    return fail(os.str());
  }
  return {};
}

Verification verify_line(const SpectralField& field, const LineCertificate& c) {
  if (c.direction.is_zero()) {
    if (!field.empty()) return fail("zero direction for a nonempty field");
    return {};
  }
  for (const auto& n : field.support())
    if (!n.parallel_to(c.direction)) return fail("frequency " + n.to_string() + " is off the line");
  return {};
}

Verification verify_perp(const SpectralField& field, const PlanarPerpCertificate& c, double tol) {
  if (c.normal.is_zero()) return fail("zero plane normal");
  const Vec3 e = c.normal.to_vector().normalized();
  const double scale = field.max_coefficient_norm();
  for (const auto& [n, u] : field.modes()) {
    if (!c.normal.dot(n).is_zero()) return fail("frequency " + n.to_string() + " is off the plane");
    if ((u - bdot(u, e) * to_complex(e)).norm() > tol * scale)
      return fail("coefficient at " + n.to_string() + " has a horizontal component");
  }
  return {};
}

Verification verify_planar_q(const SpectralField& field, const PlanarQCertificate& c, double tol) {
  const auto& dec = c.decomposition;
  if (dec.circle.size() < 4 || dec.alpha.size() != dec.circle.size()) return fail("circle has fewer than 4 points");
  const PlanarFrame frame = PlanarFrame::from_plane_normal(dec.normal);
  if ((frame.normal() - dec.e_perp).norm() > 1e-12) return fail("e_perp does not match the plane normal");
  const double scale = field.max_coefficient_norm();
  const CVec3 e = to_complex(frame.normal());
  std::set<Frequency> circle(dec.circle.begin(), dec.circle.end());
  for (const auto& n : dec.circle)
    if (n.norm2() != dec.radius2) return fail("circle point " + n.to_string() + " has the wrong radius");
  for (std::size_t j = 0; j < dec.circle.size(); ++j) {
    const Complex a = frame.parallel_component(dec.circle[j], field.coefficient(dec.circle[j]));
    if (std::abs(a - dec.alpha[j]) > tol * scale)
      return fail("horizontal amplitude mismatch at " + dec.circle[j].to_string());
  }
  for (const auto& [n, u] : field.modes()) {
    if (!dec.normal.dot(n).is_zero()) return fail("frequency " + n.to_string() + " is off the plane");
    if (circle.count(n)) continue;
    if ((u - bdot(u, frame.normal()) * e).norm() > tol * scale)
      return fail("horizontal component off the circle at " + n.to_string());
  }
  const ScalarModes rebuilt = reconstruct_u_perp(dec, c.q);
  std::set<Frequency> keys;
  for (const auto& [n, v] : rebuilt) keys.insert(n);
  for (const auto& n : field.support()) keys.insert(n);
  for (const auto& n : keys) {
    auto it = rebuilt.find(n);
    const Complex want = it == rebuilt.end() ? Complex(0.0) : it->second;
    const Complex have = bdot(field.coefficient(n), frame.normal());
    if (std::abs(have - want) > tol * scale) {
      std::ostringstream os;
      os << "vertical component at " << n.to_string() << " differs from Q(omega) by " << std::abs(have - want);
      return fail(os.str());
    }
  }
  return {};
}

Verification verify_beltrami(const SpectralField& field, const BeltramiCertificate& c, double tol) {
  if (c.sign == BeltramiSign::Neither) return fail("sign must be plus or minus");
  if ((c.lambda > 0) != (c.sign == BeltramiSign::Plus)) return fail("lambda sign disagrees with the Beltrami sign");
  const double scale = field.max_coefficient_norm();
  for (const auto& [n, u] : field.modes()) {
    if (std::abs(n.norm() - std::abs(c.lambda)) > 1e-12 * n.norm())
      return fail("frequency " + n.to_string() + " is not on the sphere |n| = |lambda|");
    if (beltrami_sign(n, u, tol) != c.sign) return fail("coefficient at " + n.to_string() + " is not " + to_string(c.sign));
  }
  const SpectralField w = curl(field);
  for (const auto& [n, u] : field.modes())
    if ((w.coefficient(n) - c.lambda * u).norm() > tol * std::abs(c.lambda) * scale)
      return fail("curl differs from lambda u at " + n.to_string());
  return {};
}

}  // namespace

Verification verify_certificate(const SpectralField& field, const FlowCertificate& certificate, double tol) {
  try {
    if (!field.real_valued()) return fail("field is not real-valued");
    if (field.zero_mode()) return fail("field has a zero mode");
    const auto report = validate(field, tol);
    if (!report.ok()) return fail("invalid field: " + describe(report.violations.front()));
    if (const auto* ns = std::get_if<NonSolutionCertificate>(&certificate)) {
      const auto r = stationarity_residual(field);
      if (r.norm < tol) return fail("claimed non-solution but residual is below tolerance");
      if (std::abs(r.norm - ns->residual) > 1e-9 * std::max(1.0, r.norm)) return fail("residual does not match");
      return {};
    }
    Verification v;
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, LineCertificate>) v = verify_line(field, c);
          else if constexpr (std::is_same_v<T, PlanarPerpCertificate>) v = verify_perp(field, c, tol);
          else if constexpr (std::is_same_v<T, PlanarQCertificate>) v = verify_planar_q(field, c, tol);
          else if constexpr (std::is_same_v<T, BeltramiCertificate>) v = verify_beltrami(field, c, tol);
        },
        certificate);
    if (!v) return v;
    return check_residual(field, tol);
  } catch (const std::exception& e) {
    return fail(std::string("verification raised: ") + e.what());
  }
}

Verification verify_certificate(const SpectralField& field, const NscCertificate& certificate, double tol) {
  if (certificate.nu == 0.0 && certificate.omega == 0.0) return verify_certificate(field, certificate.flow, tol);
  try {
    if (const auto* ns = std::get_if<NonSolutionCertificate>(&certificate.flow)) {
      if (!certificate.witness_time) return verify_certificate(field, certificate.flow, tol);
      const auto r = stationarity_residual(nsc_linear_evolution(field, certificate.nu, certificate.omega, *certificate.witness_time));
      if (r.norm < tol) return fail("witness residual is below tolerance");
      if (std::abs(r.norm - ns->residual) > 1e-9 * std::max(1.0, r.norm)) return fail("witness residual does not match");
      return {};
    }
    Verification v = verify_certificate(field, certificate.flow, tol);
    if (!v) return v;
    if (const auto* perp = std::get_if<PlanarPerpCertificate>(&certificate.flow)) {
      if (certificate.omega != 0.0 && !is_p3(perp->normal)) return fail("planar perpendicular flow off P3 with Omega != 0");
    }
    if (const auto* pq = std::get_if<PlanarQCertificate>(&certificate.flow)) {
      if (!certificate.q_class) return fail("missing Q class");
      const int d = pq->q.degree();
      const bool p3 = certificate.omega == 0.0 || is_p3(pq->decomposition.normal);
      switch (*certificate.q_class) {
        case QClass::AnyPolynomial:
          if (!(p3 && certificate.nu == 0.0)) return fail("any-polynomial class needs nu = 0 and (Omega = 0 or P3)");
          break;
        case QClass::Linear:
          if (!p3 || d > 1) return fail("linear class needs (Omega = 0 or P3) and deg Q <= 1");
          break;
        case QClass::PlusMinusOmega:
          if (d != 1 || std::abs(std::abs(pq->q.coefficients[0]) - 1.0) > tol) return fail("Q is not +omega or -omega");
          break;
      }
    }
    const double tw = witness_time(field, certificate.nu, certificate.omega);
    const auto r = stationarity_residual(nsc_linear_evolution(field, certificate.nu, certificate.omega, tw));
    if (!(r.norm < tol)) return fail("nonlinear term reappears under the linear evolution");
    return {};
  } catch (const std::exception& e) {
    return fail(std::string("verification raised: ") + e.what());
  }
}

}  // namespace finmode

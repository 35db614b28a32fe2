#include "finmode/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "finmode/campaigns.hpp"
#include "finmode/certificate_io.hpp"
#include "finmode/classifier.hpp"
#include "finmode/dynamics.hpp"
#include "finmode/families.hpp"
#include "finmode/field_io.hpp"
#include "finmode/trajectory_io.hpp"

namespace finmode::cli {

using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) out.push_back(item);
  return out;
}

Rational parse_rational(const std::string& s) {
  try {
    std::size_t pos = 0;
    const auto slash = s.find('/');
    const long long num = std::stoll(s.substr(0, slash), &pos);
    if (pos != (slash == std::string::npos ? s.size() : slash)) throw UsageError("");
    if (slash == std::string::npos) return Rational(num);
    const std::string d = s.substr(slash + 1);
    const long long den = std::stoll(d, &pos);
    if (pos != d.size() || den == 0) throw UsageError("");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw UsageError("not a rational number: '" + s + "'");
  }
}

Frequency parse_frequency(const std::string& s) {
  const auto parts = split(s);
  if (parts.size() != 3) throw UsageError("expected three comma-separated components: '" + s + "'");
  return {parse_rational(parts[0]), parse_rational(parts[1]), parse_rational(parts[2])};
}

std::vector<double> parse_coefficients(const std::string& s) {
  std::vector<double> out;
  for (const auto& part : split(s)) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(part, &pos));
      if (pos != part.size()) throw UsageError("");
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + part + "'");
    }
  }
  return out;
}

BeltramiSign parse_sign(const std::string& s) {
  if (s == "plus" || s == "+") return BeltramiSign::Plus;
  if (s == "minus" || s == "-") return BeltramiSign::Minus;
  throw UsageError("sign must be plus or minus");
}

SpectralField load(const std::string& path, std::istream& in, ParseOptions options = {}) {
  try {
    if (path == "-") {
      std::stringstream buf;
      buf << in.rdbuf();
      return parse(buf.str(), options);
    }
    return read_field_file(path, options);
  } catch (const SchemaError& e) {
    throw UsageError((path == "-" ? std::string("stdin") : path) + ": " + e.what());
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

json violation_json(const Violation& v) {
  return {{"kind", to_string(v.kind)}, {"n", frequency_to_json(v.n)}, {"defect", v.defect}};
}

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream os(path);
  if (!os) throw UsageError("cannot open '" + path + "' for writing");
  body(os);
  if (!os) throw UsageError("error writing '" + path + "'");
}

struct MakeArgs {
  std::string kind;
  double a = 1.0, b = 1.0, c = 1.0;
  std::string normal = "0,0,1";
  std::string direction = "1,0,0";
  std::string q = "1";
  double q0 = 0.0;
  int p = 4;
  int modes = 0;
  int harmonics = 2;
  std::string sign = "plus";
  bool random_alpha = false;
};

struct ClassifyArgs {
  std::string file;
  double nu = 0.0, omega = 0.0, tol = kDefaultTol;
};

struct SimulateArgs {
  std::string file;
  double t_end = 1.0, dt = 1e-3, nu = 0.0, omega = 0.0;
  std::string truncation = "default";
  std::string jsonl, csv;
  std::size_t stride = 1;
};

struct VerifyArgs {
  std::string lemma;
  int trials = 1000;
};

int cmd_make(const MakeArgs& m, unsigned long long seed, std::ostream& out, std::ostream& err) {
  Rng rng(seed);
  const bool random = m.kind == "line" || m.kind == "planar-perp" || m.kind == "beltrami-random" ||
                      (m.kind == "planar-q" && m.random_alpha);
  if (random) err << "seed: " << seed << "\n";
  SpectralField field;
  try {
    if (m.kind == "abc") {
      field = make_abc(m.a, m.b, m.c);
    } else if (m.kind == "tetrahedron") {
      field = make_tetrahedron();
    } else if (m.kind == "line") {
      field = make_line(parse_frequency(m.direction), m.harmonics, rng);
    } else if (m.kind == "planar-perp") {
      field = make_planar_perp(parse_frequency(m.normal), m.modes ? m.modes : 8, rng);
    } else if (m.kind == "planar-q") {
      if (m.q0 != 0.0) throw UsageError("Q must have zero constant term (got --q0 " + std::to_string(m.q0) + ")");
      const auto q = parse_coefficients(m.q);
      const Frequency normal = parse_frequency(m.normal);
      field = m.random_alpha ? make_planar_q_random(normal, m.p, q, rng) : make_planar_q(normal, m.p, q);
    } else if (m.kind == "beltrami-random") {
      field = make_beltrami_random(m.modes ? m.modes : 10, parse_sign(m.sign), rng);
    } else {
      throw UsageError("unknown kind '" + m.kind + "'");
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  out << serialize(field);
  return kExitOk;
}

int cmd_validate(const std::string& file, double tol, std::istream& in, std::ostream& out) {
  ParseOptions options;
  options.verify_pairs = false;
  const SpectralField field = load(file, in, options);
  const ValidationReport report = validate(field, tol);
  json violations = json::array();
  for (const auto& v : report.violations) violations.push_back(violation_json(v));
  json doc = {{"ok", report.ok()}, {"modes", field.size()}, {"real_valued", field.real_valued()},
              {"violations", violations}};
  out << doc.dump(2) << "\n";
  return report.ok() ? kExitOk : kExitVerdict;
}

int cmd_classify(const ClassifyArgs& c, bool nsc, std::istream& in, std::ostream& out) {
  SpectralField field = load(c.file, in);
  if (!field.real_valued()) throw UsageError("the classifier refuses complex-valued fields");
  std::optional<Vec3> removed;
  if (field.zero_mode()) {
    removed = *field.zero_mode();
    field = remove_mean_drift(field, 0.0, c.omega).field;
  }
  const auto report = validate(field, c.tol);
  if (!report.ok()) {
    const auto& v = report.violations.front();
    throw UsageError("invalid field: " + to_string(v.kind) + " at " + v.n.to_string());
  }
  json doc;
  bool solution = false;
  try {
    if (nsc) {
      const NscCertificate cert = classify_nsc(field, c.nu, c.omega, c.tol);
      doc = certificate_to_json(cert);
      solution = is_solution(cert.flow);
    } else {
      const FlowCertificate cert = classify_euler(field, c.tol);
      doc = certificate_to_json(cert);
      solution = is_solution(cert);
    }
  } catch (const InternalInconsistency& e) {
    throw UsageError(std::string("internal inconsistency: ") + e.what());
  }
  if (removed) doc["removed_zero_mode"] = {(*removed)(0), (*removed)(1), (*removed)(2)};
  out << doc.dump(2) << "\n";
  return solution ? kExitOk : kExitVerdict;
}

int cmd_simulate(const SimulateArgs& s, unsigned threads, std::istream& in, std::ostream& out) {
  if (!(s.dt > 0.0) || !(s.t_end >= 0.0)) throw UsageError("need dt > 0 and t-end >= 0");
  if (s.stride == 0) throw UsageError("stride must be positive");
  SpectralField field = load(s.file, in);
  if (!field.real_valued()) throw UsageError("simulation needs a real-valued field");
  std::optional<MeanDrift> drift;
  if (field.zero_mode()) {
    auto r = remove_mean_drift(field, 0.0, s.omega);
    field = std::move(r.field);
    drift = r.drift;
  }
  const auto support = field.support();
  std::vector<Frequency> truncation;
  if (s.truncation == "default") truncation = default_truncation(support);
  else if (s.truncation == "extended") truncation = extended_support(support);
  else if (s.truncation == "support") truncation = support;
  else throw UsageError("truncation must be default, extended or support");

  const GalerkinSystem system(truncation, s.nu, s.omega);
  IntegrateOptions options;
  options.t_end = s.t_end;
  options.dt = s.dt;
  options.snapshot_stride = s.stride;
  options.threads = threads;
  const Trajectory traj = integrate(system, field, options);

  if (!s.jsonl.empty()) write_file(s.jsonl, [&](std::ostream& os) { write_trajectory_jsonl(os, traj); });
  if (!s.csv.empty()) write_file(s.csv, [&](std::ostream& os) { write_diagnostics_csv(os, traj); });

  const auto& first = traj.diagnostics.front();
  const auto& last = traj.diagnostics.back();
  double max_drift = 0.0;
  for (const auto& d : traj.diagnostics) max_drift = std::max(max_drift, d.realness_drift);
  json growth = json::array();
  for (const auto& e : support_growth_report(traj, support))
    growth.push_back({{"n", frequency_to_json(e.n)}, {"time", e.time}, {"peak", e.peak}});
  json doc = {{"truncation", s.truncation},
              {"truncation_size", truncation.size()},
              {"steps", traj.steps},
              {"t_final", last.t},
              {"initial_energy", first.energy},
              {"final_energy", last.energy},
              {"energy_relative_change", first.energy > 0 ? (last.energy - first.energy) / first.energy : 0.0},
              {"energy_decay_rate", json(nullptr)},
              {"max_realness_drift", max_drift},
              {"aborted", traj.abort_reason ? json(*traj.abort_reason) : json(nullptr)},
              {"support_growth", growth}};
  if (first.energy > 0 && last.energy > 0 && last.t > 0)
    doc["energy_decay_rate"] = -std::log(last.energy / first.energy) / last.t;
  if (drift) doc["removed_zero_mode"] = {drift->u0_star(0), drift->u0_star(1), drift->u0_star(2)};
  out << doc.dump(2) << "\n";
  return traj.abort_reason ? kExitVerdict : kExitOk;
}

int cmd_verify(const VerifyArgs& v, unsigned long long seed, std::ostream& out, std::ostream& err) {
  const auto& names = campaign_names();
  if (std::find(names.begin(), names.end(), v.lemma) == names.end()) throw UsageError("unknown lemma '" + v.lemma + "'");
  if (v.trials < 1) throw UsageError("trials must be at least 1");
  err << "seed: " << seed << "\n";
  const CampaignResult r = run_campaign(v.lemma, v.trials, seed);
  json doc = {{"lemma", r.lemma},
              {"trials", r.trials},
              {"failures", r.failures},
              {"max_deviation", r.max_deviation},
              {"passed", r.passed()},
              {"counterexample", r.counterexample ? json(*r.counterexample) : json(nullptr)}};
  out << doc.dump(2) << "\n";
  return r.passed() ? kExitOk : kExitVerdict;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-mode spectral flows: generation, validation, classification, simulation"};
  app.name("finmode");
  app.require_subcommand(1);
  unsigned threads = 1;
  app.add_option("--threads", threads, "worker threads for the nonlinear term")->check(CLI::Range(1u, 256u));

  unsigned long long seed = kDefaultSeed;

  MakeArgs m;
  auto* make = app.add_subcommand("make", "emit a field JSON document");
  make->add_option("kind", m.kind, "abc | tetrahedron | line | planar-perp | planar-q | beltrami-random")->required();
  make->add_option("--A", m.a);
  make->add_option("--B", m.b);
  make->add_option("--C", m.c);
  make->add_option("--normal", m.normal, "plane normal a,b,c (rationals p/q allowed)");
  make->add_option("--direction", m.direction, "line direction a,b,c");
  make->add_option("--q", m.q, "Q coefficients beta_1,beta_2,...");
  make->add_option("--q0", m.q0, "constant term of Q (must be 0)");
  make->add_option("--p", m.p, "number of circle frequencies");
  make->add_option("--modes", m.modes, "support size");
  make->add_option("--harmonics", m.harmonics);
  make->add_option("--sign", m.sign, "plus | minus");
  make->add_flag("--random-alpha", m.random_alpha, "random horizontal amplitudes");
  make->add_option("--seed", seed);

  std::string validate_file;
  double validate_tol = kDefaultTol;
  auto* val = app.add_subcommand("validate", "check the invariants of a field");
  val->add_option("file", validate_file, "field JSON, or - for stdin")->required();
  val->add_option("--tol", validate_tol);

  ClassifyArgs c;
  auto* cls = app.add_subcommand("classify", "emit a structure certificate");
  cls->add_option("file", c.file, "field JSON, or - for stdin")->required();
  auto* nu_opt = cls->add_option("--nu", c.nu, "viscosity");
  auto* omega_opt = cls->add_option("--omega", c.omega, "Coriolis parameter");
  cls->add_option("--tol", c.tol);

  SimulateArgs s;
  auto* sim = app.add_subcommand("simulate", "integrate the Galerkin system with RK4");
  sim->add_option("file", s.file, "field JSON, or - for stdin")->required();
  sim->add_option("--t-end", s.t_end);
  sim->add_option("--dt", s.dt);
  sim->add_option("--nu", s.nu);
  sim->add_option("--omega", s.omega);
  sim->add_option("--truncation", s.truncation, "default | extended | support");
  sim->add_option("--jsonl", s.jsonl, "trajectory output path");
  sim->add_option("--csv", s.csv, "diagnostics output path");
  sim->add_option("--stride", s.stride, "snapshot every k steps");

  VerifyArgs v;
  auto* ver = app.add_subcommand("verify", "run a randomized lemma campaign");
  ver->add_option("lemma", v.lemma, "two-mode | rotation-loop | sip | beltrami-noninteraction | gauss-bonnet")
      ->required();
  ver->add_option("--trials", v.trials);
  ver->add_option("--seed", seed);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*make) return cmd_make(m, seed, out, err);
    if (*val) return cmd_validate(validate_file, validate_tol, in, out);
    if (*cls) return cmd_classify(c, nu_opt->count() > 0 || omega_opt->count() > 0, in, out);
    if (*sim) return cmd_simulate(s, threads, in, out);
    if (*ver) return cmd_verify(v, seed, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace finmode::cli

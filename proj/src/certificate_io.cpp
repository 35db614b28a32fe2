#include "finmode/certificate_io.hpp"

#include <cmath>

#include "finmode/field_io.hpp"

namespace finmode {

using nlohmann::json;

namespace {

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json optional_frequency(const std::optional<Frequency>& n) {
  return n ? frequency_to_json(*n) : json(nullptr);
}

const json& field(const json& doc, const std::string& key, const std::string& path) {
  if (!doc.is_object()) throw SchemaError(path, "expected an object");
  auto it = doc.find(key);
  if (it == doc.end()) throw SchemaError(path, "missing key '" + key + "'");
  return *it;
}

double number(const json& doc, const std::string& key, const std::string& path) {
  const json& v = field(doc, key, path);
  if (!v.is_number()) throw SchemaError(path + "." + key, "expected a number");
  return v.get<double>();
}

std::string text(const json& doc, const std::string& key, const std::string& path) {
  const json& v = field(doc, key, path);
  if (!v.is_string()) throw SchemaError(path + "." + key, "expected a string");
  return v.get<std::string>();
}

Complex complex_from_json(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw SchemaError(path, "expected [re, im]");
  return {v[0].get<double>(), v[1].get<double>()};
}

BeltramiSign sign_from_string(const std::string& s, const std::string& path) {
  if (s == "plus") return BeltramiSign::Plus;
  if (s == "minus") return BeltramiSign::Minus;
  throw SchemaError(path, "expected \"plus\" or \"minus\"");
}

QClass q_class_from_string(const std::string& s, const std::string& path) {
  for (QClass c : {QClass::AnyPolynomial, QClass::Linear, QClass::PlusMinusOmega})
    if (to_string(c) == s) return c;
  throw SchemaError(path, "unknown Q class '" + s + "'");
}

json payload(const LineCertificate& c) { return {{"direction", frequency_to_json(c.direction)}}; }

json payload(const PlanarPerpCertificate& c) { return {{"normal", frequency_to_json(c.normal)}}; }

json payload(const PlanarQCertificate& c) {
  const auto& dec = c.decomposition;
  json circle = json::array(), alpha = json::array(), ladder = json::array();
  for (const auto& n : dec.circle) circle.push_back(frequency_to_json(n));
  for (const auto& a : dec.alpha) alpha.push_back(complex_to_json(a));
  for (const auto& level : c.q.ladder) {
    json freqs = json::array();
    for (const auto& n : level.frequencies) freqs.push_back(frequency_to_json(n));
    ladder.push_back({{"q", level.q}, {"beta_raw", complex_to_json(level.beta_raw)}, {"frequencies", freqs}});
  }
  return {{"normal", frequency_to_json(dec.normal)},
          {"radius2", json::array({dec.radius2.num(), dec.radius2.den()})},
          {"circle", circle},
          {"alpha", alpha},
          {"q", c.q.coefficients},
          {"ladder", ladder},
          {"also_beltrami", c.also_beltrami ? json(to_string(*c.also_beltrami)) : json(nullptr)}};
}

json payload(const BeltramiCertificate& c) { return {{"lambda", c.lambda}, {"sign", to_string(c.sign)}}; }

json payload(const NonSolutionCertificate& c) {
  return {{"residual", c.residual}, {"worst", optional_frequency(c.worst)}, {"reason", c.reason}};
}

}  // namespace

json certificate_to_json(const FlowCertificate& certificate) {
  json out = {{"schema_version", kCertificateSchemaVersion}, {"family", family_name(certificate)}};
  std::visit([&](const auto& c) { out["payload"] = payload(c); }, certificate);
  return out;
}

json certificate_to_json(const NscCertificate& certificate) {
  return {{"schema_version", kCertificateSchemaVersion},
          {"nu", certificate.nu},
          {"omega", certificate.omega},
          {"q_class", certificate.q_class ? json(to_string(*certificate.q_class)) : json(nullptr)},
          {"witness_time", certificate.witness_time ? json(*certificate.witness_time) : json(nullptr)},
          {"certificate", certificate_to_json(certificate.flow)}};
}

FlowCertificate flow_certificate_from_json(const json& doc) {
  const json& version = field(doc, "schema_version", "$");
  if (!version.is_number_integer() || version.get<int>() != kCertificateSchemaVersion)
    throw SchemaError("schema_version", "unsupported schema version");
  const std::string family = text(doc, "family", "$");
  const json& p = field(doc, "payload", "$");
  const std::string path = "payload";
  if (family == "line") return LineCertificate{frequency_from_json(field(p, "direction", path), path + ".direction")};
  if (family == "planar_perp") return PlanarPerpCertificate{frequency_from_json(field(p, "normal", path), path + ".normal")};
  if (family == "beltrami")
    return BeltramiCertificate{number(p, "lambda", path), sign_from_string(text(p, "sign", path), path + ".sign")};
  if (family == "non_solution") {
    const json& w = field(p, "worst", path);
    std::optional<Frequency> worst;
    if (!w.is_null()) worst = frequency_from_json(w, path + ".worst");
    return NonSolutionCertificate{number(p, "residual", path), worst, text(p, "reason", path)};
  }
  if (family != "planar_q") throw SchemaError("family", "unknown family '" + family + "'");

  PlanarQCertificate c;
  auto& dec = c.decomposition;
  dec.normal = frequency_from_json(field(p, "normal", path), path + ".normal");
  dec.e_perp = PlanarFrame::from_plane_normal(dec.normal).normal();
  const json& circle = field(p, "circle", path);
  const json& alpha = field(p, "alpha", path);
  if (!circle.is_array() || !alpha.is_array() || circle.size() != alpha.size())
    throw SchemaError(path, "circle and alpha must be arrays of equal length");
  for (std::size_t j = 0; j < circle.size(); ++j) {
    dec.circle.push_back(frequency_from_json(circle[j], path + ".circle[" + std::to_string(j) + "]"));
    dec.alpha.push_back(complex_from_json(alpha[j], path + ".alpha[" + std::to_string(j) + "]"));
  }
  if (!dec.circle.empty()) {
    dec.radius2 = dec.circle.front().norm2();
    dec.radius = std::sqrt(dec.radius2.to_double());
  }
  const json& q = field(p, "q", path);
  if (!q.is_array()) throw SchemaError(path + ".q", "expected an array");
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (!q[k].is_number()) throw SchemaError(path + ".q[" + std::to_string(k) + "]", "expected a number");
    c.q.coefficients.push_back(q[k].get<double>());
  }
  const json& ladder = field(p, "ladder", path);
  if (!ladder.is_array()) throw SchemaError(path + ".ladder", "expected an array");
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    const std::string at = path + ".ladder[" + std::to_string(k) + "]";
    LadderLevel level;
    const json& q_level = field(ladder[k], "q", at);
    if (!q_level.is_number_integer()) throw SchemaError(at + ".q", "expected an integer");
    level.q = q_level.get<int>();
    level.beta_raw = complex_from_json(field(ladder[k], "beta_raw", at), at + ".beta_raw");
    const json& freqs = field(ladder[k], "frequencies", at);
    if (!freqs.is_array()) throw SchemaError(at + ".frequencies", "expected an array");
    for (std::size_t j = 0; j < freqs.size(); ++j)
      level.frequencies.push_back(frequency_from_json(freqs[j], at + ".frequencies[" + std::to_string(j) + "]"));
    c.q.ladder.push_back(std::move(level));
  }
  const json& also = field(p, "also_beltrami", path);
  if (!also.is_null()) {
    if (!also.is_string()) throw SchemaError(path + ".also_beltrami", "expected a string or null");
    c.also_beltrami = sign_from_string(also.get<std::string>(), path + ".also_beltrami");
  }
  return c;
}

NscCertificate nsc_certificate_from_json(const json& doc) {
  NscCertificate c;
  c.nu = number(doc, "nu", "$");
  c.omega = number(doc, "omega", "$");
  const json& q = field(doc, "q_class", "$");
  if (!q.is_null()) {
    if (!q.is_string()) throw SchemaError("q_class", "expected a string or null");
    c.q_class = q_class_from_string(q.get<std::string>(), "q_class");
  }
  const json& tw = field(doc, "witness_time", "$");
  if (!tw.is_null()) {
    if (!tw.is_number()) throw SchemaError("witness_time", "expected a number or null");
    c.witness_time = tw.get<double>();
  }
  c.flow = flow_certificate_from_json(field(doc, "certificate", "$"));
  return c;
}

}  // namespace finmode

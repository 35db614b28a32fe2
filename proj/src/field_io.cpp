#include "finmode/field_io.hpp"

#include <fstream>
#include <sstream>

namespace finmode {

using nlohmann::json;

namespace {

Rational rational_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw SchemaError(path, "expected [numerator, denominator]");
  for (std::size_t k = 0; k < 2; ++k) {
    if (!j[k].is_number_integer())
      throw SchemaError(path + "[" + std::to_string(k) + "]", "expected an integer");
  }
  const auto num = j[0].get<std::int64_t>();
  const auto den = j[1].get<std::int64_t>();
  if (den == 0) throw SchemaError(path, "denominator must be nonzero");
  try {
    return Rational(num, den);
  } catch (const std::exception& e) {
    throw SchemaError(path, e.what());
  }
}

Vec3 vec_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) throw SchemaError(path, "expected an array of 3 numbers");
  Vec3 v;
  for (std::size_t k = 0; k < 3; ++k) {
    if (!j[k].is_number())
      throw SchemaError(path + "[" + std::to_string(k) + "]", "expected a number");
    v(k) = j[k].get<double>();
  }
  return v;
}

json vec_to_json(const Vec3& v) { return json::array({v(0), v(1), v(2)}); }

}  // namespace

json frequency_to_json(const Frequency& n) {
  json arr = json::array();
  for (const auto& c : n.components()) arr.push_back(json::array({c.num(), c.den()}));
  return arr;
}

Frequency frequency_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) throw SchemaError(path, "expected 3 rational components");
  return {rational_from_json(j[0], path + "[0]"), rational_from_json(j[1], path + "[1]"),
          rational_from_json(j[2], path + "[2]")};
}

json field_to_json(const SpectralField& field) {
  json doc = json::object();
  doc["real_valued"] = field.real_valued();
  doc["zero_mode"] = field.zero_mode() ? vec_to_json(*field.zero_mode()) : json(nullptr);
  json modes = json::array();
  for (const auto& [n, u] : field.modes()) {
    json m = json::object();
    m["n"] = frequency_to_json(n);
    m["re"] = vec_to_json(u.real());
    m["im"] = vec_to_json(u.imag());
    modes.push_back(std::move(m));
  }
  doc["modes"] = std::move(modes);
  return doc;
}

SpectralField field_from_json(const json& doc, ParseOptions options) {
  if (!doc.is_object()) throw SchemaError("$", "expected an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "real_valued" && key != "zero_mode" && key != "modes")
      throw SchemaError(key, "unknown key");
  }
  bool real_valued = true;
  if (doc.contains("real_valued")) {
    if (!doc["real_valued"].is_boolean()) throw SchemaError("real_valued", "expected a boolean");
    real_valued = doc["real_valued"].get<bool>();
  }
  std::optional<Vec3> zero_mode;
  if (doc.contains("zero_mode") && !doc["zero_mode"].is_null())
    zero_mode = vec_from_json(doc["zero_mode"], "zero_mode");
  if (!doc.contains("modes") || !doc["modes"].is_array()) throw SchemaError("modes", "expected an array");

  ModeMap modes;
  std::map<Frequency, std::size_t> index;
  const json& arr = doc["modes"];
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string path = "modes[" + std::to_string(i) + "]";
    const json& m = arr[i];
    if (!m.is_object()) throw SchemaError(path, "expected an object");
    for (const char* key : {"n", "re", "im"})
      if (!m.contains(key)) throw SchemaError(path + "." + key, "missing");
    for (const auto& [key, value] : m.items())
      if (key != "n" && key != "re" && key != "im") throw SchemaError(path + "." + key, "unknown key");
    Frequency n = frequency_from_json(m["n"], path + ".n");
    if (n.is_zero()) throw SchemaError(path + ".n", "zero frequency belongs in zero_mode");
    const Vec3 re = vec_from_json(m["re"], path + ".re");
    const Vec3 im = vec_from_json(m["im"], path + ".im");
    CVec3 u;
    for (int k = 0; k < 3; ++k) u(k) = Complex(re(k), im(k));
    if (!modes.emplace(n, u).second) throw SchemaError(path + ".n", "duplicate frequency " + n.to_string());
    index.emplace(n, i);
  }

  if (real_valued && options.verify_pairs) {
    for (const auto& [n, u] : modes) {
      const std::string path = "modes[" + std::to_string(index.at(n)) + "]";
      auto partner = modes.find(-n);
      if (partner == modes.end())
        throw SchemaError(path + ".n", "conjugate partner " + (-n).to_string() + " not listed");
      if (partner->second != u.conjugate())
        throw SchemaError(path, "coefficient at " + (-n).to_string() + " is not the exact conjugate");
    }
  }
  return SpectralField(std::move(modes), zero_mode, real_valued);
}

std::string serialize(const SpectralField& field) { return field_to_json(field).dump(2) + "\n"; }

SpectralField parse(const std::string& text, ParseOptions options) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("byte " + std::to_string(e.byte), e.what());
  }
  return field_from_json(doc, options);
}

SpectralField read_field_file(const std::string& path, ParseOptions options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), options);
}

}  // namespace finmode

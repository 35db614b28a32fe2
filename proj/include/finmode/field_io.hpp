#pragma once

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "finmode/spectral_field.hpp"

namespace finmode {

// Names the JSON location of the first schema violation, e.g. "modes[3].n[1]".
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct ParseOptions {
  // Require every mode of a real_valued document to be listed with its exact conjugate.
  bool verify_pairs = true;
};

nlohmann::json frequency_to_json(const Frequency& n);
Frequency frequency_from_json(const nlohmann::json& j, const std::string& path);

nlohmann::json field_to_json(const SpectralField& field);
SpectralField field_from_json(const nlohmann::json& doc, ParseOptions options = {});

std::string serialize(const SpectralField& field);
SpectralField parse(const std::string& text, ParseOptions options = {});

SpectralField read_field_file(const std::string& path, ParseOptions options = {});

}  // namespace finmode

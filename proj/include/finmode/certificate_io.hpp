#pragma once

#include <nlohmann/json.hpp>

#include "finmode/classifier.hpp"

namespace finmode {

inline constexpr int kCertificateSchemaVersion = 1;

nlohmann::json certificate_to_json(const FlowCertificate& certificate);
nlohmann::json certificate_to_json(const NscCertificate& certificate);

// Throws SchemaError. Planar decompositions are restored from their recorded circle data only.
FlowCertificate flow_certificate_from_json(const nlohmann::json& doc);
NscCertificate nsc_certificate_from_json(const nlohmann::json& doc);

}  // namespace finmode

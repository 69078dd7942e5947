#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "grfaug/pipeline.hpp"

namespace grfaug {

/// JSON form of AugmentConfig. Keys: gamma_range, alpha_range, probability,
/// transforms, composition_size, interpolation, padding, resize_to, seed.
/// Missing keys keep their defaults; unknown keys are rejected.
AugmentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const AugmentConfig& config);

AugmentConfig parse_config(const std::string& text);
AugmentConfig load_config(const std::filesystem::path& path);

nlohmann::json sampled_to_json(const SampledTransform& t);
SampledTransform sampled_from_json(const nlohmann::json& j);

}  // namespace grfaug

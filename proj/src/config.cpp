#include "grfaug/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "grfaug/errors.hpp"

namespace grfaug {

using nlohmann::json;

namespace {

Range range_from_json(const json& j, const char* key) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw std::invalid_argument(std::string(key) + " must be a [low, high] pair of numbers");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::string_view to_string(Interpolation i) { return i == Interpolation::Nearest ? "nearest" : "bilinear"; }
std::string_view to_string(Padding p) { return p == Padding::ZeroFill ? "zero_fill" : "edge_clamp"; }

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument(std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace

AugmentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  AugmentConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "gamma_range") {
      c.gamma_range = range_from_json(value, "gamma_range");
    } else if (key == "alpha_range") {
      c.alpha_range = range_from_json(value, "alpha_range");
    } else if (key == "probability") {
      if (!value.is_number()) throw std::invalid_argument("probability must be a number");
      c.probability = value.get<double>();
    } else if (key == "transforms") {
      if (!value.is_array()) throw std::invalid_argument("transforms must be an array of names");
      c.transforms.clear();
      for (const auto& name : value) {
        c.transforms.push_back(parse_transform_kind(get_as<std::string>(name, "transforms")));
      }
    } else if (key == "composition_size") {
      if (!value.is_number_integer()) throw std::invalid_argument("composition_size must be an integer");
      c.composition_size = value.get<int>();
    } else if (key == "interpolation") {
      const auto s = get_as<std::string>(value, "interpolation");
      if (s == "bilinear") c.sampling.interpolation = Interpolation::Bilinear;
      else if (s == "nearest") c.sampling.interpolation = Interpolation::Nearest;
      else throw std::invalid_argument("interpolation must be 'bilinear' or 'nearest'");
    } else if (key == "padding") {
      const auto s = get_as<std::string>(value, "padding");
      if (s == "edge_clamp") c.sampling.padding = Padding::EdgeClamp;
      else if (s == "zero_fill") c.sampling.padding = Padding::ZeroFill;
      else throw std::invalid_argument("padding must be 'edge_clamp' or 'zero_fill'");
    } else if (key == "resize_to") {
      if (value.is_null()) {
        c.resize_to.reset();
      } else if (value.is_array() && value.size() == 2 && value[0].is_number_integer() &&
                 value[1].is_number_integer()) {
        c.resize_to = Size{value[0].get<int>(), value[1].get<int>()};
      } else {
        throw std::invalid_argument("resize_to must be null or a [width, height] pair of integers");
      }
    } else if (key == "seed") {
      if (!value.is_number_unsigned()) throw std::invalid_argument("seed must be a non-negative integer");
      c.seed = value.get<std::uint64_t>();
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  validate(c);
  return c;
}

json config_to_json(const AugmentConfig& c) {
  json transforms = json::array();
  for (auto k : c.transforms) transforms.push_back(std::string(to_string(k)));
  json j;
  j["gamma_range"] = {c.gamma_range.low, c.gamma_range.high};
  j["alpha_range"] = {c.alpha_range.low, c.alpha_range.high};
  j["probability"] = c.probability;
  j["transforms"] = std::move(transforms);
  j["composition_size"] = c.composition_size;
  j["interpolation"] = std::string(to_string(c.sampling.interpolation));
  j["padding"] = std::string(to_string(c.sampling.padding));
  j["resize_to"] = c.resize_to ? json{c.resize_to->width, c.resize_to->height} : json(nullptr);
  j["seed"] = c.seed;
  return j;
}

AugmentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed config JSON: ") + e.what());
  }
  return config_from_json(j);
}

AugmentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

json sampled_to_json(const SampledTransform& t) {
  json kinds = json::array();
  for (const auto& k : t.kinds) {
    kinds.push_back({{"kind", std::string(to_string(k.kind))},
                     {"gamma", k.gamma},
                     {"alpha", k.alpha},
                     {"effective_alpha", k.effective_alpha},
                     {"seeds", k.field_seeds}});
  }
  return kinds;
}

SampledTransform sampled_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("sampled transform must be an array of kinds");
  SampledTransform t;
  try {
    for (const auto& e : j) {
      SampledKind k;
      k.kind = parse_transform_kind(e.at("kind").get<std::string>());
      k.gamma = e.at("gamma").get<double>();
      k.alpha = e.at("alpha").get<double>();
      k.effective_alpha = e.at("effective_alpha").get<double>();
      k.field_seeds = e.at("seeds").get<std::vector<std::uint64_t>>();
      t.kinds.push_back(std::move(k));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed sampled transform: ") + e.what());
  }
  return t;
}

}  // namespace grfaug

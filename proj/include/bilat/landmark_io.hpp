#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bilat/config_model.hpp"

namespace bilat {

struct Subject {
  std::string id;
  std::string group;
  Configuration coords;
  nlohmann::json extra = nlohmann::json::object();  // unrecognised fields, kept as they were
};

struct LandmarkFile {
  std::size_t dimension;
  PairingScheme scheme;
  Registration registration;
  std::optional<std::string> frame;
  std::optional<std::string> provenance;
  std::optional<Plane> plane;
  std::optional<Configuration> mean_shape;
  std::vector<Subject> subjects;
  nlohmann::json extra = nlohmann::json::object();

  std::vector<Configuration> configurations() const;
  /// Distinct group labels in order of first appearance.
  std::vector<std::string> group_labels() const;
};

/// Parses the JSON landmark document. `source` names the input in error messages.
LandmarkFile parse_landmark_json(const std::string& text, const std::string& source = "input");
LandmarkFile read_landmark_file(const std::filesystem::path& path);
LandmarkFile read_landmark_stream(std::istream& in, const std::string& source);

/// One coordinate row per line; numbers in shortest round-trip form.
std::string to_landmark_json(const LandmarkFile& file);
void write_landmark_file(const std::filesystem::path& path, const LandmarkFile& file);

/// Long CSV `id,group,landmark,c1,...,cM` (landmark 1-based) with a sidecar JSON
/// holding `scheme` and optionally `registration` and `frame`.
LandmarkFile read_landmark_csv(const std::filesystem::path& csv, const std::filesystem::path& sidecar);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace bilat

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wvsim/interferometer.hpp"

namespace wvsim {

/// Parsed key-value config file: ordered (section, key, value) entries.
/// Format: [section] headers, key = value lines, '#' comments, blank lines.
class ConfigFile {
 public:
  struct Entry {
    std::string section;
    std::string key;
    std::string value;
  };

  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text,
                                 const std::string& origin = "<string>");

  const std::vector<Entry>& entries() const { return entries_; }
  std::optional<std::string> get(const std::string& section,
                                 const std::string& key) const;
  std::vector<Entry> section(const std::string& name) const;
  bool has_section(const std::string& name) const;

 private:
  std::vector<Entry> entries_;
};

/// "<value> deg" or "<value> rad"; the unit suffix is mandatory.
Angle parse_angle(const std::string& text);

struct MeterSettings {
  double sigma = 1.0;
  int grid_points = 4096;
  double half_extent_sigmas = 12.0;
};

struct SweepSettings {
  Angle start;
  Angle stop;
  Angle step;
};

struct ParsedScenario {
  ScenarioConfig scenario;
  MeterSettings meter;
  std::optional<SweepSettings> sweep;
  std::uint64_t hash = 0;  // semantic config hash
};

/// Loads and validates a scenario config. Angle keywords: "joint" resolves
/// alpha/phi to the joint interference solution, "auto" resolves gamma to
/// the smallest root decoupling J_gamma from path A. Throws ConfigError on
/// any parse or validation failure.
ParsedScenario load_scenario(const std::string& path);
ParsedScenario scenario_from_string(const std::string& text);

/// FNV-1a over the canonical binary encoding of the parsed values, so
/// formatting, comments and unit choices do not affect the hash.
std::uint64_t config_hash(const ScenarioConfig& scenario,
                          const MeterSettings& meter,
                          const std::optional<SweepSettings>& sweep =
                              std::nullopt);

}  // namespace wvsim

#include "wvsim/config.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <fstream>
#include <sstream>

#include "wvsim/conditions.hpp"
#include "wvsim/errors.hpp"

namespace wvsim {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse number '" + text + "' for " + what);
  }
}

int parse_int(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse integer '" + text + "' for " + what);
  }
}

class Hasher {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      hash_ ^= p[i];
      hash_ *= 1099511628211ull;
    }
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    bytes(&bits, sizeof(bits));
  }
  void i32(std::int32_t v) { bytes(&v, sizeof(v)); }
  void str(const std::string& s) {
    const auto n = static_cast<std::uint32_t>(s.size());
    bytes(&n, sizeof(n));
    bytes(s.data(), s.size());
  }
  std::uint64_t value() const { return hash_; }

 private:
  std::uint64_t hash_ = 1469598103934665603ull;  // FNV-1a offset basis
};

ProbeLocation parse_location(const std::string& name) {
  for (ProbeLocation loc :
       {ProbeLocation::D2, ProbeLocation::D3, ProbeLocation::D4,
        ProbeLocation::C0, ProbeLocation::C2, ProbeLocation::C3,
        ProbeLocation::C5}) {
    if (name == to_string(loc)) return loc;
  }
  throw ConfigError("unknown probe location '" + name + "'");
}

ObservableKind parse_kind(const std::string& name) {
  for (ObservableKind kind :
       {ObservableKind::path_projector, ObservableKind::spin_j_gamma,
        ObservableKind::combined}) {
    if (name == to_string(kind)) return kind;
  }
  throw ConfigError("unknown observable kind '" + name + "'");
}

const std::vector<std::string> kKnownSections = {
    "scenario", "angles", "preselect", "postselect", "probes",
    "projector", "packet", "phases",   "meter",      "sweep",
    "tolerances"};

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str(), path);
}

ConfigFile ConfigFile::parse_string(const std::string& text,
                                    const std::string& origin) {
  ConfigFile file;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.erase(hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where =
        origin + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(where + ": malformed section header '" + line + "'");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (std::find(kKnownSections.begin(), kKnownSections.end(), section) ==
          kKnownSections.end()) {
        throw ConfigError(where + ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
    }
    if (section.empty()) {
      throw ConfigError(where + ": entry outside any [section]");
    }
    Entry entry;
    entry.section = section;
    entry.key = trim(line.substr(0, eq));
    entry.value = trim(line.substr(eq + 1));
    if (entry.key.empty() || entry.value.empty()) {
      throw ConfigError(where + ": empty key or value");
    }
    file.entries_.push_back(std::move(entry));
  }
  return file;
}

std::optional<std::string> ConfigFile::get(const std::string& section,
                                           const std::string& key) const {
  for (const Entry& e : entries_) {
    if (e.section == section && e.key == key) return e.value;
  }
  return std::nullopt;
}

std::vector<ConfigFile::Entry> ConfigFile::section(
    const std::string& name) const {
  std::vector<Entry> out;
  for (const Entry& e : entries_) {
    if (e.section == name) out.push_back(e);
  }
  return out;
}

bool ConfigFile::has_section(const std::string& name) const {
  for (const Entry& e : entries_) {
    if (e.section == name) return true;
  }
  return false;
}

Angle parse_angle(const std::string& text) {
  std::istringstream in(text);
  double value = 0.0;
  std::string unit;
  if (!(in >> value >> unit) || !(in >> std::ws).eof()) {
    throw ConfigError("angle '" + text + "' must be '<value> deg' or '<value> rad'");
  }
  if (unit == "deg") return Angle::degrees(value);
  if (unit == "rad") return Angle::radians(value);
  throw ConfigError("unknown angle unit '" + unit + "' (use deg or rad)");
}

namespace {

ParsedScenario build_scenario(const ConfigFile& file) {
  ParsedScenario parsed;
  ScenarioConfig& config = parsed.scenario;

  if (const auto type = file.get("scenario", "type")) {
    if (*type == "three_box") {
      config.type = ScenarioType::three_box;
    } else if (*type == "cheshire") {
      config.type = ScenarioType::cheshire;
    } else {
      throw ConfigError("unknown scenario type '" + *type + "'");
    }
  }

  const AngleSolution joint = joint_solution();
  const auto angle_or = [&](const std::string& key, Angle fallback) {
    const auto text = file.get("angles", key);
    if (!text || *text == "joint") {
      return fallback;
    }
    return parse_angle(*text);
  };
  config.alpha = angle_or("alpha", joint.alpha);
  config.phi = angle_or("phi", joint.phi);

  if (const auto text = file.get("angles", "gamma");
      text || config.type == ScenarioType::cheshire) {
    if (!text || *text == "auto") {
      const auto roots = solve_gamma(config.alpha, config.phi);
      if (roots.empty()) {
        throw ConfigError("no gamma root exists for the configured angles");
      }
      config.gamma = roots.front();
    } else {
      config.gamma = parse_angle(*text);
    }
  }

  if (const auto axis = file.get("preselect", "axis")) {
    config.preselect.axis = parse_angle(*axis);
  }
  if (const auto m = file.get("preselect", "m")) {
    config.preselect.m = parse_int(*m, "preselect m");
  }

  AxisStateSpec post{config.phi, +1};
  if (const auto axis = file.get("postselect", "axis")) {
    post.axis = (*axis == "phi") ? config.phi : parse_angle(*axis);
  }
  if (const auto m = file.get("postselect", "m")) {
    post.m = parse_int(*m, "postselect m");
  }
  config.postselect = post;

  if (file.has_section("probes")) {
    for (const auto& entry : file.section("probes")) {
      config.probes.push_back(
          Probe{parse_location(entry.key), parse_kind(entry.value)});
    }
  } else if (config.type == ScenarioType::three_box) {
    config.probes = ScenarioConfig::three_box_default().probes;
  } else {
    config.probes = ScenarioConfig::cheshire_default().probes;
  }

  if (const auto mode = file.get("projector", "mode")) {
    if (*mode == "gaussian") {
      WavepacketGaussian window;
      if (const auto c = file.get("projector", "center")) {
        window.center = parse_double(*c, "projector center");
      }
      if (const auto w = file.get("projector", "width")) {
        window.width = parse_double(*w, "projector width");
      }
      config.window = window;
    } else if (*mode != "ideal") {
      throw ConfigError("projector mode must be 'ideal' or 'gaussian'");
    }
  }

  if (const auto c = file.get("packet", "center")) {
    config.packet.center = parse_double(*c, "packet center");
  }
  if (const auto w = file.get("packet", "width")) {
    config.packet.width = parse_double(*w, "packet width");
  }

  // Differential propagation phases, one per path.
  const char* path_keys[3] = {"A", "B", "C"};
  for (int i = 0; i < 3; ++i) {
    if (const auto p = file.get("phases", path_keys[i])) {
      config.branch_phase_rad[i] = parse_angle(*p).rad();
    }
  }

  if (const auto tol = file.get("tolerances", "orthogonality")) {
    config.tol_orth = parse_double(*tol, "orthogonality tolerance");
  }

  if (const auto sigma = file.get("meter", "sigma")) {
    parsed.meter.sigma = parse_double(*sigma, "meter sigma");
  }
  if (const auto n = file.get("meter", "grid_points")) {
    parsed.meter.grid_points = parse_int(*n, "meter grid_points");
  }
  if (const auto h = file.get("meter", "half_extent_sigmas")) {
    parsed.meter.half_extent_sigmas =
        parse_double(*h, "meter half_extent_sigmas");
  }

  if (file.has_section("sweep")) {
    SweepSettings sweep{Angle::degrees(10.0), Angle::degrees(170.0),
                        Angle::degrees(2.0)};
    if (const auto s = file.get("sweep", "start")) sweep.start = parse_angle(*s);
    if (const auto s = file.get("sweep", "stop")) sweep.stop = parse_angle(*s);
    if (const auto s = file.get("sweep", "step")) sweep.step = parse_angle(*s);
    if (!(sweep.step.rad() > 0.0) || !(sweep.stop.rad() >= sweep.start.rad())) {
      throw ConfigError("sweep requires step > 0 and stop >= start");
    }
    parsed.sweep = sweep;
  }

  validate(config);
  parsed.hash = config_hash(config, parsed.meter, parsed.sweep);
  return parsed;
}

}  // namespace

ParsedScenario load_scenario(const std::string& path) {
  return build_scenario(ConfigFile::parse_file(path));
}

ParsedScenario scenario_from_string(const std::string& text) {
  return build_scenario(ConfigFile::parse_string(text));
}

std::uint64_t config_hash(const ScenarioConfig& scenario,
                          const MeterSettings& meter,
                          const std::optional<SweepSettings>& sweep) {
  Hasher h;
  h.str("wvsim-config-v1");
  h.i32(static_cast<std::int32_t>(scenario.type));
  h.f64(scenario.alpha.rad());
  h.f64(scenario.phi.rad());
  h.i32(scenario.gamma ? 1 : 0);
  h.f64(scenario.gamma ? scenario.gamma->rad() : 0.0);
  h.f64(scenario.preselect.axis.rad());
  h.i32(scenario.preselect.m);
  const AxisStateSpec post =
      scenario.postselect ? *scenario.postselect
                          : AxisStateSpec{scenario.phi, +1};
  h.f64(post.axis.rad());
  h.i32(post.m);
  h.i32(static_cast<std::int32_t>(scenario.probes.size()));
  for (const Probe& p : scenario.probes) {
    h.i32(static_cast<std::int32_t>(p.location));
    h.i32(static_cast<std::int32_t>(p.kind));
  }
  h.i32(scenario.window ? 1 : 0);
  h.f64(scenario.window ? scenario.window->center : 0.0);
  h.f64(scenario.window ? scenario.window->width : 0.0);
  h.f64(scenario.packet.center);
  h.f64(scenario.packet.width);
  for (double phase : scenario.branch_phase_rad) {
    h.f64(phase);
  }
  h.f64(scenario.tol_orth);
  h.f64(meter.sigma);
  h.i32(meter.grid_points);
  h.f64(meter.half_extent_sigmas);
  h.i32(sweep ? 1 : 0);
  h.f64(sweep ? sweep->start.rad() : 0.0);
  h.f64(sweep ? sweep->stop.rad() : 0.0);
  h.f64(sweep ? sweep->step.rad() : 0.0);
  return h.value();
}

}  // namespace wvsim

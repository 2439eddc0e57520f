#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wvsim/conditions.hpp"
#include "wvsim/interferometer.hpp"
#include "wvsim/meter.hpp"

namespace wvsim {

/// Provenance of one CLI run. The timestamp is printed to the log stream
/// only; CSV payloads stay byte-deterministic.
struct RunManifest {
  std::string scenario;
  std::uint64_t config_hash = 0;
  std::string tool_version;
  std::string timestamp;
  std::vector<std::string> output_paths;
};

RunManifest make_manifest(const std::string& scenario, std::uint64_t hash,
                          const std::string& version);
void print_manifest(std::ostream& os, const RunManifest& manifest);

/// One row of a solve-angles sweep.
struct SweepRow {
  double alpha_deg = 0.0;
  double phi_root_deg = 0.0;
  double abs_c1 = 0.0;
  bool closed_singular = false;
  double phi_closed_deg = 0.0;
  double abs_c1_closed = 0.0;
  int branch_n = 0;
  bool discrepancy = false;  // closed form failed to match any root
};

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows,
                     std::uint64_t config_hash, const std::string& version);

void print_scenario_report(std::ostream& os, const Report& report);
void write_report_csv(std::ostream& os, const Report& report,
                      std::uint64_t config_hash, const std::string& version);

struct EpsilonRow {
  std::string location;
  double probability = 0.0;
  double rel_change = 0.0;         // (P(eps) - P(0)) / P(0)
  double first_order_change = 0.0; // central difference dP/deps
};

void print_epsilon_report(std::ostream& os, double eps, double p0,
                          const std::vector<EpsilonRow>& rows);

void write_convergence_csv(std::ostream& os, const ConvergenceReport& report,
                           const std::string& observable,
                           std::uint64_t config_hash,
                           const std::string& version);

/// Writes atomically: a sibling temp file is renamed over the target once
/// the payload is complete.
void write_file_atomic(const std::string& path, const std::string& payload);

}  // namespace wvsim

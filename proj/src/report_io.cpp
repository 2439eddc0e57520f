#include "wvsim/report_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "wvsim/errors.hpp"

namespace wvsim {

namespace {

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string fixed12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12f", v);
  return buf;
}

void csv_header(std::ostream& os, const std::string& version,
                const std::string& scenario, std::uint64_t hash,
                const std::string& columns) {
  os << "# tool: wvsim " << version << "\n";
  os << "# scenario: " << scenario << "\n";
  os << "# config_hash: " << hex64(hash) << "\n";
  os << "# columns: " << columns << "\n";
}

}  // namespace

RunManifest make_manifest(const std::string& scenario, std::uint64_t hash,
                          const std::string& version) {
  RunManifest manifest;
  manifest.scenario = scenario;
  manifest.config_hash = hash;
  manifest.tool_version = version;
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  manifest.timestamp = buf;
  return manifest;
}

void print_manifest(std::ostream& os, const RunManifest& manifest) {
  os << "run: scenario=" << manifest.scenario
     << " config_hash=" << hex64(manifest.config_hash)
     << " version=" << manifest.tool_version
     << " time=" << manifest.timestamp;
  for (const auto& path : manifest.output_paths) {
    os << " out=" << path;
  }
  os << "\n";
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows,
                     std::uint64_t config_hash, const std::string& version) {
  csv_header(os, version, "sweep_alpha", config_hash,
             "alpha_deg,phi_root_deg,abs_c1,closed_singular,phi_closed_deg,"
             "abs_c1_closed,branch_n,discrepancy");
  for (const SweepRow& row : rows) {
    os << g17(row.alpha_deg) << ',' << g17(row.phi_root_deg) << ','
       << g17(row.abs_c1) << ',' << (row.closed_singular ? 1 : 0) << ','
       << (row.closed_singular ? "" : g17(row.phi_closed_deg)) << ','
       << (row.closed_singular ? "" : g17(row.abs_c1_closed)) << ','
       << row.branch_n << ',' << (row.discrepancy ? 1 : 0) << "\n";
  }
}

void print_scenario_report(std::ostream& os, const Report& report) {
  os << "scenario: " << to_string(report.type) << "\n";
  os << "  alpha = " << fixed12(report.alpha_rad * 180.0 / M_PI) << " deg\n";
  os << "  phi   = " << fixed12(report.phi_rad * 180.0 / M_PI) << " deg\n";
  if (report.gamma_rad) {
    os << "  gamma = " << fixed12(*report.gamma_rad * 180.0 / M_PI)
       << " deg\n";
  }
  os << "\n  " << std::left << std::setw(9) << "probe" << std::setw(6) << "time"
     << std::setw(18) << "observable" << std::setw(22) << "weak_value_re"
     << std::setw(22) << "weak_value_im" << "window_overlap\n";
  const auto print_row = [&](const ProbeResult& row) {
    os << "  " << std::left << std::setw(9) << row.location << std::setw(6)
       << row.time_label << std::setw(18) << row.observable << std::setw(22)
       << fixed12(row.weak_value.real()) << std::setw(22)
       << fixed12(row.weak_value.imag()) << fixed12(row.window_overlap)
       << "\n";
  };
  for (const auto& row : report.probes) print_row(row);
  for (const auto& row : report.derived) print_row(row);
  os << "\n  postselection_probability = "
     << fixed12(report.postselection_probability) << "\n";
  os << "  |residual_c1| = " << g17(std::abs(report.residual_c1)) << "\n";
  os << "  |residual_c2| = " << g17(std::abs(report.residual_c2)) << "\n";
  if (report.residual_cc) {
    os << "  |residual_cc| = " << g17(std::abs(*report.residual_cc)) << "\n";
  }
}

void write_report_csv(std::ostream& os, const Report& report,
                      std::uint64_t config_hash, const std::string& version) {
  csv_header(os, version, to_string(report.type), config_hash,
             "probe,time,observable,weak_value_re,weak_value_im,"
             "window_overlap");
  const auto write_row = [&](const ProbeResult& row) {
    os << row.location << ',' << row.time_label << ',' << row.observable << ','
       << g17(row.weak_value.real()) << ',' << g17(row.weak_value.imag())
       << ',' << g17(row.window_overlap) << "\n";
  };
  for (const auto& row : report.probes) write_row(row);
  for (const auto& row : report.derived) write_row(row);
  os << "# postselection_probability: "
     << g17(report.postselection_probability) << "\n";
  os << "# abs_residual_c1: " << g17(std::abs(report.residual_c1)) << "\n";
  os << "# abs_residual_c2: " << g17(std::abs(report.residual_c2)) << "\n";
  if (report.residual_cc) {
    os << "# abs_residual_cc: " << g17(std::abs(*report.residual_cc)) << "\n";
  }
}

void print_epsilon_report(std::ostream& os, double eps, double p0,
                          const std::vector<EpsilonRow>& rows) {
  os << "\n  weak rotation by eps = " << g17(eps)
     << " (P0 = " << fixed12(p0) << ")\n";
  os << "  " << std::left << std::setw(9) << "where" << std::setw(22)
     << "P(eps)" << std::setw(28) << "rel_change" << "dP/deps\n";
  for (const EpsilonRow& row : rows) {
    os << "  " << std::left << std::setw(9) << row.location << std::setw(22)
       << fixed12(row.probability) << std::setw(28) << g17(row.rel_change)
       << g17(row.first_order_change) << "\n";
  }
}

void write_convergence_csv(std::ostream& os, const ConvergenceReport& report,
                           const std::string& observable,
                           std::uint64_t config_hash,
                           const std::string& version) {
  csv_header(os, version, "meter_convergence", config_hash,
             "g,shift_over_g,target,abs_error");
  for (const ConvergenceRow& row : report.rows) {
    os << g17(row.g) << ',' << g17(row.shift_over_g) << ',' << g17(row.target)
       << ',' << g17(row.abs_error) << "\n";
  }
  os << "# observable: " << observable << "\n";
  os << "# fitted_order: "
     << (std::isnan(report.fitted_order) ? std::string("nan")
                                         : g17(report.fitted_order))
     << "\n";
  os << "# monotone: " << (report.monotone ? 1 : 0) << "\n";
}

void write_file_atomic(const std::string& path, const std::string& payload) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw ConfigError("cannot open output file '" + tmp + "'");
    }
    out << payload;
    if (!out.flush()) {
      throw ConfigError("failed writing output file '" + tmp + "'");
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace wvsim

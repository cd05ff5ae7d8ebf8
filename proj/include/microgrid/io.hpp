#pragma once

#include "microgrid/robust.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace microgrid {

/// Version stamped into every emitted report file; loaders reject others.
inline constexpr int kReportVersion = 1;

// --- meteorological CSV (header "timestamp,value", hourly ISO-8601 rows) ---

MeteoSeries read_meteo_csv(const std::filesystem::path& path, MeteoKind kind,
                           std::string station = "");
void write_meteo_csv(const std::filesystem::path& path, const MeteoSeries& series);

/// Parse an ISO-8601 timestamp ("2012-09-01T00:00:00", space separator
/// also accepted) to unix seconds, UTC.
std::int64_t parse_iso8601(const std::string& text);
std::string format_iso8601(std::int64_t unix_seconds);

// --- per-unit profile CSV (day,hour,value; 24 rows per day) ---

void write_profiles_csv(const std::filesystem::path& path,
                        const std::vector<RenewableProfile>& days);
std::vector<RenewableProfile> read_profiles_csv(const std::filesystem::path& path);

// --- scenario set JSON: {"scenarios": [{"pi": .., "solar": [..], "wind": [..]}]} ---

std::string scenario_set_to_json(const ScenarioSet& set);
ScenarioSet scenario_set_from_json(const std::string& text);
void write_scenario_set(const std::filesystem::path& path, const ScenarioSet& set);
ScenarioSet read_scenario_set(const std::filesystem::path& path);

// --- microgrid spec / portfolio config JSON ---

struct SpecConfig {
  MicrogridSpec spec;
  InvestmentCosts costs;
  double budget = 6e6;
  SolverConfig solver;
};

SpecConfig spec_config_from_json(const std::string& text);
SpecConfig read_spec_config(const std::filesystem::path& path);
std::string spec_config_to_json(const SpecConfig& config);

// --- solution serialization ---

std::string dispatch_to_json(const DispatchSolution& sol);
std::string investment_to_json(const InvestmentSolution& sol, bool include_dispatches = true);
void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<IterationRecord>& trace);
void write_budget_sweep_csv(const std::filesystem::path& path,
                            const std::vector<BudgetSweepPoint>& sweep);
void write_error_sweep_csv(const std::filesystem::path& path,
                           const std::vector<ErrorSweepPoint>& sweep);

// --- report manifests ---

/// Throws Error unless the JSON object carries version == kReportVersion.
void require_report_version(const std::string& json_text);

}  // namespace microgrid

#pragma once

#include <filesystem>
#include <iosfwd>

#include <json.hpp>

#include "iwal/experiment.hpp"

namespace iwal {

nlohmann::json to_json(const RunSummary& summary);
RunSummary run_summary_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Statistic& stat);
// Aggregate statistics plus each replicate's summary.
nlohmann::json to_json(const CompareReport& report);

// Header t,cum_queries,active_test_loss,passive_test_loss; doubles at %.17g.
void write_curve_csv(const RunSummary& summary, std::ostream& out);

/// Writes curve.csv, summary.json and trace.csv into `dir` (created if
/// missing). Output bytes depend only on the report. Throws std::runtime_error
/// naming the path on I/O failure.
void emit_curves(const RunReport& report, const std::filesystem::path& dir);

// compare.json in `dir` plus emit_curves output under replicate_<i>/.
void emit_comparison(const CompareReport& report, const std::filesystem::path& dir);

}  // namespace iwal

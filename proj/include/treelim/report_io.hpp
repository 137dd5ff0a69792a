#pragma once
// Report emission: CSV and JSON serializations of convergence reports and
// ball distributions. Output is byte-stable for a fixed config and seed.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "treelim/experiments.hpp"
#include "treelim/limit_object.hpp"

namespace treelim {

// Shortest round-trip rendering via %.17g.
std::string format_double(double x);

// Columns: n, replicate, depth, class_code, empirical_p, limit_p, abs_err.
// Exact mode renders probabilities as rationals, float mode as doubles; the
// limit columns stay empty when the config declares no limit law.
void write_convergence_csv(std::ostream& os, const ConvergenceReport& report);

// Columns: n, mean_tv, sd_tv, stat_name, var_estimate. One row per tracked
// statistic ("x_over_n[...]") and per observed class ("class_freq[...]").
void write_summary_csv(std::ostream& os, const ConvergenceReport& report);

nlohmann::json report_json(const ConvergenceReport& report);

// {"depth": l, "classes": [{"code", "p_num", "p_den"}...], "deficit": "..."}
nlohmann::json ball_distribution_json(const BallDistribution& dist);

// Writes convergence.csv, summary.csv and report.json under out_dir
// (defaults to the config's out_dir), creating the directory if needed.
void emit_reports(const ConvergenceReport& report, const std::string& out_dir = "");

}  // namespace treelim

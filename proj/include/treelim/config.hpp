#pragma once
// Experiment configuration: JSON parsing, validation, canonical echo, and the
// config hash recorded in reports.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "treelim/degree_model.hpp"
#include "treelim/hom_count.hpp"

namespace treelim {

// A tracked embedding statistic: X/n of this numbered forest per replicate.
struct StatSpec {
    std::string name;
    NumberedForest nf;
};

struct ExperimentConfig {
    explicit ExperimentConfig(DegreeModel m) : model(std::move(m)) {}

    DegreeModel model;
    std::optional<DegreeDistribution> limit_d0;  // reference law for TV distances
    std::vector<int> n_grid;
    int samples_per_n = 1;
    int radius = 1;
    int degree_cap = 5;
    std::uint64_t seed = 1;
    ArithmeticMode mode = ArithmeticMode::Exact;
    std::string out_dir = "out";
    std::vector<StatSpec> statistics;  // defaulted from the degree support if empty
};

std::map<int, Rat> parse_pmf(const nlohmann::json& j);
DegreeModel parse_model(const nlohmann::json& j);
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);

// Canonical JSON echo of the configuration (deterministic key order).
nlohmann::json config_json(const ExperimentConfig& cfg);
// FNV-1a hash of the canonical echo, 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

// The default tracked statistics: one single-vertex forest per support degree
// plus the edge with remainders (1,1).
std::vector<StatSpec> default_statistics(const std::vector<int>& support);

}  // namespace treelim

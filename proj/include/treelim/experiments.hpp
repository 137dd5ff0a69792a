#pragma once
// Experiment orchestration: convergence runs over an n-grid (neighborhood
// statistics, TV distance to the limit, variance of tracked embedding
// statistics) and the star-sequence demonstration of escaping mass.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "treelim/config.hpp"
#include "treelim/limit_object.hpp"

namespace treelim {

struct ClassRow {
    int n = 0;
    int replicate = 0;
    int depth = 0;
    int node_count = 0;
    std::string code;
    Rat empirical_p;
    Rat limit_p;
    Rat abs_err;
};

struct NSummary {
    int n = 0;
    double mean_tv = 0.0;
    double sd_tv = 0.0;
    std::map<std::string, double> stat_variance;   // per tracked statistic
    std::map<std::string, double> class_freq_sd;   // per class code
};

struct ConvergenceReport {
    explicit ConvergenceReport(ExperimentConfig cfg) : config(std::move(cfg)) {}

    ExperimentConfig config;
    std::string hash;
    bool has_limit = false;
    std::vector<ClassRow> rows;
    std::vector<NSummary> summaries;  // ascending n

    // raw per-replicate values kept for assertions and variance estimates
    std::map<int, std::vector<double>> tv_by_n;
    std::map<int, std::map<std::string, std::vector<double>>> stat_values;

    const NSummary& summary_for(int n) const;
};

// Deterministic given the config (replicate r at size n draws its own
// sub-seed from hash(seed, n, r)). Model feasibility is checked for every
// grid size before any sampling starts. When a hook is given it runs after
// each completed size with the report so far, so callers can flush partial
// results even if a later size fails.
ConvergenceReport run_convergence(
    const ExperimentConfig& cfg,
    const std::function<void(const ConvergenceReport&)>& on_size_complete = {});

struct StarDemoRow {
    int n = 0;
    Rat edge_mass;           // depth-1 mass of the single-edge class
    Rat small_depth2_mass;   // depth-2 mass on classes with <= node_cap nodes
};
std::vector<StarDemoRow> run_star_demo(const std::vector<int>& n_grid, int small_node_cap = 10);

}  // namespace treelim

// treelim command line: sample trees, inspect neighborhood statistics,
// evaluate the limit law, run the exhaustive verification battery, and drive
// convergence experiments from a JSON config.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "treelim/battery.hpp"
#include "treelim/config.hpp"
#include "treelim/experiments.hpp"
#include "treelim/report_io.hpp"

namespace {

using namespace treelim;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitConfigError = 2;

std::map<int, Rat> pmf_from_string(const std::string& text) {
    // "1=1/2,3=1/2"
    std::map<int, Rat> pmf;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("pmf entry '" + item + "' needs degree=prob");
        pmf[std::stoi(item.substr(0, eq))] = parse_rational(item.substr(eq + 1));
    }
    if (pmf.empty()) throw ConfigError("empty pmf");
    return pmf;
}

std::vector<int> ints_from_string(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

struct ModelFlags {
    std::string variant = "fixed";
    std::string multiset;
    std::string pmf;
    std::string family;

    DegreeModel build() const {
        try {
            if (variant == "star") return DegreeModel::star();
            if (variant == "conditioned_iid") {
                if (pmf.empty()) throw ConfigError("conditioned_iid needs --pmf");
                return DegreeModel::conditioned_iid(DegreeDistribution(pmf_from_string(pmf)));
            }
            if (variant == "fixed") {
                if (!multiset.empty()) return DegreeModel::fixed(ints_from_string(multiset));
                if (family == "path") return DegreeModel::fixed_family(DegreeModel::Family::Path);
                if (family == "binary") {
                    return DegreeModel::fixed_family(DegreeModel::Family::Binary);
                }
                throw ConfigError("fixed variant needs --multiset or --family path|binary");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw ConfigError(std::string("model flags: ") + e.what());
        }
        throw ConfigError("unknown variant '" + variant + "'");
    }
};

void add_model_flags(CLI::App* cmd, ModelFlags& flags) {
    cmd->add_option("--variant", flags.variant, "fixed|star|conditioned_iid")
        ->default_val("fixed");
    cmd->add_option("--multiset", flags.multiset, "comma-separated degree multiset");
    cmd->add_option("--pmf", flags.pmf, "degree pmf, e.g. 1=1/2,3=1/2");
    cmd->add_option("--family", flags.family, "path|binary profile for fixed");
}

int cmd_sample(const ModelFlags& flags, int n, int count, std::uint64_t seed,
               const std::string& out_dir) {
    if (n < 2) throw ConfigError("sample: -n must be >= 2");
    if (count < 1) throw ConfigError("sample: --count must be >= 1");
    const DegreeModel model = flags.build();
    if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
    for (int i = 0; i < count; ++i) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(i)));
        const LabeledTree tree = sample_tree(model.sample(n, rng), rng);
        if (out_dir.empty()) {
            if (i) std::cout << "\n";
            write_edge_list(std::cout, tree);
        } else {
            char name[32];
            std::snprintf(name, sizeof(name), "tree_%04d.txt", i);
            std::ofstream os(out_dir + "/" + name);
            if (!os) throw Error("cannot open " + out_dir + "/" + name);
            write_edge_list(os, tree);
        }
    }
    return kExitOk;
}

int cmd_stats(const std::string& tree_path, int radius) {
    if (radius < 0) throw ConfigError("stats: --radius must be >= 0");
    LabeledTree tree = [&] {
        if (tree_path == "-") return read_edge_list(std::cin);
        std::ifstream is(tree_path);
        if (!is) throw ConfigError("cannot open tree file: " + tree_path);
        return read_edge_list(is);
    }();
    std::cout << "class_code,depth,node_count,frequency,frequency_float\n";
    for (const auto& [code, p] : empirical_stats(tree, radius)) {
        std::cout << code.code << "," << code.depth << "," << code.node_count << ","
                  << rat_string(p) << "," << format_double(to_double(p)) << "\n";
    }
    return kExitOk;
}

int cmd_limit(const std::string& pmf_text, int depth, int degree_cap, int node_cap,
              bool consistency) {
    if (depth < 1) throw ConfigError("limit: --depth must be >= 1");
    const DegreeDistribution d0 = [&] {
        try {
            return DegreeDistribution(pmf_from_string(pmf_text));
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw ConfigError(std::string("limit: ") + e.what());
        }
    }();
    const int cap = degree_cap > 0 ? degree_cap : d0.max_degree();
    if (cap < d0.max_degree()) throw ConfigError("limit: --degree-cap must cover the pmf support");
    const LimitMeasure measure(d0, cap);
    if (node_cap <= 0) node_cap = max_ball_nodes(cap, depth);

    if (!consistency) {
        const BallDistribution dist = limit_marginal(measure, depth, node_cap);
        std::cout << ball_distribution_json(dist).dump(2) << "\n";
        return kExitOk;
    }
    nlohmann::json out = nlohmann::json::array();
    for (const RootedBall& base : enumerate_balls(depth, cap, node_cap)) {
        if (p_limit(measure, base) == 0) continue;
        const ConsistencyReport report = consistency_report(measure, base, cap);
        nlohmann::json jr;
        jr["base_code"] = canonical_code(base).code;
        jr["lhs"] = rat_string(report.lhs);
        jr["rhs"] = rat_string(report.rhs);
        jr["ratio"] = rat_string(report.ratio);
        out.push_back(jr);
    }
    nlohmann::json wrapper;
    wrapper["gamma"] = rat_string(measure.gamma());
    wrapper["base_depth"] = depth;
    wrapper["reports"] = out;
    std::cout << wrapper.dump(2) << "\n";
    return kExitOk;
}

int cmd_verify(int max_n, const std::vector<std::string>& forest_files) {
    std::vector<ForestCase> extra;
    for (const std::string& path : forest_files) {
        std::ifstream is(path);
        if (!is) throw ConfigError("cannot open forest file: " + path);
        try {
            extra.push_back(ForestCase{std::filesystem::path(path).filename().string(),
                                       read_numbered_forest(is)});
        } catch (const Error& e) {
            throw ConfigError("forest file " + path + ": " + e.what());
        }
    }
    const auto entries = run_oracle_battery(max_n, extra);
    int failures = 0;
    for (const auto& e : entries) {
        std::cout << (e.pass ? "[pass] " : "[FAIL] ") << e.name << " - " << e.detail << "\n";
        failures += e.pass ? 0 : 1;
    }
    std::cout << entries.size() << " checks, " << failures << " failures\n";
    return failures == 0 ? kExitOk : kExitVerificationFailure;
}

int cmd_experiment(const std::string& config_path) {
    const ExperimentConfig cfg = load_config_file(config_path);
    // flushing after every completed size keeps partial results on disk if a
    // later size fails
    const ConvergenceReport report =
        run_convergence(cfg, [](const ConvergenceReport& partial) { emit_reports(partial); });
    for (const NSummary& s : report.summaries) {
        std::cout << "n=" << s.n;
        if (report.has_limit) {
            std::cout << " mean_tv=" << format_double(s.mean_tv)
                      << " sd_tv=" << format_double(s.sd_tv);
        }
        for (const auto& [name, var] : s.stat_variance) {
            std::cout << " var(" << name << ")=" << format_double(var);
        }
        std::cout << "\n";
    }
    std::cout << "reports written to " << cfg.out_dir << " (hash " << report.hash << ")\n";
    return kExitOk;
}

int cmd_star_demo(const std::string& grid_text, int node_cap) {
    const std::vector<int> grid = ints_from_string(grid_text);
    std::cout << "n,edge_mass,small_depth2_mass\n";
    for (const StarDemoRow& row : run_star_demo(grid, node_cap)) {
        std::cout << row.n << "," << rat_string(row.edge_mass) << ","
                  << rat_string(row.small_depth2_mass) << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"treelim: random labeled trees with given degree sequences and their local limits"};
    app.require_subcommand(1);

    ModelFlags sample_flags;
    int sample_n = 10, sample_count = 1;
    std::uint64_t sample_seed = 1;
    std::string sample_out;
    auto* sample = app.add_subcommand("sample", "sample trees and dump edge lists");
    add_model_flags(sample, sample_flags);
    sample->add_option("-n,--nodes", sample_n, "tree size")->required();
    sample->add_option("-c,--count", sample_count, "number of trees")->default_val(1);
    sample->add_option("--seed", sample_seed, "seed")->default_val(1);
    sample->add_option("-o,--out", sample_out, "output directory (default stdout)");

    std::string stats_tree;
    int stats_radius = 1;
    auto* stats = app.add_subcommand("stats", "neighborhood statistics of a tree file");
    stats->add_option("-t,--tree", stats_tree, "edge-list file, or - for stdin")->required();
    stats->add_option("-R,--radius", stats_radius, "ball radius")->default_val(1);

    std::string limit_pmf;
    int limit_depth = 1, limit_cap = 0, limit_node_cap = 0;
    bool limit_consistency = false;
    auto* limit = app.add_subcommand("limit", "evaluate the limit ball distribution");
    limit->add_option("--pmf", limit_pmf, "degree pmf, e.g. 1=1/2,3=1/2")->required();
    limit->add_option("-l,--depth", limit_depth, "ball depth")->default_val(1);
    limit->add_option("--degree-cap", limit_cap, "degree cap (default: max support)");
    limit->add_option("--node-cap", limit_node_cap, "node cap for enumeration");
    limit->add_flag("--consistency", limit_consistency,
                    "report extension-mass ratios for positive-mass bases at this depth");

    int verify_max_n = 7;
    std::vector<std::string> verify_forest_files;
    auto* verify = app.add_subcommand("verify", "run the exhaustive verification battery");
    verify->add_option("--max-n", verify_max_n, "largest exhaustive size (2..8)")->default_val(7);
    verify->add_option("--forest-file", verify_forest_files,
                       "extra numbered-forest files to include in the embedding battery");

    std::string experiment_config;
    auto* experiment = app.add_subcommand("experiment", "run a convergence experiment");
    experiment->add_option("-c,--config", experiment_config, "JSON config file")->required();

    std::string star_grid = "4,10,11,100,1000";
    int star_cap = 10;
    auto* star = app.add_subcommand("star-demo", "escaping-mass demonstration on stars");
    star->add_option("--n-grid", star_grid, "comma-separated sizes")->default_val(star_grid);
    star->add_option("--node-cap", star_cap, "small-class node cap")->default_val(10);

    try {
        app.parse(argc, argv);
        if (sample->parsed()) {
            return cmd_sample(sample_flags, sample_n, sample_count, sample_seed, sample_out);
        }
        if (stats->parsed()) return cmd_stats(stats_tree, stats_radius);
        if (limit->parsed()) {
            return cmd_limit(limit_pmf, limit_depth, limit_cap, limit_node_cap, limit_consistency);
        }
        if (verify->parsed()) return cmd_verify(verify_max_n, verify_forest_files);
        if (experiment->parsed()) return cmd_experiment(experiment_config);
        if (star->parsed()) return cmd_star_demo(star_grid, star_cap);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerificationFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerificationFailure;
    }
    return kExitOk;
}

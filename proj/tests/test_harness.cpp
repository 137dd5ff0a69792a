#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "treelim/battery.hpp"
#include "treelim/config.hpp"
#include "treelim/experiments.hpp"
#include "treelim/report_io.hpp"

using namespace treelim;

namespace {

nlohmann::json small_config_json() {
    return nlohmann::json::parse(R"({
        "model": {"variant": "conditioned_iid", "pmf": {"1": [1,2], "3": [1,2]}},
        "n_grid": [20, 40],
        "samples_per_n": 8,
        "radius": 2,
        "degree_cap": 3,
        "seed": 99,
        "mode": "exact",
        "out_dir": "out"
    })");
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config parsing") {
    const ExperimentConfig cfg = parse_config(small_config_json());
    CHECK(cfg.n_grid == std::vector<int>{20, 40});
    CHECK(cfg.samples_per_n == 8);
    CHECK(cfg.radius == 2);
    CHECK(cfg.seed == 99);
    CHECK(cfg.mode == ArithmeticMode::Exact);
    REQUIRE(cfg.limit_d0.has_value());
    CHECK(cfg.limit_d0->mass(3) == Rat(1, 2));

    auto bad = small_config_json();
    bad["model"]["variant"] = "nope";
    CHECK_THROWS_AS(parse_config(bad), ConfigError);

    bad = small_config_json();
    bad["n_grid"] = {40, 20};
    CHECK_THROWS_AS(parse_config(bad), ConfigError);

    bad = small_config_json();
    bad["mode"] = "fuzzy";
    CHECK_THROWS_AS(parse_config(bad), ConfigError);

    bad = small_config_json();
    bad.erase("model");
    CHECK_THROWS_AS(parse_config(bad), ConfigError);

    bad = small_config_json();
    bad["degree_cap"] = 2;  // below the pmf support
    CHECK_THROWS_AS(parse_config(bad), ConfigError);

    // a fixed family with an explicit limit law
    const auto mixed = nlohmann::json::parse(R"({
        "model": {"variant": "fixed", "family": "path", "limit_pmf": {"2": [1,1]}},
        "n_grid": [10], "samples_per_n": 1, "radius": 1, "degree_cap": 3, "seed": 1
    })");
    const ExperimentConfig cfg2 = parse_config(mixed);
    REQUIRE(cfg2.limit_d0.has_value());
    CHECK(cfg2.limit_d0->mass(2) == 1);
}

TEST_CASE("derived sub-seeds decouple replicates") {
    CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 3));
    CHECK(derive_seed(2, 2, 3) != derive_seed(1, 2, 3));
}

TEST_CASE("convergence report basics") {
    const ExperimentConfig cfg = parse_config(small_config_json());
    const ConvergenceReport report = run_convergence(cfg);
    CHECK(report.has_limit);
    REQUIRE(report.summaries.size() == 2);

    // TV distances live in [0, 1]
    for (const auto& [n, tvs] : report.tv_by_n) {
        CHECK(static_cast<int>(tvs.size()) == cfg.samples_per_n);
        for (double tv : tvs) {
            CHECK(tv >= 0.0);
            CHECK(tv <= 1.0);
        }
    }

    // per-replicate empirical stats sum to one
    std::map<std::pair<int, int>, Rat> totals;
    for (const ClassRow& row : report.rows) totals[{row.n, row.replicate}] += row.empirical_p;
    CHECK(totals.size() == 16);
    for (const auto& [key, total] : totals) CHECK(total == 1);

    // default statistics were attached from the support
    CHECK(report.summaries.front().stat_variance.count("vertex[r=1]") == 1);
    CHECK(report.summaries.front().stat_variance.count("edge[r=1,1]") == 1);
}

TEST_CASE("reports are byte-stable under reruns") {
    auto j = small_config_json();
    const std::string dir_a = "/tmp/treelim_test_out_a";
    const std::string dir_b = "/tmp/treelim_test_out_b";
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);

    const ConvergenceReport first = run_convergence(parse_config(j));
    emit_reports(first, dir_a);
    const ConvergenceReport second = run_convergence(parse_config(j));
    emit_reports(second, dir_b);

    for (const char* name : {"convergence.csv", "summary.csv", "report.json"}) {
        CHECK(slurp(dir_a + "/" + name) == slurp(dir_b + "/" + name));
    }

    // a different seed must change the convergence rows
    j["seed"] = 100;
    const ConvergenceReport third = run_convergence(parse_config(j));
    const std::string dir_c = "/tmp/treelim_test_out_c";
    std::filesystem::remove_all(dir_c);
    emit_reports(third, dir_c);
    CHECK(slurp(dir_a + "/convergence.csv") != slurp(dir_c + "/convergence.csv"));
}

TEST_CASE("infeasible sizes are refused before any sampling") {
    auto j = small_config_json();
    j["n_grid"] = {4, 5};  // odd n breaks the sum parity of uniform{1,3}
    int hook_calls = 0;
    CHECK_THROWS_AS(
        run_convergence(parse_config(j), [&](const ConvergenceReport&) { hook_calls += 1; }),
        InfeasibleModel);
    CHECK(hook_calls == 0);
}

TEST_CASE("the completion hook exposes partial reports per size") {
    const ExperimentConfig cfg = parse_config(small_config_json());
    std::vector<std::size_t> sizes_seen;
    run_convergence(cfg, [&](const ConvergenceReport& partial) {
        sizes_seen.push_back(partial.summaries.size());
    });
    CHECK(sizes_seen == std::vector<std::size_t>{1, 2});
}

TEST_CASE("header-only csv for an empty report") {
    ConvergenceReport empty(parse_config(small_config_json()));
    std::ostringstream csv;
    write_convergence_csv(csv, empty);
    CHECK(csv.str() == "n,replicate,depth,class_code,empirical_p,limit_p,abs_err\n");
    std::ostringstream summary;
    write_summary_csv(summary, empty);
    CHECK(summary.str() == "n,mean_tv,sd_tv,stat_name,var_estimate\n");
}

TEST_CASE("float mode renders csv probabilities as doubles") {
    auto j = small_config_json();
    j["mode"] = "float";
    j["n_grid"] = {10};
    j["samples_per_n"] = 2;
    const ConvergenceReport report = run_convergence(parse_config(j));
    std::ostringstream csv;
    write_convergence_csv(csv, report);
    CHECK(csv.str().find('/') == std::string::npos);  // no rationals
    CHECK(csv.str().find("0.") != std::string::npos);
}

TEST_CASE("star demo") {
    const auto rows = run_star_demo({4, 10, 11, 1000}, 10);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].edge_mass == Rat(3, 4));
    CHECK(rows[0].small_depth2_mass == Rat(3, 4));
    CHECK(rows[1].edge_mass == Rat(9, 10));
    CHECK(rows[1].small_depth2_mass == Rat(9, 10));  // the whole star still fits the cap
    CHECK(rows[2].small_depth2_mass == 0);
    CHECK(rows[3].edge_mass == Rat(999, 1000));
    CHECK(rows[3].small_depth2_mass == 0);

    CHECK_THROWS_AS(run_star_demo({3}, 10), Error);
}

TEST_CASE("ball distribution json schema") {
    const LimitMeasure m(DegreeDistribution::uniform({1, 3}), 3);
    const nlohmann::json j = ball_distribution_json(limit_marginal(m, 1, 10));
    CHECK(j.at("depth") == 1);
    CHECK(j.at("deficit") == "0");
    REQUIRE(j.at("classes").size() == 2);
    for (const auto& cls : j.at("classes")) {
        CHECK(cls.contains("code"));
        CHECK(cls.at("p_num") == "1");
        CHECK(cls.at("p_den") == "2");
    }
}

TEST_CASE("oracle battery rejects out-of-range sizes") {
    CHECK_THROWS_AS(run_oracle_battery(9), ConfigError);
    CHECK_THROWS_AS(run_oracle_battery(1), ConfigError);
}

TEST_CASE("fast end-to-end battery at small sizes") {
    for (const BatteryEntry& entry : run_oracle_battery(5)) {
        INFO(entry.name, ": ", entry.detail);
        CHECK(entry.pass);
    }
}

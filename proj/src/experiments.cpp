#include "treelim/experiments.hpp"

#include <algorithm>

#include "treelim/errors.hpp"
#include "treelim/stats_util.hpp"

namespace treelim {

const NSummary& ConvergenceReport::summary_for(int n) const {
    for (const auto& s : summaries) {
        if (s.n == n) return s;
    }
    throw Error("summary_for: no summary for n=" + std::to_string(n));
}

ConvergenceReport run_convergence(
    const ExperimentConfig& cfg,
    const std::function<void(const ConvergenceReport&)>& on_size_complete) {
    ConvergenceReport report(cfg);
    report.hash = config_hash(cfg);

    for (int n : cfg.n_grid) {
        if (!cfg.model.feasible(n)) {
            throw InfeasibleModel(cfg.model.describe() + " admits no degree sequence at n=" +
                                  std::to_string(n));
        }
    }

    std::vector<StatSpec> stats = cfg.statistics;
    if (stats.empty() && cfg.limit_d0) stats = default_statistics(cfg.limit_d0->support());
    if (stats.empty()) stats = default_statistics({1, 2, 3});

    BallDistribution limit;
    if (cfg.limit_d0) {
        const LimitMeasure measure(*cfg.limit_d0, cfg.degree_cap);
        limit = limit_marginal(measure, cfg.radius,
                               max_ball_nodes(cfg.degree_cap, cfg.radius));
        report.has_limit = true;
    }

    for (int n : cfg.n_grid) {
        NSummary summary;
        summary.n = n;
        std::vector<std::map<std::string, Rat>> freq_per_rep;
        freq_per_rep.reserve(static_cast<std::size_t>(cfg.samples_per_n));

        for (int rep = 0; rep < cfg.samples_per_n; ++rep) {
            Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(n),
                                static_cast<std::uint64_t>(rep)));
            const DegreeSequence seq = cfg.model.sample(n, rng);
            const LabeledTree tree = sample_tree(seq, rng);
            const std::map<CanonicalCode, Rat> emp = empirical_stats(tree, cfg.radius);

            std::map<std::string, Rat> freqs;
            for (const auto& [code, p] : emp) freqs[code.code] = p;
            freq_per_rep.push_back(freqs);

            if (report.has_limit) {
                BallDistribution emp_dist;
                emp_dist.depth = cfg.radius;
                emp_dist.classes = emp;
                emp_dist.deficit = 0;
                report.tv_by_n[n].push_back(to_double(tv_distance(emp_dist, limit)));

                // one row per class seen empirically or carried by the limit
                auto it_e = emp.begin();
                auto it_l = limit.classes.begin();
                while (it_e != emp.end() || it_l != limit.classes.end()) {
                    CanonicalCode code;
                    Rat e = 0, l = 0;
                    if (it_l == limit.classes.end() ||
                        (it_e != emp.end() && it_e->first < it_l->first)) {
                        code = it_e->first;
                        e = it_e->second;
                        ++it_e;
                    } else if (it_e == emp.end() || it_l->first < it_e->first) {
                        code = it_l->first;
                        l = it_l->second;
                        ++it_l;
                    } else {
                        code = it_e->first;
                        e = it_e->second;
                        l = it_l->second;
                        ++it_e;
                        ++it_l;
                    }
                    const Rat err = e >= l ? e - l : l - e;
                    report.rows.push_back(ClassRow{n, rep, code.depth, code.node_count, code.code,
                                                   e, l, err});
                }
            } else {
                for (const auto& [code, p] : emp) {
                    report.rows.push_back(ClassRow{n, rep, code.depth, code.node_count, code.code,
                                                   p, Rat(0), Rat(0)});
                }
            }

            for (const auto& stat : stats) {
                const BigInt x = x_statistic(stat.nf, tree);
                report.stat_values[n][stat.name].push_back(Rat(x, BigInt(n)).convert_to<double>());
            }
        }

        if (report.has_limit) {
            summary.mean_tv = mean(report.tv_by_n[n]);
            summary.sd_tv = sample_sd(report.tv_by_n[n]);
        }
        for (const auto& stat : stats) {
            summary.stat_variance[stat.name] = sample_variance(report.stat_values[n][stat.name]);
        }
        // across-replicate spread of every class frequency that ever appeared
        std::map<std::string, std::vector<double>> freq_series;
        for (const auto& freqs : freq_per_rep) {
            for (const auto& [code, p] : freqs) freq_series[code];  // touch all keys
        }
        if (report.has_limit) {
            for (const auto& [code, p] : limit.classes) freq_series[code.code];
        }
        for (auto& [code, series] : freq_series) {
            for (const auto& freqs : freq_per_rep) {
                auto it = freqs.find(code);
                series.push_back(it == freqs.end() ? 0.0 : to_double(it->second));
            }
            summary.class_freq_sd[code] = sample_sd(series);
        }
        report.summaries.push_back(std::move(summary));
        if (on_size_complete) on_size_complete(report);
    }
    return report;
}

std::vector<StarDemoRow> run_star_demo(const std::vector<int>& n_grid, int small_node_cap) {
    std::vector<StarDemoRow> rows;
    for (int n : n_grid) {
        if (n < 4) throw Error("run_star_demo: n >= 4 required");
        std::vector<std::pair<int, int>> edges;
        edges.reserve(static_cast<std::size_t>(n - 1));
        for (int v = 2; v <= n; ++v) edges.emplace_back(1, v);
        const LabeledTree star(n, edges);

        StarDemoRow row;
        row.n = n;
        const CanonicalCode edge_code = canonical_code(
            compose_ball({ball_from_parents({-1})}));
        const auto depth1 = empirical_stats(star, 1);
        auto it = depth1.find(edge_code);
        row.edge_mass = it == depth1.end() ? Rat(0) : it->second;

        row.small_depth2_mass = 0;
        for (const auto& [code, p] : empirical_stats(star, 2)) {
            if (code.depth == 2 && code.node_count <= small_node_cap) {
                row.small_depth2_mass += p;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace treelim

#include "treelim/battery.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "treelim/errors.hpp"
#include "treelim/limit_object.hpp"

namespace treelim {

bool is_labeled_embedding(const NumberedForest& nf, const std::vector<int>& positions,
                          const LabeledTree& tree) {
    const int m = nf.m();
    if (static_cast<int>(positions.size()) != m) throw Error("is_labeled_embedding: bad map size");
    std::set<int> used;
    for (int pos : positions) {
        if (pos < 1 || pos > tree.n()) return false;
        if (!used.insert(pos).second) return false;
    }
    for (auto [u, v] : nf.forest().edges()) {
        const int pu = positions[static_cast<std::size_t>(u - 1)];
        const int pv = positions[static_cast<std::size_t>(v - 1)];
        const auto& nb = tree.neighbors(pu);
        if (!std::binary_search(nb.begin(), nb.end(), pv)) return false;
    }
    for (int v = 1; v <= m; ++v) {
        if (tree.degree(positions[static_cast<std::size_t>(v - 1)]) != nf.target_degree(v)) {
            return false;
        }
    }
    return true;
}

void for_each_tree(int n, const std::function<void(const LabeledTree&)>& visit) {
    for (const DegreeSequence& d : enumerate_degree_sequences(n)) {
        enumerate_trees(d, visit);
    }
}

std::vector<ModelCase> standard_model_battery(int n) {
    std::vector<ModelCase> models;
    {
        std::vector<int> path(static_cast<std::size_t>(n), 2);
        path[static_cast<std::size_t>(n - 2)] = 1;
        path[static_cast<std::size_t>(n - 1)] = 1;
        models.push_back({"fixed_path", DegreeModel::fixed(path)});
    }
    models.push_back({"star", DegreeModel::star()});
    models.push_back(
        {"cond_iid_u123", DegreeModel::conditioned_iid(DegreeDistribution::uniform({1, 2, 3}))});
    const DegreeModel u13 = DegreeModel::conditioned_iid(DegreeDistribution::uniform({1, 3}));
    if (u13.feasible(n)) models.push_back({"cond_iid_u13", u13});
    return models;
}

std::vector<ForestCase> standard_forest_battery() {
    std::vector<ForestCase> forests;
    forests.push_back({"vertex_r1", vertex_forest(1)});
    forests.push_back({"vertex_r2", vertex_forest(2)});
    forests.push_back({"edge_r11", edge_forest(1, 1)});
    forests.push_back({"edge_r02", edge_forest(0, 2)});
    forests.push_back({"path3_r101", path_forest({1, 0, 1})});
    forests.push_back(
        {"edge_plus_vertex", NumberedForest(Forest(3, {{1, 2}}), {1, 1, 2})});
    forests.push_back({"star3_r011", NumberedForest(Forest(3, {{1, 2}, {1, 3}}), {0, 1, 1})});
    return forests;
}

BatteryEntry check_prufer_bijection(int n) {
    BatteryEntry entry;
    entry.name = "prufer_bijection_n" + std::to_string(n);
    long long checked = 0;
    long long failures = 0;
    std::vector<int> symbols(static_cast<std::size_t>(std::max(0, n - 2)), 1);
    auto rec = [&](auto&& self, int index) -> void {
        if (index == n - 2) {
            const PruferSequence seq{n, symbols};
            const LabeledTree tree = prufer_decode(seq);
            const PruferSequence back = prufer_encode(tree);
            checked += 1;
            if (back.symbols != seq.symbols || !(prufer_decode(back) == tree)) failures += 1;
            return;
        }
        for (int s = 1; s <= n; ++s) {
            symbols[static_cast<std::size_t>(index)] = s;
            self(self, index + 1);
        }
    };
    rec(rec, 0);
    entry.pass = failures == 0;
    std::ostringstream os;
    os << checked << " codes, " << failures << " failures";
    entry.detail = os.str();
    return entry;
}

BatteryEntry check_tree_counts(int n) {
    BatteryEntry entry;
    entry.name = "tree_counts_n" + std::to_string(n);
    BigInt total = 0;
    bool pass = true;
    for (const DegreeSequence& d : enumerate_degree_sequences(n)) {
        long long enumerated = 0;
        enumerate_trees(d, [&](const LabeledTree&) { enumerated += 1; });
        if (BigInt(enumerated) != count_trees(d)) pass = false;
        total += enumerated;
    }
    // Cayley: n^(n-2) labeled trees in total
    BigInt cayley = 1;
    for (int i = 0; i < n - 2; ++i) cayley *= n;
    if (total != cayley) pass = false;
    entry.pass = pass;
    entry.detail = total.str() + " trees enumerated";
    return entry;
}

namespace {

struct CondCase {
    std::string name;
    NumberedForest nf1;
    std::vector<int> phi;
    NumberedForest nf2;
    std::vector<int> psi;
};

std::vector<CondCase> standard_cond_battery() {
    std::vector<CondCase> cases;
    cases.push_back({"vertex_given_edge", vertex_forest(2), {3}, edge_forest(1, 1), {1, 2}});
    cases.push_back({"edges_sharing_a_node", edge_forest(1, 1), {1, 2}, edge_forest(1, 1), {2, 3}});
    cases.push_back({"identical", edge_forest(1, 1), {1, 2}, edge_forest(1, 1), {1, 2}});
    cases.push_back({"disjoint_edges", edge_forest(1, 1), {1, 2}, edge_forest(0, 2), {3, 4}});
    cases.push_back(
        {"vertex_given_path", vertex_forest(1), {4}, path_forest({1, 0, 1}), {1, 2, 3}});
    return cases;
}

std::vector<int> identity_positions(int m) {
    std::vector<int> pos(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) pos[static_cast<std::size_t>(i)] = i + 1;
    return pos;
}

}  // namespace

std::vector<BatteryEntry> check_embedding_formulas(int n, const std::vector<ForestCase>& extra) {
    const std::vector<ModelCase> models = standard_model_battery(n);
    std::vector<ForestCase> forests = standard_forest_battery();
    forests.insert(forests.end(), extra.begin(), extra.end());
    const std::vector<CondCase> conds = standard_cond_battery();

    const std::size_t m_count = models.size();
    std::vector<std::vector<Rat>> embed_freq(m_count, std::vector<Rat>(forests.size(), Rat(0)));
    std::vector<std::vector<Rat>> x_mean(m_count, std::vector<Rat>(forests.size(), Rat(0)));
    std::vector<std::vector<Rat>> cond_joint(m_count, std::vector<Rat>(conds.size(), Rat(0)));
    std::vector<std::vector<Rat>> cond_base(m_count, std::vector<Rat>(conds.size(), Rat(0)));

    std::vector<std::vector<int>> forest_pos;
    for (const auto& fc : forests) forest_pos.push_back(identity_positions(fc.nf.m()));

    for (const DegreeSequence& d : enumerate_degree_sequences(n)) {
        // P(T) is constant across trees sharing a degree sequence
        std::vector<Rat> tree_prob(m_count);
        bool any = false;
        for (std::size_t mi = 0; mi < m_count; ++mi) {
            const Rat p_seq = models[mi].model.marginal(n, d.degrees);
            tree_prob[mi] = p_seq == 0 ? Rat(0) : p_seq / Rat(count_trees(d));
            any = any || tree_prob[mi] != 0;
        }
        if (!any) continue;
        enumerate_trees(d, [&](const LabeledTree& tree) {
            for (std::size_t mi = 0; mi < m_count; ++mi) {
                const Rat& p = tree_prob[mi];
                if (p == 0) continue;
                for (std::size_t fi = 0; fi < forests.size(); ++fi) {
                    if (is_labeled_embedding(forests[fi].nf, forest_pos[fi], tree)) {
                        embed_freq[mi][fi] += p;
                    }
                    x_mean[mi][fi] += p * Rat(x_statistic(forests[fi].nf, tree));
                }
                for (std::size_t ci = 0; ci < conds.size(); ++ci) {
                    const bool i2 = is_labeled_embedding(conds[ci].nf2, conds[ci].psi, tree);
                    if (!i2) continue;
                    cond_base[mi][ci] += p;
                    if (is_labeled_embedding(conds[ci].nf1, conds[ci].phi, tree)) {
                        cond_joint[mi][ci] += p;
                    }
                }
            }
        });
    }

    std::vector<BatteryEntry> entries;
    for (std::size_t mi = 0; mi < m_count; ++mi) {
        {
            BatteryEntry e;
            e.name = "embed_prob_n" + std::to_string(n) + "_" + models[mi].name;
            e.pass = true;
            for (std::size_t fi = 0; fi < forests.size(); ++fi) {
                Rat formula;
                bool refused = false;
                try {
                    formula = forest_embed_prob(models[mi].model, forests[fi].nf, n);
                } catch (const Error&) {
                    refused = true;  // degenerate configuration: the oracle must find nothing
                }
                const bool ok = refused ? embed_freq[mi][fi] == 0 : formula == embed_freq[mi][fi];
                if (!ok) {
                    e.pass = false;
                    e.detail += forests[fi].name + ": " +
                                (refused ? std::string("refused") : rat_string(formula)) + " vs " +
                                rat_string(embed_freq[mi][fi]) + "; ";
                }
            }
            if (e.pass) e.detail = std::to_string(forests.size()) + " forests exact";
            entries.push_back(std::move(e));
        }
        {
            BatteryEntry e;
            e.name = "expected_x_n" + std::to_string(n) + "_" + models[mi].name;
            e.pass = true;
            for (std::size_t fi = 0; fi < forests.size(); ++fi) {
                if (forests[fi].nf.forest().component_count() != 1) continue;
                Rat formula;
                bool refused = false;
                try {
                    formula = expected_x(models[mi].model, forests[fi].nf, n);
                } catch (const Error&) {
                    refused = true;
                }
                const bool ok = refused ? x_mean[mi][fi] == 0 : formula == x_mean[mi][fi];
                if (!ok) {
                    e.pass = false;
                    e.detail += forests[fi].name + ": " +
                                (refused ? std::string("refused") : rat_string(formula)) + " vs " +
                                rat_string(x_mean[mi][fi]) + "; ";
                }
            }
            if (e.pass) e.detail = "tree statistics exact";
            entries.push_back(std::move(e));
        }
        {
            BatteryEntry e;
            e.name = "cond_embed_n" + std::to_string(n) + "_" + models[mi].name;
            e.pass = true;
            for (std::size_t ci = 0; ci < conds.size(); ++ci) {
                if (cond_base[mi][ci] == 0) {
                    // conditioning event impossible: the formula must refuse too
                    try {
                        cond_embed_prob(models[mi].model, conds[ci].nf1, conds[ci].phi,
                                        conds[ci].nf2, conds[ci].psi, n);
                        e.pass = false;
                        e.detail += conds[ci].name + ": formula accepted a null condition; ";
                    } catch (const DegenerateConfiguration&) {
                    }
                    continue;
                }
                const Rat oracle = cond_joint[mi][ci] / cond_base[mi][ci];
                const Rat formula = cond_embed_prob(models[mi].model, conds[ci].nf1, conds[ci].phi,
                                                    conds[ci].nf2, conds[ci].psi, n);
                if (formula != oracle) {
                    e.pass = false;
                    e.detail += conds[ci].name + ": " + rat_string(formula) + " vs " +
                                rat_string(oracle) + "; ";
                }
            }
            if (e.pass) e.detail = std::to_string(conds.size()) + " conditionals exact";
            entries.push_back(std::move(e));
        }
    }
    return entries;
}

std::vector<BatteryEntry> check_edge_formulas(int n) {
    const std::vector<ModelCase> models = standard_model_battery(n);
    std::vector<BatteryEntry> entries;
    for (const auto& mc : models) {
        std::map<std::pair<int, int>, Rat> deg_joint;
        std::map<std::pair<int, int>, Rat> edge_joint;
        Rat edge_total = 0;
        for (const DegreeSequence& d : enumerate_degree_sequences(n)) {
            const Rat p_seq = mc.model.marginal(n, d.degrees);
            if (p_seq == 0) continue;
            const Rat p = p_seq / Rat(count_trees(d));
            enumerate_trees(d, [&](const LabeledTree& tree) {
                const std::pair<int, int> degs{tree.degree(1), tree.degree(2)};
                deg_joint[degs] += p;
                const auto& nb = tree.neighbors(1);
                if (std::binary_search(nb.begin(), nb.end(), 2)) {
                    edge_joint[degs] += p;
                    edge_total += p;
                }
            });
        }

        BatteryEntry conn;
        conn.name = "edge_prob_n" + std::to_string(n) + "_" + mc.name;
        conn.pass = true;
        for (const auto& [degs, joint] : deg_joint) {
            auto it = edge_joint.find(degs);
            const Rat adjacent = it == edge_joint.end() ? Rat(0) : it->second;
            const Rat formula = edge_prob(degs.first, degs.second, n);
            if (adjacent / joint != formula) {
                conn.pass = false;
                conn.detail += "(" + std::to_string(degs.first) + "," +
                               std::to_string(degs.second) + "): " +
                               rat_string(adjacent / joint) + " vs " + rat_string(formula) + "; ";
            }
        }
        if (conn.pass) conn.detail = std::to_string(deg_joint.size()) + " degree pairs exact";
        entries.push_back(std::move(conn));

        BatteryEntry dist;
        dist.name = "edge_degree_dist_n" + std::to_string(n) + "_" + mc.name;
        dist.pass = edge_total != 0;
        Rat formula_total = 0;
        for (int di = 1; di <= n - 1 && dist.pass; ++di) {
            for (int dj = 1; dj <= n - 1; ++dj) {
                const Rat formula = edge_degree_dist(mc.model, n, di, dj);
                formula_total += formula;
                auto it = edge_joint.find({di, dj});
                const Rat oracle = (it == edge_joint.end() ? Rat(0) : it->second) / edge_total;
                if (formula != oracle) {
                    dist.pass = false;
                    dist.detail += "(" + std::to_string(di) + "," + std::to_string(dj) + "): " +
                                   rat_string(formula) + " vs " + rat_string(oracle) + "; ";
                    break;
                }
            }
        }
        if (dist.pass && formula_total != 1) {
            dist.pass = false;
            dist.detail = "distribution sums to " + rat_string(formula_total);
        }
        if (dist.pass) dist.detail = "conditional degree law exact and normalized";
        entries.push_back(std::move(dist));
    }
    return entries;
}

int neighborhood_identity_mismatches(const LabeledTree& tree, int max_depth) {
    int mismatches = 0;
    const int n = tree.n();
    for (int depth = 1; depth <= max_depth; ++depth) {
        struct ClassData {
            RootedBall representative;
            long long count = 0;
        };
        std::map<std::string, ClassData> classes;
        for (int v = 1; v <= n; ++v) {
            RootedBall b = ball(tree, v, depth);
            if (b.depth() != depth) continue;  // shallower balls belong to their own depth
            const std::string key = canonical_code(b).code;
            auto it = classes.find(key);
            if (it == classes.end()) {
                classes.emplace(key, ClassData{std::move(b), 1});
            } else {
                it->second.count += 1;
            }
        }
        for (const auto& [key, data] : classes) {
            const StrippedBall stripped = strip_last_level(data.representative);
            const NumberedForest nf = numbered_forest_from_ball(stripped.ball, stripped.remainders);
            const BigInt x = x_statistic(nf, tree);
            const BigInt quotient = aut_quotient_size(data.representative);
            const Rat empirical(data.count, n);
            const Rat via_x = Rat(x) / (Rat(n) * Rat(quotient));
            if (empirical != via_x) mismatches += 1;
        }
    }
    return mismatches;
}

BatteryEntry check_neighborhood_identity(int n, int tree_count, int max_depth, std::uint64_t seed) {
    BatteryEntry entry;
    entry.name = "neighborhood_identity_n" + std::to_string(n);
    const DegreeModel model =
        DegreeModel::conditioned_iid(DegreeDistribution::uniform({1, 2, 3}));
    int mismatches = 0;
    for (int t = 0; t < tree_count; ++t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(t)));
        const LabeledTree tree = sample_tree(model.sample(n, rng), rng);
        mismatches += neighborhood_identity_mismatches(tree, max_depth);
    }
    entry.pass = mismatches == 0;
    entry.detail = std::to_string(tree_count) + " trees, depths <= " + std::to_string(max_depth) +
                   ", " + std::to_string(mismatches) + " mismatches";
    return entry;
}

std::vector<BatteryEntry> check_consistency_ratios(int max_base_depth, int degree_cap) {
    struct MeasureCase {
        std::string name;
        DegreeDistribution d0;
    };
    const std::vector<MeasureCase> measures{
        {"point2", DegreeDistribution::point_mass(2)},
        {"uniform13", DegreeDistribution::uniform({1, 3})},
        {"uniform123", DegreeDistribution::uniform({1, 2, 3})},
        {"point1", DegreeDistribution::point_mass(1)},
        {"point3", DegreeDistribution::point_mass(3)},
    };
    std::vector<BatteryEntry> entries;
    for (const auto& mc : measures) {
        const LimitMeasure measure(mc.d0, degree_cap);
        const Rat gamma = measure.gamma();
        BatteryEntry e;
        e.name = "consistency_ratio_" + mc.name;
        e.pass = true;
        long long bases = 0;
        for (int depth = 1; depth <= max_base_depth; ++depth) {
            for (const RootedBall& base :
                 enumerate_balls(depth, degree_cap, max_ball_nodes(degree_cap, depth))) {
                if (p_limit(measure, base) == 0) continue;
                bases += 1;
                const ConsistencyReport report = consistency_report(measure, base, degree_cap);
                if (report.ratio != gamma) {
                    e.pass = false;
                    e.detail += canonical_code(base).code + ": ratio " +
                                rat_string(report.ratio) + " vs gamma " + rat_string(gamma) + "; ";
                }
            }
        }
        if (e.pass) {
            e.detail = std::to_string(bases) + " positive-mass bases, ratio = " +
                       rat_string(gamma) + " exactly";
        }
        entries.push_back(std::move(e));
    }
    return entries;
}

std::vector<BatteryEntry> run_oracle_battery(int max_n, const std::vector<ForestCase>& extra_forests) {
    if (max_n < 2 || max_n > 8) {
        throw ConfigError("oracle battery supports 2 <= max_n <= 8, got " + std::to_string(max_n));
    }
    std::vector<BatteryEntry> entries;
    for (int n = 2; n <= max_n; ++n) entries.push_back(check_prufer_bijection(n));
    for (int n = 2; n <= max_n; ++n) entries.push_back(check_tree_counts(n));
    for (int n = 5; n <= std::min(max_n, 7); ++n) {
        auto batch = check_embedding_formulas(n, extra_forests);
        entries.insert(entries.end(), batch.begin(), batch.end());
    }
    for (int n = 4; n <= std::min(max_n, 7); ++n) {
        auto batch = check_edge_formulas(n);
        entries.insert(entries.end(), batch.begin(), batch.end());
    }
    entries.push_back(check_neighborhood_identity(30, 5, 3, 20240809));
    auto consistency = check_consistency_ratios();
    entries.insert(entries.end(), consistency.begin(), consistency.end());
    return entries;
}

}  // namespace treelim

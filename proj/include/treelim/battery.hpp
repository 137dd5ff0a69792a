#pragma once
// Exhaustive small-instance verification: every closed-form probability is
// replayed against brute-force enumeration over all labeled trees, with exact
// rational equality. The embedding check used as the oracle here is a direct
// transcription of the definition, independent of the backtracking counters.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "treelim/hom_count.hpp"
#include "treelim/tree.hpp"

namespace treelim {

struct BatteryEntry {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Definition-level check: positions is injective, forest edges map to tree
// edges, and every image has its exact target degree.
bool is_labeled_embedding(const NumberedForest& nf, const std::vector<int>& positions,
                          const LabeledTree& tree);

// Visits every labeled tree on n nodes (grouped by degree sequence).
void for_each_tree(int n, const std::function<void(const LabeledTree&)>& visit);

struct ModelCase {
    std::string name;
    DegreeModel model;
};
// Fixed path multiset, Star, ConditionedIID uniform{1,2,3}, and
// ConditionedIID uniform{1,3} where its sum parity is feasible.
std::vector<ModelCase> standard_model_battery(int n);

struct ForestCase {
    std::string name;
    NumberedForest nf;
};
std::vector<ForestCase> standard_forest_battery();

BatteryEntry check_prufer_bijection(int n);
BatteryEntry check_tree_counts(int n);
// `extra` forests join the standard battery (degenerate combinations that the
// closed form refuses are skipped for them).
std::vector<BatteryEntry> check_embedding_formulas(int n,
                                                   const std::vector<ForestCase>& extra = {});
std::vector<BatteryEntry> check_edge_formulas(int n);

// Number of (depth, class) pairs where the empirical class frequency differs
// from X / (n |Aut quotient|) on this tree; 0 when the identity holds.
int neighborhood_identity_mismatches(const LabeledTree& tree, int max_depth);
BatteryEntry check_neighborhood_identity(int n, int tree_count, int max_depth, std::uint64_t seed);

std::vector<BatteryEntry> check_consistency_ratios(int max_base_depth = 2, int degree_cap = 5);

// The full ledger; max_n in [2, 8].
std::vector<BatteryEntry> run_oracle_battery(int max_n,
                                             const std::vector<ForestCase>& extra_forests = {});

}  // namespace treelim

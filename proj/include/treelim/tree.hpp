#pragma once
// Labeled trees on {1..n}, the Pruefer bijection (smallest-leaf elimination),
// exact counting, uniform sampling for a fixed degree sequence, and the
// exhaustive enumeration used by the oracle checks.

#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "treelim/degree_model.hpp"
#include "treelim/errors.hpp"
#include "treelim/rational.hpp"
#include "treelim/rng.hpp"

namespace treelim {

class LabeledTree {
public:
    // Validates: n-1 edges over [1, n], simple, connected.
    LabeledTree(int n, const std::vector<std::pair<int, int>>& edges);

    int n() const { return n_; }
    const std::vector<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
    int degree(int v) const { return static_cast<int>(neighbors(v).size()); }
    std::vector<int> degree_list() const;                 // index i -> degree of node i+1
    std::vector<std::pair<int, int>> edge_list() const;   // u < v, sorted
    bool operator==(const LabeledTree& other) const;

private:
    int n_;
    std::vector<std::vector<int>> adj_;  // 1-based; adj_[0] unused
};

struct PruferSequence {
    int n = 0;
    std::vector<int> symbols;  // length n-2, entries in [1, n]
};

LabeledTree prufer_decode(const PruferSequence& seq);
PruferSequence prufer_encode(const LabeledTree& tree);

// Number of labeled trees with this exact degree sequence:
// (n-2)! / prod (D(i)-1)!.
BigInt count_trees(const DegreeSequence& d);

// Uniform over trees with degree sequence exactly d: a uniformly shuffled
// arrangement of the symbol multiset {i x (D(i)-1)} decoded as a Pruefer code.
LabeledTree sample_tree(const DegreeSequence& d, Rng& rng);

// Visits every tree with degree sequence d exactly once (distinct multiset
// permutations of the symbol list, ascending). Raises TooManyTrees beyond 1e7.
void enumerate_trees(const DegreeSequence& d, const std::function<void(const LabeledTree&)>& visit);
std::vector<LabeledTree> all_trees(const DegreeSequence& d);

// P(uniform tree with model-drawn degree sequence equals T) =
// P(D = D_T) / count_trees(D_T).
Rat tree_probability(const DegreeModel& model, const LabeledTree& tree);

// Plain-text edge list: first line "n", then n-1 lines "u v" (1-based).
void write_edge_list(std::ostream& os, const LabeledTree& tree);
LabeledTree read_edge_list(std::istream& is);

}  // namespace treelim

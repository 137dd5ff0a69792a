#pragma once
// Numbered forests (test graphs with remainder degrees), injective labeled
// homomorphism counting by degree-pruned backtracking, and the closed-form
// embedding probabilities for uniform random trees with exchangeable degree
// sequences.

#include <iosfwd>
#include <utility>
#include <vector>

#include "treelim/degree_model.hpp"
#include "treelim/neighborhood.hpp"
#include "treelim/rational.hpp"
#include "treelim/tree.hpp"

namespace treelim {

// Simple acyclic graph on nodes 1..m.
class Forest {
public:
    Forest(int m, std::vector<std::pair<int, int>> edges);

    int m() const { return m_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
    int degree(int v) const { return static_cast<int>(neighbors(v).size()); }
    const std::vector<std::vector<int>>& components() const { return components_; }
    int component_count() const { return static_cast<int>(components_.size()); }

private:
    int m_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;
    std::vector<std::vector<int>> components_;
};

// Forest plus one nonnegative remainder per node; an embedding must land node
// j on a host vertex of degree exactly degree(j) + remainder(j).
class NumberedForest {
public:
    NumberedForest(Forest forest, std::vector<int> remainders);

    const Forest& forest() const { return forest_; }
    int m() const { return forest_.m(); }
    int remainder(int v) const { return remainders_[static_cast<std::size_t>(v - 1)]; }
    const std::vector<int>& remainders() const { return remainders_; }
    int target_degree(int v) const { return forest_.degree(v) + remainder(v); }
    std::vector<int> target_degrees() const;
    // Sum of remainders over each connected component, aligned with
    // forest().components().
    const std::vector<long long>& component_remainder_sums() const { return component_sums_; }
    long long total_remainder() const { return total_remainder_; }

private:
    Forest forest_;
    std::vector<int> remainders_;
    std::vector<long long> component_sums_;
    long long total_remainder_;
};

// Convenience builders for the common test forests.
NumberedForest vertex_forest(int remainder);
NumberedForest edge_forest(int r1, int r2);
NumberedForest path_forest(const std::vector<int>& remainders);
// Unrooted view of a ball with per-node remainders (ball-local order).
NumberedForest numbered_forest_from_ball(const RootedBall& ball, const std::vector<int>& remainders);

// Plain-text format: first line m, then one "u v" line per edge, then a final
// line holding the m remainders.
NumberedForest read_numbered_forest(std::istream& is);
void write_numbered_forest(std::ostream& os, const NumberedForest& nf);

// Injective homomorphism count and density of F in G.
BigInt inj_count(const Forest& f, const LabeledTree& g);
Rat inj_density(const Forest& f, const LabeledTree& g);

// Degree-constrained (labeled) versions.
BigInt inj_lab_count(const NumberedForest& nf, const LabeledTree& g);
Rat inj_lab_density(const NumberedForest& nf, const LabeledTree& g);
BigInt x_statistic(const NumberedForest& nf, const LabeledTree& g);  // = n * inj_lab_density

// prod over components [ R_i * prod_j (D_F(j)+r_j-1)! / r_j! ].
Rat h_constant(const NumberedForest& nf);

// Probability that one fixed injection of the numbered forest lands as a
// labeled embedding into the random tree (the injection itself is irrelevant
// by exchangeability).
Rat forest_embed_prob(const DegreeModel& model, const NumberedForest& nf, int n);

// Identifies nodes with equal host positions, unions the edges, and
// recomputes remainders against the common target degrees.
struct MergedForest {
    NumberedForest forest;
    std::vector<int> host_positions;  // sorted; node i+1 sits at host_positions[i]
};
MergedForest merge_numbered(const NumberedForest& a, const std::vector<int>& phi,
                            const NumberedForest& b, const std::vector<int>& psi);

// P(first forest embeds at phi | second embeds at psi).
Rat cond_embed_prob(const DegreeModel& model, const NumberedForest& a, const std::vector<int>& phi,
                    const NumberedForest& b, const std::vector<int>& psi, int n);

// E(X) for a numbered tree on k nodes: n!/(n-k)! times the embedding probability.
Rat expected_x(const DegreeModel& model, const NumberedForest& nf, int n);

// P(two vertices are adjacent | their degrees) = (d_i + d_j - 2)/(n - 2).
Rat edge_prob(int di, int dj, int n);

// P(endpoint degrees equal (d_i, d_j) | the pair is an edge).
Rat edge_degree_dist(const DegreeModel& model, int n, int di, int dj);

}  // namespace treelim

#pragma once
// Rooted balls around tree vertices: level decomposition, canonical codes
// deciding rooted isomorphism, automorphism counts and the quotient by
// deepest-level sibling permutations, and per-graph neighborhood statistics.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "treelim/rational.hpp"
#include "treelim/tree.hpp"

namespace treelim {

// A finite rooted tree stored in parent-pointer form. Node 0 is the root and
// parent[i] < i for every other node, so a single forward pass computes
// levels. host_label keeps the originating tree's vertex labels when the ball
// was cut from one (0 for synthetic balls).
struct RootedBall {
    std::vector<int> parent;                  // parent[0] == -1
    std::vector<std::vector<int>> children;
    std::vector<int> level_of;
    std::vector<std::vector<int>> levels;     // levels[d] lists nodes at distance d
    std::vector<int> host_label;

    int node_count() const { return static_cast<int>(parent.size()); }
    int depth() const { return static_cast<int>(levels.size()) - 1; }
    int degree(int node) const {
        return static_cast<int>(children[static_cast<std::size_t>(node)].size()) +
               (parent[static_cast<std::size_t>(node)] >= 0 ? 1 : 0);
    }
    std::vector<int> level_sizes() const;
};

// Builds a ball from parent pointers (parent[0] == -1, parent[i] < i).
RootedBall ball_from_parents(std::vector<int> parent, std::vector<int> host_label = {});

// Induced subgraph of the tree on vertices within distance R of v, rooted at v.
RootedBall ball(const LabeledTree& tree, int v, int radius);

// Relabeling-invariant code: leaf -> "()", internal node -> "(" + children
// codes in sorted order + ")". Equal codes iff rooted-isomorphic.
struct CanonicalCode {
    std::string code;
    int node_count = 0;
    int depth = 0;

    friend bool operator==(const CanonicalCode& a, const CanonicalCode& b) {
        return a.code == b.code;
    }
    friend bool operator!=(const CanonicalCode& a, const CanonicalCode& b) {
        return a.code != b.code;
    }
    friend bool operator<(const CanonicalCode& a, const CanonicalCode& b) {
        return a.code < b.code;
    }
};

CanonicalCode canonical_code(const RootedBall& b);

// |Aut(B)| over root-preserving automorphisms.
BigInt aut_size(const RootedBall& b);

// |Aut(B)| divided by the product of (children count)! over the parents of
// the deepest level; the class size of automorphisms modulo permutations of
// deepest-level siblings. Depth >= 1 required.
BigInt aut_quotient_size(const RootedBall& b);

// Removes the deepest level. remainders[i] counts the children node i lost,
// i.e. the degree difference between the ball and its truncation.
struct StrippedBall {
    RootedBall ball;
    std::vector<int> remainders;
};
StrippedBall strip_last_level(const RootedBall& b);

// Root ball of a ball: keeps nodes within distance `radius` of the root.
RootedBall truncate_ball(const RootedBall& b, int radius);

// New root with the given subtrees hanging below it.
RootedBall compose_ball(const std::vector<RootedBall>& subtrees);

// Appends new_child_counts[j] fresh leaves under the j-th deepest-level node.
RootedBall extend_ball(const RootedBall& b, const std::vector<int>& new_child_counts);

// Fraction of vertices whose R-ball lands in each rooted-isomorphism class;
// values are exact and sum to 1.
std::map<CanonicalCode, Rat> empirical_stats(const LabeledTree& tree, int radius);

}  // namespace treelim

#include "treelim/tree.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>

namespace treelim {

LabeledTree::LabeledTree(int n, const std::vector<std::pair<int, int>>& edges) : n_(n) {
    if (n < 1) throw Error("LabeledTree: n >= 1 required");
    if (static_cast<int>(edges.size()) != n - 1) {
        throw Error("LabeledTree: expected " + std::to_string(n - 1) + " edges, got " +
                    std::to_string(edges.size()));
    }
    adj_.assign(static_cast<std::size_t>(n) + 1, {});
    for (auto [u, v] : edges) {
        if (u < 1 || u > n || v < 1 || v > n) throw Error("LabeledTree: node label out of range");
        if (u == v) throw Error("LabeledTree: self-loop at node " + std::to_string(u));
        adj_[static_cast<std::size_t>(u)].push_back(v);
        adj_[static_cast<std::size_t>(v)].push_back(u);
    }
    for (int v = 1; v <= n; ++v) {
        auto& nb = adj_[static_cast<std::size_t>(v)];
        std::sort(nb.begin(), nb.end());
        if (std::adjacent_find(nb.begin(), nb.end()) != nb.end()) {
            throw Error("LabeledTree: parallel edge at node " + std::to_string(v));
        }
    }
    // connectivity; with n-1 simple edges this also rules out cycles
    std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
    std::queue<int> q;
    q.push(1);
    seen[1] = 1;
    int visited = 1;
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        for (int u : adj_[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(u)]) {
                seen[static_cast<std::size_t>(u)] = 1;
                visited += 1;
                q.push(u);
            }
        }
    }
    if (visited != n) throw Error("LabeledTree: not connected");
}

std::vector<int> LabeledTree::degree_list() const {
    std::vector<int> degrees(static_cast<std::size_t>(n_));
    for (int v = 1; v <= n_; ++v) degrees[static_cast<std::size_t>(v - 1)] = degree(v);
    return degrees;
}

std::vector<std::pair<int, int>> LabeledTree::edge_list() const {
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(n_ > 0 ? n_ - 1 : 0));
    for (int v = 1; v <= n_; ++v) {
        for (int u : neighbors(v)) {
            if (v < u) edges.emplace_back(v, u);
        }
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

bool LabeledTree::operator==(const LabeledTree& other) const {
    return n_ == other.n_ && adj_ == other.adj_;
}

LabeledTree prufer_decode(const PruferSequence& seq) {
    const int n = seq.n;
    if (n < 2) throw Error("prufer_decode: n >= 2 required");
    if (static_cast<int>(seq.symbols.size()) != n - 2) {
        throw Error("prufer_decode: expected " + std::to_string(n - 2) + " symbols");
    }
    std::vector<int> degree(static_cast<std::size_t>(n) + 1, 1);
    for (int s : seq.symbols) {
        if (s < 1 || s > n) throw SymbolOutOfRange("Pruefer symbol " + std::to_string(s));
        degree[static_cast<std::size_t>(s)] += 1;
    }
    std::priority_queue<int, std::vector<int>, std::greater<int>> leaves;
    for (int v = 1; v <= n; ++v) {
        if (degree[static_cast<std::size_t>(v)] == 1) leaves.push(v);
    }
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(n - 1));
    for (int s : seq.symbols) {
        const int leaf = leaves.top();
        leaves.pop();
        edges.emplace_back(leaf, s);
        if (--degree[static_cast<std::size_t>(s)] == 1) leaves.push(s);
    }
    const int a = leaves.top();
    leaves.pop();
    const int b = leaves.top();
    edges.emplace_back(a, b);
    return LabeledTree(n, edges);
}

PruferSequence prufer_encode(const LabeledTree& tree) {
    const int n = tree.n();
    if (n < 2) throw Error("prufer_encode: n >= 2 required");
    std::vector<int> degree(static_cast<std::size_t>(n) + 1, 0);
    std::vector<char> removed(static_cast<std::size_t>(n) + 1, 0);
    for (int v = 1; v <= n; ++v) degree[static_cast<std::size_t>(v)] = tree.degree(v);

    std::priority_queue<int, std::vector<int>, std::greater<int>> leaves;
    for (int v = 1; v <= n; ++v) {
        if (degree[static_cast<std::size_t>(v)] == 1) leaves.push(v);
    }
    PruferSequence seq;
    seq.n = n;
    seq.symbols.reserve(static_cast<std::size_t>(n - 2));
    for (int step = 0; step < n - 2; ++step) {
        const int leaf = leaves.top();
        leaves.pop();
        removed[static_cast<std::size_t>(leaf)] = 1;
        int parent = 0;
        for (int u : tree.neighbors(leaf)) {
            if (!removed[static_cast<std::size_t>(u)]) {
                parent = u;
                break;
            }
        }
        seq.symbols.push_back(parent);
        if (--degree[static_cast<std::size_t>(parent)] == 1) leaves.push(parent);
    }
    return seq;
}

BigInt count_trees(const DegreeSequence& d) {
    validate_degree_sequence(d.degrees);
    BigInt count = factorial(d.n() - 2);
    for (int deg : d.degrees) count /= factorial(deg - 1);
    return count;
}

namespace {

std::vector<int> symbol_multiset(const DegreeSequence& d) {
    std::vector<int> symbols;
    symbols.reserve(static_cast<std::size_t>(d.n() - 2));
    for (int i = 0; i < d.n(); ++i) {
        for (int c = 1; c < d.degrees[static_cast<std::size_t>(i)]; ++c) symbols.push_back(i + 1);
    }
    return symbols;
}

}  // namespace

LabeledTree sample_tree(const DegreeSequence& d, Rng& rng) {
    validate_degree_sequence(d.degrees);
    std::vector<int> symbols = symbol_multiset(d);
    rng.shuffle(symbols);
    return prufer_decode(PruferSequence{d.n(), std::move(symbols)});
}

void enumerate_trees(const DegreeSequence& d,
                     const std::function<void(const LabeledTree&)>& visit) {
    if (count_trees(d) > 10000000) {
        throw TooManyTrees("enumeration capped at 1e7 trees");
    }
    std::vector<int> symbols = symbol_multiset(d);
    std::sort(symbols.begin(), symbols.end());
    do {
        visit(prufer_decode(PruferSequence{d.n(), symbols}));
    } while (std::next_permutation(symbols.begin(), symbols.end()));
}

std::vector<LabeledTree> all_trees(const DegreeSequence& d) {
    std::vector<LabeledTree> out;
    enumerate_trees(d, [&](const LabeledTree& t) { out.push_back(t); });
    return out;
}

Rat tree_probability(const DegreeModel& model, const LabeledTree& tree) {
    const std::vector<int> degrees = tree.degree_list();
    const Rat p = model.marginal(tree.n(), degrees);
    if (p == 0) return Rat(0);
    return p / Rat(count_trees(DegreeSequence{degrees}));
}

void write_edge_list(std::ostream& os, const LabeledTree& tree) {
    os << tree.n() << "\n";
    for (auto [u, v] : tree.edge_list()) os << u << " " << v << "\n";
}

LabeledTree read_edge_list(std::istream& is) {
    int n = 0;
    if (!(is >> n)) throw Error("read_edge_list: missing node count");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n - 1; ++i) {
        int u = 0, v = 0;
        if (!(is >> u >> v)) throw Error("read_edge_list: truncated edge list");
        edges.emplace_back(u, v);
    }
    return LabeledTree(n, edges);
}

}  // namespace treelim

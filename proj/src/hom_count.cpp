#include "treelim/hom_count.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "treelim/errors.hpp"

namespace treelim {

Forest::Forest(int m, std::vector<std::pair<int, int>> edges) : m_(m), edges_(std::move(edges)) {
    if (m < 1) throw Error("Forest: m >= 1 required");
    adj_.assign(static_cast<std::size_t>(m) + 1, {});
    std::vector<int> dsu(static_cast<std::size_t>(m) + 1);
    std::iota(dsu.begin(), dsu.end(), 0);
    auto find = [&](int v) {
        while (dsu[static_cast<std::size_t>(v)] != v) {
            dsu[static_cast<std::size_t>(v)] = dsu[static_cast<std::size_t>(dsu[static_cast<std::size_t>(v)])];
            v = dsu[static_cast<std::size_t>(v)];
        }
        return v;
    };
    std::set<std::pair<int, int>> seen;
    for (auto& [u, v] : edges_) {
        if (u > v) std::swap(u, v);
        if (u < 1 || v > m) throw Error("Forest: node label out of range");
        if (u == v) throw NotAForest("self-loop at node " + std::to_string(u));
        if (!seen.insert({u, v}).second) throw NotAForest("parallel edge");
        const int ru = find(u), rv = find(v);
        if (ru == rv) throw NotAForest("edge closes a cycle");
        dsu[static_cast<std::size_t>(ru)] = rv;
        adj_[static_cast<std::size_t>(u)].push_back(v);
        adj_[static_cast<std::size_t>(v)].push_back(u);
    }
    std::sort(edges_.begin(), edges_.end());
    std::map<int, std::vector<int>> by_root;
    for (int v = 1; v <= m; ++v) by_root[find(v)].push_back(v);
    for (auto& [root, nodes] : by_root) components_.push_back(std::move(nodes));
}

NumberedForest::NumberedForest(Forest forest, std::vector<int> remainders)
    : forest_(std::move(forest)), remainders_(std::move(remainders)), total_remainder_(0) {
    if (static_cast<int>(remainders_.size()) != forest_.m()) {
        throw Error("NumberedForest: one remainder per node required");
    }
    for (int v = 1; v <= forest_.m(); ++v) {
        if (remainder(v) < 0) throw Error("NumberedForest: remainders must be nonnegative");
        if (target_degree(v) < 1) {
            throw Error("NumberedForest: target degree below 1 at node " + std::to_string(v));
        }
        total_remainder_ += remainder(v);
    }
    for (const auto& comp : forest_.components()) {
        long long s = 0;
        for (int v : comp) s += remainder(v);
        component_sums_.push_back(s);
    }
}

std::vector<int> NumberedForest::target_degrees() const {
    std::vector<int> t(static_cast<std::size_t>(m()));
    for (int v = 1; v <= m(); ++v) t[static_cast<std::size_t>(v - 1)] = target_degree(v);
    return t;
}

NumberedForest vertex_forest(int remainder) { return NumberedForest(Forest(1, {}), {remainder}); }

NumberedForest edge_forest(int r1, int r2) {
    return NumberedForest(Forest(2, {{1, 2}}), {r1, r2});
}

NumberedForest path_forest(const std::vector<int>& remainders) {
    const int k = static_cast<int>(remainders.size());
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < k; ++v) edges.emplace_back(v, v + 1);
    return NumberedForest(Forest(k, std::move(edges)), remainders);
}

NumberedForest numbered_forest_from_ball(const RootedBall& ball, const std::vector<int>& remainders) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 1; i < ball.node_count(); ++i) {
        edges.emplace_back(ball.parent[static_cast<std::size_t>(i)] + 1, i + 1);
    }
    return NumberedForest(Forest(ball.node_count(), std::move(edges)), remainders);
}

NumberedForest read_numbered_forest(std::istream& is) {
    std::vector<std::vector<long long>> lines;
    std::string text;
    while (std::getline(is, text)) {
        std::istringstream line(text);
        std::vector<long long> numbers;
        long long x = 0;
        while (line >> x) numbers.push_back(x);
        if (!numbers.empty()) lines.push_back(std::move(numbers));
    }
    if (lines.size() < 2 || lines.front().size() != 1) {
        throw Error("read_numbered_forest: expected node count, edges, then remainders");
    }
    const int m = static_cast<int>(lines.front().front());
    const auto& tail = lines.back();
    if (static_cast<int>(tail.size()) != m) {
        throw Error("read_numbered_forest: final line must hold one remainder per node");
    }
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
        if (lines[i].size() != 2) throw Error("read_numbered_forest: edge lines hold two labels");
        edges.emplace_back(static_cast<int>(lines[i][0]), static_cast<int>(lines[i][1]));
    }
    std::vector<int> remainders(tail.begin(), tail.end());
    return NumberedForest(Forest(m, std::move(edges)), std::move(remainders));
}

void write_numbered_forest(std::ostream& os, const NumberedForest& nf) {
    os << nf.m() << "\n";
    for (auto [u, v] : nf.forest().edges()) os << u << " " << v << "\n";
    for (int v = 1; v <= nf.m(); ++v) os << (v > 1 ? " " : "") << nf.remainder(v);
    os << "\n";
}

namespace {

// BFS orders per component; within a component every vertex after the first
// is adjacent to exactly one earlier vertex (its BFS parent), so candidate
// images come from the parent image's neighborhood and no further edge
// checks are needed.
struct SearchPlan {
    std::vector<int> vertex;        // forest vertices in visit order
    std::vector<int> parent_slot;   // index into `vertex` of the BFS parent, -1 for roots
};

SearchPlan build_plan(const Forest& f, const std::vector<int>* targets) {
    SearchPlan plan;
    std::vector<char> visited(static_cast<std::size_t>(f.m()) + 1, 0);
    std::vector<int> slot_of(static_cast<std::size_t>(f.m()) + 1, -1);
    for (const auto& comp : f.components()) {
        // start at the strongest prune: the largest target degree (or plain
        // degree when unconstrained)
        int start = comp.front();
        for (int v : comp) {
            const int key_v = targets ? (*targets)[static_cast<std::size_t>(v - 1)] : f.degree(v);
            const int key_s = targets ? (*targets)[static_cast<std::size_t>(start - 1)] : f.degree(start);
            if (key_v > key_s) start = v;
        }
        std::vector<int> queue{start};
        visited[static_cast<std::size_t>(start)] = 1;
        slot_of[static_cast<std::size_t>(start)] = static_cast<int>(plan.vertex.size());
        plan.vertex.push_back(start);
        plan.parent_slot.push_back(-1);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const int v = queue[head];
            for (int u : f.neighbors(v)) {
                if (visited[static_cast<std::size_t>(u)]) continue;
                visited[static_cast<std::size_t>(u)] = 1;
                slot_of[static_cast<std::size_t>(u)] = static_cast<int>(plan.vertex.size());
                plan.vertex.push_back(u);
                plan.parent_slot.push_back(slot_of[static_cast<std::size_t>(v)]);
                queue.push_back(u);
            }
        }
    }
    return plan;
}

BigInt count_embeddings(const Forest& f, const std::vector<int>* targets, const LabeledTree& g) {
    if (f.m() > g.n()) return 0;
    const SearchPlan plan = build_plan(f, targets);
    std::vector<char> used(static_cast<std::size_t>(g.n()) + 1, 0);
    std::vector<int> image(plan.vertex.size(), 0);
    BigInt total = 0;

    auto accept = [&](std::size_t slot, int host) {
        if (used[static_cast<std::size_t>(host)]) return false;
        if (targets) {
            const int want = (*targets)[static_cast<std::size_t>(plan.vertex[slot] - 1)];
            if (g.degree(host) != want) return false;
        }
        return true;
    };

    auto rec = [&](auto&& self, std::size_t slot) -> void {
        if (slot == plan.vertex.size()) {
            total += 1;
            return;
        }
        const int parent_slot = plan.parent_slot[slot];
        if (parent_slot < 0) {
            for (int host = 1; host <= g.n(); ++host) {
                if (!accept(slot, host)) continue;
                used[static_cast<std::size_t>(host)] = 1;
                image[slot] = host;
                self(self, slot + 1);
                used[static_cast<std::size_t>(host)] = 0;
            }
        } else {
            for (int host : g.neighbors(image[static_cast<std::size_t>(parent_slot)])) {
                if (!accept(slot, host)) continue;
                used[static_cast<std::size_t>(host)] = 1;
                image[slot] = host;
                self(self, slot + 1);
                used[static_cast<std::size_t>(host)] = 0;
            }
        }
    };
    rec(rec, 0);
    return total;
}

}  // namespace

BigInt inj_count(const Forest& f, const LabeledTree& g) { return count_embeddings(f, nullptr, g); }

Rat inj_density(const Forest& f, const LabeledTree& g) {
    return Rat(inj_count(f, g), BigInt(g.n()));
}

BigInt inj_lab_count(const NumberedForest& nf, const LabeledTree& g) {
    const std::vector<int> targets = nf.target_degrees();
    return count_embeddings(nf.forest(), &targets, g);
}

Rat inj_lab_density(const NumberedForest& nf, const LabeledTree& g) {
    return Rat(inj_lab_count(nf, g), BigInt(g.n()));
}

BigInt x_statistic(const NumberedForest& nf, const LabeledTree& g) { return inj_lab_count(nf, g); }

Rat h_constant(const NumberedForest& nf) {
    Rat h = 1;
    const auto& comps = nf.forest().components();
    for (std::size_t i = 0; i < comps.size(); ++i) {
        Rat part = Rat(nf.component_remainder_sums()[i]);
        for (int v : comps[i]) {
            part *= Rat(factorial(nf.target_degree(v) - 1), factorial(nf.remainder(v)));
        }
        h *= part;
    }
    return h;
}

namespace {

void check_embed_preconditions(const NumberedForest& nf, int n) {
    const int m = nf.m();
    const int c = nf.forest().component_count();
    if (m > n) throw Error("forest_embed_prob: more forest nodes than host nodes");
    if (m == n && c == 1) return;  // handled by the spanning-tree path
    if (n - m + c - 2 < 0) {
        throw DegenerateConfiguration("embedding formula needs n - m + c - 2 >= 0");
    }
    if (m < n) {
        for (long long s : nf.component_remainder_sums()) {
            if (s == 0) {
                throw DegenerateConfiguration(
                    "a component with zero remainder cannot attach to the rest of the tree");
            }
        }
    }
}

Rat spanning_tree_prob(const DegreeModel& model, const NumberedForest& nf) {
    for (int r : nf.remainders()) {
        if (r != 0) return Rat(0);  // degrees already exhausted by the spanning tree
    }
    const LabeledTree tree(nf.m(), nf.forest().edges());
    return tree_probability(model, tree);
}

}  // namespace

Rat forest_embed_prob(const DegreeModel& model, const NumberedForest& nf, int n) {
    if (n < 2) throw Error("forest_embed_prob: n >= 2 required");
    const int m = nf.m();
    const int c = nf.forest().component_count();
    check_embed_preconditions(nf, n);
    if (m == n && c == 1) return spanning_tree_prob(model, nf);

    const Rat factorial_ratio = Rat(1, falling_factorial(n - 2, m - c));
    const std::vector<int> targets = nf.target_degrees();
    return factorial_ratio * h_constant(nf) * model.marginal(n, targets);
}

MergedForest merge_numbered(const NumberedForest& a, const std::vector<int>& phi,
                            const NumberedForest& b, const std::vector<int>& psi) {
    auto check_map = [](const NumberedForest& nf, const std::vector<int>& map, const char* name) {
        if (static_cast<int>(map.size()) != nf.m()) {
            throw Error(std::string("merge_numbered: ") + name + " must map every forest node");
        }
        std::set<int> seen;
        for (int pos : map) {
            if (pos < 1) throw Error(std::string("merge_numbered: ") + name + " positions start at 1");
            if (!seen.insert(pos).second) {
                throw Error(std::string("merge_numbered: ") + name + " must be injective");
            }
        }
    };
    check_map(a, phi, "phi");
    check_map(b, psi, "psi");

    // common target degree per host position
    std::map<int, int> target;
    auto put_targets = [&](const NumberedForest& nf, const std::vector<int>& map) {
        for (int v = 1; v <= nf.m(); ++v) {
            const int pos = map[static_cast<std::size_t>(v - 1)];
            const int t = nf.target_degree(v);
            auto [it, inserted] = target.emplace(pos, t);
            if (!inserted && it->second != t) {
                throw InconsistentRemainders("target degrees disagree at host position " +
                                             std::to_string(pos));
            }
        }
    };
    put_targets(a, phi);
    put_targets(b, psi);

    std::vector<int> positions;
    positions.reserve(target.size());
    std::map<int, int> index_of;
    for (const auto& [pos, t] : target) {
        index_of[pos] = static_cast<int>(positions.size()) + 1;
        positions.push_back(pos);
    }

    std::set<std::pair<int, int>> edge_set;
    auto put_edges = [&](const Forest& f, const std::vector<int>& map) {
        for (auto [u, v] : f.edges()) {
            int iu = index_of[map[static_cast<std::size_t>(u - 1)]];
            int iv = index_of[map[static_cast<std::size_t>(v - 1)]];
            if (iu > iv) std::swap(iu, iv);
            edge_set.insert({iu, iv});
        }
    };
    put_edges(a.forest(), phi);
    put_edges(b.forest(), psi);

    Forest merged(static_cast<int>(positions.size()),
                  std::vector<std::pair<int, int>>(edge_set.begin(), edge_set.end()));
    std::vector<int> remainders(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        const int r = target[positions[i]] - merged.degree(static_cast<int>(i) + 1);
        if (r < 0) {
            throw InconsistentRemainders("merged degree exceeds the target at host position " +
                                         std::to_string(positions[i]));
        }
        remainders[i] = r;
    }
    return MergedForest{NumberedForest(std::move(merged), std::move(remainders)), std::move(positions)};
}

Rat cond_embed_prob(const DegreeModel& model, const NumberedForest& a, const std::vector<int>& phi,
                    const NumberedForest& b, const std::vector<int>& psi, int n) {
    if (n < 2) throw Error("cond_embed_prob: n >= 2 required");
    for (int pos : phi) {
        if (pos > n) throw Error("cond_embed_prob: phi positions must lie in [1, n]");
    }
    for (int pos : psi) {
        if (pos > n) throw Error("cond_embed_prob: psi positions must lie in [1, n]");
    }
    const MergedForest merged = merge_numbered(a, phi, b, psi);
    check_embed_preconditions(merged.forest, n);
    check_embed_preconditions(b, n);

    const int m12 = merged.forest.m();
    const int c12 = merged.forest.forest().component_count();
    const int m2 = b.m();
    const int c2 = b.forest().component_count();
    if ((m12 == n && c12 == 1) || (m2 == n && c2 == 1)) {
        // spanning cases bypass the factorial form on either side
        const Rat denom = forest_embed_prob(model, b, n);
        if (denom == 0) throw DegenerateConfiguration("conditioning event has probability zero");
        return forest_embed_prob(model, merged.forest, n) / denom;
    }

    const std::vector<int> merged_targets = merged.forest.target_degrees();
    const std::vector<int> cond_targets = b.target_degrees();
    const Rat cond_marginal = model.marginal(n, cond_targets);
    if (cond_marginal == 0) {
        throw DegenerateConfiguration("conditioning event has probability zero");
    }
    const Rat factorial_ratio =
        Rat(factorial(n - m12 + c12 - 2), factorial(n - m2 + c2 - 2));
    const Rat h_ratio = h_constant(merged.forest) / h_constant(b);
    const Rat marginal_ratio = model.marginal(n, merged_targets) / cond_marginal;
    return factorial_ratio * h_ratio * marginal_ratio;
}

Rat expected_x(const DegreeModel& model, const NumberedForest& nf, int n) {
    if (nf.forest().component_count() != 1) {
        throw Error("expected_x: the test forest must be a tree");
    }
    const int k = nf.m();
    return Rat(falling_factorial(n, k)) * forest_embed_prob(model, nf, n);
}

Rat edge_prob(int di, int dj, int n) {
    if (n < 3) throw Error("edge_prob: n >= 3 required");
    if (di < 1 || dj < 1) throw Error("edge_prob: degrees must be >= 1");
    return Rat(di + dj - 2, n - 2);
}

Rat edge_degree_dist(const DegreeModel& model, int n, int di, int dj) {
    if (n < 3) throw Error("edge_degree_dist: n >= 3 required");
    if (di < 1 || dj < 1) throw Error("edge_degree_dist: degrees must be >= 1");
    const std::vector<int> values{di, dj};
    return Rat(n, n - 2) * Rat(di + dj - 2, 2) * model.marginal(n, values);
}

}  // namespace treelim

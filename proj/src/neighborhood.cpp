#include "treelim/neighborhood.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "treelim/errors.hpp"

namespace treelim {

std::vector<int> RootedBall::level_sizes() const {
    std::vector<int> sizes;
    sizes.reserve(levels.size());
    for (const auto& lev : levels) sizes.push_back(static_cast<int>(lev.size()));
    return sizes;
}

RootedBall ball_from_parents(std::vector<int> parent, std::vector<int> host_label) {
    const std::size_t m = parent.size();
    if (m == 0 || parent[0] != -1) throw Error("ball_from_parents: node 0 must be the root");
    RootedBall b;
    b.parent = std::move(parent);
    b.children.assign(m, {});
    b.level_of.assign(m, 0);
    for (std::size_t i = 1; i < m; ++i) {
        const int p = b.parent[i];
        if (p < 0 || static_cast<std::size_t>(p) >= i) {
            throw Error("ball_from_parents: parents must precede children");
        }
        b.children[static_cast<std::size_t>(p)].push_back(static_cast<int>(i));
        b.level_of[i] = b.level_of[static_cast<std::size_t>(p)] + 1;
    }
    const int depth = m == 1 ? 0 : *std::max_element(b.level_of.begin(), b.level_of.end());
    b.levels.assign(static_cast<std::size_t>(depth) + 1, {});
    for (std::size_t i = 0; i < m; ++i) {
        b.levels[static_cast<std::size_t>(b.level_of[i])].push_back(static_cast<int>(i));
    }
    b.host_label = host_label.empty() ? std::vector<int>(m, 0) : std::move(host_label);
    if (b.host_label.size() != m) throw Error("ball_from_parents: host_label size mismatch");
    return b;
}

RootedBall ball(const LabeledTree& tree, int v, int radius) {
    if (v < 1 || v > tree.n()) throw Error("ball: root out of range");
    if (radius < 0) throw Error("ball: radius must be nonnegative");
    std::vector<int> parent{-1};
    std::vector<int> host{v};
    std::vector<int> dist(static_cast<std::size_t>(tree.n()) + 1, -1);
    std::vector<int> local(static_cast<std::size_t>(tree.n()) + 1, -1);
    dist[static_cast<std::size_t>(v)] = 0;
    local[static_cast<std::size_t>(v)] = 0;
    std::queue<int> q;
    q.push(v);
    while (!q.empty()) {
        const int u = q.front();
        q.pop();
        if (dist[static_cast<std::size_t>(u)] == radius) continue;
        for (int w : tree.neighbors(u)) {
            if (dist[static_cast<std::size_t>(w)] >= 0) continue;
            dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
            local[static_cast<std::size_t>(w)] = static_cast<int>(parent.size());
            parent.push_back(local[static_cast<std::size_t>(u)]);
            host.push_back(w);
            q.push(w);
        }
    }
    return ball_from_parents(std::move(parent), std::move(host));
}

namespace {

// Per-node code strings, computed bottom-up level by level.
std::vector<std::string> node_codes(const RootedBall& b) {
    std::vector<std::string> code(static_cast<std::size_t>(b.node_count()));
    for (int lev = b.depth(); lev >= 0; --lev) {
        for (int node : b.levels[static_cast<std::size_t>(lev)]) {
            const auto& kids = b.children[static_cast<std::size_t>(node)];
            std::vector<std::string> parts;
            parts.reserve(kids.size());
            for (int c : kids) parts.push_back(code[static_cast<std::size_t>(c)]);
            std::sort(parts.begin(), parts.end());
            std::string s = "(";
            for (const auto& p : parts) s += p;
            s += ")";
            code[static_cast<std::size_t>(node)] = std::move(s);
        }
    }
    return code;
}

}  // namespace

CanonicalCode canonical_code(const RootedBall& b) {
    CanonicalCode c;
    c.code = node_codes(b)[0];
    c.node_count = b.node_count();
    c.depth = b.depth();
    return c;
}

BigInt aut_size(const RootedBall& b) {
    const std::vector<std::string> code = node_codes(b);
    BigInt aut = 1;
    for (int node = 0; node < b.node_count(); ++node) {
        std::vector<std::string> kid_codes;
        for (int c : b.children[static_cast<std::size_t>(node)]) {
            kid_codes.push_back(code[static_cast<std::size_t>(c)]);
        }
        std::sort(kid_codes.begin(), kid_codes.end());
        std::size_t i = 0;
        while (i < kid_codes.size()) {
            std::size_t j = i;
            while (j < kid_codes.size() && kid_codes[j] == kid_codes[i]) ++j;
            aut *= factorial(static_cast<long long>(j - i));
            i = j;
        }
    }
    return aut;
}

BigInt aut_quotient_size(const RootedBall& b) {
    if (b.depth() < 1) throw Error("aut_quotient_size: depth >= 1 required");
    BigInt divisor = 1;
    for (int node : b.levels[static_cast<std::size_t>(b.depth() - 1)]) {
        divisor *= factorial(static_cast<long long>(b.children[static_cast<std::size_t>(node)].size()));
    }
    const BigInt aut = aut_size(b);
    if (aut % divisor != 0) throw NonDivisible("automorphism count not divisible by sibling permutations");
    return aut / divisor;
}

namespace {

// Keeps the nodes flagged in `keep` (root must be kept); order is preserved,
// so the parent-before-child invariant survives.
RootedBall filter_ball(const RootedBall& b, const std::vector<char>& keep) {
    std::vector<int> remap(static_cast<std::size_t>(b.node_count()), -1);
    std::vector<int> parent;
    std::vector<int> host;
    for (int i = 0; i < b.node_count(); ++i) {
        if (!keep[static_cast<std::size_t>(i)]) continue;
        remap[static_cast<std::size_t>(i)] = static_cast<int>(parent.size());
        const int p = b.parent[static_cast<std::size_t>(i)];
        parent.push_back(p < 0 ? -1 : remap[static_cast<std::size_t>(p)]);
        host.push_back(b.host_label[static_cast<std::size_t>(i)]);
    }
    return ball_from_parents(std::move(parent), std::move(host));
}

}  // namespace

StrippedBall strip_last_level(const RootedBall& b) {
    if (b.depth() < 1) throw Error("strip_last_level: depth >= 1 required");
    const int depth = b.depth();
    std::vector<char> keep(static_cast<std::size_t>(b.node_count()), 0);
    for (int i = 0; i < b.node_count(); ++i) {
        keep[static_cast<std::size_t>(i)] = b.level_of[static_cast<std::size_t>(i)] < depth;
    }
    StrippedBall out;
    out.ball = filter_ball(b, keep);
    out.remainders.assign(static_cast<std::size_t>(out.ball.node_count()), 0);
    int cursor = 0;
    for (int i = 0; i < b.node_count(); ++i) {
        if (!keep[static_cast<std::size_t>(i)]) continue;
        int lost = 0;
        for (int c : b.children[static_cast<std::size_t>(i)]) {
            if (b.level_of[static_cast<std::size_t>(c)] == depth) lost += 1;
        }
        out.remainders[static_cast<std::size_t>(cursor++)] = lost;
    }
    return out;
}

RootedBall truncate_ball(const RootedBall& b, int radius) {
    if (radius < 0) throw Error("truncate_ball: radius must be nonnegative");
    std::vector<char> keep(static_cast<std::size_t>(b.node_count()), 0);
    for (int i = 0; i < b.node_count(); ++i) {
        keep[static_cast<std::size_t>(i)] = b.level_of[static_cast<std::size_t>(i)] <= radius;
    }
    return filter_ball(b, keep);
}

RootedBall compose_ball(const std::vector<RootedBall>& subtrees) {
    std::vector<int> parent{-1};
    std::vector<int> host{0};
    for (const RootedBall& s : subtrees) {
        const int offset = static_cast<int>(parent.size());
        for (int i = 0; i < s.node_count(); ++i) {
            const int p = s.parent[static_cast<std::size_t>(i)];
            parent.push_back(p < 0 ? 0 : p + offset);
            host.push_back(s.host_label[static_cast<std::size_t>(i)]);
        }
    }
    return ball_from_parents(std::move(parent), std::move(host));
}

RootedBall extend_ball(const RootedBall& b, const std::vector<int>& new_child_counts) {
    const auto& deepest = b.levels.back();
    if (new_child_counts.size() != deepest.size()) {
        throw Error("extend_ball: one child count per deepest-level node required");
    }
    std::vector<int> parent = b.parent;
    std::vector<int> host = b.host_label;
    for (std::size_t j = 0; j < deepest.size(); ++j) {
        if (new_child_counts[j] < 0) throw Error("extend_ball: negative child count");
        for (int c = 0; c < new_child_counts[j]; ++c) {
            parent.push_back(deepest[j]);
            host.push_back(0);
        }
    }
    return ball_from_parents(std::move(parent), std::move(host));
}

std::map<CanonicalCode, Rat> empirical_stats(const LabeledTree& tree, int radius) {
    if (radius < 0) throw Error("empirical_stats: radius must be nonnegative");
    std::map<CanonicalCode, long long> counts;
    for (int v = 1; v <= tree.n(); ++v) {
        counts[canonical_code(ball(tree, v, radius))] += 1;
    }
    std::map<CanonicalCode, Rat> stats;
    for (const auto& [code, count] : counts) {
        stats.emplace(code, Rat(count, tree.n()));
    }
    return stats;
}

}  // namespace treelim

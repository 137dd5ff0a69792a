#include "treelim/limit_object.hpp"

#include <algorithm>
#include <string>

#include "treelim/errors.hpp"
#include "treelim/hom_count.hpp"

namespace treelim {

LimitMeasure::LimitMeasure(DegreeDistribution d0, int degree_cap)
    : d0_(std::move(d0)), gamma_(gamma_value(d0_)), degree_cap_(degree_cap) {
    if (degree_cap_ < d0_.max_degree()) {
        throw Error("LimitMeasure: degree_cap must cover the support of D0");
    }
}

Rat p_limit(const LimitMeasure& m, const RootedBall& b) {
    const int depth = b.depth();
    if (depth < 1) throw Error("p_limit: depth >= 1 required");
    Rat prod = 1;
    for (int node = 0; node < b.node_count(); ++node) {
        if (b.level_of[static_cast<std::size_t>(node)] == depth) continue;
        const int d = b.degree(node);
        const Rat mass = m.d0().mass(d);
        if (mass == 0) return Rat(0);
        prod *= mass * Rat(factorial(d - 1));
    }
    const Rat t_l = Rat(static_cast<long long>(b.levels.back().size()));
    return t_l * prod / Rat(aut_size(b));
}

BallDistribution depth1_marginal(const LimitMeasure& m) {
    BallDistribution dist;
    dist.depth = 1;
    Rat total = 0;
    for (int d : m.d0().support()) {
        const RootedBall b = compose_ball(std::vector<RootedBall>(
            static_cast<std::size_t>(d), ball_from_parents({-1})));
        const Rat p = p_limit(m, b);
        total += p;
        dist.classes.emplace(canonical_code(b), p);
    }
    dist.deficit = Rat(1) - total;
    return dist;
}

int max_ball_nodes(int degree_cap, int depth) {
    long long total = 1;
    long long level = 1;
    for (int i = 0; i < depth; ++i) {
        level *= (i == 0 ? degree_cap : degree_cap - 1);
        total += level;
        if (total > 1000000) return 1000000;
    }
    return static_cast<int>(total);
}

namespace {

// All balls made of a root with 1..max_children subtrees chosen (as a
// multiset) from the pool, respecting the node cap. `budget` guards runaway
// generation.
void compose_from_pool(const std::vector<RootedBall>& pool, int max_children, int node_cap,
                       long long candidate_cap, long long& candidates,
                       std::vector<RootedBall>& out) {
    std::vector<int> chosen;
    auto rec = [&](auto&& self, std::size_t start, int nodes_used) -> void {
        if (!chosen.empty()) {
            if (++candidates > candidate_cap) {
                throw CapExceeded("ball enumeration exceeded " + std::to_string(candidate_cap) +
                                  " candidates");
            }
            std::vector<RootedBall> subtrees;
            subtrees.reserve(chosen.size());
            for (int idx : chosen) subtrees.push_back(pool[static_cast<std::size_t>(idx)]);
            out.push_back(compose_ball(subtrees));
        }
        if (static_cast<int>(chosen.size()) == max_children) return;
        for (std::size_t i = start; i < pool.size(); ++i) {
            const int extra = pool[i].node_count();
            if (nodes_used + extra > node_cap) continue;
            chosen.push_back(static_cast<int>(i));
            self(self, i, nodes_used + extra);
            chosen.pop_back();
        }
    };
    rec(rec, 0, 1);
}

void dedupe_sort(std::vector<RootedBall>& balls) {
    std::map<std::string, RootedBall> by_code;
    for (auto& b : balls) by_code.emplace(canonical_code(b).code, std::move(b));
    balls.clear();
    for (auto& [code, b] : by_code) balls.push_back(std::move(b));
}

}  // namespace

std::vector<RootedBall> enumerate_balls(int l, int degree_cap, int node_cap) {
    if (l < 1) throw Error("enumerate_balls: depth >= 1 required");
    if (degree_cap < 1 || node_cap < 1) throw Error("enumerate_balls: caps must be >= 1");
    const long long candidate_cap = static_cast<long long>(node_cap) * 1000;
    long long candidates = 0;

    // subtree shapes of height <= l-1; every subtree root hangs under some
    // node, so its own children count is bounded by degree_cap - 1
    std::vector<RootedBall> pool{ball_from_parents({-1})};
    for (int h = 1; h <= l - 1; ++h) {
        std::vector<RootedBall> grown = pool;
        compose_from_pool(pool, degree_cap - 1, node_cap - 1, candidate_cap, candidates, grown);
        dedupe_sort(grown);
        pool = std::move(grown);
    }

    std::vector<RootedBall> tops;
    compose_from_pool(pool, degree_cap, node_cap, candidate_cap, candidates, tops);
    std::vector<RootedBall> result;
    for (auto& b : tops) {
        if (b.depth() == l) result.push_back(std::move(b));
    }
    dedupe_sort(result);
    return result;
}

namespace {

// Distinct one-level-deeper extensions of `base`, where each deepest-level
// node is assigned a degree from the support (degree 1 ends the branch).
std::vector<RootedBall> distinct_extensions(const RootedBall& base, const std::vector<int>& support) {
    const std::size_t slots = base.levels.back().size();
    double combos = 1;
    for (std::size_t i = 0; i < slots; ++i) combos *= static_cast<double>(support.size());
    if (combos > 200000.0) {
        throw CapExceeded("too many extension assignments (" + std::to_string(combos) + ")");
    }
    std::map<std::string, RootedBall> by_code;
    std::vector<int> counts(slots, 0);
    auto rec = [&](auto&& self, std::size_t slot, bool any_child) -> void {
        if (slot == slots) {
            if (!any_child) return;  // no new level
            RootedBall ext = extend_ball(base, counts);
            by_code.emplace(canonical_code(ext).code, std::move(ext));
            return;
        }
        for (int d : support) {
            counts[slot] = d - 1;  // deepest-level nodes already have a parent
            self(self, slot + 1, any_child || d > 1);
        }
    };
    rec(rec, 0, false);
    std::vector<RootedBall> out;
    out.reserve(by_code.size());
    for (auto& [code, b] : by_code) out.push_back(std::move(b));
    return out;
}

}  // namespace

ConsistencyReport consistency_report(const LimitMeasure& m, const RootedBall& base, int degree_cap) {
    if (base.depth() < 1) throw Error("consistency_report: base depth >= 1 required");
    if (m.d0().max_degree() > degree_cap) {
        throw Error("consistency_report: support exceeds the degree cap");
    }
    ConsistencyReport report;
    report.lhs = p_limit(m, base);
    if (report.lhs == 0) throw ZeroMassBase("base ball has zero mass");
    report.rhs = 0;
    for (const RootedBall& ext : distinct_extensions(base, m.d0().support())) {
        report.rhs += p_limit(m, ext);
    }
    report.ratio = report.rhs / report.lhs;
    return report;
}

Rat mu_n(const DegreeModel& model, const RootedBall& b, int n) {
    if (b.depth() < 1) throw Error("mu_n: depth >= 1 required");
    const StrippedBall stripped = strip_last_level(b);
    const NumberedForest nf = numbered_forest_from_ball(stripped.ball, stripped.remainders);
    const Rat ex = expected_x(model, nf, n);
    return ex / (Rat(n) * Rat(aut_quotient_size(b)));
}

LimitBallSampler::LimitBallSampler(LimitMeasure m) : measure_(std::move(m)) {
    if (measure_.gamma() != 1) {
        throw NotConsistent("limit sampling requires gamma = 1, got " +
                            rat_string(measure_.gamma()));
    }
}

const LimitBallSampler::Branches& LimitBallSampler::branches_for(const RootedBall& current,
                                                                 const Rat& current_mass) {
    const std::string key = canonical_code(current).code;
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;

    Branches br;
    for (RootedBall& ext : distinct_extensions(current, measure_.d0().support())) {
        const Rat p = p_limit(measure_, ext);
        if (p == 0) continue;
        br.weights.push_back(to_double(p / current_mass));
        br.balls.push_back(std::move(ext));
    }
    if (br.balls.empty()) {
        throw NotConsistent("no positive-mass extension of a positive-mass ball");
    }
    return cache_.emplace(key, std::move(br)).first->second;
}

RootedBall LimitBallSampler::sample(int depth, Rng& rng) {
    if (depth < 1) throw Error("LimitBallSampler::sample: depth >= 1 required");
    // root degree straight from the pmf
    std::vector<double> weights;
    const auto& support = measure_.d0().support();
    weights.reserve(support.size());
    for (int d : support) weights.push_back(to_double(measure_.d0().mass(d)));
    const int root_degree = support[rng.categorical(weights)];
    RootedBall current = compose_ball(
        std::vector<RootedBall>(static_cast<std::size_t>(root_degree), ball_from_parents({-1})));

    Rat mass = p_limit(measure_, current);
    for (int level = 1; level < depth; ++level) {
        const Branches& br = branches_for(current, mass);
        const std::size_t pick = rng.categorical(br.weights);
        current = br.balls[pick];
        mass = p_limit(measure_, current);
    }
    return current;
}

RootedBall sample_limit_ball(const LimitMeasure& m, int depth, Rng& rng, int degree_cap) {
    if (m.d0().max_degree() > degree_cap) {
        throw Error("sample_limit_ball: support exceeds the degree cap");
    }
    LimitBallSampler sampler(m);
    return sampler.sample(depth, rng);
}

Rat tv_distance(const BallDistribution& p, const BallDistribution& q) {
    if (p.depth != q.depth) {
        throw DepthMismatch("total variation between depths " + std::to_string(p.depth) + " and " +
                            std::to_string(q.depth));
    }
    Rat total = 0;
    auto it_p = p.classes.begin();
    auto it_q = q.classes.begin();
    while (it_p != p.classes.end() || it_q != q.classes.end()) {
        Rat diff;
        if (it_q == q.classes.end() || (it_p != p.classes.end() && it_p->first < it_q->first)) {
            diff = it_p->second;
            ++it_p;
        } else if (it_p == p.classes.end() || it_q->first < it_p->first) {
            diff = it_q->second;
            ++it_q;
        } else {
            diff = it_p->second - it_q->second;
            ++it_p;
            ++it_q;
        }
        total += diff < 0 ? -diff : diff;
    }
    return total / 2;
}

BallDistribution limit_marginal(const LimitMeasure& m, int depth, int node_cap) {
    BallDistribution dist;
    dist.depth = depth;
    Rat total = 0;
    for (const RootedBall& b : enumerate_balls(depth, m.degree_cap(), node_cap)) {
        const Rat p = p_limit(m, b);
        if (p == 0) continue;
        total += p;
        dist.classes.emplace(canonical_code(b), p);
    }
    dist.deficit = Rat(1) - total;
    return dist;
}

}  // namespace treelim

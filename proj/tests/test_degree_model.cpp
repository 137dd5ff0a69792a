#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "treelim/degree_model.hpp"
#include "treelim/stats_util.hpp"

using namespace treelim;

namespace {

// Brute-force law of the first k coordinates of n conditioned i.i.d. draws:
// enumerate support^n outcomes, keep those with the required sum, and weight
// by the product of masses.
std::map<std::vector<int>, Rat> conditioned_law_by_enumeration(const DegreeDistribution& d0,
                                                               int n, int k) {
    std::map<std::vector<int>, Rat> law;
    Rat total = 0;
    std::vector<int> outcome(static_cast<std::size_t>(n));
    auto rec = [&](auto&& self, int index, long long sum, Rat weight) -> void {
        if (index == n) {
            if (sum != 2LL * (n - 1)) return;
            total += weight;
            std::vector<int> prefix(outcome.begin(), outcome.begin() + k);
            law[prefix] += weight;
            return;
        }
        for (int d : d0.support()) {
            outcome[static_cast<std::size_t>(index)] = d;
            self(self, index + 1, sum + d, weight * d0.mass(d));
        }
    };
    rec(rec, 0, 0, Rat(1));
    for (auto& [prefix, p] : law) p /= total;
    return law;
}

}  // namespace

TEST_CASE("degree distribution validation") {
    CHECK_THROWS_AS(DegreeDistribution({{0, Rat(1)}}), Error);
    CHECK_THROWS_AS(DegreeDistribution({{2, Rat(1, 2)}}), Error);  // does not sum to 1
    CHECK_THROWS_AS(DegreeDistribution({{1, Rat(3, 2)}, {2, Rat(-1, 2)}}), Error);
    const DegreeDistribution u13 = DegreeDistribution::uniform({1, 3});
    CHECK(u13.mass(1) == Rat(1, 2));
    CHECK(u13.mass(2) == 0);
    CHECK(u13.support() == std::vector<int>{1, 3});
}

TEST_CASE("validate_degree_sequence") {
    CHECK(validate_degree_sequence({2, 2, 1, 1}).n() == 4);
    CHECK(validate_degree_sequence({3, 1, 1, 1}).n() == 4);  // star
    CHECK_THROWS_AS(validate_degree_sequence({1, 1, 1}), SumMismatch);
    CHECK_THROWS_AS(validate_degree_sequence({2, 0, 2, 2}), EntryBelowOne);
    CHECK_THROWS_AS(validate_degree_sequence({1}), Error);
}

TEST_CASE("enumerate_degree_sequences") {
    const auto seqs3 = enumerate_degree_sequences(3);
    REQUIRE(seqs3.size() == 3);
    CHECK(seqs3[0].degrees == std::vector<int>{1, 1, 2});
    CHECK(seqs3[1].degrees == std::vector<int>{1, 2, 1});
    CHECK(seqs3[2].degrees == std::vector<int>{2, 1, 1});

    CHECK(enumerate_degree_sequences(4).size() == 10);
    const auto seqs2 = enumerate_degree_sequences(2);
    REQUIRE(seqs2.size() == 1);
    CHECK(seqs2[0].degrees == std::vector<int>{1, 1});
    CHECK_THROWS_AS(enumerate_degree_sequences(11), NTooLarge);

    for (const auto& d : enumerate_degree_sequences(6)) {
        CHECK_NOTHROW(validate_degree_sequence(d.degrees));
    }
}

TEST_CASE("gamma_value") {
    CHECK(gamma_value(DegreeDistribution::point_mass(2)) == 1);
    CHECK(gamma_value(DegreeDistribution::uniform({1, 3})) == 1);
    CHECK(gamma_value(DegreeDistribution::point_mass(1)) == 0);
    CHECK(gamma_value(DegreeDistribution::point_mass(3)) == 2);
}

TEST_CASE("star model samples a star degree sequence") {
    const DegreeModel star = DegreeModel::star();
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const DegreeSequence seq = star.sample(5, rng);
        std::multiset<int> values(seq.degrees.begin(), seq.degrees.end());
        CHECK(values == std::multiset<int>{1, 1, 1, 1, 4});
    }
}

TEST_CASE("conditioned iid feasibility") {
    const DegreeModel point2 = DegreeModel::conditioned_iid(DegreeDistribution::point_mass(2));
    Rng rng(1);
    CHECK_FALSE(point2.feasible(5));
    CHECK_THROWS_AS(point2.sample(5, rng), InfeasibleModel);

    const DegreeModel u13 = DegreeModel::conditioned_iid(DegreeDistribution::uniform({1, 3}));
    CHECK(u13.feasible(4));
    CHECK_FALSE(u13.feasible(5));  // sum parity
}

TEST_CASE("conditioned iid sampling matches the conditioned law") {
    const DegreeDistribution u13 = DegreeDistribution::uniform({1, 3});
    const DegreeModel model = DegreeModel::conditioned_iid(u13);
    // the 2^4 i.i.d. outcomes conditioned on sum 6: the 4 arrangements of
    // (3,1,1,1), each with probability 1/4
    const auto law = conditioned_law_by_enumeration(u13, 4, 4);
    REQUIRE(law.size() == 4);
    for (const auto& [seq, p] : law) {
        CHECK(p == Rat(1, 4));
        CHECK(std::multiset<int>(seq.begin(), seq.end()) == std::multiset<int>{1, 1, 1, 3});
    }

    Rng rng(2024);
    std::map<std::vector<int>, long long> counts;
    const int samples = 12000;
    for (int i = 0; i < samples; ++i) {
        const DegreeSequence seq = model.sample(4, rng);
        CHECK_NOTHROW(validate_degree_sequence(seq.degrees));
        counts[seq.degrees] += 1;
    }
    std::vector<long long> observed;
    std::vector<double> expected;
    for (const auto& [seq, p] : law) {
        observed.push_back(counts[seq]);
        expected.push_back(to_double(p));
    }
    const ChiSquareResult chi = chi_square_gof(observed, expected);
    CHECK(chi.pvalue > 0.001);
}

TEST_CASE("conditioned_iid_marginal agrees with enumeration") {
    const DegreeDistribution u13 = DegreeDistribution::uniform({1, 3});

    bool infeasible = false;
    // conditioning on sum 6 leaves the arrangements of (3,1,1,1)
    CHECK(conditioned_iid_marginal(u13, 4, std::vector<int>{1, 1, 1, 3}, &infeasible) == Rat(1, 4));
    CHECK_FALSE(infeasible);
    CHECK(conditioned_iid_marginal(u13, 4, std::vector<int>{3}) == Rat(1, 4));
    CHECK(conditioned_iid_marginal(u13, 4, std::vector<int>{1, 1}) == Rat(1, 2));
    CHECK(conditioned_iid_marginal(u13, 4, std::vector<int>{}) == 1);

    // a second 3 would push the sum past the conditioning event
    CHECK(conditioned_iid_marginal(u13, 4, std::vector<int>{3, 3}, &infeasible) == 0);
    CHECK(infeasible);

    // prefix off the support: zero probability, flagged
    CHECK(conditioned_iid_marginal(u13, 4, std::vector<int>{2}, &infeasible) == 0);
    CHECK(infeasible);

    CHECK_THROWS_AS(
        conditioned_iid_marginal(DegreeDistribution::point_mass(2), 5, std::vector<int>{2}),
        UnconditionedSumZero);

    // every prefix length against the brute-force law
    const DegreeDistribution d0({{1, Rat(1, 2)}, {2, Rat(1, 3)}, {3, Rat(1, 6)}});
    for (int k = 0; k <= 4; ++k) {
        const auto law = conditioned_law_by_enumeration(d0, 6, k);
        std::vector<int> prefix(static_cast<std::size_t>(k));
        auto rec = [&](auto&& self, int index) -> void {
            if (index == k) {
                auto it = law.find(prefix);
                const Rat expected = it == law.end() ? Rat(0) : it->second;
                CHECK(conditioned_iid_marginal(d0, 6, prefix) == expected);
                return;
            }
            for (int d : d0.support()) {
                prefix[static_cast<std::size_t>(index)] = d;
                self(self, index + 1);
            }
        };
        rec(rec, 0);
    }
}

TEST_CASE("conditioned_iid_marginal sums to 1 over fixed-length prefixes") {
    const DegreeDistribution u123 = DegreeDistribution::uniform({1, 2, 3});
    for (int k : {1, 2, 3}) {
        Rat total = 0;
        std::vector<int> prefix(static_cast<std::size_t>(k));
        auto rec = [&](auto&& self, int index) -> void {
            if (index == k) {
                total += conditioned_iid_marginal(u123, 6, prefix);
                return;
            }
            for (int d : u123.support()) {
                prefix[static_cast<std::size_t>(index)] = d;
                self(self, index + 1);
            }
        };
        rec(rec, 0);
        CHECK(total == 1);
    }
}

TEST_CASE("fixed and star marginals") {
    const DegreeModel fixed = DegreeModel::fixed({2, 2, 1, 1});
    CHECK(fixed.marginal(4, std::vector<int>{2}) == Rat(1, 2));
    CHECK(fixed.marginal(4, std::vector<int>{2, 2}) == Rat(1, 6));
    CHECK(fixed.marginal(4, std::vector<int>{2, 2, 1, 1}) == Rat(1, 6));
    CHECK(fixed.marginal(4, std::vector<int>{3}) == 0);

    const DegreeModel star = DegreeModel::star();
    CHECK(star.marginal(6, std::vector<int>{5}) == Rat(1, 6));
    CHECK(star.marginal(6, std::vector<int>{1}) == Rat(5, 6));
    CHECK(star.marginal(6, std::vector<int>{1, 1}) == Rat(4, 6));
    CHECK(star.marginal(6, std::vector<int>{5, 1}) == Rat(1, 6));
    CHECK(star.marginal(6, std::vector<int>{5, 5}) == 0);
    CHECK(star.marginal(2, std::vector<int>{1, 1}) == 1);
}

TEST_CASE("fixed families") {
    const DegreeModel path = DegreeModel::fixed_family(DegreeModel::Family::Path);
    const auto p6 = path.fixed_multiset(6);
    CHECK(std::count(p6.begin(), p6.end(), 2) == 4);
    CHECK(std::count(p6.begin(), p6.end(), 1) == 2);

    const DegreeModel binary = DegreeModel::fixed_family(DegreeModel::Family::Binary);
    const auto b8 = binary.fixed_multiset(8);
    CHECK(std::count(b8.begin(), b8.end(), 3) == 3);
    CHECK(std::count(b8.begin(), b8.end(), 1) == 5);
    CHECK_THROWS_AS(binary.fixed_multiset(7), InfeasibleModel);
}

TEST_CASE("mixture model averages marginals and samples components") {
    const DegreeModel mix = DegreeModel::mixture({
        {Rat(1, 2), DegreeModel::fixed({2, 2, 1, 1})},
        {Rat(1, 2), DegreeModel::fixed({3, 1, 1, 1})},
    });
    CHECK(mix.marginal(4, std::vector<int>{2}) == Rat(1, 4));
    CHECK(mix.marginal(4, std::vector<int>{3}) == Rat(1, 8));
    Rng rng(5);
    std::set<std::multiset<int>> seen;
    for (int i = 0; i < 200; ++i) {
        const auto seq = mix.sample(4, rng);
        seen.insert(std::multiset<int>(seq.degrees.begin(), seq.degrees.end()));
    }
    CHECK(seen.size() == 2);
}

TEST_CASE("exchangeability: position marginals agree empirically") {
    struct Case {
        DegreeModel model;
        int n;
    };
    const std::vector<Case> cases{
        {DegreeModel::fixed({2, 2, 2, 2, 1, 1}), 6},
        {DegreeModel::star(), 6},
    };
    for (const auto& c : cases) {
        Rng rng(7);
        std::map<int, long long> at_first, at_last;
        const int samples = 10000;
        for (int i = 0; i < samples; ++i) {
            const auto seq = c.model.sample(c.n, rng);
            at_first[seq.degrees.front()] += 1;
            at_last[seq.degrees.back()] += 1;
        }
        std::set<int> values;
        for (const auto& [v, cnt] : at_first) values.insert(v);
        for (const auto& [v, cnt] : at_last) values.insert(v);
        std::vector<long long> a, b;
        for (int v : values) {
            a.push_back(at_first[v]);
            b.push_back(at_last[v]);
        }
        const ChiSquareResult chi = chi_square_homogeneity(a, b);
        CHECK(chi.pvalue > 0.001);
    }
}

TEST_CASE("independence gap") {
    // exchangeable permutation of a fixed multiset is not independent
    const DegreeModel fixed = DegreeModel::fixed({2, 2, 1, 1});
    CHECK(independence_gap(fixed, 4, {2}, {1}, {2}) == Rat(1, 12));

    // point-mass conditioned i.i.d. is deterministic
    const DegreeModel point1 = DegreeModel::conditioned_iid(DegreeDistribution::point_mass(1));
    CHECK(independence_gap(point1, 2, {1}, {1}, {2}) == 0);

    // star: only one vertex carries degree n-1
    for (int n : {4, 6, 9}) {
        CHECK(independence_gap(DegreeModel::star(), n, {n - 1}, {1}, {2}) == Rat(1, BigInt(n) * n));
    }

    CHECK_THROWS_AS(independence_gap(fixed, 4, {2, 2}, {1, 2}, {2, 3}), OverlappingSupports);
    CHECK_THROWS_AS(independence_gap(fixed, 4, {2}, {1}, {5}), Error);
}

TEST_CASE("independence gap of conditioned iid vanishes along an n-grid") {
    // single-coordinate fragment: clean monotone halving along a doubling grid
    const DegreeModel u13 = DegreeModel::conditioned_iid(DegreeDistribution::uniform({1, 3}));
    std::vector<Rat> gaps;
    for (int n : {8, 16, 32, 64, 128}) {
        gaps.push_back(independence_gap(u13, n, {3}, {1}, {2}));
    }
    for (std::size_t i = 0; i + 1 < gaps.size(); ++i) CHECK(gaps[i + 1] < gaps[i]);
    CHECK(gaps.back() < gaps.front() / 8);

    // two-coordinate fragment: a small-n wiggle is allowed, the tail decays
    const DegreeModel u123 = DegreeModel::conditioned_iid(DegreeDistribution::uniform({1, 2, 3}));
    std::vector<Rat> pair_gaps;
    for (int n : {16, 32, 64, 128}) {
        pair_gaps.push_back(independence_gap(u123, n, {1, 3}, {1, 2}, {3, 4}));
    }
    for (std::size_t i = 0; i + 1 < pair_gaps.size(); ++i) CHECK(pair_gaps[i + 1] < pair_gaps[i]);
    CHECK(pair_gaps.back() < pair_gaps.front() / 4);
}

TEST_CASE("sampled sequences always validate") {
    const std::vector<DegreeModel> models{
        DegreeModel::fixed({3, 2, 2, 2, 1, 1, 1}),
        DegreeModel::star(),
        DegreeModel::conditioned_iid(DegreeDistribution::uniform({1, 2, 3})),
    };
    Rng rng(11);
    for (const auto& model : models) {
        for (int i = 0; i < 100; ++i) {
            const auto seq = model.sample(7, rng);
            CHECK_NOTHROW(validate_degree_sequence(seq.degrees));
        }
    }
}

#include <doctest.h>

#include <map>
#include <string>
#include <vector>

#include "treelim/battery.hpp"
#include "treelim/limit_object.hpp"
#include "treelim/stats_util.hpp"

using namespace treelim;

namespace {

RootedBall leaf() { return ball_from_parents({-1}); }

RootedBall star_ball(int children) {
    return compose_ball(std::vector<RootedBall>(static_cast<std::size_t>(children), leaf()));
}

RootedBall path_ball(int depth) {
    RootedBall b = leaf();
    for (int i = 0; i < depth; ++i) b = compose_ball({b});
    return b;
}

}  // namespace

TEST_CASE("limit measure construction") {
    const LimitMeasure m(DegreeDistribution::uniform({1, 3}), 5);
    CHECK(m.gamma() == 1);
    CHECK_THROWS_AS(LimitMeasure(DegreeDistribution::uniform({1, 3}), 2), Error);  // cap below support
}

TEST_CASE("p_limit examples") {
    const LimitMeasure point2(DegreeDistribution::point_mass(2), 3);
    for (int depth : {1, 2, 3, 4}) {
        // the doubly infinite path: straight line balls carry all the mass
        RootedBall b = path_ball(depth);
        // interior ball of the two-sided path: root has two branches
        const RootedBall two_sided = compose_ball({path_ball(depth - 1), path_ball(depth - 1)});
        CHECK(p_limit(point2, two_sided) == 1);
        CHECK(p_limit(point2, b) == 0);  // root degree 1 has no mass
    }

    const LimitMeasure u13(DegreeDistribution::uniform({1, 3}), 3);
    CHECK(p_limit(u13, star_ball(3)) == Rat(1, 2));
    CHECK(p_limit(u13, star_ball(1)) == Rat(1, 2));
    CHECK(p_limit(u13, star_ball(2)) == 0);

    // root of degree 1 whose child has two further children
    const RootedBall deep = compose_ball({star_ball(2)});
    CHECK(deep.depth() == 2);
    CHECK(p_limit(u13, deep) == Rat(1, 2));

    CHECK_THROWS_AS(p_limit(u13, leaf()), Error);  // depth 0
}

TEST_CASE("depth-1 marginal collapses to the pmf") {
    for (const DegreeDistribution& d0 :
         {DegreeDistribution::point_mass(2), DegreeDistribution::uniform({1, 3}),
          DegreeDistribution::uniform({1, 2, 3})}) {
        const LimitMeasure m(d0, 5);
        const BallDistribution dist = depth1_marginal(m);
        CHECK(dist.deficit == 0);
        Rat total = 0;
        for (const auto& [code, p] : dist.classes) {
            // recover the root degree from the class size
            CHECK(p == d0.mass(code.node_count - 1));
            total += p;
        }
        CHECK(total == 1);
    }
}

TEST_CASE("enumerate_balls") {
    CHECK(enumerate_balls(1, 3, 10).size() == 3);
    CHECK(enumerate_balls(2, 2, 10).size() == 3);
    CHECK(enumerate_balls(2, 1, 10).empty());  // a degree-1 root cannot reach depth 2

    // every enumerated ball is exactly l-deep, within caps, and codes are unique
    const auto balls = enumerate_balls(3, 3, 20);
    std::map<std::string, int> codes;
    for (const RootedBall& b : balls) {
        CHECK(b.depth() == 3);
        CHECK(b.node_count() <= 20);
        for (int v = 0; v < b.node_count(); ++v) CHECK(b.degree(v) <= 3);
        codes[canonical_code(b).code] += 1;
    }
    for (const auto& [code, count] : codes) CHECK(count == 1);

    CHECK_THROWS_AS(enumerate_balls(3, 5, 20), CapExceeded);
}

TEST_CASE("consistency report examples") {
    const LimitMeasure point2(DegreeDistribution::point_mass(2), 5);
    const RootedBall two_sided = compose_ball({leaf(), leaf()});
    const ConsistencyReport r2 = consistency_report(point2, two_sided, 5);
    CHECK(r2.ratio == 1);

    const LimitMeasure u13(DegreeDistribution::uniform({1, 3}), 5);
    const ConsistencyReport r13 = consistency_report(u13, star_ball(3), 5);
    CHECK(r13.lhs == Rat(1, 2));
    CHECK(r13.rhs == Rat(1, 2));
    CHECK(r13.ratio == 1);

    // the star limit loses all mass one level deeper
    const LimitMeasure point1(DegreeDistribution::point_mass(1), 5);
    const ConsistencyReport r1 = consistency_report(point1, star_ball(1), 5);
    CHECK(r1.ratio == 0);

    CHECK_THROWS_AS(consistency_report(u13, star_ball(2), 5), ZeroMassBase);
}

TEST_CASE("consistency ratio equals gamma across the measure battery") {
    for (const BatteryEntry& entry : check_consistency_ratios()) {
        INFO(entry.name, ": ", entry.detail);
        CHECK(entry.pass);
    }
}

TEST_CASE("total limit mass is one for consistent measures") {
    struct Case {
        DegreeDistribution d0;
        int max_depth;
        int node_cap;
    };
    const std::vector<Case> cases{
        {DegreeDistribution::point_mass(2), 3, 10},
        {DegreeDistribution::uniform({1, 3}), 3, 40},
        {DegreeDistribution::uniform({1, 2, 3}), 3, 40},
        // support max 4, mean exactly 2
        {DegreeDistribution({{1, Rat(1, 2)}, {2, Rat(1, 6)}, {3, Rat(1, 6)}, {4, Rat(1, 6)}}),
         3, 200},
    };
    for (const auto& c : cases) {
        CHECK(gamma_value(c.d0) == 1);
        const LimitMeasure m(c.d0, c.d0.max_degree());
        for (int depth = 1; depth <= c.max_depth; ++depth) {
            const BallDistribution dist = limit_marginal(m, depth, c.node_cap);
            CHECK(dist.deficit == 0);
        }
    }
}

TEST_CASE("mu_n examples") {
    const DegreeModel fixed = DegreeModel::fixed({2, 2, 1, 1});
    CHECK(mu_n(fixed, star_ball(2), 4) == Rat(1, 2));

    // depth-1 balls reproduce the first-coordinate degree marginal
    for (const auto& mc : standard_model_battery(6)) {
        Rat total = 0;
        for (int d = 1; d <= 5; ++d) {
            const std::vector<int> value{d};
            const Rat expected = mc.model.marginal(6, value);
            CHECK(mu_n(mc.model, star_ball(d), 6) == expected);
            total += expected;
        }
        CHECK(total == 1);
    }
}

TEST_CASE("mu_n converges to p_limit along the grid") {
    struct Case {
        DegreeDistribution d0;
        std::vector<int> grid;
    };
    const std::vector<Case> cases{
        {DegreeDistribution::uniform({1, 3}), {20, 40, 80, 160}},
        {DegreeDistribution::uniform({1, 2, 3}), {20, 40, 80, 160}},
    };
    for (const auto& c : cases) {
        const LimitMeasure measure(c.d0, c.d0.max_degree());
        const DegreeModel model = DegreeModel::conditioned_iid(c.d0);
        for (int depth : {1, 2}) {
            for (const RootedBall& b :
                 enumerate_balls(depth, c.d0.max_degree(), max_ball_nodes(c.d0.max_degree(), depth))) {
                const Rat p = p_limit(measure, b);
                if (p == 0) continue;
                std::vector<Rat> errs;
                for (int n : c.grid) {
                    const Rat err = mu_n(model, b, n) - p;
                    errs.push_back(err < 0 ? -err : err);
                }
                bool monotone = true;
                for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
                    monotone = monotone && errs[i + 1] <= errs[i];
                }
                const bool close = errs.back() < Rat(1, 1000);
                INFO("ball ", canonical_code(b).code);
                CHECK((monotone || close));
            }
        }
    }
}

TEST_CASE("limit ball sampler matches p_limit") {
    const LimitMeasure point2(DegreeDistribution::point_mass(2), 3);
    LimitBallSampler path_sampler(point2);
    Rng rng(2025);
    for (int i = 0; i < 50; ++i) {
        const RootedBall b = path_sampler.sample(3, rng);
        CHECK(canonical_code(b) ==
              canonical_code(compose_ball({path_ball(2), path_ball(2)})));
    }

    const DegreeDistribution u13 = DegreeDistribution::uniform({1, 3});
    const LimitMeasure m13(u13, 3);
    for (int depth : {1, 2, 3}) {
        const BallDistribution expected = limit_marginal(m13, depth, 40);
        LimitBallSampler sampler(m13);
        std::map<std::string, long long> counts;
        const int samples = 100000;
        for (int i = 0; i < samples; ++i) {
            counts[canonical_code(sampler.sample(depth, rng)).code] += 1;
        }
        std::vector<long long> observed;
        std::vector<double> probs;
        long long covered = 0;
        for (const auto& [code, p] : expected.classes) {
            observed.push_back(counts[code.code]);
            probs.push_back(to_double(p));
            covered += counts[code.code];
        }
        CHECK(covered == samples);  // nothing outside the enumerated classes
        const ChiSquareResult chi = chi_square_gof(observed, probs);
        INFO("depth ", depth);
        CHECK(chi.pvalue > 0.001);
    }
}

TEST_CASE("sampler rejects inconsistent measures") {
    const DegreeDistribution skew({{1, Rat(1, 2)}, {2, Rat(1, 2)}});
    CHECK(gamma_value(skew) == Rat(1, 2));
    Rng rng(3);
    CHECK_THROWS_AS(sample_limit_ball(LimitMeasure(skew, 3), 2, rng, 3), NotConsistent);
}

TEST_CASE("tv_distance") {
    const CanonicalCode a{"(())", 2, 1};
    const CanonicalCode b{"(()())", 3, 1};
    BallDistribution p{1, {{a, Rat(1, 2)}, {b, Rat(1, 2)}}, Rat(0)};
    BallDistribution q{1, {{a, Rat(1)}}, Rat(0)};
    BallDistribution r{1, {{b, Rat(1)}}, Rat(0)};

    CHECK(tv_distance(p, p) == 0);
    CHECK(tv_distance(p, q) == Rat(1, 2));
    CHECK(tv_distance(q, r) == 1);  // disjoint supports

    BallDistribution deeper{2, {}, Rat(1)};
    CHECK_THROWS_AS(tv_distance(p, deeper), DepthMismatch);
}

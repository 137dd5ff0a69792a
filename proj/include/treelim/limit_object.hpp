#pragma once
// The limit law of neighborhoods: closed-form ball probabilities driven by a
// degree distribution, finite-n counterparts, the consistency ratio that
// detects whether those marginals glue into a measure on infinite rooted
// trees, and an exact sampler for the consistent case.

#include <map>
#include <vector>

#include "treelim/degree_model.hpp"
#include "treelim/neighborhood.hpp"
#include "treelim/rational.hpp"
#include "treelim/rng.hpp"

namespace treelim {

// A degree distribution together with its cached gamma = E(D0) - 1 and the
// degree cap used when enumerating ball classes. The induced measure on
// infinite rooted trees is represented by its finite-depth ball marginals;
// it is consistent exactly when gamma = 1.
class LimitMeasure {
public:
    LimitMeasure(DegreeDistribution d0, int degree_cap);

    const DegreeDistribution& d0() const { return d0_; }
    const Rat& gamma() const { return gamma_; }
    int degree_cap() const { return degree_cap_; }

private:
    DegreeDistribution d0_;
    Rat gamma_;
    int degree_cap_;
};

// Probabilities over rooted-isomorphism classes of depth-`depth` balls.
// The values may sum below 1 when enumeration was truncated (deficit holds
// the gap), and above 1 for inconsistent measures.
struct BallDistribution {
    int depth = 0;
    std::map<CanonicalCode, Rat> classes;
    Rat deficit;
};

// Mass the limit assigns to the class of ball b (depth >= 1):
// t_l * prod over non-deepest nodes of P(D0 = d_i) (d_i - 1)! / |Aut(b)|.
Rat p_limit(const LimitMeasure& m, const RootedBall& b);

// Depth-1 marginal; collapses to the degree pmf on the root degree.
BallDistribution depth1_marginal(const LimitMeasure& m);

// One representative per rooted-isomorphism class of exactly-l-deep trees
// with all degrees <= degree_cap and at most node_cap nodes, sorted by code.
std::vector<RootedBall> enumerate_balls(int l, int degree_cap, int node_cap);

// Largest node count a depth-`depth` ball with degrees <= degree_cap can have.
int max_ball_nodes(int degree_cap, int depth);

// Compares p(base) with the total mass of its one-level-deeper extensions.
// The ratio rhs/lhs equals gamma for every positive-mass base.
struct ConsistencyReport {
    Rat lhs;
    Rat rhs;
    Rat ratio;
};
ConsistencyReport consistency_report(const LimitMeasure& m, const RootedBall& base, int degree_cap);

// Finite-n ball probability under a degree model: E(X) of the stripped ball
// divided by n and by the deepest-level automorphism quotient.
Rat mu_n(const DegreeModel& model, const RootedBall& b, int n);

// Exact sampler for the depth-l marginal of a consistent measure (gamma = 1).
// Builds the ball level by level from the exact conditional extension law;
// conditionals are cached per ball class.
class LimitBallSampler {
public:
    explicit LimitBallSampler(LimitMeasure m);
    RootedBall sample(int depth, Rng& rng);

private:
    struct Branches {
        std::vector<RootedBall> balls;
        std::vector<double> weights;
    };
    const Branches& branches_for(const RootedBall& current, const Rat& current_mass);

    LimitMeasure measure_;
    std::map<std::string, Branches> cache_;
};

RootedBall sample_limit_ball(const LimitMeasure& m, int depth, Rng& rng, int degree_cap);

// Half the l1 distance over the union of classes; missing classes count 0.
Rat tv_distance(const BallDistribution& p, const BallDistribution& q);

// Full depth-l marginal by enumeration under the measure's degree cap.
BallDistribution limit_marginal(const LimitMeasure& m, int depth, int node_cap);

}  // namespace treelim

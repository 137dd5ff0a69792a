#pragma once
// Degree distributions on positive integers, valid tree degree sequences, and
// the exchangeable random models that generate them. Marginal probabilities
// are exact rationals; the models are immutable and safe to share.

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "treelim/errors.hpp"
#include "treelim/rational.hpp"
#include "treelim/rng.hpp"

namespace treelim {

enum class ArithmeticMode { Exact, Float };

// Finitely supported probability mass function on degrees >= 1.
class DegreeDistribution {
public:
    explicit DegreeDistribution(std::map<int, Rat> pmf, ArithmeticMode mode = ArithmeticMode::Exact);

    static DegreeDistribution point_mass(int degree);
    static DegreeDistribution uniform(const std::vector<int>& degrees);

    const std::map<int, Rat>& pmf() const { return pmf_; }
    const std::vector<int>& support() const { return support_; }
    Rat mass(int degree) const;
    int min_degree() const { return support_.front(); }
    int max_degree() const { return support_.back(); }
    Rat mean() const;
    ArithmeticMode mode() const { return mode_; }
    std::string describe() const;

private:
    std::map<int, Rat> pmf_;
    std::vector<int> support_;
    ArithmeticMode mode_;
};

// E(D0) - 1; equals 1 exactly when the mean limit degree is 2.
Rat gamma_value(const DegreeDistribution& d0);

// Degree sequence of a labeled tree: n entries >= 1 summing to 2(n-1).
// degrees[i] is the degree of node i+1.
struct DegreeSequence {
    std::vector<int> degrees;
    int n() const { return static_cast<int>(degrees.size()); }
};

DegreeSequence validate_degree_sequence(const std::vector<int>& degrees);

// All valid degree sequences on n nodes in ascending lexicographic order.
// Limited to n <= 10; larger n raises NTooLarge.
std::vector<DegreeSequence> enumerate_degree_sequences(int n);

class DegreeModel {
public:
    enum class Kind { Fixed, ConditionedIID, Star, Mixture };
    // Per-n profile generators for the Fixed variant. Path is
    // (2,...,2,1,1); Binary is (n-2)/2 threes and (n+2)/2 ones (even n).
    enum class Family { Explicit, Path, Binary };

    static DegreeModel fixed(std::vector<int> multiset);
    static DegreeModel fixed_family(Family family);
    static DegreeModel conditioned_iid(DegreeDistribution d0);
    static DegreeModel star();
    static DegreeModel mixture(std::vector<std::pair<Rat, DegreeModel>> components);

    Kind kind() const;
    // Non-null only for ConditionedIID.
    const DegreeDistribution* limit_distribution() const;
    // Fixed variant's multiset instantiated at size n.
    std::vector<int> fixed_multiset(int n) const;
    // True iff the model assigns positive probability to some sequence on n nodes.
    bool feasible(int n) const;

    DegreeSequence sample(int n, Rng& rng, long long max_retries = 1000000) const;
    // P(D(1)..D(k) = values) for the model's exchangeable sequence on n nodes.
    Rat marginal(int n, std::span<const int> values) const;
    std::string describe() const;

private:
    struct Impl;
    explicit DegreeModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

DegreeSequence sample_degree_sequence(const DegreeModel& model, int n, Rng& rng,
                                      long long max_retries = 1000000);

// P(k i.i.d. draws from d0 sum to target); exact dynamic program.
Rat iid_sum_probability(const DegreeDistribution& d0, int draws, long long target);

// P(D(1..k) = prefix) when n i.i.d. draws from d0 are conditioned on summing
// to 2(n-1). A structurally impossible prefix yields 0 and sets the optional
// flag; an impossible conditioning event raises UnconditionedSumZero.
Rat conditioned_iid_marginal(const DegreeDistribution& d0, int n, std::span<const int> prefix,
                             bool* infeasible_prefix = nullptr);

// |P(D_phi = values, D_psi = values) - P(D_phi = values) P(D_psi = values)|
// for disjoint index sets phi_support, psi_support of size |values|.
Rat independence_gap(const DegreeModel& model, int n, const std::vector<int>& values,
                     const std::vector<int>& phi_support, const std::vector<int>& psi_support);

}  // namespace treelim

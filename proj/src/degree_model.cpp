#include "treelim/degree_model.hpp"

#include <algorithm>
#include <atomic>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

namespace treelim {

DegreeDistribution::DegreeDistribution(std::map<int, Rat> pmf, ArithmeticMode mode)
    : pmf_(std::move(pmf)), mode_(mode) {
    if (pmf_.empty()) throw Error("DegreeDistribution: empty pmf");
    Rat total = 0;
    for (const auto& [degree, p] : pmf_) {
        if (degree < 1) throw Error("DegreeDistribution: degree below 1 in support");
        if (p <= 0) throw Error("DegreeDistribution: nonpositive mass on support");
        support_.push_back(degree);
        total += p;
    }
    if (mode_ == ArithmeticMode::Exact) {
        if (total != 1) throw Error("DegreeDistribution: pmf must sum to 1, got " + rat_string(total));
    } else {
        const double err = std::abs(to_double(total) - 1.0);
        if (err > 1e-12) throw Error("DegreeDistribution: pmf sums to 1 only within " + std::to_string(err));
    }
}

DegreeDistribution DegreeDistribution::point_mass(int degree) {
    return DegreeDistribution({{degree, Rat(1)}});
}

DegreeDistribution DegreeDistribution::uniform(const std::vector<int>& degrees) {
    if (degrees.empty()) throw Error("DegreeDistribution::uniform: empty support");
    std::map<int, Rat> pmf;
    for (int d : degrees) {
        if (pmf.count(d)) throw Error("DegreeDistribution::uniform: duplicate degree");
        pmf[d] = Rat(1, static_cast<long long>(degrees.size()));
    }
    return DegreeDistribution(std::move(pmf));
}

Rat DegreeDistribution::mass(int degree) const {
    auto it = pmf_.find(degree);
    return it == pmf_.end() ? Rat(0) : it->second;
}

Rat DegreeDistribution::mean() const {
    Rat m = 0;
    for (const auto& [degree, p] : pmf_) m += Rat(degree) * p;
    return m;
}

std::string DegreeDistribution::describe() const {
    std::ostringstream os;
    os << "pmf{";
    bool first = true;
    for (const auto& [degree, p] : pmf_) {
        if (!first) os << ", ";
        os << degree << ": " << rat_string(p);
        first = false;
    }
    os << "}";
    return os.str();
}

Rat gamma_value(const DegreeDistribution& d0) { return d0.mean() - 1; }

DegreeSequence validate_degree_sequence(const std::vector<int>& degrees) {
    const int n = static_cast<int>(degrees.size());
    if (n < 2) throw Error("validate_degree_sequence: need at least 2 nodes");
    long long sum = 0;
    for (int d : degrees) {
        if (d < 1) throw EntryBelowOne("degree sequence entry below 1");
        sum += d;
    }
    const long long required = 2LL * (n - 1);
    if (sum != required) {
        throw SumMismatch("degree sequence sums to " + std::to_string(sum) + ", expected " +
                          std::to_string(required));
    }
    return DegreeSequence{degrees};
}

std::vector<DegreeSequence> enumerate_degree_sequences(int n) {
    if (n < 2) throw Error("enumerate_degree_sequences: need n >= 2");
    if (n > 10) throw NTooLarge("enumerate_degree_sequences limited to n <= 10");
    std::vector<DegreeSequence> out;
    std::vector<int> current(n, 1);
    // compositions of 2(n-1) into n positive parts, ascending lexicographic
    const long long total = 2LL * (n - 1);
    auto rec = [&](auto&& self, int index, long long remaining) -> void {
        if (index == n - 1) {
            if (remaining >= 1) {
                current[index] = static_cast<int>(remaining);
                out.push_back(DegreeSequence{current});
            }
            return;
        }
        const long long max_here = remaining - (n - 1 - index);  // leave >=1 per later slot
        for (long long d = 1; d <= max_here; ++d) {
            current[index] = static_cast<int>(d);
            self(self, index + 1, remaining - d);
        }
    };
    rec(rec, 0, total);
    return out;
}

// -------------------------------------------------------------------------
// DegreeModel

struct DegreeModel::Impl {
    Kind kind = Kind::Fixed;
    Family family = Family::Explicit;
    std::vector<int> multiset;                              // Fixed/Explicit
    std::shared_ptr<const DegreeDistribution> d0;           // ConditionedIID
    std::vector<std::pair<Rat, DegreeModel>> components;    // Mixture
    mutable std::atomic<bool> warned{false};
};

DegreeModel DegreeModel::fixed(std::vector<int> multiset) {
    validate_degree_sequence(multiset);
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Fixed;
    impl->family = Family::Explicit;
    impl->multiset = std::move(multiset);
    return DegreeModel(std::move(impl));
}

DegreeModel DegreeModel::fixed_family(Family family) {
    if (family == Family::Explicit) throw Error("fixed_family: pass the multiset to fixed()");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Fixed;
    impl->family = family;
    return DegreeModel(std::move(impl));
}

DegreeModel DegreeModel::conditioned_iid(DegreeDistribution d0) {
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::ConditionedIID;
    impl->d0 = std::make_shared<const DegreeDistribution>(std::move(d0));
    return DegreeModel(std::move(impl));
}

DegreeModel DegreeModel::star() {
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Star;
    return DegreeModel(std::move(impl));
}

DegreeModel DegreeModel::mixture(std::vector<std::pair<Rat, DegreeModel>> components) {
    if (components.empty()) throw Error("mixture: no components");
    Rat total = 0;
    for (const auto& [w, part] : components) {
        if (w <= 0) throw Error("mixture: weights must be positive");
        if (part.kind() == Kind::Mixture) throw Error("mixture: nested mixtures unsupported");
        total += w;
    }
    if (total != 1) throw Error("mixture: weights must sum to 1");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::Mixture;
    impl->components = std::move(components);
    return DegreeModel(std::move(impl));
}

DegreeModel::Kind DegreeModel::kind() const { return impl_->kind; }

const DegreeDistribution* DegreeModel::limit_distribution() const {
    return impl_->kind == Kind::ConditionedIID ? impl_->d0.get() : nullptr;
}

std::vector<int> DegreeModel::fixed_multiset(int n) const {
    if (impl_->kind != Kind::Fixed) throw Error("fixed_multiset: not a Fixed model");
    switch (impl_->family) {
        case Family::Explicit:
            if (static_cast<int>(impl_->multiset.size()) != n) {
                throw InfeasibleModel("fixed multiset has size " +
                                      std::to_string(impl_->multiset.size()) + ", asked for n=" +
                                      std::to_string(n));
            }
            return impl_->multiset;
        case Family::Path: {
            if (n < 2) throw Error("fixed_multiset: n >= 2 required");
            std::vector<int> m(n, 2);
            m[n - 2] = 1;
            m[n - 1] = 1;
            return m;
        }
        case Family::Binary: {
            if (n < 2 || n % 2 != 0) {
                throw InfeasibleModel("binary degree profile needs even n >= 2");
            }
            std::vector<int> m;
            m.reserve(n);
            for (int i = 0; i < (n - 2) / 2; ++i) m.push_back(3);
            while (static_cast<int>(m.size()) < n) m.push_back(1);
            return m;
        }
    }
    throw Error("fixed_multiset: unreachable");
}

namespace {

// Achievable-sum check for i.i.d. draws from a finite support, no probability
// arithmetic. sums[(k, s)] reachable with exactly k draws.
bool sum_reachable(const std::vector<int>& support, int draws, long long target) {
    if (draws == 0) return target == 0;
    if (target < 0) return false;
    const long long cap = target;
    std::vector<char> reach(static_cast<std::size_t>(cap) + 1, 0);
    reach[0] = 1;
    for (int k = 0; k < draws; ++k) {
        std::vector<char> next(static_cast<std::size_t>(cap) + 1, 0);
        for (long long s = 0; s <= cap; ++s) {
            if (!reach[s]) continue;
            for (int d : support) {
                if (s + d <= cap) next[s + d] = 1;
            }
        }
        reach.swap(next);
    }
    return reach[static_cast<std::size_t>(cap)] != 0;
}

}  // namespace

bool DegreeModel::feasible(int n) const {
    if (n < 2) return false;
    switch (impl_->kind) {
        case Kind::Fixed: {
            try {
                std::vector<int> m = fixed_multiset(n);
                validate_degree_sequence(m);
                return true;
            } catch (const Error&) {
                return false;
            }
        }
        case Kind::Star:
            return true;
        case Kind::ConditionedIID:
            return sum_reachable(impl_->d0->support(), n, 2LL * (n - 1));
        case Kind::Mixture:
            return std::all_of(impl_->components.begin(), impl_->components.end(),
                               [n](const auto& c) { return c.second.feasible(n); });
    }
    return false;
}

DegreeSequence DegreeModel::sample(int n, Rng& rng, long long max_retries) const {
    if (n < 2) throw Error("sample: n >= 2 required");
    switch (impl_->kind) {
        case Kind::Fixed: {
            std::vector<int> m = fixed_multiset(n);
            validate_degree_sequence(m);
            rng.shuffle(m);
            return DegreeSequence{std::move(m)};
        }
        case Kind::Star: {
            std::vector<int> degrees(n, 1);
            degrees[static_cast<std::size_t>(rng.bounded(static_cast<std::uint64_t>(n)))] = n - 1;
            return DegreeSequence{std::move(degrees)};
        }
        case Kind::ConditionedIID: {
            const DegreeDistribution& d0 = *impl_->d0;
            const long long target = 2LL * (n - 1);
            if (!sum_reachable(d0.support(), n, target)) {
                throw InfeasibleModel("conditioned i.i.d. draws from " + d0.describe() +
                                      " can never sum to " + std::to_string(target));
            }
            const double mean = to_double(d0.mean());
            const double band = 4.0 / std::sqrt(static_cast<double>(n));
            if (std::abs(mean - 2.0) > band && !impl_->warned.exchange(true)) {
                std::cerr << "treelim: warning: E(D0) = " << mean
                          << " is far from 2; rejection sampling may be slow at n=" << n << "\n";
            }
            std::vector<double> weights;
            weights.reserve(d0.support().size());
            for (int d : d0.support()) weights.push_back(to_double(d0.mass(d)));

            std::vector<int> draw(n);
            for (long long attempt = 0; attempt < max_retries; ++attempt) {
                long long sum = 0;
                for (int i = 0; i < n; ++i) {
                    draw[i] = d0.support()[rng.categorical(weights)];
                    sum += draw[i];
                }
                if (sum == target) return DegreeSequence{draw};
            }
            throw RetriesExhausted("conditioned i.i.d. sampling failed after " +
                                   std::to_string(max_retries) + " attempts");
        }
        case Kind::Mixture: {
            std::vector<double> weights;
            weights.reserve(impl_->components.size());
            for (const auto& [w, part] : impl_->components) weights.push_back(to_double(w));
            const auto& part = impl_->components[rng.categorical(weights)].second;
            return part.sample(n, rng, max_retries);
        }
    }
    throw Error("sample: unreachable");
}

Rat DegreeModel::marginal(int n, std::span<const int> values) const {
    if (n < 2) throw Error("marginal: n >= 2 required");
    const int k = static_cast<int>(values.size());
    if (k > n) throw Error("marginal: more positions than nodes");
    for (int v : values) {
        if (v < 1) return Rat(0);
    }
    switch (impl_->kind) {
        case Kind::Fixed: {
            std::vector<int> m = fixed_multiset(n);
            std::map<int, int> counts;
            for (int d : m) counts[d] += 1;
            // sequential draw without replacement from the exchangeable multiset
            Rat p = 1;
            for (int i = 0; i < k; ++i) {
                auto it = counts.find(values[i]);
                if (it == counts.end() || it->second == 0) return Rat(0);
                p *= Rat(it->second, n - i);
                it->second -= 1;
            }
            return p;
        }
        case Kind::Star: {
            // center index is uniform on [n]; count consistent centers
            long long consistent = 0;
            bool all_ones = true;
            for (int v : values) all_ones = all_ones && (v == 1);
            for (int j = 0; j < k; ++j) {
                bool ok = (values[j] == n - 1);
                for (int i = 0; ok && i < k; ++i) {
                    if (i != j && values[i] != 1) ok = false;
                }
                if (ok) consistent += 1;
            }
            if (all_ones) consistent += n - k;
            return Rat(consistent, n);
        }
        case Kind::ConditionedIID:
            return conditioned_iid_marginal(*impl_->d0, n, values);
        case Kind::Mixture: {
            Rat p = 0;
            for (const auto& [w, part] : impl_->components) p += w * part.marginal(n, values);
            return p;
        }
    }
    throw Error("marginal: unreachable");
}

std::string DegreeModel::describe() const {
    switch (impl_->kind) {
        case Kind::Fixed: {
            if (impl_->family == Family::Path) return "fixed(path profile)";
            if (impl_->family == Family::Binary) return "fixed(binary profile)";
            std::ostringstream os;
            os << "fixed(";
            for (std::size_t i = 0; i < impl_->multiset.size(); ++i) {
                os << (i ? "," : "") << impl_->multiset[i];
            }
            os << ")";
            return os.str();
        }
        case Kind::Star:
            return "star";
        case Kind::ConditionedIID:
            return "conditioned_iid " + impl_->d0->describe();
        case Kind::Mixture: {
            std::ostringstream os;
            os << "mixture[";
            bool first = true;
            for (const auto& [w, part] : impl_->components) {
                if (!first) os << "; ";
                os << rat_string(w) << " * " << part.describe();
                first = false;
            }
            os << "]";
            return os.str();
        }
    }
    return "?";
}

DegreeSequence sample_degree_sequence(const DegreeModel& model, int n, Rng& rng,
                                      long long max_retries) {
    return model.sample(n, rng, max_retries);
}

Rat iid_sum_probability(const DegreeDistribution& d0, int draws, long long target) {
    if (draws < 0) throw Error("iid_sum_probability: negative draw count");
    if (target < 0) return Rat(0);
    if (draws == 0) return target == 0 ? Rat(1) : Rat(0);
    // degrees are >= 1, so partial sums never exceed the target usefully
    const std::size_t cap = static_cast<std::size_t>(target);
    std::vector<Rat> dist(cap + 1, Rat(0));
    dist[0] = 1;
    for (int k = 0; k < draws; ++k) {
        std::vector<Rat> next(cap + 1, Rat(0));
        for (std::size_t s = 0; s <= cap; ++s) {
            if (dist[s] == 0) continue;
            for (const auto& [d, p] : d0.pmf()) {
                const std::size_t t = s + static_cast<std::size_t>(d);
                if (t <= cap) next[t] += dist[s] * p;
            }
        }
        dist.swap(next);
    }
    return dist[cap];
}

Rat conditioned_iid_marginal(const DegreeDistribution& d0, int n, std::span<const int> prefix,
                             bool* infeasible_prefix) {
    if (infeasible_prefix) *infeasible_prefix = false;
    const int k = static_cast<int>(prefix.size());
    if (k > n) throw Error("conditioned_iid_marginal: prefix longer than sequence");
    const long long target = 2LL * (n - 1);

    const Rat denom = iid_sum_probability(d0, n, target);
    if (denom == 0) {
        throw UnconditionedSumZero("no i.i.d. outcome of " + d0.describe() + " sums to " +
                                   std::to_string(target) + " at n=" + std::to_string(n));
    }
    Rat prefix_mass = 1;
    long long prefix_sum = 0;
    for (int d : prefix) {
        prefix_mass *= d0.mass(d);
        prefix_sum += d;
    }
    if (prefix_mass == 0) {
        if (infeasible_prefix) *infeasible_prefix = true;
        return Rat(0);
    }
    const Rat rest = iid_sum_probability(d0, n - k, target - prefix_sum);
    if (rest == 0) {
        if (infeasible_prefix) *infeasible_prefix = true;
        return Rat(0);
    }
    return prefix_mass * rest / denom;
}

Rat independence_gap(const DegreeModel& model, int n, const std::vector<int>& values,
                     const std::vector<int>& phi_support, const std::vector<int>& psi_support) {
    if (phi_support.size() != values.size() || psi_support.size() != values.size()) {
        throw Error("independence_gap: index sets must match the value fragment length");
    }
    std::set<int> seen;
    for (int i : phi_support) {
        if (i < 1 || i > n) throw Error("independence_gap: index outside [1, n]");
        if (!seen.insert(i).second) throw OverlappingSupports("duplicate index in phi support");
    }
    for (int i : psi_support) {
        if (i < 1 || i > n) throw Error("independence_gap: index outside [1, n]");
        if (!seen.insert(i).second) {
            throw OverlappingSupports("phi and psi supports overlap at index " + std::to_string(i));
        }
    }
    // exchangeability: only the value multiset matters, not the positions
    const Rat single = model.marginal(n, values);
    std::vector<int> doubled(values);
    doubled.insert(doubled.end(), values.begin(), values.end());
    const Rat joint = model.marginal(n, doubled);
    const Rat gap = joint - single * single;
    return gap < 0 ? Rat(-gap) : gap;
}

}  // namespace treelim

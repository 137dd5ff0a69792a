#include "treelim/stats_util.hpp"

#include <cmath>
#include <limits>

#include "treelim/errors.hpp"

namespace treelim {

double mean(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

double sample_sd(const std::vector<double>& xs) { return std::sqrt(sample_variance(xs)); }

namespace {

// Lower regularized incomplete gamma by its power series; x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 1000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma by Lentz's continued fraction; x >= a + 1.
double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double regularized_gamma_q(double a, double x) {
    if (a <= 0.0) throw Error("regularized_gamma_q: a must be positive");
    if (x < 0.0) throw Error("regularized_gamma_q: x must be nonnegative");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_contfrac(a, x);
}

double chi_square_pvalue(double stat, int dof) {
    if (dof <= 0) throw Error("chi_square_pvalue: dof must be positive");
    if (stat <= 0.0) return 1.0;
    return regularized_gamma_q(0.5 * dof, 0.5 * stat);
}

ChiSquareResult chi_square_gof(const std::vector<long long>& observed,
                               const std::vector<double>& expected_probs) {
    if (observed.size() != expected_probs.size() || observed.empty()) {
        throw Error("chi_square_gof: size mismatch");
    }
    long long total = 0;
    for (long long o : observed) total += o;
    if (total <= 0) throw Error("chi_square_gof: no observations");

    ChiSquareResult r;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double e = expected_probs[i] * static_cast<double>(total);
        if (e <= 0.0) {
            if (observed[i] != 0) {
                r.statistic = std::numeric_limits<double>::infinity();
            }
            continue;
        }
        const double diff = static_cast<double>(observed[i]) - e;
        r.statistic += diff * diff / e;
        r.dof += 1;
    }
    r.dof -= 1;
    if (r.dof <= 0) r.dof = 1;
    r.pvalue = std::isinf(r.statistic) ? 0.0 : chi_square_pvalue(r.statistic, r.dof);
    return r;
}

ChiSquareResult chi_square_homogeneity(const std::vector<long long>& a,
                                       const std::vector<long long>& b) {
    if (a.size() != b.size() || a.empty()) throw Error("chi_square_homogeneity: size mismatch");
    long long na = 0, nb = 0;
    for (long long x : a) na += x;
    for (long long x : b) nb += x;
    if (na <= 0 || nb <= 0) throw Error("chi_square_homogeneity: empty sample");

    ChiSquareResult r;
    int used = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const long long col = a[i] + b[i];
        if (col == 0) continue;
        used += 1;
        const double ea = static_cast<double>(col) * na / static_cast<double>(na + nb);
        const double eb = static_cast<double>(col) * nb / static_cast<double>(na + nb);
        const double da = static_cast<double>(a[i]) - ea;
        const double db = static_cast<double>(b[i]) - eb;
        r.statistic += da * da / ea + db * db / eb;
    }
    r.dof = used > 1 ? used - 1 : 1;
    r.pvalue = chi_square_pvalue(r.statistic, r.dof);
    return r;
}

}  // namespace treelim

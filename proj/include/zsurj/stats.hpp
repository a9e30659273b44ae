#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace zsurj {

struct ConfidenceInterval {
    double low;
    double high;
};

namespace detail {

// Continued fraction for the regularized incomplete beta, modified Lentz
// scheme. Standard formulation; converges for x < (a+1)/(a+b+2).
inline double beta_cf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 3e-16;

    double qab = a + b, qap = a + 1, qam = a - 1;
    double c = 1;
    double d = 1 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1 / d;
    double h = d;
    for (int m = 1; m <= 400; ++m) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1) < eps) return h;
    }
    throw std::runtime_error("incomplete beta continued fraction failed to converge");
}

inline double reg_inc_beta(double a, double b, double x) {
    if (x <= 0) return 0;
    if (x >= 1) return 1;
    double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x));
    if (x < (a + 1) / (a + b + 2)) return front * beta_cf(a, b, x) / a;
    return 1 - front * beta_cf(b, a, 1 - x) / b;
}

// Smallest x with I_x(a, b) >= target, by bisection (I is increasing in x).
inline double reg_inc_beta_inverse(double target, double a, double b) {
    double lo = 0, hi = 1;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (reg_inc_beta(a, b, mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Regularized lower incomplete gamma P(a, x): series for x < a + 1,
// continued fraction for the complement otherwise.
inline double reg_inc_gamma_lower(double a, double x) {
    if (x < 0 || a <= 0) throw std::invalid_argument("bad incomplete gamma arguments");
    if (x == 0) return 0;
    if (x < a + 1) {
        double term = 1 / a, sum = term, ap = a;
        for (int i = 0; i < 500; ++i) {
            ap += 1;
            term *= x / ap;
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
        }
        return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    constexpr double tiny = 1e-300;
    double b = x + 1 - a, c = 1 / tiny, d = 1 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -i * (i - a);
        b += 2;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1) < 1e-16) break;
    }
    return 1 - h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

// Exact (Clopper-Pearson) two-sided binomial confidence interval.
inline ConfidenceInterval binomial_exact_interval(std::uint64_t successes, std::uint64_t trials,
                                                  double confidence = 0.95) {
    if (trials == 0) throw std::invalid_argument("interval needs at least one trial");
    if (successes > trials) throw std::invalid_argument("successes exceed trials");
    if (!(confidence > 0 && confidence < 1)) throw std::invalid_argument("confidence must be in (0,1)");

    const double alpha = 1 - confidence;
    const double k = static_cast<double>(successes);
    const double n = static_cast<double>(trials);
    ConfidenceInterval ci{0, 1};
    if (successes > 0) ci.low = detail::reg_inc_beta_inverse(alpha / 2, k, n - k + 1);
    if (successes < trials) ci.high = detail::reg_inc_beta_inverse(1 - alpha / 2, k + 1, n - k);
    return ci;
}

// Standard deviation of the empirical rate of a Binomial(trials, p) sample.
inline double binomial_sigma(double p, std::uint64_t trials) {
    if (trials == 0) throw std::invalid_argument("binomial_sigma needs trials >= 1");
    return std::sqrt(p * (1 - p) / static_cast<double>(trials));
}

// Upper tail p-value of a chi-squared statistic.
inline double chi_squared_pvalue(double statistic, std::uint64_t degrees_of_freedom) {
    if (degrees_of_freedom == 0) throw std::invalid_argument("need degrees_of_freedom >= 1");
    if (statistic <= 0) return 1;
    return 1 - detail::reg_inc_gamma_lower(static_cast<double>(degrees_of_freedom) / 2,
                                           statistic / 2);
}

struct LinearFit {
    double slope;
    double intercept;
};

// Ordinary least squares through (x, y) points.
inline LinearFit least_squares(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw std::invalid_argument("least_squares needs >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : points) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(points.size());
    const double denom = n * sxx - sx * sx;
    if (denom == 0) throw std::invalid_argument("least_squares needs distinct x values");
    LinearFit fit{};
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    return fit;
}

}  // namespace zsurj

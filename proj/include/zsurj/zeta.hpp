#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "highprec.hpp"
#include "int_matrix.hpp"

namespace zsurj {

// Bernoulli numbers B_0..B_max_index as exact rationals (B_1 = -1/2
// convention), computed by the defining recurrence
//   sum_{j=0}^{m} C(m+1, j) B_j = 0.
// The cache only grows; callers get an immutable snapshot.
inline std::shared_ptr<const std::vector<Rational>> bernoulli_numbers(std::size_t max_index) {
    static std::mutex guard;
    static std::shared_ptr<const std::vector<Rational>> cache =
        std::make_shared<const std::vector<Rational>>(1, Rational(1));

    std::lock_guard<std::mutex> lock(guard);
    if (cache->size() > max_index) return cache;

    std::vector<Rational> b(*cache);
    for (std::size_t m = b.size(); m <= max_index; ++m) {
        Rational acc(0);
        Int binom(1);  // C(m+1, j), updated incrementally
        for (std::size_t j = 0; j < m; ++j) {
            acc += Rational(binom) * b[j];
            binom = binom * Int(m + 1 - j) / Int(j + 1);
        }
        // binom now holds C(m+1, m) = m+1
        b.push_back(-acc / Rational(binom));
    }
    cache = std::make_shared<const std::vector<Rational>>(std::move(b));
    return cache;
}

namespace detail {

inline Real real_from_rational(const Rational& q) {
    return Real(boost::multiprecision::numerator(q)) /
           Real(boost::multiprecision::denominator(q));
}

// Direct Dirichlet series with integral tail bound; only efficient once
// the terms decay fast (large k).
inline HighPrecisionValue zeta_series(std::uint64_t k) {
    constexpr unsigned terms = 64;
    Real sum(0);
    for (unsigned j = 1; j <= terms; ++j) {
        sum += 1 / pow(Real(j), static_cast<unsigned>(k));
    }
    // sum_{j>J} j^-k < integral_J^inf x^-k dx = J^(1-k)/(k-1)
    Real tail = 1 / (pow(Real(terms), static_cast<unsigned>(k - 1)) * Real(k - 1));
    return {sum, tail + rounding_slack(sum, terms + 8)};
}

// Euler-Maclaurin evaluation
//   zeta(s) = sum_{n=1}^{N} n^-s + N^(1-s)/(s-1) - N^-s/2
//           + sum_{m=1}^{M} B_{2m}/(2m)! (s)_{2m-1} N^(-s-2m+1) + R_M,
// with |R_M| bounded by the first omitted correction term because x^-s
// is completely monotone on [N, inf).
inline HighPrecisionValue zeta_euler_maclaurin(std::uint64_t k) {
    constexpr unsigned big_n = 64;
    constexpr unsigned max_m = 40;

    Real sum(0);
    for (unsigned j = 1; j <= big_n; ++j) {
        sum += 1 / pow(Real(j), static_cast<unsigned>(k));
    }
    Real n_pow_k = pow(Real(big_n), static_cast<unsigned>(k));
    Real value = sum + Real(big_n) / (n_pow_k * Real(k - 1)) - 1 / (2 * n_pow_k);

    auto bern = bernoulli_numbers(2 * (max_m + 1));
    const Real threshold = Real("1e-60");

    Int rising(1);               // (k)(k+1)...(k+2m-2), extended as m grows
    Int factorial(1);            // (2m)!
    std::uint64_t rising_next = 0;
    std::uint64_t factorial_next = 0;
    Real error(0);
    bool truncated = false;
    for (unsigned m = 1; m <= max_m + 1; ++m) {
        while (factorial_next < 2 * m) factorial *= Int(++factorial_next);
        while (rising_next < 2 * m - 1) {
            rising *= Int(k) + Int(rising_next);
            ++rising_next;
        }
        Real term = real_from_rational((*bern)[2 * m]) * Real(rising) /
                    (Real(factorial) * pow(Real(big_n), static_cast<unsigned>(k + 2 * m - 1)));
        if (abs(term) < threshold || m == max_m + 1) {
            error = abs(term);
            truncated = true;
            break;
        }
        value += term;
    }
    if (!truncated) throw std::logic_error("euler-maclaurin loop must terminate");
    return {value, error + rounding_slack(value, big_n + 2 * max_m + 16)};
}

}  // namespace detail

// zeta(k) for integer k >= 2, with a rigorous error bound.
inline HighPrecisionValue zeta_value(std::uint64_t k) {
    if (k < 2) throw std::invalid_argument("zeta_value requires k >= 2");
    if (k >= 40) return detail::zeta_series(k);
    return detail::zeta_euler_maclaurin(k);
}

}  // namespace zsurj

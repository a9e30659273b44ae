#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "highprec.hpp"
#include "int_matrix.hpp"
#include "primes.hpp"
#include "zeta.hpp"

namespace zsurj {

// Finite abelian p-group written as a partition: group = (+) Z/p^{lambda_i}
// with lambda weakly decreasing. The empty partition is the trivial group.
struct FiniteAbelianPGroup {
    std::uint64_t p;
    std::vector<std::uint32_t> partition;

    FiniteAbelianPGroup(std::uint64_t prime, std::vector<std::uint32_t> lambda)
        : p(prime), partition(std::move(lambda)) {
        if (!is_prime_u64(p)) throw std::invalid_argument("group base must be prime");
        for (std::size_t i = 0; i < partition.size(); ++i) {
            if (partition[i] < 1) throw std::invalid_argument("partition entries must be >= 1");
            if (i > 0 && partition[i] > partition[i - 1]) {
                throw std::invalid_argument("partition must be weakly decreasing");
            }
        }
    }

    bool trivial() const { return partition.empty(); }

    Int order() const {
        std::uint64_t total = 0;
        for (auto e : partition) total += e;
        return boost::multiprecision::pow(Int(p), static_cast<unsigned>(total));
    }
};

// |Aut(G)| for an abelian p-group, by the standard partition formula: with
// exponents ascending e_1 <= ... <= e_n, d_k = max{l : e_l = e_k} and
// c_k = min{l : e_l = e_k},
//   |Aut| = prod_k (p^{d_k} - p^{k-1})
//         * prod_j p^{e_j (n - d_j)}
//         * prod_i p^{(e_i - 1)(n - c_i + 1)}.
inline Int aut_order(const FiniteAbelianPGroup& g) {
    const std::size_t n = g.partition.size();
    if (n == 0) return Int(1);

    std::vector<std::uint32_t> e(g.partition.rbegin(), g.partition.rend());
    const Int p(g.p);

    Int result(1);
    for (std::size_t k = 1; k <= n; ++k) {
        std::size_t d = k;
        while (d < n && e[d] == e[k - 1]) ++d;
        std::size_t c = k;
        while (c > 1 && e[c - 2] == e[k - 1]) --c;

        using boost::multiprecision::pow;
        result *= pow(p, static_cast<unsigned>(d)) - pow(p, static_cast<unsigned>(k - 1));
        result *= pow(p, static_cast<unsigned>(e[k - 1] * (n - d)));
        result *= pow(p, static_cast<unsigned>((e[k - 1] - 1) * (n - c + 1)));
    }
    return result;
}

// Probability that a uniform n x m matrix over Z_p (equivalently F_p) has
// full row rank: prod_{k=m+1-n}^{m} (1 - p^{-k}), exact.
inline Rational padic_surjectivity_probability(std::uint64_t n, std::uint64_t m,
                                               std::uint64_t p) {
    if (!is_prime_u64(p)) throw std::invalid_argument("p must be prime");
    if (n == 0) return Rational(1);
    if (m < n) throw std::invalid_argument("need m >= n");

    Rational result(1);
    for (std::uint64_t k = m + 1 - n; k <= m; ++k) {
        Int pk = boost::multiprecision::pow(Int(p), static_cast<unsigned>(k));
        result *= Rational(pk - 1, pk);
    }
    return result;
}

namespace detail {

// Factors kept when an infinite product over k is cut off.
inline constexpr unsigned product_truncation = 200;

}  // namespace detail

// prod_{k=u+1}^{inf} zeta(k)^{-1}. The tail past the truncation point
// contributes a factor in [1 - 2^{1-K}, 1] since zeta(k) - 1 < 2^{1-k}
// summed over k > K; that width goes into the error bound. u = 0 gives
// exact 0 (the k = 1 factor vanishes: prod_p (1 - 1/p) = 0).
inline HighPrecisionValue zeta_product_limit(std::uint64_t u) {
    if (u == 0) return {Real(0), Real(0)};

    HighPrecisionValue acc = hp_exact(Real(1));
    const std::uint64_t last = u + detail::product_truncation;
    for (std::uint64_t k = u + 1; k <= last; ++k) {
        acc = hp_mul(acc, hp_inv(zeta_value(k)));
    }
    Real tail = abs(acc.value) / pow(Real(2), static_cast<unsigned>(last - 1));
    acc.error_bound += tail;
    return acc;
}

// prod_{k=u+1}^{n+u} zeta(k)^{-1}: probability that a random n x (n+u)
// profinite-integer matrix is surjective. u = 0 gives exact 0.
inline HighPrecisionValue finite_n_zhat_probability(std::uint64_t n, std::uint64_t u) {
    if (n == 0) throw std::invalid_argument("need n >= 1");
    if (u == 0) return {Real(0), Real(0)};

    HighPrecisionValue acc = hp_exact(Real(1));
    for (std::uint64_t k = u + 1; k <= n + u; ++k) {
        acc = hp_mul(acc, hp_inv(zeta_value(k)));
    }
    return acc;
}

// Limiting mass of a cokernel class: for G given by its Sylow decomposition
// (one partition per distinct prime) and a prime support set P containing
// every prime of G,
//   mass = 1 / (|G|^u |Aut G|) * prod_{p in P} prod_{k=1}^{inf} (1 - p^{-k-u}).
inline HighPrecisionValue wood_mass(const std::vector<FiniteAbelianPGroup>& sylow,
                                    std::uint64_t u,
                                    const std::set<std::uint64_t>& prime_support) {
    std::set<std::uint64_t> seen;
    Int denom(1);
    for (const auto& g : sylow) {
        if (!seen.insert(g.p).second) {
            throw std::invalid_argument("sylow parts must use distinct primes");
        }
        if (g.trivial()) continue;
        if (prime_support.count(g.p) == 0) {
            throw std::invalid_argument("group prime missing from support set");
        }
        denom *= boost::multiprecision::pow(g.order(), static_cast<unsigned>(u));
        denom *= aut_order(g);
    }

    HighPrecisionValue acc{1 / Real(denom), detail::rounding_slack(1 / Real(denom))};
    for (std::uint64_t p : prime_support) {
        if (!is_prime_u64(p)) throw std::invalid_argument("support set entries must be prime");
        Real value(1);
        for (unsigned k = 1; k <= detail::product_truncation; ++k) {
            value *= 1 - 1 / pow(Real(p), static_cast<unsigned>(k + u));
        }
        // remaining factors lie in [1 - p^{-K-u}/(p-1), 1]
        Real tail = value / (pow(Real(p), static_cast<unsigned>(detail::product_truncation + u)) *
                             Real(p - 1));
        acc = hp_mul(acc, {value, tail + detail::rounding_slack(value, detail::product_truncation)});
    }
    return acc;
}

}  // namespace zsurj

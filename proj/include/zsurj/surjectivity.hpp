#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "zsurj/determinant.hpp"
#include "zsurj/factorize.hpp"
#include "zsurj/int_matrix.hpp"
#include "zsurj/mod_p.hpp"
#include "zsurj/rng.hpp"
#include "zsurj/smith.hpp"

namespace zsurj {

// Surjectivity of A : Z^cols -> Z^rows. A is surjective iff A mod p has
// full rank at every prime p; equivalently, iff the Smith form has full
// rank with all invariant factors equal to 1.

enum class VerdictMethod { snf, fast_path };

struct SurjectivityVerdict {
    bool surjective = false;
    VerdictMethod method = VerdictMethod::snf;

    // Witness for a negative verdict: a prime where the rank drops, and/or
    // the nontrivial invariant factors plus free rank.
    std::optional<std::uint64_t> witness_prime;
    std::vector<Int> witness_invariant_factors;
    std::size_t free_rank = 0;

    // Witness for a fast-path positive verdict: the square submatrix, its
    // determinant, and the full-rank confirmation at each prime divisor.
    std::vector<std::size_t> chosen_columns;
    Int det_b = 0;
    std::vector<std::pair<std::uint64_t, std::size_t>> prime_rank_checks;
};

struct CokernelDescription {
    std::vector<Int> torsion;  // invariant factors > 1, divisibility chain
    std::size_t free_rank = 0;

    bool trivial() const { return torsion.empty() && free_rank == 0; }

    // Partition of p-exponents of the torsion factors, weakly decreasing,
    // zeros discarded: the Sylow p-part is  sum_i Z/p^{lambda_i}.
    std::vector<std::uint32_t> sylow(std::uint64_t p) const {
        std::vector<std::uint32_t> partition;
        for (const Int& d : torsion) {
            std::uint32_t e = 0;
            Int v = d;
            while (v % p == 0) {
                v /= p;
                ++e;
            }
            if (e > 0) partition.push_back(e);
        }
        std::sort(partition.rbegin(), partition.rend());
        return partition;
    }
};

namespace detail {

// Some prime divisor of d, by bounded effort; nullopt if d resists the
// budget or its least accessible prime exceeds a machine word.
inline std::optional<std::uint64_t> small_prime_divisor(const Int& d) {
    auto primes = cached_primes(100'000);
    Int v = d;
    for (std::uint64_t p : *primes) {
        if (v % p == 0) return p;
        if (Int(p) * p > v) break;
    }
    if (is_probable_prime(v) && v < (Int(1) << 63)) return v.convert_to<std::uint64_t>();
    std::uint64_t budget = 200'000;
    Int f = pollard_rho_brent(v, budget);
    while (f != 0 && !is_probable_prime(f)) {
        Int g = pollard_rho_brent(f, budget);
        if (g == 0) break;
        f = std::min(g, Int(f / g));
    }
    if (f != 0 && is_probable_prime(f) && f < (Int(1) << 63)) return f.convert_to<std::uint64_t>();
    return std::nullopt;
}

}  // namespace detail

inline CokernelDescription cokernel(const IntMatrix& a) {
    SmithForm snf = smith_normal_form(a);
    CokernelDescription d;
    d.free_rank = a.rows() - snf.rank;
    for (const Int& f : snf.invariant_factors)
        if (f > 1) d.torsion.push_back(f);
    return d;
}

// Ground-truth decision through the Smith form.
inline SurjectivityVerdict is_surjective_snf(const IntMatrix& a) {
    SmithForm snf = smith_normal_form(a);
    SurjectivityVerdict v;
    v.method = VerdictMethod::snf;
    v.free_rank = a.rows() - snf.rank;
    for (const Int& f : snf.invariant_factors)
        if (f > 1) v.witness_invariant_factors.push_back(f);
    v.surjective = v.free_rank == 0 && v.witness_invariant_factors.empty();
    if (!v.surjective && v.free_rank == 0)
        v.witness_prime = detail::small_prime_divisor(v.witness_invariant_factors.front());
    return v;
}

struct FastPathOptions {
    FactorizeOptions factor{};
    unsigned column_retries = 8;  // random submatrix attempts after the leading columns
    std::uint64_t seed = 0;       // drives the random column subsets
};

// Fast decision: pick a nonsingular square submatrix B, factor det(B), and
// confirm full rank of the whole matrix at each prime divisor. Falls back
// to the Smith form (method = snf) when no B is found, the factorization
// budget runs out, or a prime divisor exceeds a machine word.
inline SurjectivityVerdict is_surjective_fast(const IntMatrix& a, const FastPathOptions& options = {}) {
    const std::size_t n = a.rows(), m = a.cols();
    if (m < n) return is_surjective_snf(a);

    std::vector<std::size_t> columns(n);
    Int det_b = 0;
    bool have_b = false;
    EntryStream retry_stream(mix64(options.seed ^ 0x7A5C3B1FD9E80642ull));
    for (unsigned attempt = 0; attempt <= options.column_retries && !have_b; ++attempt) {
        if (attempt == 0) {
            for (std::size_t j = 0; j < n; ++j) columns[j] = j;
        } else {
            // Uniform n-subset by partial Fisher-Yates, kept in sorted order.
            std::vector<std::size_t> pool(m);
            for (std::size_t j = 0; j < m; ++j) pool[j] = j;
            for (std::size_t j = 0; j < n; ++j)
                std::swap(pool[j], pool[j + retry_stream.uniform_below_u64(m - j)]);
            columns.assign(pool.begin(), pool.begin() + n);
            std::sort(columns.begin(), columns.end());
        }
        det_b = determinant(a.select_columns(columns));
        have_b = det_b != 0;
    }
    if (!have_b) return is_surjective_snf(a);

    SurjectivityVerdict v;
    v.method = VerdictMethod::fast_path;
    v.chosen_columns = columns;
    v.det_b = det_b;
    if (det_b == 1 || det_b == -1) {
        // B itself is surjective at every prime; no checks needed.
        v.surjective = true;
        return v;
    }

    PrimeFactorization pf;
    try {
        pf = factorize(abs(det_b), options.factor);
    } catch (const FactorizationIncomplete&) {
        return is_surjective_snf(a);
    }
    for (const auto& [prime, exponent] : pf.factors) {
        (void)exponent;
        if (prime >= (Int(1) << 63)) return is_surjective_snf(a);
        std::uint64_t p = prime.convert_to<std::uint64_t>();
        std::size_t r = rank_mod_p(a, p);
        v.prime_rank_checks.emplace_back(p, r);
        if (r < n) {
            v.surjective = false;
            v.witness_prime = p;
            return v;
        }
    }
    v.surjective = true;
    return v;
}

}  // namespace zsurj

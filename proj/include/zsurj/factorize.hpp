#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "zsurj/int_matrix.hpp"
#include "zsurj/primes.hpp"

namespace zsurj {

// Complete factorization: product of prime^exponent equals value.
struct PrimeFactorization {
    Int value = 1;
    std::vector<std::pair<Int, unsigned>> factors;  // sorted by prime
};

struct FactorizeOptions {
    std::uint64_t trial_division_bound = 1'000'000;
    std::uint64_t rho_iteration_cap = 10'000'000;  // per composite
    std::uint64_t max_composite_bits = 4096;       // widest cofactor worth attacking; 0 lifts the cap
};

// Raised when the effort budget runs out. Carries everything factored so
// far plus the composite cofactor that remains, so callers can fall back
// instead of trusting a silently partial answer.
class FactorizationIncomplete : public std::runtime_error {
public:
    FactorizationIncomplete(Int cofactor, std::vector<std::pair<Int, unsigned>> partial)
        : std::runtime_error("factorization incomplete: effort budget exceeded"),
          cofactor_(std::move(cofactor)),
          partial_(std::move(partial)) {}

    const Int& unfactored_cofactor() const { return cofactor_; }
    const std::vector<std::pair<Int, unsigned>>& partial_factors() const { return partial_; }

private:
    Int cofactor_;
    std::vector<std::pair<Int, unsigned>> partial_;
};

// Miller-Rabin with the first 40 primes as bases. Exact below 2^64;
// beyond that no composite is known to pass this base set.
inline bool is_probable_prime(const Int& n) {
    if (n < (Int(1) << 64)) return is_prime_u64(n.convert_to<std::uint64_t>());
    if ((n & 1) == 0) return false;
    Int d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    static const std::vector<std::uint64_t> bases = first_n_primes(40);
    for (std::uint64_t a : bases) {
        Int x = boost::multiprecision::powm(Int(a), d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = (x * x) % n;
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace detail {

inline std::shared_ptr<const std::vector<std::uint64_t>> cached_primes(std::uint64_t bound) {
    static std::mutex mu;
    static std::map<std::uint64_t, std::shared_ptr<const std::vector<std::uint64_t>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(bound);
    if (it != cache.end()) return it->second;
    auto primes = std::make_shared<const std::vector<std::uint64_t>>(sieve_primes(bound));
    cache.emplace(bound, primes);
    return primes;
}

// Brent's cycle variant of Pollard rho with batched gcds. Returns a
// nontrivial factor, or 0 once `budget` f-evaluations are spent.
inline Int pollard_rho_brent(const Int& n, std::uint64_t& budget) {
    if ((n & 1) == 0) return 2;
    auto f = [&](const Int& x, const Int& c) { return (x * x + c) % n; };
    for (Int c = 1; c < 64; ++c) {
        Int y = 2, g = 1, q = 1, x = 0, ys = 0;
        std::uint64_t r = 1;
        while (g == 1) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i) {
                if (budget == 0) return 0;
                --budget;
                y = f(y, c);
            }
            std::uint64_t k = 0;
            while (k < r && g == 1) {
                ys = y;
                std::uint64_t lim = std::min<std::uint64_t>(128, r - k);
                for (std::uint64_t i = 0; i < lim; ++i) {
                    if (budget == 0) return 0;
                    --budget;
                    y = f(y, c);
                    q = (q * abs(x - y)) % n;
                }
                g = gcd(q, n);
                k += lim;
            }
            r *= 2;
        }
        if (g == n) {
            do {
                if (budget == 0) return 0;
                --budget;
                ys = f(ys, c);
                g = gcd(abs(x - ys), n);
            } while (g == 1);
        }
        if (g != n) return g;
        // cycle collapsed for this c; try the next increment
    }
    return 0;
}

}  // namespace detail

// Complete factorization of v >= 1: trial division over a sieved prime
// table, then Miller-Rabin plus Pollard rho on what remains. Throws
// FactorizationIncomplete when the rho budget runs out or a composite
// cofactor is wider than max_composite_bits.
inline PrimeFactorization factorize(const Int& v, const FactorizeOptions& options = {}) {
    if (v < 1) throw std::invalid_argument("factorize: argument must be >= 1");
    std::map<Int, unsigned> found;
    Int remaining = v;
    if (remaining > 1) {
        auto primes = detail::cached_primes(options.trial_division_bound);
        for (std::uint64_t p : *primes) {
            if (Int(p) * p > remaining) break;
            while (remaining % p == 0) {
                remaining /= p;
                ++found[p];
            }
            if (remaining == 1) break;
        }
    }
    std::vector<Int> pending;
    if (remaining > 1) {
        // Below the square of the trial bound anything left is prime.
        if (remaining < Int(options.trial_division_bound) * options.trial_division_bound)
            ++found[remaining];
        else
            pending.push_back(remaining);
    }
    auto out_of_budget = [&](Int c) {
        for (const Int& other : pending) c *= other;
        std::vector<std::pair<Int, unsigned>> partial(found.begin(), found.end());
        return FactorizationIncomplete(std::move(c), std::move(partial));
    };
    while (!pending.empty()) {
        Int c = pending.back();
        pending.pop_back();
        // The iteration cap alone does not bound wall time: every rho step
        // and Miller-Rabin squaring costs quadratic work in the operand
        // width, so a cofactor tens of thousands of bits wide would grind
        // for hours before the cap fired. Too-wide cofactors are out of
        // budget by definition.
        if (options.max_composite_bits != 0 &&
            boost::multiprecision::msb(c) + 1 > options.max_composite_bits)
            throw out_of_budget(std::move(c));
        if (is_probable_prime(c)) {
            ++found[c];
            continue;
        }
        std::uint64_t budget = options.rho_iteration_cap;
        Int f = detail::pollard_rho_brent(c, budget);
        if (f == 0) throw out_of_budget(std::move(c));
        pending.push_back(f);
        pending.push_back(c / f);
    }
    PrimeFactorization result;
    result.value = v;
    result.factors.assign(found.begin(), found.end());
    return result;
}

}  // namespace zsurj

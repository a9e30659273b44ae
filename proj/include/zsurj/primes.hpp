#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace zsurj {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod_u64(result, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return result;
}

// Deterministic Miller-Rabin for 64-bit inputs; the witness set below is
// known to be exact for all n < 2^64.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// All primes <= bound, by sieve of Eratosthenes.
inline std::vector<std::uint64_t> sieve_primes(std::uint64_t bound) {
    std::vector<std::uint64_t> primes;
    if (bound < 2) return primes;
    std::vector<bool> composite(bound + 1, false);
    for (std::uint64_t i = 2; i <= bound; ++i) {
        if (composite[i]) continue;
        primes.push_back(i);
        for (std::uint64_t j = i * i; j <= bound; j += i) composite[j] = true;
    }
    return primes;
}

// First `count` primes. Sieve bound from the Rosser-Schoenfeld upper bound
// p_k < k(ln k + ln ln k) for k >= 6, with a retry in case of slack.
inline std::vector<std::uint64_t> first_n_primes(std::size_t count) {
    if (count == 0) return {};
    std::uint64_t bound = 15;
    if (count >= 6) {
        double k = static_cast<double>(count);
        bound = static_cast<std::uint64_t>(k * (std::log(k) + std::log(std::log(k)))) + 16;
    }
    for (;;) {
        std::vector<std::uint64_t> primes = sieve_primes(bound);
        if (primes.size() >= count) {
            primes.resize(count);
            return primes;
        }
        bound = bound * 2;
    }
}

}  // namespace zsurj

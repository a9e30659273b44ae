#pragma once

// Independent reference implementations used only by the tests. These favor
// brute force over cleverness on purpose: they must fail differently from
// the library when the library is wrong.

#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "zsurj/highprec.hpp"
#include "zsurj/int_matrix.hpp"
#include "zsurj/mod_p.hpp"

namespace oracle {

using zsurj::Int;
using zsurj::IntMatrix;
using zsurj::Rational;
using zsurj::Real;

// Determinant by cofactor expansion along the first row. Exponential;
// keep n <= 8.
inline Int cofactor_determinant(const IntMatrix& a) {
    const std::size_t n = a.rows();
    if (n == 1) return a.at(0, 0);
    Int det = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (a.at(0, j) == 0) continue;
        IntMatrix minor(n - 1, n - 1);
        for (std::size_t r = 1; r < n; ++r) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                minor.at(r - 1, cc++) = a.at(r, c);
            }
        }
        Int term = a.at(0, j) * cofactor_determinant(minor);
        det += (j % 2 == 0) ? term : -term;
    }
    return det;
}

// Invariant factors via the minor-gcd formula: d_k = g_k / g_{k-1} with
// g_k the gcd of all k x k minors (g_0 = 1). Exponential in minors; keep
// min(rows, cols) <= 4.
inline std::vector<Int> minor_gcd_invariant_factors(const IntMatrix& a) {
    using boost::multiprecision::gcd;
    const std::size_t r = a.rows(), c = a.cols();
    const std::size_t kmax = r < c ? r : c;

    auto subsets = [](std::size_t total, std::size_t pick) {
        std::vector<std::vector<std::size_t>> out;
        std::vector<std::size_t> idx(pick);
        std::iota(idx.begin(), idx.end(), 0);
        for (;;) {
            out.push_back(idx);
            std::size_t i = pick;
            while (i > 0 && idx[i - 1] == total - pick + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < pick; ++j) idx[j] = idx[j - 1] + 1;
        }
        return out;
    };

    std::vector<Int> gcds;  // g_1 .. g_k while nonzero
    for (std::size_t k = 1; k <= kmax; ++k) {
        Int g = 0;
        for (const auto& rows : subsets(r, k)) {
            for (const auto& cols : subsets(c, k)) {
                IntMatrix sub(k, k);
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t j = 0; j < k; ++j) sub.at(i, j) = a.at(rows[i], cols[j]);
                g = gcd(g, cofactor_determinant(sub));
            }
        }
        if (g == 0) break;
        gcds.push_back(g);
    }
    std::vector<Int> factors;
    Int prev = 1;
    for (const auto& g : gcds) {
        factors.push_back(g / prev);
        prev = g;
    }
    return factors;
}

// Rank over F_p by enumerating the row span; the span of a rank-r set has
// exactly p^r elements. Keep p^(rank) * rows tiny.
inline std::size_t span_rank_mod_p(const IntMatrix& a, std::uint64_t p) {
    std::set<std::vector<std::uint64_t>> span;
    std::vector<std::vector<std::uint64_t>> rows;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        std::vector<std::uint64_t> row(a.cols());
        for (std::size_t j = 0; j < a.cols(); ++j) row[j] = zsurj::mod_reduce(a.at(i, j), p);
        rows.push_back(row);
    }
    span.insert(std::vector<std::uint64_t>(a.cols(), 0));
    // closure under adding multiples of each row
    for (const auto& row : rows) {
        std::set<std::vector<std::uint64_t>> grown;
        for (const auto& v : span) {
            for (std::uint64_t c = 0; c < p; ++c) {
                std::vector<std::uint64_t> w(v);
                for (std::size_t j = 0; j < w.size(); ++j) w[j] = (w[j] + c * row[j]) % p;
                grown.insert(std::move(w));
            }
        }
        span = std::move(grown);
    }
    std::size_t rank = 0;
    std::size_t size = span.size();
    while (size > 1) {
        size /= p;
        ++rank;
    }
    return rank;
}

// |Aut(G)| for G = (+) Z/p^{lambda_i} by enumerating candidate endomorphisms
// (images of the generators) and counting the bijective homomorphisms.
// Keep |G|^parts small.
inline std::uint64_t brute_force_aut_order(std::uint64_t p,
                                           const std::vector<std::uint32_t>& partition) {
    const std::size_t k = partition.size();
    if (k == 0) return 1;
    std::vector<std::uint64_t> mod(k);
    std::uint64_t order = 1;
    for (std::size_t i = 0; i < k; ++i) {
        mod[i] = 1;
        for (std::uint32_t e = 0; e < partition[i]; ++e) mod[i] *= p;
        order *= mod[i];
    }

    // elements as mixed-radix tuples
    auto element = [&](std::uint64_t code) {
        std::vector<std::uint64_t> x(k);
        for (std::size_t i = 0; i < k; ++i) {
            x[i] = code % mod[i];
            code /= mod[i];
        }
        return x;
    };
    auto encode = [&](const std::vector<std::uint64_t>& x) {
        std::uint64_t code = 0;
        for (std::size_t i = k; i-- > 0;) code = code * mod[i] + x[i];
        return code;
    };

    std::uint64_t count = 0;
    std::vector<std::uint64_t> images(k);
    // candidate images for all k generators: order^k combinations
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= order;
    for (std::uint64_t cand = 0; cand < total; ++cand) {
        std::uint64_t c = cand;
        bool valid = true;
        for (std::size_t i = 0; i < k && valid; ++i) {
            images[i] = c % order;
            c /= order;
            // generator i has order mod[i]; its image must be killed by it
            auto img = element(images[i]);
            for (std::size_t j = 0; j < k; ++j) {
                if ((img[j] * mod[i]) % mod[j] != 0) {
                    valid = false;
                    break;
                }
            }
        }
        if (!valid) continue;
        // the map x -> sum x_i * image_i is then a homomorphism; check bijectivity
        std::set<std::uint64_t> hit;
        for (std::uint64_t code = 0; code < order; ++code) {
            auto x = element(code);
            std::vector<std::uint64_t> y(k, 0);
            for (std::size_t i = 0; i < k; ++i) {
                auto img = element(images[i]);
                for (std::size_t j = 0; j < k; ++j) y[j] = (y[j] + x[i] * img[j]) % mod[j];
            }
            hit.insert(encode(y));
        }
        if (hit.size() == order) ++count;
    }
    return count;
}

// Plain Dirichlet series with integral tail bracket; midpoint estimate with
// a half-width certificate. Accurate to ~N^-k, so only useful for k not
// too small or as a loose bracket.
struct BracketedValue {
    Real mid;
    Real half_width;
};

inline BracketedValue zeta_series_bracket(std::uint64_t k, unsigned terms) {
    Real sum = 0;
    for (unsigned j = 1; j <= terms; ++j) sum += 1 / pow(Real(j), static_cast<unsigned>(k));
    // integral bracket for the tail: int_{N+1}..inf <= tail <= int_N..inf
    Real hi_tail = 1 / (pow(Real(terms), static_cast<unsigned>(k - 1)) * Real(k - 1));
    Real lo_tail = 1 / (pow(Real(terms + 1), static_cast<unsigned>(k - 1)) * Real(k - 1));
    return {sum + (hi_tail + lo_tail) / 2, (hi_tail - lo_tail) / 2 + Real("1e-45")};
}

// Exhaustive count of full-row-rank n x m matrices over F_p; all p^(nm)
// matrices are enumerated. Keep p^(nm) <= ~2*10^4.
inline Rational exhaustive_full_rank_fraction(std::size_t n, std::size_t m, std::uint64_t p) {
    Int total = 1;
    for (std::size_t i = 0; i < n * m; ++i) total *= p;
    std::uint64_t cells = static_cast<std::uint64_t>(total);
    std::uint64_t full = 0;
    IntMatrix a(n, m);
    for (std::uint64_t code = 0; code < cells; ++code) {
        std::uint64_t c = code;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                a.at(i, j) = Int(c % p);
                c /= p;
            }
        if (zsurj::rank_mod_p(a, p) == n) ++full;
    }
    return Rational(Int(full), total);
}

}  // namespace oracle

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "zsurj/int_matrix.hpp"
#include "zsurj/primes.hpp"

namespace zsurj {

// Mathematically correct residue in [0, p): -1 mod 5 is 4.
inline std::uint64_t mod_reduce(const Int& v, std::uint64_t p) {
    Int r = v % p;
    if (r < 0) r += p;
    return r.convert_to<std::uint64_t>();
}

// Entrywise reduction, row-major.
inline std::vector<std::uint64_t> reduce_mod_p(const IntMatrix& m, std::uint64_t p) {
    std::vector<std::uint64_t> out;
    out.reserve(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(mod_reduce(m.at(i, j), p));
    return out;
}

namespace detail {

// In-place Gaussian elimination over GF(p) on a row-major buffer;
// returns the rank. p must fit a machine word.
inline std::size_t rank_mod_p_buffer(std::vector<std::uint64_t>& a, std::size_t rows, std::size_t cols,
                                     std::uint64_t p) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && a[pivot * cols + col] == 0) ++pivot;
        if (pivot == rows) continue;
        if (pivot != rank)
            for (std::size_t j = col; j < cols; ++j) std::swap(a[pivot * cols + j], a[rank * cols + j]);
        std::uint64_t inv = powmod_u64(a[rank * cols + col], p - 2, p);
        for (std::size_t j = col; j < cols; ++j) a[rank * cols + j] = mulmod_u64(a[rank * cols + j], inv, p);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rank) continue;
            std::uint64_t f = a[i * cols + col];
            if (f == 0) continue;
            for (std::size_t j = col; j < cols; ++j) {
                std::uint64_t sub = mulmod_u64(f, a[rank * cols + j], p);
                std::uint64_t cur = a[i * cols + j];
                a[i * cols + j] = cur >= sub ? cur - sub : cur + p - sub;
            }
        }
        ++rank;
    }
    return rank;
}

}  // namespace detail

// Rank of m reduced entrywise mod p, by elimination over the field with p
// elements. p must be prime and fit a machine word.
inline std::size_t rank_mod_p(const IntMatrix& m, std::uint64_t p) {
    if (p < 2 || !is_prime_u64(p)) throw std::invalid_argument("rank_mod_p: p must be prime");
    std::vector<std::uint64_t> a = reduce_mod_p(m, p);
    return detail::rank_mod_p_buffer(a, m.rows(), m.cols(), p);
}

}  // namespace zsurj

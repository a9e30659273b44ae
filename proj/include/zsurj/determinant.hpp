#pragma once

#include <cstddef>
#include <stdexcept>

#include "zsurj/int_matrix.hpp"

namespace zsurj {

// Exact determinant by Bareiss fraction-free elimination. Each interior
// division is exact, and intermediate values are bounded by minors of the
// input, so entry growth stays polynomial in the input bit size.
inline Int determinant(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix must be square");
    const std::size_t n = m.rows();
    IntMatrix w = m;
    int sign = 1;
    Int prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (w.at(k, k) == 0) {
            std::size_t pivot = k;
            while (pivot < n && w.at(pivot, k) == 0) ++pivot;
            if (pivot == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(w.at(k, j), w.at(pivot, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                w.at(i, j) = (w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j)) / prev;
            }
            w.at(i, k) = 0;
        }
        prev = w.at(k, k);
    }
    return sign > 0 ? w.at(n - 1, n - 1) : Int(-w.at(n - 1, n - 1));
}

}  // namespace zsurj

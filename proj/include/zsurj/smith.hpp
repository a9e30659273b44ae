#pragma once

#include <cstddef>
#include <vector>

#include "zsurj/int_matrix.hpp"

namespace zsurj {

// Invariant factors d1 | d2 | ... | d_rank, all >= 1. Trailing zero
// diagonal entries (rank deficiency) are folded out, so
// rank == invariant_factors.size().
struct SmithForm {
    std::vector<Int> invariant_factors;
    std::size_t rank = 0;
};

// Unimodular row/column transforms with u * m * v = diag(invariant_factors).
struct SmithTransforms {
    IntMatrix u, v;
    SmithTransforms(std::size_t rows, std::size_t cols)
        : u(IntMatrix::identity(rows)), v(IntMatrix::identity(cols)) {}
};

namespace detail {

// Quotient rounded to nearest, so |a - q*b| <= |b|/2.
inline Int round_div(const Int& a, const Int& b) {
    Int q = a / b;
    Int r = a - q * b;
    if (2 * abs(r) > abs(b)) q += ((r < 0) != (b < 0)) ? -1 : 1;
    return q;
}

}  // namespace detail

// Smith normal form by elimination. Pivot is the least-absolute-value
// nonzero entry of the working submatrix; row/column reductions use
// nearest-integer quotients to keep intermediate entries near the pivot
// magnitude. Pass `transforms` to also accumulate U, V.
inline SmithForm smith_normal_form(const IntMatrix& m, SmithTransforms* transforms = nullptr) {
    const std::size_t rows = m.rows(), cols = m.cols();
    IntMatrix w = m;
    SmithTransforms local(1, 1);
    IntMatrix* u = nullptr;
    IntMatrix* v = nullptr;
    if (transforms) {
        *transforms = SmithTransforms(rows, cols);
        u = &transforms->u;
        v = &transforms->v;
    }

    auto swap_rows = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols; ++j) std::swap(w.at(a, j), w.at(b, j));
        if (u)
            for (std::size_t j = 0; j < rows; ++j) std::swap(u->at(a, j), u->at(b, j));
    };
    auto swap_cols = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows; ++i) std::swap(w.at(i, a), w.at(i, b));
        if (v)
            for (std::size_t i = 0; i < cols; ++i) std::swap(v->at(i, a), v->at(i, b));
    };
    auto row_sub = [&](std::size_t i, const Int& q, std::size_t t) {  // row_i -= q*row_t
        for (std::size_t j = 0; j < cols; ++j) w.at(i, j) -= q * w.at(t, j);
        if (u)
            for (std::size_t j = 0; j < rows; ++j) u->at(i, j) -= q * u->at(t, j);
    };
    auto col_sub = [&](std::size_t j, const Int& q, std::size_t t) {  // col_j -= q*col_t
        for (std::size_t i = 0; i < rows; ++i) w.at(i, j) -= q * w.at(i, t);
        if (v)
            for (std::size_t i = 0; i < cols; ++i) v->at(i, j) -= q * v->at(i, t);
    };

    std::vector<Int> factors;
    const std::size_t bound = rows < cols ? rows : cols;
    for (std::size_t t = 0; t < bound; ++t) {
        // Least-absolute-value nonzero pivot in the trailing submatrix.
        std::size_t pi = t, pj = t;
        bool found = false;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j) {
                const Int& e = w.at(i, j);
                if (e == 0) continue;
                if (!found || abs(e) < abs(w.at(pi, pj))) {
                    pi = i;
                    pj = j;
                    found = true;
                }
            }
        if (!found) break;
        swap_rows(t, pi);
        swap_cols(t, pj);

        // Clear row t and column t. A nonzero remainder is strictly smaller
        // than the pivot and swaps into its place, so this terminates.
        auto clear_pass = [&]() -> bool {
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (w.at(i, t) == 0) continue;
                row_sub(i, detail::round_div(w.at(i, t), w.at(t, t)), t);
                if (w.at(i, t) != 0) {
                    swap_rows(t, i);
                    return true;
                }
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (w.at(t, j) == 0) continue;
                col_sub(j, detail::round_div(w.at(t, j), w.at(t, t)), t);
                if (w.at(t, j) != 0) {
                    swap_cols(t, j);
                    return true;
                }
            }
            return false;
        };

        for (;;) {
            while (clear_pass()) {}
            // Pivot must divide the whole trailing submatrix for the
            // divisibility chain; fold a violating row into row t and redo.
            bool divisible = true;
            for (std::size_t i = t + 1; i < rows && divisible; ++i)
                for (std::size_t j = t + 1; j < cols; ++j) {
                    if (w.at(i, j) % w.at(t, t) != 0) {
                        row_sub(t, Int(-1), i);
                        divisible = false;
                        break;
                    }
                }
            if (divisible) break;
        }

        if (w.at(t, t) < 0) {
            for (std::size_t j = t; j < cols; ++j) w.at(t, j) = -w.at(t, j);
            if (u)
                for (std::size_t j = 0; j < rows; ++j) u->at(t, j) = -u->at(t, j);
        }
        factors.push_back(w.at(t, t));
    }

    SmithForm result;
    result.rank = factors.size();
    result.invariant_factors = std::move(factors);
    return result;
}

}  // namespace zsurj

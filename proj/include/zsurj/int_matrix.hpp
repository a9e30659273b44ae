#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace zsurj {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Dense row-major matrix of arbitrary-precision integers. Entries carry no
// magnitude cap; the adversarial generator routinely produces values far
// beyond machine words.
class IntMatrix {
public:
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(check_shape(rows, cols), Int(0)) {}

    IntMatrix(std::size_t rows, std::size_t cols, std::vector<Int> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (entries_.size() != check_shape(rows, cols))
            throw std::invalid_argument("IntMatrix: entry count does not match rows*cols");
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static IntMatrix diagonal(const std::vector<Int>& d) {
        IntMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
        return m;
    }

    // Row-by-row construction for literals in tests and docs.
    static IntMatrix from_rows(std::initializer_list<std::initializer_list<long long>> rows) {
        if (rows.size() == 0) throw std::invalid_argument("IntMatrix: no rows");
        std::size_t cols = rows.begin()->size();
        IntMatrix m(rows.size(), cols);
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != cols) throw std::invalid_argument("IntMatrix: ragged rows");
            std::size_t j = 0;
            for (long long v : row) m.at(i, j++) = v;
            ++i;
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& at(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    const std::vector<Int>& entries() const { return entries_; }

    IntMatrix operator*(const IntMatrix& rhs) const {
        if (cols_ != rhs.rows_) throw std::invalid_argument("IntMatrix: shape mismatch in product");
        IntMatrix out(rows_, rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Int& a = at(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < rhs.cols_; ++j) out.at(i, j) += a * rhs.at(k, j);
            }
        return out;
    }

    bool operator==(const IntMatrix& rhs) const {
        return rows_ == rhs.rows_ && cols_ == rhs.cols_ && entries_ == rhs.entries_;
    }

    IntMatrix select_columns(std::span<const std::size_t> columns) const {
        if (columns.empty()) throw std::invalid_argument("IntMatrix: empty column selection");
        IntMatrix out(rows_, columns.size());
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (columns[j] >= cols_) throw std::invalid_argument("IntMatrix: column index out of range");
            for (std::size_t i = 0; i < rows_; ++i) out.at(i, j) = at(i, columns[j]);
        }
        return out;
    }

    // [this | rhs], used for augmented-matrix constructions.
    IntMatrix append_columns(const IntMatrix& rhs) const {
        if (rows_ != rhs.rows_) throw std::invalid_argument("IntMatrix: row mismatch in append");
        IntMatrix out(rows_, cols_ + rhs.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) out.at(i, j) = at(i, j);
            for (std::size_t j = 0; j < rhs.cols_; ++j) out.at(i, cols_ + j) = rhs.at(i, j);
        }
        return out;
    }

private:
    static std::size_t check_shape(std::size_t rows, std::size_t cols) {
        if (rows == 0 || cols == 0) throw std::invalid_argument("IntMatrix: rows and cols must be positive");
        return rows * cols;
    }

    std::size_t rows_, cols_;
    std::vector<Int> entries_;
};

}  // namespace zsurj

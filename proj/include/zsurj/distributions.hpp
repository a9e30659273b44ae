#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "zsurj/errors.hpp"
#include "zsurj/int_matrix.hpp"
#include "zsurj/mod_p.hpp"
#include "zsurj/primes.hpp"
#include "zsurj/rng.hpp"

namespace zsurj {

// Random-entry laws. Entries of a sampled matrix are i.i.d. under the
// chosen law; every draw is a pure function of (master_seed, trial_index,
// entry_index), so resampling is bit-identical across runs and threads.
class MatrixDistribution {
public:
    enum class Kind { bernoulli, uniform_range, signed_unit, adversarial, truncated_haar };

    // Entry is 1 with probability q, else 0.
    static MatrixDistribution bernoulli(double q) {
        if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("bernoulli: q must lie in (0, 1)");
        MatrixDistribution d(Kind::bernoulli);
        d.q_ = q;
        long double scaled = static_cast<long double>(q) * 18446744073709551616.0L;
        d.bernoulli_threshold_ = scaled >= 18446744073709551615.0L
                                     ? ~0ull
                                     : static_cast<std::uint64_t>(scaled);
        return d;
    }

    // Entry uniform on {-k, ..., k}.
    static MatrixDistribution uniform_range(std::uint64_t k) {
        if (k < 1 || k > (1ull << 62)) throw std::invalid_argument("uniform_range: k must be in [1, 2^62]");
        MatrixDistribution d(Kind::uniform_range);
        d.range_bound_ = k;
        return d;
    }

    // Entry is +1 or -1, each with probability 1/2.
    static MatrixDistribution signed_unit() { return MatrixDistribution(Kind::signed_unit); }

    // Entry is the product of a uniformly random subset of the first
    // 2^{nm} * n primes (each prime kept independently with probability
    // 1/2). The shape is part of the law.
    static MatrixDistribution adversarial(std::uint32_t n, std::uint32_t m) {
        if (n < 1 || m < 1) throw std::invalid_argument("adversarial: shape must be positive");
        if (static_cast<std::uint64_t>(n) * m > 16)
            throw ResourceError("adversarial: n*m too large for prime enumeration (need n*m <= 16)");
        std::uint64_t count = (1ull << (static_cast<std::uint64_t>(n) * m)) * n;
        if (count > 400'000)
            throw ResourceError("adversarial: prime set of size " + std::to_string(count) +
                                " exceeds the enumeration limit");
        MatrixDistribution d(Kind::adversarial);
        d.adv_rows_ = n;
        d.adv_cols_ = m;
        d.adv_primes_ = std::make_shared<const std::vector<std::uint64_t>>(
            first_n_primes(static_cast<std::size_t>(count)));
        return d;
    }

    // Entry uniform on Z/p^L, representing a Haar-uniform p-adic integer
    // truncated at precision L.
    static MatrixDistribution truncated_haar(std::uint64_t p, std::uint32_t precision) {
        if (!is_prime_u64(p) || p >= (1ull << 63))
            throw std::invalid_argument("truncated_haar: p must be a machine-word prime");
        if (precision < 1 || precision > 64)
            throw std::invalid_argument("truncated_haar: precision must be in [1, 64]");
        MatrixDistribution d(Kind::truncated_haar);
        d.haar_p_ = p;
        d.haar_precision_ = precision;
        Int modulus = 1;
        for (std::uint32_t i = 0; i < precision; ++i) modulus *= p;
        d.haar_modulus_ = modulus;
        return d;
    }

    Kind kind() const { return kind_; }
    double bernoulli_q() const { return q_; }
    std::uint64_t range_bound() const { return range_bound_; }
    std::uint32_t adversarial_rows() const { return adv_rows_; }
    std::uint32_t adversarial_cols() const { return adv_cols_; }
    const std::vector<std::uint64_t>& adversarial_primes() const { return *adv_primes_; }
    std::uint64_t haar_p() const { return haar_p_; }
    std::uint32_t haar_precision() const { return haar_precision_; }
    const Int& haar_modulus() const { return haar_modulus_; }

    Int draw(EntryStream& stream) const {
        switch (kind_) {
            case Kind::bernoulli:
                return stream.next_word() < bernoulli_threshold_ ? 1 : 0;
            case Kind::uniform_range:
                return Int(stream.uniform_below_u64(2 * range_bound_ + 1)) - range_bound_;
            case Kind::signed_unit:
                return stream.next_bit() ? 1 : -1;
            case Kind::truncated_haar:
                return stream.uniform_below(haar_modulus_);
            case Kind::adversarial: {
                Int value = 1;
                for (std::uint64_t p : *adv_primes_)
                    if (stream.next_bit()) value *= p;
                return value;
            }
        }
        throw std::logic_error("unreachable");
    }

    std::string describe() const {
        std::ostringstream out;
        switch (kind_) {
            case Kind::bernoulli:
                out << "bernoulli(q=" << q_ << ")";
                break;
            case Kind::uniform_range:
                out << "uniform(k=" << range_bound_ << ")";
                break;
            case Kind::signed_unit:
                out << "signed";
                break;
            case Kind::adversarial:
                out << "adversarial(n=" << adv_rows_ << ",m=" << adv_cols_ << ")";
                break;
            case Kind::truncated_haar:
                out << "haar(p=" << haar_p_ << ",L=" << haar_precision_ << ")";
                break;
        }
        return out.str();
    }

private:
    explicit MatrixDistribution(Kind kind) : kind_(kind) {}

    Kind kind_;
    double q_ = 0.0;
    std::uint64_t bernoulli_threshold_ = 0;
    std::uint64_t range_bound_ = 0;
    std::uint32_t adv_rows_ = 0, adv_cols_ = 0;
    std::shared_ptr<const std::vector<std::uint64_t>> adv_primes_;
    std::uint64_t haar_p_ = 0;
    std::uint32_t haar_precision_ = 0;
    Int haar_modulus_ = 0;
};

// One matrix draw. Deterministic in (source.master_seed, trial_index).
inline IntMatrix sample(const MatrixDistribution& dist, std::size_t rows, std::size_t cols,
                        const SeededSource& source, std::uint64_t trial_index) {
    if (dist.kind() == MatrixDistribution::Kind::adversarial &&
        (rows != dist.adversarial_rows() || cols != dist.adversarial_cols()))
        throw std::invalid_argument("sample: adversarial law is tied to its declared shape");
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            EntryStream stream = source.entry_stream(trial_index, i * cols + j);
            m.at(i, j) = dist.draw(stream);
        }
    return m;
}

inline IntMatrix sample_adversarial(std::uint32_t n, std::uint32_t m, const SeededSource& source,
                                    std::uint64_t trial_index) {
    return sample(MatrixDistribution::adversarial(n, m), n, m, source, trial_index);
}

// Maximum over residues r in {0..p-1} of the empirical frequency of scalar
// draws congruent to r mod p. The law is epsilon-balanced at p with
// epsilon = 1 - (returned value), empirically.
inline double validate_balance(const MatrixDistribution& dist, std::uint64_t p, std::uint64_t samples,
                               const SeededSource& source) {
    if (!is_prime_u64(p)) throw std::invalid_argument("validate_balance: p must be prime");
    if (samples < 1000) throw std::invalid_argument("validate_balance: need at least 1000 samples");
    std::map<std::uint64_t, std::uint64_t> counts;
    for (std::uint64_t i = 0; i < samples; ++i) {
        EntryStream stream = source.entry_stream(i, 0);
        ++counts[mod_reduce(dist.draw(stream), p)];
    }
    std::uint64_t max_count = 0;
    for (const auto& [residue, count] : counts) {
        (void)residue;
        if (count > max_count) max_count = count;
    }
    return static_cast<double>(max_count) / static_cast<double>(samples);
}

}  // namespace zsurj

#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace zsurj {

// Counter-based splittable generator in the SplitMix64 family
// (Steele/Lea/Flood 2014; finalizer by Vigna, public domain reference at
// https://prng.di.unimi.it/splitmix64.c). Every drawn word is a pure
// function of (master_seed, trial_index, entry_index, counter), so samples
// are reproducible at any thread count.
//
// Stream derivation rule (stable across versions):
//   stream_key(master, trial) = mix64(mix64(master ^ 0x5851F42D4C957F2D) + trial * GAMMA)
//   entry_key(stream, entry)  = mix64(stream_key + (entry + 1) * 0xD1342543DE82EF95)
//   word(entry_key, i)        = mix64(entry_key + (i + 1) * GAMMA)      i = 0, 1, ...
// with GAMMA = 0x9E3779B97F4A7C15 and mix64 the SplitMix64 finalizer.

inline constexpr std::uint64_t rng_gamma = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Word stream for one matrix entry. Bits are consumed LSB-first.
class EntryStream {
public:
    explicit EntryStream(std::uint64_t key) : key_(key) {}

    std::uint64_t next_word() { return mix64(key_ + (++counter_) * rng_gamma); }

    bool next_bit() {
        if (bits_left_ == 0) {
            bit_buffer_ = next_word();
            bits_left_ = 64;
        }
        bool b = bit_buffer_ & 1;
        bit_buffer_ >>= 1;
        --bits_left_;
        return b;
    }

    // Unbiased uniform draw in [0, bound) by masked rejection.
    std::uint64_t uniform_below_u64(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("uniform_below_u64: bound must be positive");
        if (bound == 1) return 0;
        std::uint64_t mask = ~0ull >> std::countl_zero(bound - 1);
        for (;;) {
            std::uint64_t v = next_word() & mask;
            if (v < bound) return v;
        }
    }

    // Unbiased uniform draw in [0, bound) for arbitrary-precision bounds.
    boost::multiprecision::cpp_int uniform_below(const boost::multiprecision::cpp_int& bound) {
        using boost::multiprecision::cpp_int;
        if (bound <= 0) throw std::invalid_argument("uniform_below: bound must be positive");
        if (bound == 1) return 0;
        unsigned nbits = static_cast<unsigned>(boost::multiprecision::msb(bound - 1)) + 1;
        unsigned nwords = (nbits + 63) / 64;
        for (;;) {
            cpp_int v = 0;
            for (unsigned w = 0; w < nwords; ++w) {
                v |= cpp_int(next_word()) << (64 * w);
            }
            v &= (cpp_int(1) << nbits) - 1;
            if (v < bound) return v;
        }
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    std::uint64_t bit_buffer_ = 0;
    unsigned bits_left_ = 0;
};

// Master seed plus the derivation rule above. Copyable and cheap; all
// methods are const and thread-safe.
struct SeededSource {
    std::uint64_t master_seed = 0;

    std::uint64_t stream_key(std::uint64_t trial_index) const {
        return mix64(mix64(master_seed ^ 0x5851F42D4C957F2Dull) + trial_index * rng_gamma);
    }

    EntryStream entry_stream(std::uint64_t trial_index, std::uint64_t entry_index) const {
        return EntryStream(mix64(stream_key(trial_index) + (entry_index + 1) * 0xD1342543DE82EF95ull));
    }
};

}  // namespace zsurj

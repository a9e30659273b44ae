#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "distributions.hpp"
#include "errors.hpp"
#include "mod_p.hpp"
#include "stats.hpp"
#include "surjectivity.hpp"
#include "theory.hpp"
#include "version.hpp"

namespace zsurj {

enum class ExperimentKind {
    surjectivity_rate,
    cokernel_census,
    adversarial_failure,
    padic_rank,
    decay_curve,
};

inline const char* experiment_kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::surjectivity_rate: return "surjectivity_rate";
        case ExperimentKind::cokernel_census: return "cokernel_census";
        case ExperimentKind::adversarial_failure: return "adversarial_failure";
        case ExperimentKind::padic_rank: return "padic_rank";
        case ExperimentKind::decay_curve: return "decay_curve";
    }
    throw std::logic_error("unreachable");
}

// How the column count m is derived from the row count n.
struct ShapeRule {
    enum class Kind { fixed_columns, column_offset, column_ratio };

    Kind kind = Kind::column_offset;
    std::uint64_t value = 1;  // m for fixed_columns, u for column_offset
    Rational ratio{2};        // c for column_ratio

    static ShapeRule fixed_columns(std::uint64_t m) {
        if (m < 1) throw std::invalid_argument("need m >= 1");
        return {Kind::fixed_columns, m, Rational(0)};
    }
    static ShapeRule column_offset(std::uint64_t u) { return {Kind::column_offset, u, Rational(0)}; }
    static ShapeRule column_ratio(const Rational& c) {
        if (!(c > 1)) throw std::invalid_argument("ratio rule needs c > 1");
        return {Kind::column_ratio, 0, c};
    }

    std::uint64_t columns_for(std::uint64_t n) const {
        switch (kind) {
            case Kind::fixed_columns:
                return value;
            case Kind::column_offset:
                return n + value;
            case Kind::column_ratio: {
                // m = ceil(c * n)
                Int num = boost::multiprecision::numerator(ratio) * Int(n);
                Int den = boost::multiprecision::denominator(ratio);
                return static_cast<std::uint64_t>(Int((num + den - 1) / den));
            }
        }
        throw std::logic_error("unreachable");
    }
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::surjectivity_rate;
    // Absent exactly for adversarial_failure, whose law depends on the shape
    // and is constructed per shape inside the harness.
    std::optional<MatrixDistribution> distribution;
    std::vector<std::uint64_t> n_values;
    ShapeRule shape;
    std::uint64_t trials = 0;
    std::uint64_t master_seed = 0;

    // cokernel_census
    std::vector<std::uint64_t> census_primes;
    std::uint32_t max_partition_size = 4;

    // padic_rank
    std::uint64_t padic_p = 2;
    std::uint32_t padic_precision = 1;

    // Optional cap override for the fast path's factorization budget.
    std::optional<std::uint64_t> rho_cap;
};

struct CensusRow {
    std::uint64_t p = 0;
    std::vector<std::uint32_t> partition;  // empty = trivial Sylow part
    bool overflow = false;                 // partitions beyond the tracked size
    std::uint64_t count = 0;
    double frequency = 0;
    ConfidenceInterval interval{0, 1};
    std::optional<double> predicted_mass;  // limiting mass; absent for overflow
};

struct ShapeRecord {
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    std::uint64_t trials = 0;
    std::uint64_t surjective = 0;  // full-rank count for padic_rank
    double rate = 0;
    ConfidenceInterval interval{0, 1};

    double failure_rate = 0;
    ConfidenceInterval failure_interval{0, 1};
    bool below_resolution = false;  // no failures observed

    std::optional<double> predicted;          // limit / bound / exact value
    std::optional<std::string> predicted_exact;  // rational "a/b" when available
    std::string prediction_label;             // conjectured | theorem | exact | upper_bound
    std::string limit_note;                   // e.g. "limit = 0" for u = 0 censuses

    std::vector<CensusRow> census_rows;
};

struct DecayFit {
    double slope = 0;
    double intercept = 0;
    std::uint64_t points_used = 0;
    bool monotone_nonincreasing = false;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::string artifact_version;
    std::vector<ShapeRecord> shapes;
    std::optional<DecayFit> decay;
};

namespace detail {

struct TrialRecord {
    bool surjective = false;
    std::vector<std::vector<std::uint32_t>> sylow;  // parallel to census_primes
};

inline void validate_config(const ExperimentConfig& c) {
    if (c.trials < 1) throw ConfigError("trials", "must be >= 1");
    if (c.trials > (1ull << 32) - 1) throw ConfigError("trials", "too large");
    if (c.n_values.empty()) throw ConfigError("n", "need at least one row count");
    if (c.n_values.size() > (1ull << 20)) throw ConfigError("n", "too many row counts");
    for (auto n : c.n_values) {
        if (n < 1) throw ConfigError("n", "row counts must be >= 1");
        std::uint64_t m = c.shape.columns_for(n);
        if (m < n) throw ConfigError("m", "shape rule yields m < n at n=" + std::to_string(n));
    }
    if (c.kind == ExperimentKind::cokernel_census) {
        if (c.census_primes.empty()) throw ConfigError("primes", "census needs a prime set");
        for (auto p : c.census_primes) {
            if (!is_prime_u64(p)) throw ConfigError("primes", std::to_string(p) + " is not prime");
        }
        if (c.max_partition_size < 1) throw ConfigError("max_partition", "must be >= 1");
    }
    if (c.kind == ExperimentKind::padic_rank) {
        if (!c.distribution ||
            c.distribution->kind() != MatrixDistribution::Kind::truncated_haar) {
            throw ConfigError("dist", "padic_rank requires the truncated Haar law");
        }
        if (c.distribution->haar_p() != c.padic_p ||
            c.distribution->haar_precision() != c.padic_precision) {
            throw ConfigError("p", "distribution parameters disagree with p/L");
        }
    }
    if (c.kind == ExperimentKind::adversarial_failure) {
        if (c.distribution) throw ConfigError("dist", "adversarial law is implied by the shape");
    } else if (!c.distribution) {
        throw ConfigError("dist", "missing distribution");
    }
    if (c.kind == ExperimentKind::decay_curve &&
        c.shape.kind != ShapeRule::Kind::column_ratio) {
        throw ConfigError("c", "decay_curve needs the ratio shape rule");
    }
}

inline double adversarial_bound(std::uint64_t n, std::uint64_t m) {
    // (1 - 2^{-nm})^{2^{nm} n}
    const double log_base = std::log1p(-std::ldexp(1.0, -static_cast<int>(n * m)));
    return std::exp(std::ldexp(static_cast<double>(n), static_cast<int>(n * m)) * log_base);
}

inline std::uint32_t partition_weight(const std::vector<std::uint32_t>& partition) {
    std::uint32_t w = 0;
    for (auto e : partition) w += e;
    return w;
}

}  // namespace detail

// Runs the configured experiment. The result is a pure function of the
// config (master_seed included): trials are indexed globally, worker
// threads only race for index assignment, and aggregation walks the
// per-trial records in index order.
inline ExperimentResult run(const ExperimentConfig& config, unsigned workers = 1) {
    detail::validate_config(config);
    if (workers < 1 || workers > 1024) throw std::invalid_argument("workers must be in [1, 1024]");

    const SeededSource source{config.master_seed};
    FastPathOptions fast_options;
    fast_options.seed = config.master_seed;
    if (config.rho_cap) fast_options.factor.rho_iteration_cap = *config.rho_cap;

    ExperimentResult result;
    result.config = config;
    result.artifact_version = version;

    const bool census = config.kind == ExperimentKind::cokernel_census;

    for (std::size_t shape_index = 0; shape_index < config.n_values.size(); ++shape_index) {
        const std::uint64_t n = config.n_values[shape_index];
        const std::uint64_t m = config.shape.columns_for(n);

        MatrixDistribution dist = [&] {
            if (config.kind != ExperimentKind::adversarial_failure) return *config.distribution;
            try {
                return MatrixDistribution::adversarial(static_cast<std::uint32_t>(n),
                                                       static_cast<std::uint32_t>(m));
            } catch (const ResourceError& e) {
                throw ResourceError("shape " + std::to_string(n) + "x" + std::to_string(m) +
                                    ": " + e.what());
            }
        }();

        std::vector<detail::TrialRecord> records(config.trials);
        std::atomic<std::uint64_t> next{0};
        std::exception_ptr failure = nullptr;
        std::mutex failure_guard;

        auto worker_loop = [&] {
            try {
                for (;;) {
                    const std::uint64_t t = next.fetch_add(1, std::memory_order_relaxed);
                    if (t >= config.trials) return;
                    const std::uint64_t trial_key = (static_cast<std::uint64_t>(shape_index) << 32) | t;
                    IntMatrix a = sample(dist, n, m, source, trial_key);
                    detail::TrialRecord& rec = records[t];
                    switch (config.kind) {
                        case ExperimentKind::surjectivity_rate:
                        case ExperimentKind::adversarial_failure:
                        case ExperimentKind::decay_curve:
                            rec.surjective = is_surjective_fast(a, fast_options).surjective;
                            break;
                        case ExperimentKind::cokernel_census: {
                            CokernelDescription desc = cokernel(a);
                            rec.surjective = desc.trivial();
                            rec.sylow.reserve(config.census_primes.size());
                            for (std::uint64_t p : config.census_primes) rec.sylow.push_back(desc.sylow(p));
                            break;
                        }
                        case ExperimentKind::padic_rank:
                            rec.surjective = rank_mod_p(a, config.padic_p) == n;
                            break;
                    }
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_guard);
                if (!failure) failure = std::current_exception();
            }
        };

        if (workers == 1) {
            worker_loop();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker_loop);
            for (auto& th : pool) th.join();
        }
        if (failure) std::rethrow_exception(failure);

        ShapeRecord rec;
        rec.n = n;
        rec.m = m;
        rec.trials = config.trials;
        for (const auto& r : records) rec.surjective += r.surjective ? 1 : 0;
        rec.rate = static_cast<double>(rec.surjective) / static_cast<double>(rec.trials);
        rec.interval = binomial_exact_interval(rec.surjective, rec.trials);
        const std::uint64_t failures = rec.trials - rec.surjective;
        rec.failure_rate = static_cast<double>(failures) / static_cast<double>(rec.trials);
        rec.failure_interval = binomial_exact_interval(failures, rec.trials);
        rec.below_resolution = failures == 0;

        const std::uint64_t u_eff = m - n;
        switch (config.kind) {
            case ExperimentKind::surjectivity_rate:
            case ExperimentKind::decay_curve:
                if (config.distribution->kind() == MatrixDistribution::Kind::signed_unit) {
                    rec.predicted = 0.0;
                    rec.prediction_label = "exact";
                } else if (config.shape.kind == ShapeRule::Kind::column_offset) {
                    if (u_eff == 0) {
                        rec.predicted = 0.0;
                        rec.prediction_label = "theorem";
                        rec.limit_note = "limit = 0";
                    } else {
                        rec.predicted = zeta_product_limit(u_eff).value.convert_to<double>();
                        rec.prediction_label = "conjectured";
                    }
                }
                break;
            case ExperimentKind::adversarial_failure:
                rec.predicted = detail::adversarial_bound(n, m);
                rec.prediction_label = "upper_bound";
                break;
            case ExperimentKind::padic_rank: {
                Rational exact = padic_surjectivity_probability(n, m, config.padic_p);
                rec.predicted = exact.convert_to<double>();
                rec.predicted_exact = exact.str();
                rec.prediction_label = "exact";
                break;
            }
            case ExperimentKind::cokernel_census:
                if (u_eff == 0) rec.limit_note = "limit = 0";
                break;
        }

        if (census) {
            for (std::size_t pi = 0; pi < config.census_primes.size(); ++pi) {
                const std::uint64_t p = config.census_primes[pi];
                std::map<std::vector<std::uint32_t>, std::uint64_t> tally;
                tally[{}] = 0;  // always report the trivial Sylow part
                std::uint64_t overflow = 0;
                for (const auto& r : records) {
                    const auto& part = r.sylow[pi];
                    if (detail::partition_weight(part) > config.max_partition_size) {
                        ++overflow;
                    } else {
                        ++tally[part];
                    }
                }
                for (const auto& [part, count] : tally) {
                    CensusRow row;
                    row.p = p;
                    row.partition = part;
                    row.count = count;
                    row.frequency = static_cast<double>(count) / static_cast<double>(rec.trials);
                    row.interval = binomial_exact_interval(count, rec.trials);
                    row.predicted_mass =
                        wood_mass({FiniteAbelianPGroup(p, part)}, u_eff, {p}).value.convert_to<double>();
                    rec.census_rows.push_back(std::move(row));
                }
                CensusRow rest;
                rest.p = p;
                rest.overflow = true;
                rest.count = overflow;
                rest.frequency = static_cast<double>(overflow) / static_cast<double>(rec.trials);
                rest.interval = binomial_exact_interval(overflow, rec.trials);
                rec.census_rows.push_back(std::move(rest));
            }
        }

        result.shapes.push_back(std::move(rec));
    }

    if (config.kind == ExperimentKind::decay_curve) {
        std::vector<std::pair<double, double>> points;
        for (const auto& s : result.shapes) {
            const std::uint64_t failures = s.trials - s.surjective;
            if (failures >= 5) {
                points.emplace_back(static_cast<double>(s.n), std::log(s.failure_rate));
            }
        }
        bool monotone = true;
        for (std::size_t i = 1; i < result.shapes.size(); ++i) {
            if (result.shapes[i].failure_interval.low > result.shapes[i - 1].failure_interval.high) {
                monotone = false;
            }
        }
        if (points.size() >= 2) {
            LinearFit fit = least_squares(points);
            result.decay = DecayFit{fit.slope, fit.intercept, points.size(), monotone};
        } else {
            result.decay = DecayFit{0, 0, points.size(), monotone};
        }
    }

    return result;
}

// Kind-checked wrappers matching the per-experiment entry points.
inline ExperimentResult cokernel_census(const ExperimentConfig& config, unsigned workers = 1) {
    if (config.kind != ExperimentKind::cokernel_census)
        throw ConfigError("kind", "expected cokernel_census");
    return run(config, workers);
}

inline ExperimentResult adversarial_failure(const ExperimentConfig& config, unsigned workers = 1) {
    if (config.kind != ExperimentKind::adversarial_failure)
        throw ConfigError("kind", "expected adversarial_failure");
    return run(config, workers);
}

inline ExperimentResult decay_curve(const ExperimentConfig& config, unsigned workers = 1) {
    if (config.kind != ExperimentKind::decay_curve)
        throw ConfigError("kind", "expected decay_curve");
    return run(config, workers);
}

}  // namespace zsurj

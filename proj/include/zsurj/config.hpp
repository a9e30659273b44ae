#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "errors.hpp"
#include "experiments.hpp"

namespace zsurj {

// Experiment configs are flat "key = value" text: one pair per line,
// '#' comments, no sections. Recognized keys (others are rejected):
//
//   kind            surjectivity_rate | cokernel_census | adversarial_failure
//                   | padic_rank | decay_curve
//   dist            bernoulli | uniform | signed_unit | haar
//                   (forbidden for adversarial_failure, implied for padic_rank)
//   q               Bernoulli success probability, in (0, 1)
//   k               uniform entry bound, entries drawn from [-k, k]
//   p               prime for haar entries / padic_rank
//   L               haar truncation depth, default 3
//   n               comma-separated row counts, e.g. 4,8,16
//   m | u | c       exactly one: fixed columns, offset m = n+u, or ratio
//                   m = ceil(c*n) with c rational ("5/2" or "2.5")
//   trials          trials per shape
//   seed            master seed (required; no implicit default)
//   primes          census prime set, comma-separated
//   max_partition   census partition weight tracked before overflow, default 4
//   rho_cap         factorization budget override for the fast path

namespace detail {

inline std::string trim_ws(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::uint64_t config_u64(const std::string& key, const std::string& value,
                                std::uint64_t min, std::uint64_t max) {
    if (value.empty() || value.size() > 19 ||
        value.find_first_not_of("0123456789") != std::string::npos) {
        throw ConfigError(key, "expected an unsigned integer, got '" + value + "'");
    }
    std::uint64_t out = 0;
    for (char ch : value) out = out * 10 + static_cast<std::uint64_t>(ch - '0');
    if (out < min || out > max) {
        throw ConfigError(key, "value " + value + " outside [" + std::to_string(min) + ", " +
                                   std::to_string(max) + "]");
    }
    return out;
}

inline double config_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double out = 0;
    try {
        out = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ConfigError(key, "expected a number, got '" + value + "'");
    }
    if (used != value.size()) throw ConfigError(key, "expected a number, got '" + value + "'");
    return out;
}

inline std::vector<std::uint64_t> config_u64_list(const std::string& key,
                                                  const std::string& value) {
    std::vector<std::uint64_t> out;
    std::size_t pos = 0;
    while (pos <= value.size()) {
        std::size_t comma = value.find(',', pos);
        std::string item = trim_ws(value.substr(pos, comma == std::string::npos ? std::string::npos
                                                                                : comma - pos));
        if (item.empty()) throw ConfigError(key, "empty list entry");
        out.push_back(config_u64(key, item, 1, std::uint64_t(1) << 62));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw ConfigError(key, "empty list");
    return out;
}

// "a/b", "2.5", or "3"; result must be positive and exact.
inline Rational config_rational(const std::string& key, const std::string& value) {
    auto digits_only = [](const std::string& s) {
        return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
    };
    std::size_t slash = value.find('/');
    if (slash != std::string::npos) {
        std::string num = trim_ws(value.substr(0, slash));
        std::string den = trim_ws(value.substr(slash + 1));
        if (!digits_only(num) || !digits_only(den) || den.find_first_not_of('0') == std::string::npos) {
            throw ConfigError(key, "expected a positive rational, got '" + value + "'");
        }
        return Rational(Int(num), Int(den));
    }
    std::size_t dot = value.find('.');
    if (dot != std::string::npos) {
        std::string whole = value.substr(0, dot);
        std::string frac = value.substr(dot + 1);
        if (!digits_only(whole) || !digits_only(frac)) {
            throw ConfigError(key, "expected a positive rational, got '" + value + "'");
        }
        Int den = boost::multiprecision::pow(Int(10), static_cast<unsigned>(frac.size()));
        return Rational(Int(whole) * den + Int(frac), den);
    }
    if (!digits_only(value)) {
        throw ConfigError(key, "expected a positive rational, got '" + value + "'");
    }
    return Rational(Int(value));
}

}  // namespace detail

inline ExperimentConfig parse_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = detail::trim_ws(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(t, "expected 'key = value'");
        }
        std::string key = detail::trim_ws(t.substr(0, eq));
        std::string value = detail::trim_ws(t.substr(eq + 1));
        if (key.empty()) throw ConfigError(t, "missing key before '='");
        if (value.empty()) throw ConfigError(key, "missing value");
        if (!kv.emplace(key, value).second) throw ConfigError(key, "duplicated key");
    }

    static const std::vector<std::string> known = {
        "kind", "dist", "q", "k", "p", "L", "n", "m", "u", "c",
        "trials", "seed", "primes", "max_partition", "rho_cap",
    };
    for (const auto& [key, value] : kv) {
        (void)value;
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError(key, "unknown key");
        }
    }

    auto has = [&](const char* key) { return kv.count(key) != 0; };
    auto need = [&](const char* key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) throw ConfigError(key, "missing required key");
        return it->second;
    };
    auto forbid = [&](const char* key, const std::string& why) {
        if (has(key)) throw ConfigError(key, why);
    };

    ExperimentConfig config;

    const std::string& kind_text = need("kind");
    if (kind_text == "surjectivity_rate") config.kind = ExperimentKind::surjectivity_rate;
    else if (kind_text == "cokernel_census") config.kind = ExperimentKind::cokernel_census;
    else if (kind_text == "adversarial_failure") config.kind = ExperimentKind::adversarial_failure;
    else if (kind_text == "padic_rank") config.kind = ExperimentKind::padic_rank;
    else if (kind_text == "decay_curve") config.kind = ExperimentKind::decay_curve;
    else throw ConfigError("kind", "unknown experiment kind '" + kind_text + "'");

    config.n_values = detail::config_u64_list("n", need("n"));
    config.trials = detail::config_u64("trials", need("trials"), 1, (std::uint64_t(1) << 32) - 1);
    config.master_seed = detail::config_u64("seed", need("seed"), 0, ~std::uint64_t(0));

    int rules = (has("m") ? 1 : 0) + (has("u") ? 1 : 0) + (has("c") ? 1 : 0);
    if (rules != 1) {
        throw ConfigError(rules == 0 ? "m" : "c", "exactly one of m, u, c must be given");
    }
    if (has("m")) {
        config.shape = ShapeRule::fixed_columns(detail::config_u64("m", kv.at("m"), 1, 1 << 20));
    } else if (has("u")) {
        config.shape = ShapeRule::column_offset(detail::config_u64("u", kv.at("u"), 0, 1 << 20));
    } else {
        Rational c = detail::config_rational("c", kv.at("c"));
        if (!(c > 1)) throw ConfigError("c", "ratio must exceed 1");
        config.shape = ShapeRule::column_ratio(c);
    }

    // Distribution block. Each law owns its parameter keys; anything else
    // present is rejected so configs stay unambiguous.
    auto forbid_dist_params = [&](const char* except1 = "", const char* except2 = "") {
        for (const char* key : {"q", "k", "p", "L"}) {
            if (key == std::string(except1) || key == std::string(except2)) continue;
            forbid(key, std::string("not applicable here"));
        }
    };

    switch (config.kind) {
        case ExperimentKind::adversarial_failure: {
            if (has("dist") && kv.at("dist") != "adversarial") {
                throw ConfigError("dist", "adversarial_failure implies its own law");
            }
            forbid_dist_params();
            break;
        }
        case ExperimentKind::padic_rank: {
            if (has("dist") && kv.at("dist") != "haar") {
                throw ConfigError("dist", "padic_rank draws entries from the truncated Haar law");
            }
            config.padic_p = detail::config_u64("p", need("p"), 2, (std::uint64_t(1) << 63) - 1);
            if (!is_prime_u64(config.padic_p)) throw ConfigError("p", "must be prime");
            config.padic_precision =
                has("L") ? static_cast<std::uint32_t>(detail::config_u64("L", kv.at("L"), 1, 64)) : 3;
            config.distribution =
                MatrixDistribution::truncated_haar(config.padic_p, config.padic_precision);
            forbid_dist_params("p", "L");
            break;
        }
        default: {
            const std::string& dist = need("dist");
            if (dist == "bernoulli") {
                double q = detail::config_double("q", need("q"));
                if (!(q > 0.0 && q < 1.0)) throw ConfigError("q", "must lie in (0, 1)");
                config.distribution = MatrixDistribution::bernoulli(q);
                forbid_dist_params("q");
            } else if (dist == "uniform") {
                std::uint64_t k = detail::config_u64("k", need("k"), 1, std::uint64_t(1) << 62);
                config.distribution = MatrixDistribution::uniform_range(k);
                forbid_dist_params("k");
            } else if (dist == "signed_unit") {
                config.distribution = MatrixDistribution::signed_unit();
                forbid_dist_params();
            } else if (dist == "haar") {
                std::uint64_t p = detail::config_u64("p", need("p"), 2, (std::uint64_t(1) << 63) - 1);
                if (!is_prime_u64(p)) throw ConfigError("p", "must be prime");
                std::uint32_t depth =
                    has("L") ? static_cast<std::uint32_t>(detail::config_u64("L", kv.at("L"), 1, 64))
                             : 3;
                config.distribution = MatrixDistribution::truncated_haar(p, depth);
                forbid_dist_params("p", "L");
            } else {
                throw ConfigError("dist", "unknown distribution '" + dist + "'");
            }
            break;
        }
    }

    if (config.kind == ExperimentKind::cokernel_census) {
        config.census_primes = detail::config_u64_list("primes", need("primes"));
        std::sort(config.census_primes.begin(), config.census_primes.end());
        config.census_primes.erase(
            std::unique(config.census_primes.begin(), config.census_primes.end()),
            config.census_primes.end());
        if (has("max_partition")) {
            config.max_partition_size =
                static_cast<std::uint32_t>(detail::config_u64("max_partition", kv.at("max_partition"), 1, 64));
        }
    } else {
        forbid("primes", "only used by cokernel_census");
        forbid("max_partition", "only used by cokernel_census");
    }

    switch (config.kind) {
        case ExperimentKind::surjectivity_rate:
        case ExperimentKind::adversarial_failure:
        case ExperimentKind::decay_curve:
            if (has("rho_cap")) {
                config.rho_cap = detail::config_u64("rho_cap", kv.at("rho_cap"), 1, ~std::uint64_t(0));
            }
            break;
        default:
            forbid("rho_cap", "only tunes the fast surjectivity path");
            break;
    }

    detail::validate_config(config);
    return config;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config", "cannot open " + path);
    return parse_config(in);
}

}  // namespace zsurj

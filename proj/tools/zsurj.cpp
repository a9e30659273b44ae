// Command-line front end: decide surjectivity of integer matrices, compute
// Smith forms and cokernels, run seeded Monte Carlo experiments, evaluate
// the matching closed-form probabilities, and emit hard instances for the
// fast path.
//
// Exit codes: 0 success (and "surjective" for check), 10 not surjective,
// 2 input/config/usage error, 3 resource exhaustion.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zsurj/config.hpp"
#include "zsurj/errors.hpp"
#include "zsurj/experiments.hpp"
#include "zsurj/factorize.hpp"
#include "zsurj/matrix_io.hpp"
#include "zsurj/result_io.hpp"
#include "zsurj/smith.hpp"
#include "zsurj/surjectivity.hpp"
#include "zsurj/theory.hpp"
#include "zsurj/version.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_not_surjective = 10;
constexpr int exit_input = 2;
constexpr int exit_resource = 3;

std::string hp_to_string(const zsurj::HighPrecisionValue& v) {
    if (v.value == 0 && v.error_bound == 0) return "0 (exact)";
    std::ostringstream out;
    out << std::setprecision(30) << v.value << " +- " << std::setprecision(3)
        << v.error_bound;
    return out.str();
}

// An unreadable matrix file is an input error (exit 2), unlike the
// resource exhaustion paths (exit 3).
zsurj::IntMatrix load_matrix(const std::string& path) {
    try {
        return zsurj::read_matrix_file(path);
    } catch (const zsurj::ResourceError& e) {
        throw std::invalid_argument(e.what());
    }
}

int run_check(const std::string& path, const std::string& method, bool as_json) {
    zsurj::IntMatrix a = load_matrix(path);
    zsurj::SurjectivityVerdict v =
        method == "snf" ? zsurj::is_surjective_snf(a) : zsurj::is_surjective_fast(a);

    if (as_json) {
        nlohmann::ordered_json j;
        j["surjective"] = v.surjective;
        j["method"] = v.method == zsurj::VerdictMethod::snf ? "snf" : "fast_path";
        j["witness_prime"] =
            v.witness_prime ? nlohmann::ordered_json(*v.witness_prime) : nullptr;
        auto factors = nlohmann::ordered_json::array();
        for (const auto& d : v.witness_invariant_factors) factors.push_back(d.str());
        j["invariant_factors"] = factors;
        j["free_rank"] = v.free_rank;
        std::cout << j.dump(2) << "\n";
    } else if (v.surjective) {
        std::cout << "surjective\n";
    } else {
        std::cout << "not surjective";
        if (v.witness_prime) {
            std::cout << ", p=" << *v.witness_prime;
        } else if (v.free_rank > 0) {
            std::cout << ", free rank " << v.free_rank;
        }
        std::cout << "\n";
    }
    return v.surjective ? exit_ok : exit_not_surjective;
}

int run_snf(const std::string& path, bool as_json) {
    zsurj::IntMatrix a = load_matrix(path);
    zsurj::SmithForm snf = zsurj::smith_normal_form(a);
    const std::size_t free_rank = a.rows() - snf.rank;

    // Sylow partitions need the torsion factors split into primes; report
    // them as unavailable if the factoring budget runs out.
    bool sylow_known = true;
    std::map<zsurj::Int, std::vector<std::uint32_t>> sylow;
    try {
        std::map<zsurj::Int, std::vector<std::uint32_t>> exponents;
        for (const auto& d : snf.invariant_factors) {
            if (d == 1) continue;
            for (const auto& [prime, exp] : zsurj::factorize(d).factors) {
                exponents[prime].push_back(static_cast<std::uint32_t>(exp));
            }
        }
        for (auto& [prime, parts] : exponents) {
            std::sort(parts.rbegin(), parts.rend());
            sylow.emplace(prime, std::move(parts));
        }
    } catch (const zsurj::FactorizationIncomplete&) {
        sylow_known = false;
    }

    if (as_json) {
        nlohmann::ordered_json j;
        auto factors = nlohmann::ordered_json::array();
        for (const auto& d : snf.invariant_factors) factors.push_back(d.str());
        j["invariant_factors"] = factors;
        j["free_rank"] = free_rank;
        if (sylow_known) {
            nlohmann::ordered_json groups;
            for (const auto& [prime, parts] : sylow) groups[prime.str()] = parts;
            j["sylow"] = groups.is_null() ? nlohmann::ordered_json::object() : groups;
        } else {
            j["sylow"] = nullptr;
        }
        std::cout << j.dump(2) << "\n";
        return exit_ok;
    }

    std::cout << "invariant factors:";
    for (const auto& d : snf.invariant_factors) std::cout << ' ' << d;
    std::cout << "\nfree rank: " << free_rank << "\n";
    if (!sylow_known) {
        std::cout << "sylow: unavailable (factorization budget exhausted)\n";
    } else {
        for (const auto& [prime, parts] : sylow) {
            std::cout << "sylow(" << prime << "): [";
            for (std::size_t i = 0; i < parts.size(); ++i) {
                if (i) std::cout << ' ';
                std::cout << parts[i];
            }
            std::cout << "]\n";
        }
    }
    return exit_ok;
}

void print_summary(const zsurj::ExperimentResult& result) {
    std::cout << "kind: " << zsurj::experiment_kind_name(result.config.kind)
              << "   seed: " << result.config.master_seed
              << "   trials/shape: " << result.config.trials << "\n";
    std::cout << std::left << std::setw(6) << "n" << std::setw(6) << "m" << std::setw(12)
              << "surjective" << std::setw(10) << "rate" << std::setw(22) << "95% interval"
              << std::setw(14) << "predicted" << "label\n";
    for (const auto& s : result.shapes) {
        std::ostringstream ci;
        ci << "[" << std::fixed << std::setprecision(4) << s.interval.low << ", "
           << s.interval.high << "]";
        std::ostringstream pred;
        if (s.predicted_exact) {
            pred << *s.predicted_exact;
        } else if (s.predicted) {
            pred << std::fixed << std::setprecision(4) << *s.predicted;
        } else {
            pred << "-";
        }
        std::string label = s.prediction_label.empty() ? "-" : s.prediction_label;
        if (!s.limit_note.empty()) label += " (" + s.limit_note + ")";
        std::cout << std::left << std::setw(6) << s.n << std::setw(6) << s.m << std::setw(12)
                  << s.surjective << std::setw(10) << std::fixed << std::setprecision(4)
                  << s.rate << std::setw(22) << ci.str() << std::setw(14) << pred.str()
                  << label << "\n";
        for (const auto& row : s.census_rows) {
            std::cout << "    p=" << row.p << "  ";
            if (row.overflow) {
                std::cout << "overflow     ";
            } else {
                std::ostringstream part;
                part << "[";
                for (std::size_t i = 0; i < row.partition.size(); ++i) {
                    if (i) part << ' ';
                    part << row.partition[i];
                }
                part << "]";
                std::cout << std::setw(13) << std::left << part.str();
            }
            std::cout << "count=" << std::setw(8) << std::left << row.count << "freq="
                      << std::fixed << std::setprecision(4) << row.frequency;
            if (row.predicted_mass) {
                std::cout << "  mass=" << std::fixed << std::setprecision(4)
                          << *row.predicted_mass;
            }
            std::cout << "\n";
        }
    }
    if (result.decay) {
        std::cout << "decay fit: slope=" << std::setprecision(4) << result.decay->slope
                  << " over " << result.decay->points_used << " points, failures "
                  << (result.decay->monotone_nonincreasing ? "monotone nonincreasing"
                                                           : "not monotone")
                  << " within 95% intervals\n";
    }
}

int run_experiment(const std::string& config_path, unsigned workers, const std::string& out_stem) {
    zsurj::ExperimentConfig config = zsurj::parse_config_file(config_path);
    zsurj::ExperimentResult result = zsurj::run(config, workers);
    zsurj::write_result_files(result, out_stem);
    print_summary(result);
    std::cout << "wrote " << out_stem << ".json and " << out_stem << ".csv\n";
    return exit_ok;
}

zsurj::FiniteAbelianPGroup parse_group_flag(const std::string& text) {
    std::size_t colon = text.find(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("--group expects p:e1,e2,... (e.g. 2:2,1)");
    }
    std::uint64_t p = std::stoull(text.substr(0, colon));
    std::vector<std::uint32_t> partition;
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
        if (!item.empty()) partition.push_back(static_cast<std::uint32_t>(std::stoul(item)));
    }
    return zsurj::FiniteAbelianPGroup(p, partition);
}

int run_counterexample(std::uint32_t n, std::uint32_t m, std::uint64_t seed,
                       const std::string& out_path) {
    zsurj::SeededSource source{seed};
    zsurj::IntMatrix a = zsurj::sample_adversarial(n, m, source, 0);
    if (out_path.empty()) {
        zsurj::write_matrix_text(std::cout, a);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw zsurj::ResourceError("cannot write " + out_path);
        zsurj::write_matrix_text(out, a);
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"surjectivity of random integer matrices: exact checks and experiments"};
    app.set_version_flag("--version", zsurj::version);
    app.require_subcommand(1);

    auto* check = app.add_subcommand("check", "decide surjectivity of a matrix file");
    std::string check_path, check_method = "fast";
    bool check_json = false;
    check->add_option("file", check_path, "matrix file ('n m' header, then entries)")->required();
    check->add_option("--method", check_method, "snf or fast")
        ->check(CLI::IsMember({"snf", "fast"}));
    check->add_flag("--json", check_json, "machine-readable output");

    auto* snf = app.add_subcommand("snf", "invariant factors and cokernel of a matrix file");
    std::string snf_path;
    bool snf_json = false;
    snf->add_option("file", snf_path, "matrix file")->required();
    snf->add_flag("--json", snf_json, "machine-readable output");

    auto* experiment = app.add_subcommand("experiment", "run a seeded Monte Carlo experiment");
    std::string exp_config, exp_out = "result";
    unsigned exp_workers = 1;
    experiment->add_option("config", exp_config, "flat key=value config file")->required();
    experiment->add_option("--workers", exp_workers, "worker thread count")
        ->check(CLI::Range(1u, 1024u));
    experiment->add_option("--out", exp_out, "output stem; writes <stem>.json and <stem>.csv");

    auto* theory = app.add_subcommand("theory", "evaluate the closed-form probabilities");
    std::optional<std::uint64_t> zeta_u;
    std::vector<std::uint64_t> finite_args, padic_args;
    bool wood = false;
    std::uint64_t wood_u = 1;
    std::vector<std::uint64_t> wood_primes;
    std::vector<std::string> wood_groups;
    theory->add_option("--zeta-limit", zeta_u, "product over zeta(k)^-1 for k > u");
    theory->add_option("--finite-n", finite_args, "N U: finite product for n x (n+u)")
        ->expected(2);
    theory->add_option("--padic", padic_args, "N M P: exact local surjectivity probability")
        ->expected(3);
    theory->add_flag("--wood", wood, "limiting cokernel class mass");
    theory->add_option("--u", wood_u, "column surplus u for --wood");
    theory->add_option("--primes", wood_primes, "prime support set for --wood")->delimiter(',');
    theory->add_option("--group", wood_groups,
                       "sylow part as p:e1,e2,... (repeatable; omit for the trivial group)");

    auto* counter = app.add_subcommand("counterexample",
                                       "emit a hard instance for the factoring fast path");
    std::uint32_t ce_n = 1, ce_m = 1;
    std::uint64_t ce_seed = 0;
    std::string ce_out;
    counter->add_option("n", ce_n, "rows")->required();
    counter->add_option("m", ce_m, "columns")->required();
    counter->add_option("--seed", ce_seed, "sampling seed")->required();
    counter->add_option("--out", ce_out, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return exit_input;
    }

    try {
        if (check->parsed()) return run_check(check_path, check_method, check_json);
        if (snf->parsed()) return run_snf(snf_path, snf_json);
        if (experiment->parsed()) return run_experiment(exp_config, exp_workers, exp_out);
        if (counter->parsed()) return run_counterexample(ce_n, ce_m, ce_seed, ce_out);
        if (theory->parsed()) {
            int modes = (zeta_u ? 1 : 0) + (finite_args.empty() ? 0 : 1) +
                        (padic_args.empty() ? 0 : 1) + (wood ? 1 : 0);
            if (modes != 1) {
                std::cerr << "theory: pick exactly one of --zeta-limit, --finite-n, --padic, "
                             "--wood\n";
                return exit_input;
            }
            if (zeta_u) {
                std::cout << hp_to_string(zsurj::zeta_product_limit(*zeta_u)) << "\n";
            } else if (!finite_args.empty()) {
                std::cout << hp_to_string(
                                 zsurj::finite_n_zhat_probability(finite_args[0], finite_args[1]))
                          << "\n";
            } else if (!padic_args.empty()) {
                std::cout << zsurj::padic_surjectivity_probability(padic_args[0], padic_args[1],
                                                                   padic_args[2])
                                 .str()
                          << "\n";
            } else {
                if (wood_primes.empty()) {
                    std::cerr << "theory --wood: --primes is required\n";
                    return exit_input;
                }
                std::vector<zsurj::FiniteAbelianPGroup> groups;
                for (const auto& g : wood_groups) groups.push_back(parse_group_flag(g));
                std::set<std::uint64_t> support(wood_primes.begin(), wood_primes.end());
                std::cout << hp_to_string(zsurj::wood_mass(groups, wood_u, support)) << "\n";
            }
            return exit_ok;
        }
        std::cerr << "no subcommand selected\n";
        return exit_input;
    } catch (const zsurj::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const zsurj::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const zsurj::ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_resource;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}

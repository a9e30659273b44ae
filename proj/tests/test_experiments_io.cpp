#include <catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "zsurj/config.hpp"
#include "zsurj/experiments.hpp"
#include "zsurj/matrix_io.hpp"
#include "zsurj/result_io.hpp"
#include "zsurj/surjectivity.hpp"

using zsurj::ExperimentConfig;
using zsurj::ExperimentKind;
using zsurj::Int;
using zsurj::IntMatrix;
using zsurj::MatrixDistribution;
using zsurj::Rational;
using zsurj::ShapeRule;

namespace {

ExperimentConfig rate_config() {
    ExperimentConfig c;
    c.kind = ExperimentKind::surjectivity_rate;
    c.distribution = MatrixDistribution::bernoulli(0.5);
    c.n_values = {2};
    c.shape = ShapeRule::column_offset(1);
    c.trials = 200;
    c.master_seed = 7;
    return c;
}

}  // namespace

TEST_CASE("shape rules turn row counts into column counts") {
    CHECK(ShapeRule::fixed_columns(3).columns_for(10) == 3);
    CHECK(ShapeRule::column_offset(2).columns_for(4) == 6);
    CHECK(ShapeRule::column_offset(0).columns_for(4) == 4);
    auto ratio = ShapeRule::column_ratio(Rational(5, 2));
    CHECK(ratio.columns_for(2) == 5);
    CHECK(ratio.columns_for(3) == 8);  // ceil(7.5)
    CHECK(ratio.columns_for(4) == 10);
    CHECK_THROWS_AS(ShapeRule::fixed_columns(0), std::invalid_argument);
    CHECK_THROWS_AS(ShapeRule::column_ratio(Rational(1)), std::invalid_argument);
}

TEST_CASE("config validation names the offending key") {
    auto expect_key = [](ExperimentConfig c, const std::string& key) {
        try {
            zsurj::run(c);
            FAIL("expected ConfigError for key " + key);
        } catch (const zsurj::ConfigError& e) {
            CHECK(std::string(e.what()).find('"' + key + '"') != std::string::npos);
        }
    };
    {
        auto c = rate_config();
        c.trials = 0;
        expect_key(c, "trials");
    }
    {
        auto c = rate_config();
        c.n_values = {};
        expect_key(c, "n");
    }
    {
        auto c = rate_config();
        c.n_values = {0};
        expect_key(c, "n");
    }
    {
        auto c = rate_config();
        c.kind = ExperimentKind::cokernel_census;
        expect_key(c, "primes");
    }
    {
        auto c = rate_config();
        c.kind = ExperimentKind::adversarial_failure;
        expect_key(c, "dist");  // adversarial law must not be preset
    }
    {
        auto c = rate_config();
        c.distribution.reset();
        expect_key(c, "dist");
    }
    CHECK_THROWS_AS(zsurj::run(rate_config(), 0), std::invalid_argument);
    CHECK_THROWS_AS(zsurj::run(rate_config(), 2000), std::invalid_argument);
}

TEST_CASE("kind-checked wrappers reject mismatched configs") {
    CHECK_THROWS_AS(zsurj::cokernel_census(rate_config()), zsurj::ConfigError);
    CHECK_THROWS_AS(zsurj::adversarial_failure(rate_config()), zsurj::ConfigError);
    CHECK_THROWS_AS(zsurj::decay_curve(rate_config()), zsurj::ConfigError);
}

TEST_CASE("rate experiment counts match a manual replay of the same seeds") {
    auto config = rate_config();
    auto result = zsurj::run(config);
    REQUIRE(result.shapes.size() == 1);
    const auto& s = result.shapes[0];
    CHECK(s.n == 2);
    CHECK(s.m == 3);
    CHECK(s.trials == 200);

    // Replay every trial with the documented key derivation.
    zsurj::SeededSource source{config.master_seed};
    std::uint64_t expected = 0;
    for (std::uint64_t t = 0; t < 200; ++t) {
        IntMatrix a = zsurj::sample(*config.distribution, 2, 3, source, t);  // shape_index 0
        if (zsurj::is_surjective_fast(a).surjective) ++expected;
    }
    CHECK(s.surjective == expected);
    CHECK(s.rate == Catch::Approx(static_cast<double>(expected) / 200.0));
    CHECK(s.interval.low <= s.rate);
    CHECK(s.interval.high >= s.rate);
    CHECK(s.failure_rate == Catch::Approx(1.0 - s.rate));
    CHECK(s.prediction_label == "conjectured");
    REQUIRE(s.predicted.has_value());
    CHECK(*s.predicted == Catch::Approx(0.43575707677).epsilon(1e-9));
}

TEST_CASE("later shapes use disjoint trial keys") {
    auto config = rate_config();
    config.n_values = {2, 3};
    auto result = zsurj::run(config);
    REQUIRE(result.shapes.size() == 2);

    zsurj::SeededSource source{config.master_seed};
    std::uint64_t expected = 0;
    for (std::uint64_t t = 0; t < 200; ++t) {
        const std::uint64_t trial_key = (1ull << 32) | t;  // shape_index 1
        IntMatrix a = zsurj::sample(*config.distribution, 3, 4, source, trial_key);
        if (zsurj::is_surjective_fast(a).surjective) ++expected;
    }
    CHECK(result.shapes[1].surjective == expected);
}

TEST_CASE("sign matrices never hit, and the harness reports that exactly") {
    ExperimentConfig c;
    c.kind = ExperimentKind::surjectivity_rate;
    c.distribution = MatrixDistribution::signed_unit();
    c.n_values = {2, 4};
    c.shape = ShapeRule::column_offset(1);
    c.trials = 300;
    c.master_seed = 3;
    auto result = zsurj::run(c);
    for (const auto& s : result.shapes) {
        CHECK(s.surjective == 0);
        CHECK(s.rate == 0.0);
        CHECK(s.prediction_label == "exact");
        REQUIRE(s.predicted.has_value());
        CHECK(*s.predicted == 0.0);
        CHECK_FALSE(s.below_resolution);  // failures abound; successes are the rare event
    }
}

TEST_CASE("padic rank experiment agrees with the cross-module definition") {
    ExperimentConfig c;
    c.kind = ExperimentKind::padic_rank;
    c.distribution = MatrixDistribution::truncated_haar(2, 1);
    c.n_values = {2};
    c.shape = ShapeRule::column_offset(1);
    c.trials = 400;
    c.master_seed = 11;
    c.padic_p = 2;
    c.padic_precision = 1;
    auto result = zsurj::run(c);
    REQUIRE(result.shapes.size() == 1);
    const auto& s = result.shapes[0];
    CHECK(s.predicted_exact == "21/32");
    CHECK(s.prediction_label == "exact");

    // Full rank mod p is the same event as surjectivity after adjoining
    // p^L times the identity (kills nothing mod p, everything above it).
    zsurj::SeededSource source{c.master_seed};
    std::uint64_t full = 0;
    for (std::uint64_t t = 0; t < c.trials; ++t) {
        IntMatrix a = zsurj::sample(*c.distribution, 2, 3, source, t);
        bool by_rank = zsurj::rank_mod_p(a, 2) == 2;
        if (t < 60) {
            IntMatrix widened = a;
            widened.append_columns(IntMatrix::diagonal({Int(2), Int(2)}));
            REQUIRE(by_rank == zsurj::is_surjective_snf(widened).surjective);
        }
        if (by_rank) ++full;
    }
    CHECK(s.surjective == full);
}

TEST_CASE("census rows partition the trials at every prime") {
    ExperimentConfig c;
    c.kind = ExperimentKind::cokernel_census;
    c.distribution = MatrixDistribution::bernoulli(0.5);
    // n must be large enough that rational rank drops (whose cokernels are
    // infinite but torsion-free, hence trivial at every p) are rare; at
    // n = 4 they still occur for over a third of the draws.
    c.n_values = {16};
    c.shape = ShapeRule::column_offset(1);
    c.trials = 300;
    c.master_seed = 21;
    c.census_primes = {2, 3};
    c.max_partition_size = 2;
    auto result = zsurj::cokernel_census(c);
    REQUIRE(result.shapes.size() == 1);
    const auto& s = result.shapes[0];
    REQUIRE_FALSE(s.census_rows.empty());

    for (std::uint64_t p : {2ull, 3ull}) {
        std::uint64_t total = 0;
        bool saw_trivial = false, saw_overflow = false;
        for (const auto& row : s.census_rows) {
            if (row.p != p) continue;
            total += row.count;
            CHECK(row.frequency ==
                  Catch::Approx(static_cast<double>(row.count) / 300.0));
            if (row.overflow) {
                saw_overflow = true;
                CHECK_FALSE(row.predicted_mass.has_value());
            } else {
                std::uint32_t weight = 0;
                for (auto e : row.partition) weight += e;
                CHECK(weight <= 2);
                REQUIRE(row.predicted_mass.has_value());
                double direct = zsurj::wood_mass({zsurj::FiniteAbelianPGroup(p, row.partition)},
                                                 1, {p})
                                    .value.convert_to<double>();
                CHECK(*row.predicted_mass == Catch::Approx(direct));
                if (row.partition.empty()) {
                    saw_trivial = true;
                    // Bernoulli(1/2) mod 2 is uniform, so at n = 16 the
                    // trivial-cokernel frequency sits near the limiting mass.
                    if (p == 2) CHECK(std::abs(row.frequency - direct) < 0.15);
                }
            }
        }
        CHECK(total == 300);
        CHECK(saw_trivial);
        CHECK(saw_overflow);
    }
    CHECK(s.limit_note.empty());
}

TEST_CASE("square census notes the vanishing limit") {
    ExperimentConfig c;
    c.kind = ExperimentKind::cokernel_census;
    c.distribution = MatrixDistribution::uniform_range(5);
    c.n_values = {3};
    c.shape = ShapeRule::column_offset(0);
    c.trials = 50;
    c.master_seed = 5;
    c.census_primes = {2};
    auto result = zsurj::run(c);
    CHECK(result.shapes[0].limit_note == "limit = 0");
}

TEST_CASE("adversarial harness matches its exact small-case rate") {
    ExperimentConfig c;
    c.kind = ExperimentKind::adversarial_failure;
    c.n_values = {1};
    c.shape = ShapeRule::column_offset(0);
    c.trials = 2000;
    c.master_seed = 77;
    auto result = zsurj::adversarial_failure(c);
    const auto& s = result.shapes[0];
    // 1x1 entries are products of subsets of {2, 3}; only the empty product
    // gives a unit, so the surjectivity rate is exactly 1/4.
    CHECK(s.prediction_label == "upper_bound");
    REQUIRE(s.predicted.has_value());
    CHECK(*s.predicted == Catch::Approx(0.25).epsilon(1e-12));
    double sigma = zsurj::binomial_sigma(0.25, 2000);
    CHECK(std::abs(s.rate - 0.25) < 4 * sigma);
}

TEST_CASE("adversarial harness refuses oversized shapes with a shape tag") {
    ExperimentConfig c;
    c.kind = ExperimentKind::adversarial_failure;
    c.n_values = {5};
    c.shape = ShapeRule::column_offset(0);
    c.trials = 10;
    c.master_seed = 1;
    try {
        zsurj::run(c);
        FAIL("expected ResourceError");
    } catch (const zsurj::ResourceError& e) {
        CHECK(std::string(e.what()).find("shape 5x5") != std::string::npos);
    }
}

TEST_CASE("decay experiment fits the log failure rate") {
    ExperimentConfig c;
    c.kind = ExperimentKind::decay_curve;
    c.distribution = MatrixDistribution::bernoulli(0.5);
    c.n_values = {1, 2, 3};
    c.shape = ShapeRule::column_ratio(Rational(2));
    c.trials = 400;
    c.master_seed = 31;
    auto result = zsurj::decay_curve(c);
    REQUIRE(result.decay.has_value());
    REQUIRE(result.decay->points_used >= 2);

    std::vector<std::pair<double, double>> points;
    for (const auto& s : result.shapes) {
        if (s.trials - s.surjective >= 5) {
            points.emplace_back(static_cast<double>(s.n), std::log(s.failure_rate));
        }
    }
    auto fit = zsurj::least_squares(points);
    CHECK(result.decay->slope == Catch::Approx(fit.slope));
    CHECK(result.decay->intercept == Catch::Approx(fit.intercept));
}

TEST_CASE("experiment JSON is byte-identical across worker counts and reruns") {
    auto config = rate_config();
    config.n_values = {2, 3};
    auto one = zsurj::result_to_json_text(zsurj::run(config, 1));
    auto again = zsurj::result_to_json_text(zsurj::run(config, 1));
    auto four = zsurj::result_to_json_text(zsurj::run(config, 4));
    CHECK(one == again);
    CHECK(one == four);
}

TEST_CASE("census JSON is byte-identical across worker counts") {
    ExperimentConfig c;
    c.kind = ExperimentKind::cokernel_census;
    c.distribution = MatrixDistribution::uniform_range(3);
    c.n_values = {3};
    c.shape = ShapeRule::column_offset(1);
    c.trials = 120;
    c.master_seed = 9;
    c.census_primes = {2};
    CHECK(zsurj::result_to_json_text(zsurj::run(c, 1)) ==
          zsurj::result_to_json_text(zsurj::run(c, 3)));
}

TEST_CASE("result JSON carries the provenance fields in a stable layout") {
    auto result = zsurj::run(rate_config());
    auto j = nlohmann::json::parse(zsurj::result_to_json_text(result));
    CHECK(j["artifact_version"] == zsurj::version);
    CHECK(j["kind"] == "surjectivity_rate");
    CHECK(j["config"]["distribution"] == "bernoulli(q=0.5)");
    CHECK(j["config"]["master_seed"] == 7);
    CHECK(j["config"]["shape_rule"]["kind"] == "column_offset");
    CHECK(j["config"]["shape_rule"]["u"] == 1);
    REQUIRE(j["shapes"].size() == 1);
    auto& s = j["shapes"][0];
    for (const char* key : {"n", "m", "trials", "surjective", "rate", "interval", "failure_rate",
                            "failure_interval", "below_resolution", "predicted", "predicted_exact",
                            "prediction_label", "limit_note"}) {
        CAPTURE(key);
        CHECK(s.contains(key));
    }
    CHECK_FALSE(j.contains("decay"));
    CHECK_FALSE(s.contains("census"));

    // The literal text leads with the version and kind, in that order.
    auto text = zsurj::result_to_json_text(result);
    CHECK(text.find("\"artifact_version\"") < text.find("\"kind\""));
    CHECK(text.find("\"kind\"") < text.find("\"config\""));
    CHECK(text.find("\"config\"") < text.find("\"shapes\""));
}

TEST_CASE("result CSV has the documented header and one row per statistic") {
    auto result = zsurj::run(rate_config());
    std::istringstream csv(zsurj::result_to_csv(result));
    std::string line;
    REQUIRE(std::getline(csv, line));
    CHECK(line == "n,m,statistic,value,interval_low,interval_high,predicted,label");
    REQUIRE(std::getline(csv, line));
    CHECK(line.rfind("2,3,rate,", 0) == 0);
    CHECK(line.find("conjectured") != std::string::npos);
    REQUIRE(std::getline(csv, line));
    CHECK(line.rfind("2,3,failure_rate,", 0) == 0);
    CHECK_FALSE(std::getline(csv, line));
}

TEST_CASE("census CSV rows name the sylow partition") {
    ExperimentConfig c;
    c.kind = ExperimentKind::cokernel_census;
    c.distribution = MatrixDistribution::uniform_range(3);
    c.n_values = {3};
    c.shape = ShapeRule::column_offset(1);
    c.trials = 60;
    c.master_seed = 12;
    c.census_primes = {2};
    auto csv = zsurj::result_to_csv(zsurj::run(c));
    CHECK(csv.find("sylow_p2=[]") != std::string::npos);
    CHECK(csv.find("sylow_p2=overflow") != std::string::npos);
}

TEST_CASE("write_result_files produces both artifacts") {
    auto result = zsurj::run(rate_config());
    const std::string stem = "io_test_result";
    zsurj::write_result_files(result, stem);
    std::ifstream json_in(stem + ".json");
    std::ifstream csv_in(stem + ".csv");
    REQUIRE(json_in.good());
    REQUIRE(csv_in.good());
    std::stringstream json_text;
    json_text << json_in.rdbuf();
    CHECK(json_text.str() == zsurj::result_to_json_text(result));
    std::remove((stem + ".json").c_str());
    std::remove((stem + ".csv").c_str());
}

TEST_CASE("matrix text round-trips through write and read") {
    auto a = IntMatrix::from_rows({{1, -22, 3}, {0, 5, -6}});
    std::stringstream buf;
    zsurj::write_matrix_text(buf, a);
    CHECK(buf.str() == "2 3\n1 -22 3\n0 5 -6\n");
    CHECK(zsurj::read_matrix_text(buf) == a);
}

TEST_CASE("matrix reader accepts comments and ragged whitespace") {
    std::istringstream in(
        "# shape first\n"
        "2 2\n"
        "\n"
        "  1 2\n"
        "# a comment between rows\n"
        "\t3   4\n");
    CHECK(zsurj::read_matrix_text(in) == IntMatrix::from_rows({{1, 2}, {3, 4}}));
}

TEST_CASE("matrix reader pinpoints errors by line and column") {
    auto expect_parse_error = [](const std::string& text, const std::string& needle) {
        std::istringstream in(text);
        try {
            zsurj::read_matrix_text(in);
            FAIL("expected ParseError for: " + text);
        } catch (const zsurj::ParseError& e) {
            CAPTURE(text, e.what());
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_parse_error("", "line 1");
    expect_parse_error("2\n1 2\n", "line");             // missing column count
    expect_parse_error("2 2\n1 2 3\n", "line 2");       // too few entries overall
    expect_parse_error("1 2\n1 2 3\n", "(line 2, column 5)");  // trailing entry
    expect_parse_error("1 1\nx\n", "(line 2, column 1)");
    expect_parse_error("0 2\n", "line 1");
    expect_parse_error("1 1\n2-3\n", "column");
}

TEST_CASE("matrix reader reports the missing-entry position at the last token") {
    std::istringstream in("2 3\n1 2 3\n4 5\n");
    try {
        zsurj::read_matrix_text(in);
        FAIL("expected ParseError");
    } catch (const zsurj::ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("unreadable matrix path raises a resource error") {
    CHECK_THROWS_AS(zsurj::read_matrix_file("no_such_dir/missing.mat"), zsurj::ResourceError);
}

TEST_CASE("config parser handles a full happy path") {
    std::istringstream in(
        "# weekly run\n"
        "kind = surjectivity_rate\n"
        "dist = bernoulli\n"
        "q = 0.5\n"
        "n = 4, 8\n"
        "u = 1\n"
        "trials = 2000\n"
        "seed = 42\n");
    auto c = zsurj::parse_config(in);
    CHECK(c.kind == ExperimentKind::surjectivity_rate);
    REQUIRE(c.distribution.has_value());
    CHECK(c.distribution->kind() == MatrixDistribution::Kind::bernoulli);
    CHECK(c.distribution->bernoulli_q() == 0.5);
    CHECK(c.n_values == std::vector<std::uint64_t>{4, 8});
    CHECK(c.shape.kind == ShapeRule::Kind::column_offset);
    CHECK(c.shape.value == 1);
    CHECK(c.trials == 2000);
    CHECK(c.master_seed == 42);
}

TEST_CASE("config parser accepts ratio shapes in both notations") {
    auto parse = [](const std::string& c_text) {
        std::istringstream in("kind = decay_curve\ndist = bernoulli\nq = 0.5\nn = 2,4\n" + c_text +
                              "\ntrials = 10\nseed = 1\n");
        return zsurj::parse_config(in);
    };
    auto fraction = parse("c = 5/2");
    auto decimal = parse("c = 2.5");
    CHECK(fraction.shape.kind == ShapeRule::Kind::column_ratio);
    CHECK(fraction.shape.ratio == Rational(5, 2));
    CHECK(decimal.shape.ratio == Rational(5, 2));
}

TEST_CASE("config parser covers the remaining experiment kinds") {
    {
        std::istringstream in(
            "kind = cokernel_census\ndist = uniform\nk = 10\nn = 4\nu = 1\n"
            "trials = 100\nseed = 3\nprimes = 3, 2, 2\nmax_partition = 3\n");
        auto c = zsurj::parse_config(in);
        CHECK(c.kind == ExperimentKind::cokernel_census);
        CHECK(c.census_primes == std::vector<std::uint64_t>{2, 3});  // sorted, deduped
        CHECK(c.max_partition_size == 3);
    }
    {
        std::istringstream in(
            "kind = padic_rank\np = 2\nn = 2\nm = 3\ntrials = 50\nseed = 9\n");
        auto c = zsurj::parse_config(in);
        CHECK(c.kind == ExperimentKind::padic_rank);
        CHECK(c.padic_p == 2);
        CHECK(c.padic_precision == 3);  // L defaults to 3
        REQUIRE(c.distribution.has_value());
        CHECK(c.distribution->kind() == MatrixDistribution::Kind::truncated_haar);
        CHECK(c.shape.kind == ShapeRule::Kind::fixed_columns);
    }
    {
        std::istringstream in("kind = adversarial_failure\nn = 1,2\nu = 0\ntrials = 10\nseed = 2\n");
        auto c = zsurj::parse_config(in);
        CHECK(c.kind == ExperimentKind::adversarial_failure);
        CHECK_FALSE(c.distribution.has_value());
    }
}

TEST_CASE("config parser rejects malformed input with the offending key") {
    auto expect_config_error = [](const std::string& text, const std::string& needle) {
        std::istringstream in(text);
        try {
            zsurj::parse_config(in);
            FAIL("expected ConfigError for:\n" + text);
        } catch (const zsurj::ConfigError& e) {
            CAPTURE(text, e.what());
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    const std::string base = "kind = surjectivity_rate\ndist = bernoulli\nq = 0.5\nn = 2\nu = 1\n";
    expect_config_error(base + "trials = 10\n", "seed");                      // seed required
    expect_config_error(base + "seed = 1\n", "trials");                       // trials required
    expect_config_error(base + "trials = 10\nseed = 1\nm = 3\n", "m");        // m and u clash
    expect_config_error(base + "trials = 10\nseed = 1\nbogus = 1\n", "bogus");
    expect_config_error(base + "trials = 10\nseed = 1\nq = 0.7\n", "q");      // duplicate
    expect_config_error(base + "trials = x\nseed = 1\n", "trials");
    expect_config_error("dist = bernoulli\nq = 0.5\nn = 2\nu = 1\ntrials = 1\nseed = 1\n", "kind");
    expect_config_error("kind = surjectivity_rate\nn = 2\nu = 1\ntrials = 1\nseed = 1\n", "dist");
    expect_config_error(
        "kind = surjectivity_rate\ndist = bernoulli\nq = 1.5\nn = 2\nu = 1\ntrials = 1\nseed = 1\n",
        "q");
    expect_config_error(
        "kind = surjectivity_rate\ndist = bernoulli\nn = 2\nu = 1\ntrials = 1\nseed = 1\n", "q");
    expect_config_error(
        "kind = surjectivity_rate\ndist = uniform\nq = 0.5\nk = 3\nn = 2\nu = 1\ntrials = 1\n"
        "seed = 1\n",
        "q");  // bernoulli-only key with uniform law
    expect_config_error(
        "kind = adversarial_failure\ndist = bernoulli\nq = 0.5\nn = 1\nu = 0\ntrials = 1\nseed = 1\n",
        "dist");
    expect_config_error("kind = cokernel_census\ndist = bernoulli\nq = 0.5\nn = 2\nu = 1\n"
                        "trials = 1\nseed = 1\n",
                        "primes");
    expect_config_error("kind = padic_rank\nn = 2\nm = 3\ntrials = 1\nseed = 1\n", "p");
    expect_config_error("kind = surjectivity_rate\ndist = haar\np = 4\nL = 2\nn = 2\nu = 1\n"
                        "trials = 1\nseed = 1\n",
                        "p");
    expect_config_error(base + "trials = 10\nseed = 1\nnot a pair\n", "key = value");
}

TEST_CASE("config file loader reports unreadable paths") {
    CHECK_THROWS_AS(zsurj::parse_config_file("no_such_dir/run.cfg"), zsurj::ConfigError);
}

TEST_CASE("parsed configs drive a run end to end") {
    std::istringstream in(
        "kind = padic_rank\np = 2\nL = 1\nn = 2\nm = 3\ntrials = 200\nseed = 5\n");
    auto result = zsurj::run(zsurj::parse_config(in));
    REQUIRE(result.shapes.size() == 1);
    CHECK(result.shapes[0].predicted_exact == "21/32");
}

// Runs a small cokernel census (n x (n+1), entries 0 or 1 with equal odds,
// Sylow structure read off at p = 2) and prints the CSV artifact. The
// predicted column holds the limiting mass of each cokernel class.

#include <cstdio>

#include "zsurj/experiments.hpp"
#include "zsurj/result_io.hpp"

int main() {
    zsurj::ExperimentConfig config;
    config.kind = zsurj::ExperimentKind::cokernel_census;
    config.distribution = zsurj::MatrixDistribution::bernoulli(0.5);
    config.n_values = {8};
    config.shape = zsurj::ShapeRule::column_offset(1);
    config.trials = 2000;
    config.master_seed = 42;
    config.census_primes = {2};
    config.max_partition_size = 3;

    const auto result = zsurj::run(config);
    std::fputs(zsurj::result_to_csv(result).c_str(), stdout);

    const auto& shape = result.shapes.front();
    std::printf("\n%llu of %llu draws were surjective (rate %.4f)\n",
                static_cast<unsigned long long>(shape.surjective),
                static_cast<unsigned long long>(shape.trials), shape.rate);
    return 0;
}

// Walks a few small matrices through the surjectivity decision and prints
// the certificate each one earns. Build and run with no arguments.

#include <cstdio>
#include <string>
#include <vector>

#include "zsurj/surjectivity.hpp"

using zsurj::Int;
using zsurj::IntMatrix;

namespace {

IntMatrix from_rows(std::size_t rows, std::size_t cols, std::vector<long long> entries) {
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = entries[i * cols + j];
    return m;
}

void report(const char* name, const IntMatrix& a) {
    const auto v = zsurj::is_surjective_fast(a);
    std::printf("%-28s %zux%zu  %s", name, a.rows(), a.cols(),
                v.surjective ? "surjective" : "not surjective");
    if (!v.surjective) {
        if (v.witness_prime) std::printf(" (rank drops mod %llu)",
                                         static_cast<unsigned long long>(*v.witness_prime));
        if (v.free_rank > 0) std::printf(" (free rank %zu)", v.free_rank);
    }
    std::printf("  [decided by %s]\n",
                v.method == zsurj::VerdictMethod::fast_path ? "fast path" : "Smith form");

    const auto coker = zsurj::cokernel(a);
    std::printf("%-28s cokernel: ", "");
    if (coker.trivial()) {
        std::printf("trivial\n");
    } else {
        for (const Int& d : coker.torsion) std::printf("Z/%s ", d.str().c_str());
        if (coker.free_rank > 0) std::printf("Z^%zu", coker.free_rank);
        std::printf("\n");
    }
}

}  // namespace

int main() {
    report("identity", from_rows(2, 2, {1, 0, 0, 1}));
    report("doubled first axis", from_rows(2, 2, {2, 0, 0, 1}));
    report("classic 2x3", from_rows(2, 3, {1, 2, 3, 4, 5, 6}));
    report("unimodular shear", from_rows(3, 3, {1, 5, 0, 0, 1, 7, 0, 0, 1}));
    report("all entries plus one", from_rows(3, 6, {1, 1, 1, 1, 1, 1,
                                                    1, 1, 1, 1, 1, 1,
                                                    1, 1, 1, 1, 1, 1}));
    report("wide with spare columns", from_rows(2, 4, {3, 5, 1, 0, 4, 7, 0, 1}));
    return 0;
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "cesim/linalg.hpp"
#include "cesim/rng.hpp"

using namespace cesim;

TEST_CASE("task seeds are distinct and deterministic") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(rng::task_seed(42, i));
    CHECK(seen.size() == 1000);
    CHECK(rng::task_seed(42, 7) == rng::task_seed(42, 7));
    CHECK(rng::task_seed(42, 7) != rng::task_seed(43, 7));
}

TEST_CASE("uniform stream is deterministic and in range") {
    rng::Stream a(123), b(123), c(124);
    bool allEqual = true;
    bool anyDiffer = false;
    for (int i = 0; i < 1000; ++i) {
        const double x = a.uniform();
        const double y = b.uniform();
        const double z = c.uniform();
        allEqual = allEqual && (x == y);
        anyDiffer = anyDiffer || (x != z);
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
    CHECK(allEqual);
    CHECK(anyDiffer);
}

TEST_CASE("multinomial counts sum to shots and are reproducible") {
    const std::vector<double> probs = {0.5, 0.25, 0.125, 0.125};
    rng::Stream s1(7), s2(7);
    const auto c1 = rng::multinomial(s1, probs, 100000);
    const auto c2 = rng::multinomial(s2, probs, 100000);
    CHECK(c1 == c2);
    std::uint64_t total = 0;
    for (std::uint64_t c : c1) total += c;
    CHECK(total == 100000);
    // loose frequency sanity: 5 sigma on the largest cell
    const double sigma = std::sqrt(100000 * 0.5 * 0.5);
    CHECK(std::abs(static_cast<double>(c1[0]) - 50000.0) <= 5.0 * sigma);
}

TEST_CASE("multinomial rejects unnormalized probabilities") {
    rng::Stream s(1);
    CHECK_THROWS_AS(rng::multinomial(s, {0.5, 0.4}, 10), std::invalid_argument);
}

TEST_CASE("Ginibre states are valid and full rank in practice") {
    rng::Stream stream(5150);
    for (int i = 0; i < 20; ++i) {
        const DensityMatrix4 rho = rng::random_state(stream);  // ctor validates
        const auto eig = linalg::hermitian_eigensystem(rho.matrix());
        CHECK(eig.values.minCoeff() > 0.0);
    }
}

TEST_CASE("separable states satisfy the PPT criterion") {
    rng::Stream stream(616);
    for (int i = 0; i < 50; ++i) {
        const DensityMatrix4 sep = rng::random_separable_state(stream);
        const auto eig = linalg::hermitian_eigensystem(
            linalg::partial_transpose(sep.matrix(), linalg::Subsystem::A));
        CHECK(eig.values.minCoeff() >= -1e-9);
    }
}

TEST_CASE("random single-qubit unitaries are unitary") {
    rng::Stream stream(33);
    for (int i = 0; i < 20; ++i) {
        const Eigen::Matrix2cd u = rng::random_su2(stream);
        CHECK((u.adjoint() * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() <=
              1e-12);
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "seqmeas/born.hpp"
#include "test_util.hpp"

using namespace seqmeas;
using testutil::sv;

namespace {

OrthonormalBasisMeasurement standard_2d(double lambda1 = 1.0, double lambda2 = -1.0) {
    return OrthonormalBasisMeasurement({sv({{1, 0}, {0, 0}}), sv({{0, 0}, {1, 0}})},
                                       {lambda1, lambda2});
}

} // namespace

TEST_CASE("measurement requires a complete orthonormal basis") {
    // Too few states for the dimension.
    CHECK_THROWS_AS(OrthonormalBasisMeasurement({sv({{1, 0}, {0, 0}})}, {1.0}), ValidationError);
    // Mismatched eigenvalue count.
    CHECK_THROWS_AS(
        OrthonormalBasisMeasurement({sv({{1, 0}, {0, 0}}), sv({{0, 0}, {1, 0}})}, {1.0}),
        ValidationError);
    // Not orthogonal.
    CHECK_THROWS_AS(OrthonormalBasisMeasurement(
                        {sv({{1, 0}, {0, 0}}), sv({{std::sqrt(0.5), 0}, {std::sqrt(0.5), 0}})},
                        {1.0, -1.0}),
                    ValidationError);
}

TEST_CASE("nondegenerate detects repeated eigenvalues") {
    CHECK(standard_2d(1.0, -1.0).nondegenerate());
    CHECK_FALSE(standard_2d(2.0, 2.0).nondegenerate());
}

TEST_CASE("born_distribution on the standard basis") {
    const StateVector psi = sv({{std::sqrt(3.0) / 2.0, 0.0}, {0.5, 0.0}});
    const auto dist = born_distribution(psi, standard_2d());
    REQUIRE(dist.size() == 2);
    CHECK(dist.at(1.0) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(dist.at(-1.0) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("born_distribution groups degenerate eigenvalues") {
    std::mt19937_64 rng(21);
    const auto states = testutil::random_basis_states(3, rng);
    const OrthonormalBasisMeasurement m({states[0], states[1], states[2]}, {5.0, 5.0, 7.0});
    const StateVector psi = random_state(3, rng);

    const auto dist = born_distribution(psi, m);
    REQUIRE(dist.size() == 2);
    const double p0 = std::norm(inner_product(states[0], psi));
    const double p1 = std::norm(inner_product(states[1], psi));
    const double p2 = std::norm(inner_product(states[2], psi));
    CHECK(dist.at(5.0) == doctest::Approx(p0 + p1).epsilon(1e-12));
    CHECK(dist.at(7.0) == doctest::Approx(p2).epsilon(1e-12));
}

TEST_CASE("born probabilities sum to one for random bases") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 25; ++trial) {
        const int d = 2 + static_cast<int>(uniform_below(rng, 4));
        const auto states = testutil::random_basis_states(d, rng);
        std::vector<double> eigenvalues;
        for (int i = 0; i < d; ++i) {
            eigenvalues.push_back(static_cast<double>(i));
        }
        const OrthonormalBasisMeasurement m(states, eigenvalues);
        const StateVector psi = random_state(d, rng);
        double total = 0.0;
        for (const auto &[value, p] : born_distribution(psi, m)) {
            CHECK(p >= 0.0);
            total += p;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("collapse_projective lands on the eigenstate") {
    const StateVector psi = sv({{std::sqrt(3.0) / 2.0, 0.0}, {0.5, 0.0}});
    const auto m = standard_2d();
    const StateVector up = collapse_projective(psi, m, 1.0);
    CHECK(phase_equal(up, sv({{1, 0}, {0, 0}})));
    const StateVector down = collapse_projective(psi, m, -1.0);
    CHECK(phase_equal(down, sv({{0, 0}, {1, 0}})));
}

TEST_CASE("collapse_projective projects onto the degenerate eigenspace") {
    std::mt19937_64 rng(23);
    const auto states = testutil::random_basis_states(3, rng);
    const OrthonormalBasisMeasurement m(states, {5.0, 5.0, 7.0});
    const StateVector psi = random_state(3, rng);

    const StateVector collapsed = collapse_projective(psi, m, 5.0);
    CHECK(collapsed.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-13));
    // Inside the eigenspace: no overlap with the excluded eigenstate.
    CHECK(std::abs(inner_product(states[2], collapsed)) < 1e-12);
    // Projection, not rotation: relative amplitudes within the space survive.
    const Complex c0 = inner_product(states[0], psi);
    const Complex c1 = inner_product(states[1], psi);
    const Complex d0 = inner_product(states[0], collapsed);
    const Complex d1 = inner_product(states[1], collapsed);
    CHECK(std::abs(c0 * d1 - c1 * d0) < 1e-12);
}

TEST_CASE("collapse_projective rejects impossible outcomes") {
    const StateVector e1 = sv({{1, 0}, {0, 0}});
    const auto m = standard_2d();
    CHECK_THROWS_AS(collapse_projective(e1, m, -1.0), ImpossibleOutcomeError); // zero probability
    CHECK_THROWS_AS(collapse_projective(e1, m, 3.0), ImpossibleOutcomeError); // unknown eigenvalue
}

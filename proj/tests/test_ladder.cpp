#include <doctest.h>

#include <cmath>

#include "lgtrap/ladder.hpp"

using namespace lgtrap;

TEST_CASE("lowering operator structure") {
    const auto two = InternalLadder::make(29, 2);
    const auto sigma = lowering_operator(two, 0);

    Eigen::VectorXcd upper = Eigen::VectorXcd::Zero(2);
    upper(1) = 1.0;
    Eigen::VectorXcd lowered = sigma.mat * upper;
    CHECK(lowered(0) == std::complex<double>(1.0));
    CHECK(lowered(1) == std::complex<double>(0.0));

    // the bottom level is annihilated
    Eigen::VectorXcd lowest = Eigen::VectorXcd::Zero(2);
    lowest(0) = 1.0;
    CHECK((sigma.mat * lowest).norm() == 0.0);

    // sigma^dag sigma projects onto the upper level
    const auto proj = sigma.dagger() * sigma;
    CHECK(proj.mat(0, 0) == std::complex<double>(0.0));
    CHECK(proj.mat(1, 1) == std::complex<double>(1.0));
    CHECK(max_abs(proj * proj - proj) == 0.0);

    CHECK_THROWS_AS(lowering_operator(two, 1), std::out_of_range);
    CHECK_THROWS_AS(lowering_operator(two, -1), std::out_of_range);
}

TEST_CASE("lowering operators are nilpotent and chain correctly") {
    const auto four = InternalLadder::make(0, 4, {90.0, 100.0, 110.0});
    for (int k = 0; k < 3; ++k) {
        const auto s = lowering_operator(four, k);
        CHECK(max_abs(s * s) == 0.0);  // sigma_k^2 = 0
    }
    // non-adjacent products vanish; adjacent ones chain downward
    const auto s0 = lowering_operator(four, 0);
    const auto s2 = lowering_operator(four, 2);
    CHECK(max_abs(s0 * s2) == 0.0);
    const auto s1 = lowering_operator(four, 1);
    CHECK(std::abs((s0 * s1).mat(0, 2)) == 1.0);
}

TEST_CASE("internal angular momentum diagonal and commutation with lowering") {
    const auto l29 = InternalLadder::make(29, 2);
    CHECK(angular_momentum_internal(l29).mat(0, 0) == std::complex<double>(29.0));

    const auto l0 = InternalLadder::make(0, 2);
    const auto lz0 = angular_momentum_internal(l0);
    CHECK(lz0.mat(0, 0) == std::complex<double>(0.0));
    CHECK(lz0.mat(1, 1) == std::complex<double>(1.0));

    // expectation in an equal superposition sits halfway between the levels
    const auto lz = angular_momentum_internal(l29);
    Eigen::VectorXcd sup(2);
    sup << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    CHECK(std::abs((sup.adjoint() * lz.mat * sup)(0).real() - 29.5) < 1e-13);

    // [l_z, sigma_k] = -sigma_k exactly, for every transition
    const auto four = InternalLadder::make(5, 4, {100.0, 100.0, 100.0});
    const auto lz4 = angular_momentum_internal(four);
    for (int k = 0; k < 3; ++k) {
        const auto s = lowering_operator(four, k);
        CHECK(max_abs(commutator(lz4, s) + s) == 0.0);
    }
}

TEST_CASE("dipole metadata consistency check") {
    const auto with_dipole = InternalLadder::make(0, 2, {100.0}, std::vector<double>{1.0});
    CHECK(dipole_consistency(with_dipole, 0.5, 1.0));
    CHECK_FALSE(dipole_consistency(with_dipole, 1.0, 1.0));

    const auto stronger = InternalLadder::make(0, 2, {100.0}, std::vector<double>{2.0});
    CHECK(dipole_consistency(stronger, 1.0, 4.0));

    const auto bare = InternalLadder::make(0, 2);
    CHECK_THROWS_AS(dipole_consistency(bare, 1.0, 2.0), std::invalid_argument);
}

TEST_CASE("ladder validation") {
    CHECK_THROWS_AS(InternalLadder::make(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(InternalLadder::make(-1, 2), std::invalid_argument);
    CHECK_THROWS_AS(InternalLadder::make(0, 3, {100.0}), std::invalid_argument);
    CHECK_THROWS_AS(InternalLadder::make(0, 2, {-1.0}), std::invalid_argument);
    // defaults put the working transition deep in the resolved-sideband regime
    CHECK(InternalLadder::make(0, 2).gap(0) == 100.0);
}

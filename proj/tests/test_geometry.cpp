#include <catch2/catch_amalgamated.hpp>

#include <hyhardy/geometry.hpp>

#include <cmath>

using namespace hyhardy;
using Catch::Approx;

TEST_CASE("mode eigenvalues", "[geometry]")
{
    CHECK(mode_eigenvalue(2, 0) == 0);
    CHECK(mode_eigenvalue(7, 0) == 0);
    CHECK(mode_eigenvalue(3, 1) == 2);
    CHECK(mode_eigenvalue(2, 5) == 25);
    CHECK_THROWS_AS(mode_eigenvalue(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(mode_eigenvalue(3, -1), std::invalid_argument);

    SECTION("first differences of the quadratic")
    {
        for (int N = 2; N <= 10; ++N)
            for (int n = 1; n <= 20; ++n)
                CHECK(mode_eigenvalue(N, n) - mode_eigenvalue(N, n - 1) ==
                      2 * n + N - 3);
    }

    SECTION("lambda_n >= N-1 for n >= 1")
    {
        for (int N = 2; N <= 10; ++N)
            for (int n = 1; n <= 20; ++n)
                CHECK(mode_eigenvalue(N, n) >= N - 1);
    }
}

TEST_CASE("mode multiplicities", "[geometry]")
{
    CHECK(mode_multiplicity(5, 0) == 1);
    CHECK(mode_multiplicity(3, 1) == 3);
    CHECK(mode_multiplicity(3, 2) == 5);     // binom(4,2) - binom(2,0)
    CHECK(mode_multiplicity(4, 2) == 9);
    CHECK_THROWS_AS(mode_multiplicity(3, -2), std::invalid_argument);

    SECTION("N=2 gives Fourier pairs")
    {
        for (int n = 1; n <= 20; ++n)
            CHECK(mode_multiplicity(2, n) == 2);
    }

    SECTION("positive for moderate N, n")
    {
        for (int N = 2; N <= 10; ++N)
            for (int n = 0; n <= 20; ++n)
                CHECK(mode_multiplicity(N, n) > 0);
    }

    SECTION("overflow detected, not wrapped")
    {
        CHECK_THROWS_AS(mode_multiplicity(64, 2000000000), std::overflow_error);
    }
}

TEST_CASE("volume density", "[geometry]")
{
    const ModelManifold h3 = hyperbolic(3);
    const ModelManifold e4 = euclidean(4);
    CHECK(h3.volume_density(1.0) == Approx(std::sinh(1.0) * std::sinh(1.0)).epsilon(1e-14));
    CHECK(e4.volume_density(2.0) == Approx(8.0).epsilon(1e-14));
    CHECK(h3.volume_density(0.0) == 0.0);
    CHECK(e4.volume_density(0.0) == 0.0);

    SECTION("hyperbolic over euclidean tends to 1 near the pole")
    {
        const double r = 1e-4;
        const double ratio = hyperbolic(5).volume_density(r) / euclidean(5).volume_density(r);
        CHECK(std::abs(ratio - 1.0) < 1e-6);
    }
}

TEST_CASE("coth r - 1/r series branch", "[geometry]")
{
    // Both branches agree around the switchover.
    for (double r : {0.8e-2, 0.9e-2, 1.0e-2, 1.1e-2, 2e-2}) {
        const double direct = 1.0 / std::tanh(r) - 1.0 / r;
        CHECK(coth_minus_inv(r) == Approx(direct).margin(1e-12));
    }
    // Leading behaviour r/3 near zero.
    CHECK(coth_minus_inv(1e-6) == Approx(1e-6 / 3.0).epsilon(1e-10));
    CHECK(coth_minus_inv(2.0) == Approx(1.0 / std::tanh(2.0) - 0.5).epsilon(1e-14));
}

TEST_CASE("custom manifold validation", "[geometry]")
{
    auto m = custom_manifold(3,
        [](double r) { return std::sinh(2.0 * r) / 2.0; },
        [](double r) { return std::cosh(2.0 * r); },
        [](double r) { return 2.0 * std::sinh(2.0 * r); },
        "sinh2r");
    CHECK(m.psi(1.0) == Approx(std::sinh(2.0) / 2.0));
    CHECK(m.log_deriv_minus_inv(1.0) ==
          Approx(2.0 / std::tanh(2.0) - 1.0).epsilon(1e-13));

    // psi'(0) != 1 is rejected.
    CHECK_THROWS_AS(custom_manifold(3,
        [](double r) { return 2.0 * r; },
        [](double) { return 2.0; },
        [](double) { return 0.0; }), std::invalid_argument);
}

TEST_CASE("integration domain invariants", "[geometry]")
{
    CHECK_NOTHROW(IntegrationDomain(0.0, 10.0, 5.0));
    CHECK_THROWS_AS(IntegrationDomain(5.0, 10.0, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(IntegrationDomain(0.0, 4.0, 5.0), std::invalid_argument);
}

#include "surfch/potential.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace surfch;

TEST_CASE("double well: minima, center value, nonnegativity")
{
    const PotentialParams p(1.1);
    CHECK(f0(1.0, p) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(f0(-1.0, p) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(f0(0.0, p) == doctest::Approx(0.25).epsilon(1e-15));

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> wide(-10.0, 10.0);
    for (int k = 0; k < 1000; ++k)
        CHECK(f0(wide(rng), p) >= 0.0);
}

TEST_CASE("branches join continuously at the cutoff")
{
    const double K = 1.1;
    const PotentialParams p(K);
    const double L = p.lipschitz;

    // evaluate both closed forms at c = K
    const double inner_f = 0.25 * (K * K - 1.0) * (K * K - 1.0);
    const double outer_f = 0.5 * L * K * K - 2.0 * K * K * K * K + 0.25 * (3.0 * K * K * K * K + 1.0);
    CHECK(inner_f == doctest::Approx(outer_f).epsilon(1e-13));
    CHECK(f0(K, p) == doctest::Approx(inner_f).epsilon(1e-13));

    const double inner_d = K * K * K - K;
    const double outer_d = L * K - 2.0 * K * K * K;
    CHECK(inner_d == doctest::Approx(outer_d).epsilon(1e-13));
    CHECK(df0(K, p) == doctest::Approx(inner_d).epsilon(1e-13));
    CHECK(df0(-K, p) == doctest::Approx(-inner_d).epsilon(1e-13));

    // second derivative is continuous too: 3K^2 - 1 = L on both sides
    CHECK(ddf0(K, p) == doctest::Approx(L).epsilon(1e-15));
    CHECK(ddf0(K + 1e-9, p) == L);

    // numeric continuity across the seam
    for (double seam : {K, -K}) {
        CHECK(std::abs(f0(seam - 1e-9, p) - f0(seam + 1e-9, p)) <= 1e-8);
        CHECK(std::abs(df0(seam - 1e-9, p) - df0(seam + 1e-9, p)) <= 1e-8);
    }
}

TEST_CASE("derivative: critical points and difference-quotient bounds")
{
    const PotentialParams p(1.1);
    const double L = p.lipschitz;
    CHECK(df0(1.0, p) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(df0(-1.0, p) == doctest::Approx(0.0).epsilon(1e-15));

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> wide(-5.0, 5.0);
    for (int k = 0; k < 100000; ++k) {
        const double x = wide(rng);
        double y = wide(rng);
        if (x == y)
            y += 1e-3;
        const double quotient = (df0(x, p) - df0(y, p)) / (x - y);
        CHECK(quotient >= -1.0 - 1e-12);
        CHECK(quotient <= L + 1e-12);
    }
}

TEST_CASE("growth bounds |df0(c)| <= L|c| and df0(c) c >= -c^2")
{
    const PotentialParams p(1.1);
    const double L = p.lipschitz;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> wide(-8.0, 8.0);
    for (int k = 0; k < 10000; ++k) {
        const double c = wide(rng);
        CHECK(std::abs(df0(c, p)) <= L * std::abs(c) + 1e-12);
        CHECK(df0(c, p) * c >= -c * c - 1e-12);
    }
}

TEST_CASE("second derivative: bounded by L, supremum attained outside the cutoff")
{
    const PotentialParams p(1.3);
    const double L = p.lipschitz;
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> wide(-6.0, 6.0);
    double largest = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const double d = std::abs(ddf0(wide(rng), p));
        CHECK(d <= L + 1e-15);
        largest = std::max(largest, d);
    }
    CHECK(ddf0(2.0 * p.K, p) == L);
    CHECK(largest == doctest::Approx(L).epsilon(1e-12));
}

TEST_CASE("parameter validation: K must exceed one")
{
    CHECK_THROWS_AS(PotentialParams(1.0), std::invalid_argument);
    CHECK_THROWS_AS(PotentialParams(0.5), std::invalid_argument);
    const PotentialParams p(1.1);
    CHECK(p.lipschitz == doctest::Approx(2.63).epsilon(1e-14));
    CHECK(p.lipschitz > 2.0);
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "vofde/errors.hpp"
#include "vofde/reference.hpp"
#include "vofde/special_functions.hpp"
#include "vofde/vo_core.hpp"

using namespace vofde;

TEST_CASE("grid uses the ceiling rule")
{
    CHECK(Grid::from_horizon(1.0, 0.001).N == 1000);
    CHECK(Grid::from_horizon(5.0, 0.001).N == 5000);
    CHECK(Grid::from_horizon(1.0, 0.3).N == 4);
    CHECK(Grid::from_horizon(0.5, 1.0).N == 1);
    CHECK(Grid::from_horizon(1.0, 0.004).N == 250);
    const Grid g = Grid::from_horizon(1.0, 0.25);
    CHECK(g.time(3) == 0.75);
    CHECK_THROWS_AS(Grid::from_horizon(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(Grid::from_horizon(-1.0, 0.1), DomainError);
}

TEST_CASE("velocity history derives means from endpoints")
{
    VelocityHistory hist(1.0);
    CHECK(hist.steps() == 0);
    hist.push(3.0);
    hist.push(-1.0);
    REQUIRE(hist.steps() == 2);
    CHECK(hist.mean(1) == 2.0);
    CHECK(hist.mean(2) == 1.0);
    CHECK(hist.velocity(0) == 1.0);
    CHECK(hist.velocities().size() == 3);
}

TEST_CASE("coefficient examples")
{
    SUBCASE("alpha near zero gives plain interval length")
    {
        for (std::size_t r = 1; r <= 7; ++r)
            CHECK(std::abs(coefficient(7, r, 0.01, 1e-12) - 0.01) <= 1e-9 * 0.01);
    }
    SUBCASE("last weight is h^{1-a}/Gamma(2-a)")
    {
        const double c = coefficient(5, 5, 0.01, 0.5);
        CHECK(c == doctest::Approx(0.11283791670955126).epsilon(1e-13));
        CHECK(c == doctest::Approx(oracle::coefficient_quadrature(5, 5, 0.01, 0.5)).epsilon(1e-10));
    }
    SUBCASE("first weight of the second row")
    {
        // (1/Γ(0.5)) ∫_0^0.1 (0.2-x)^{-1/2} dx = 2(√0.2 - √0.1)/√π
        const double c = coefficient(2, 1, 0.1, 0.5);
        CHECK(c == doctest::Approx(0.14780168117347779).epsilon(1e-13));
        CHECK(c == doctest::Approx(oracle::coefficient_quadrature(2, 1, 0.1, 0.5)).epsilon(1e-10));
    }
}

TEST_CASE("coefficient domain errors")
{
    for (double a : {0.0, 1.0, -0.1, 1.5, std::nan("")})
        CHECK_THROWS_AS(coefficient(3, 1, 0.1, a), OrderDomainError);
    CHECK_THROWS_AS(coefficient(3, 4, 0.1, 0.5), IndexError);
    CHECK_THROWS_AS(coefficient(3, 0, 0.1, 0.5), IndexError);
    CHECK_THROWS_AS(coefficient_row(0, 0.1, 0.5), IndexError);
    CHECK_THROWS_AS(coefficient_row(3, 0.1, 1.0), OrderDomainError);
}

TEST_CASE("coefficient rows")
{
    SUBCASE("single interval")
    {
        const CoefficientRow row = coefficient_row(1, 0.02, 0.3);
        REQUIRE(row.size() == 1);
        CHECK(row.at(1) == doctest::Approx(std::pow(0.02, 0.7) / std::tgamma(1.7)).epsilon(1e-14));
    }
    SUBCASE("telescoping row sum")
    {
        const CoefficientRow row = coefficient_row(3, 0.001, 0.3);
        double sum = 0.0;
        for (double c : row.c)
            sum += c;
        const double expected = std::pow(0.003, 0.7) / vofde::gamma(1.7);
        CHECK(std::abs(sum - expected) <= 1e-10 * expected);
    }
    SUBCASE("alpha near one keeps only the last weight")
    {
        const CoefficientRow row = coefficient_row(50, 0.01, 1.0 - 1e-12);
        CHECK(row.c.back() == doctest::Approx(1.0).epsilon(1e-9));
        for (std::size_t r = 0; r + 1 < row.size(); ++r) {
            CHECK(row.c[r] > 0.0);
            CHECK(row.c[r] < 1e-9);
        }
    }
}

TEST_CASE("property: closed form matches quadrature, positive, increasing, telescoping")
{
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = oracle::uniform_index(1, 20);
        const std::size_t r = oracle::uniform_index(1, n);
        const double h = oracle::uniform(1e-3, 0.5);
        const double alpha = oracle::uniform(0.05, 0.95);
        INFO("n=" << n << " r=" << r << " h=" << h << " alpha=" << alpha);
        const double closed = coefficient(n, r, h, alpha);
        const double quad = oracle::coefficient_quadrature(n, r, h, alpha);
        CHECK(closed > 0.0);
        CHECK(std::abs(closed - quad) <= 1e-9 * quad);

        const CoefficientRow row = coefficient_row(n, h, alpha);
        double sum = 0.0;
        for (std::size_t k = 0; k < row.size(); ++k) {
            sum += row.c[k];
            if (k > 0)
                CHECK(row.c[k] > row.c[k - 1]);
        }
        const double expected = std::pow(static_cast<double>(n) * h, 1.0 - alpha) / vofde::gamma(2.0 - alpha);
        CHECK(std::abs(sum - expected) <= 1e-10 * expected);
    }
}

TEST_CASE("vo_derivative_at")
{
    SUBCASE("constant function")
    {
        VelocityHistory hist(0.0);
        for (int k = 0; k < 10; ++k)
            hist.push(0.0);
        CHECK(vo_derivative_at(coefficient_row(10, 0.1, 0.4), hist) == 0.0);
    }
    SUBCASE("alpha near zero recovers u - u0 for u = t")
    {
        const double h = 0.01;
        VelocityHistory hist(1.0);
        for (std::size_t n = 1; n <= 100; ++n) {
            hist.push(1.0);
            const double d = vo_derivative_at(coefficient_row(n, h, 1e-12), hist);
            CHECK(std::abs(d - static_cast<double>(n) * h) <= 1e-6);
        }
    }
    SUBCASE("history shorter than the row")
    {
        VelocityHistory hist(0.0);
        hist.push(1.0);
        CHECK_THROWS_AS(vo_derivative_at(coefficient_row(2, 0.1, 0.5), hist), IndexError);
    }
}

namespace {

double example1_max_error(reference::Variant v, double h)
{
    const Grid grid = Grid::from_horizon(1.0, h);
    std::vector<double> udot(grid.N + 1);
    for (std::size_t n = 0; n <= grid.N; ++n)
        udot[n] = 2.0 * grid.time(n);
    const auto d = vo_derivative_series(
        udot, [v](double t) { return reference::example1_alpha(v, t); }, grid);
    double err = 0.0;
    for (std::size_t n = 1; n <= grid.N; ++n)
        err = std::max(err, std::abs(d[n] - reference::example1_exact_vofd(v, grid.time(n))));
    return err;
}

}  // namespace

TEST_CASE("vo_derivative_series on the t^2 benchmarks")
{
    const double err_i = example1_max_error(reference::Variant::i, 0.001);
    const double err_ii = example1_max_error(reference::Variant::ii, 0.001);
    CHECK(std::abs(err_i - 9.21514e-4) <= 0.5 * 9.21514e-4);
    CHECK(std::abs(err_ii - 4.62050e-5) <= 0.5 * 4.62050e-5);
    // Halving h shrinks the error.
    CHECK(example1_max_error(reference::Variant::ii, 0.002) >= 1.5 * err_ii);
}

TEST_CASE("vo_derivative_series on a linear function with constant order")
{
    const Grid grid = Grid::from_horizon(1.0, 0.01);
    const std::vector<double> udot(grid.N + 1, 1.0);
    const auto d = vo_derivative_series(udot, [](double) { return 0.5; }, grid);
    REQUIRE(d.size() == grid.N + 1);
    CHECK(d[0] == 0.0);
    for (std::size_t n = 1; n <= grid.N; ++n) {
        const double exact = std::sqrt(grid.time(n)) / std::tgamma(1.5);
        CHECK(std::abs(d[n] - exact) <= 1e-12);
    }
}

TEST_CASE("vo_derivative_series errors and trivial input")
{
    const Grid grid = Grid::from_horizon(1.0, 0.1);
    const std::vector<double> zeros(grid.N + 1, 0.0);
    for (double x : vo_derivative_series(zeros, [](double) { return 0.3; }, grid))
        CHECK(x == 0.0);

    CHECK_THROWS_AS(vo_derivative_series(std::vector<double>(3, 0.0), [](double) { return 0.3; }, grid),
                    IndexError);
    try {
        vo_derivative_series(zeros, [](double t) { return t > 0.45 ? 1.2 : 0.5; }, grid);
        FAIL("expected an order-domain error");
    } catch (const OrderDomainError& e) {
        CHECK(std::string(e.what()).find("node 5") != std::string::npos);
        CHECK(e.alpha() == 1.2);
    }
}

TEST_CASE("property: limit laws of the discrete derivative")
{
    const Grid grid = Grid::from_horizon(1.0, 1e-3);
    std::vector<double> udot(grid.N + 1);
    for (std::size_t n = 0; n <= grid.N; ++n)
        udot[n] = std::cos(grid.time(n));

    SUBCASE("alpha -> 0 is the trapezoidal integral")
    {
        const auto d = vo_derivative_series(udot, [](double) { return 1e-12; }, grid);
        const auto trap = oracle::cumulative_trapezoid(udot, grid.h);
        for (std::size_t n = 1; n <= grid.N; ++n)
            CHECK(std::abs(d[n] - trap[n]) <= 1e-9 * std::abs(trap[n]));
    }
    SUBCASE("alpha -> 1 is the mean velocity")
    {
        const auto d = vo_derivative_series(udot, [](double) { return 1.0 - 1e-12; }, grid);
        for (std::size_t n = 1; n <= grid.N; ++n)
            CHECK(std::abs(d[n] - 0.5 * (udot[n - 1] + udot[n])) <= 1e-6);
    }
}

TEST_CASE("caputo quadrature oracle")
{
    CHECK(caputo_quadrature_oracle([](double) { return 0.0; }, 0.4, 1.0) == 0.0);
    // D^{1/2} t² at t = 1 = 2/Γ(2.5)
    CHECK(caputo_quadrature_oracle([](double x) { return 2.0 * x; }, 0.5, 1.0) ==
          doctest::Approx(1.5045055561273501).epsilon(1e-12));
    const double a = 1.0 - std::exp(-1.0);
    CHECK(caputo_quadrature_oracle([](double x) { return 2.0 * x; }, a, 1.0) ==
          doctest::Approx(1.6437697140691001).epsilon(1e-11));
    CHECK_THROWS_AS(caputo_quadrature_oracle([](double x) { return x; }, 0.5, 0.0), DomainError);
    CHECK_THROWS_AS(caputo_quadrature_oracle([](double x) { return x; }, 0.5, 1.0, 1e-14), DomainError);
    CHECK_THROWS_AS(caputo_quadrature_oracle([](double x) { return x; }, 1.0, 1.0), OrderDomainError);
    // Near-non-integrable spike: the bisection runs into its depth limit.
    CHECK_THROWS_AS(caputo_quadrature_oracle([](double x) { return std::pow(std::abs(x - 0.3), -0.97); },
                                             0.5, 1.0),
                    ConvergenceError);
    CHECK_THROWS_AS(caputo_quadrature_oracle([](double) { return std::nan(""); }, 0.5, 1.0),
                    ConvergenceError);
}

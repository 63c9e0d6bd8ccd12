#include <doctest.h>

#include <cmath>
#include <limits>

#include "vofde/errors.hpp"
#include "vofde/model.hpp"
#include "vofde/reference.hpp"

using namespace vofde;

namespace {

OscillatorProblem constant_problem(double a1, double a2, double a3, double p, double u0, double v0)
{
    OscillatorProblem prob;
    prob.a1 = OscillatorProblem::constant(a1);
    prob.a2 = OscillatorProblem::constant(a2);
    prob.a3 = OscillatorProblem::constant(a3);
    prob.p = OscillatorProblem::constant(p);
    prob.alpha = AlphaSpec::constant(0.5);
    prob.u0 = u0;
    prob.v0 = v0;
    prob.grid = Grid::from_horizon(1.0, 0.1);
    return prob;
}

}  // namespace

TEST_CASE("initial acceleration")
{
    CHECK(initial_acceleration(reference::make_scenario("ex2i", 1e-3).problem) == -25.0);
    CHECK(initial_acceleration(constant_problem(1.0, 0.3, 4.0, 0.0, 0.0, 2.0)) == 0.0);
    CHECK(initial_acceleration(reference::make_scenario("ex5", 1e-3).problem) ==
          doctest::Approx(1.0).epsilon(1e-14));
    // Duffing: u0 = 0, p(0) = 2
    CHECK(initial_acceleration(reference::make_scenario("ex4", 1e-3).problem) == 2.0);

    CHECK_THROWS_AS(initial_acceleration(constant_problem(0.0, 1.0, 1.0, 1.0, 1.0, 0.0)),
                    DegenerateProblemError);
}

TEST_CASE("nonlinear term enters the initial acceleration")
{
    OscillatorProblem prob = constant_problem(2.0, 0.0, 1.0, 0.0, 1.0, 0.0);
    prob.f_nl = [](double u, double) { return u * u * u; };
    CHECK(initial_acceleration(prob) == -1.0);
}

TEST_CASE("order function range check raises instead of clamping")
{
    const AlphaSpec a = AlphaSpec::state_dependent([](double, double u, double) { return u; });
    CHECK(a(0.0, 0.5, 0.0) == 0.5);
    CHECK_THROWS_AS(a(0.0, 1.0, 0.0), OrderDomainError);
    CHECK_THROWS_AS(a(0.0, 0.0, 0.0), OrderDomainError);
    CHECK_THROWS_AS(a(0.0, -0.2, 0.0), OrderDomainError);
    CHECK_THROWS_AS(a(0.0, std::nan(""), 0.0), OrderDomainError);
    CHECK(a.raw(0.0, 1.5, 0.0) == 1.5);
    CHECK(a.kind() == OrderDependence::StateDependent);

    const AlphaSpec t_only = AlphaSpec::time_only([](double t) { return 0.2 + 0.1 * t; });
    CHECK(t_only.time_only());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK(t_only(1.0, nan, nan) == doctest::Approx(0.3));
    CHECK(t_only(1.0, 7.0, -3.0) == t_only(1.0, nan, nan));
}

TEST_CASE("problem validation")
{
    OscillatorProblem prob = constant_problem(1.0, 1.0, 1.0, 0.0, 0.0, 0.0);
    CHECK_NOTHROW(validate(prob));
    prob.p = nullptr;
    CHECK_THROWS_AS(validate(prob), DegenerateProblemError);
    prob = constant_problem(1.0, 1.0, 1.0, 0.0, 0.0, 0.0);
    prob.alpha = AlphaSpec{};
    CHECK_THROWS_AS(validate(prob), DegenerateProblemError);
}

TEST_CASE("trace keeps means consistent with endpoint velocities")
{
    const OscillatorProblem prob = constant_problem(1.0, 1.0, 1.0, 0.0, 1.0, 2.0);
    SolutionTrace tr = start_trace(prob, -1.0, 0.5);
    tr.append(0.1, StepState{0.5, 3.0, 1.2}, 0.5);
    tr.append(0.2, StepState{0.25, -1.0, 1.3}, 0.5);
    REQUIRE(tr.size() == 3);
    REQUIRE(tr.history.steps() == 2);
    for (std::size_t r = 1; r < tr.size(); ++r)
        CHECK(tr.history.mean(r) == 0.5 * (tr.udot[r - 1] + tr.udot[r]));
    CHECK(tr.state(1).q == 0.5);
    CHECK(residual_scale(0.0, 0.0) == 1.0);
    CHECK(residual_scale(-3.0, 2.0) == 3.0);
}

#include "vofde/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vofde/errors.hpp"
#include "text.hpp"

namespace vofde {

AlphaSpec AlphaSpec::time_only(std::function<double(double)> fn)
{
    return AlphaSpec(OrderDependence::TimeOnly,
                     [fn = std::move(fn)](double t, double, double) { return fn(t); });
}

AlphaSpec AlphaSpec::state_dependent(Fn fn)
{
    return AlphaSpec(OrderDependence::StateDependent, std::move(fn));
}

AlphaSpec AlphaSpec::constant(double value)
{
    return time_only([value](double) { return value; });
}

double AlphaSpec::operator()(double t, double u, double udot) const
{
    const double a = fn_(t, u, udot);
    if (!(a > 0.0 && a < 1.0)) {
        std::string where = "t=" + detail::str(t);
        if (kind_ == OrderDependence::StateDependent)
            where += " u=" + detail::str(u) + " udot=" + detail::str(udot);
        throw OrderDomainError("order " + detail::str(a) + " outside (0, 1) at " + where, a);
    }
    return a;
}

OscillatorProblem::Coefficient OscillatorProblem::constant(double value)
{
    return [value](double) { return value; };
}

void SolutionTrace::append(double time, const StepState& s, double alpha)
{
    t.push_back(time);
    u.push_back(s.u);
    udot.push_back(s.udot);
    uddot.push_back(s.q);
    alpha_used.push_back(alpha);
    history.push(s.udot);
}

SolutionTrace start_trace(const OscillatorProblem& problem, double q0, double alpha0)
{
    SolutionTrace trace;
    const std::size_t nodes = problem.grid.N + 1;
    trace.t.reserve(nodes);
    trace.u.reserve(nodes);
    trace.udot.reserve(nodes);
    trace.uddot.reserve(nodes);
    trace.alpha_used.reserve(nodes);
    trace.t.push_back(0.0);
    trace.u.push_back(problem.u0);
    trace.udot.push_back(problem.v0);
    trace.uddot.push_back(q0);
    trace.alpha_used.push_back(alpha0);
    trace.history = VelocityHistory(problem.v0);
    return trace;
}

void validate(const OscillatorProblem& problem)
{
    if (!problem.a1 || !problem.a2 || !problem.a3 || !problem.p)
        throw DegenerateProblemError("problem: coefficient functions a1, a2, a3 and p are required");
    if (!problem.alpha)
        throw DegenerateProblemError("problem: order function is not set");
    if (problem.grid.N == 0 || !(problem.grid.h > 0.0))
        throw DegenerateProblemError("problem: grid is empty");
}

double initial_acceleration(const OscillatorProblem& problem)
{
    validate(problem);
    const double a1 = problem.a1(0.0);
    if (a1 == 0.0 || !std::isfinite(a1))
        throw DegenerateProblemError("initial_acceleration: a1(0) must be finite and non-zero");
    return (problem.p(0.0) - problem.a3(0.0) * problem.u0 -
            problem.restoring(problem.u0, problem.v0)) /
           a1;
}

double residual_scale(double p_n, double a3u_n)
{
    return std::max({1.0, std::abs(p_n), std::abs(a3u_n)});
}

double discrete_residual(const OscillatorProblem& problem, const SolutionTrace& trace,
                         std::size_t n)
{
    if (n == 0 || n >= trace.size())
        throw IndexError("discrete_residual: node " + detail::str(n) + " out of range");
    const double tn = trace.t[n];
    const CoefficientRow row = coefficient_row(n, problem.grid.h, trace.alpha_used[n]);
    const double d = history_sum(row, trace.history.means(), n);
    return problem.a1(tn) * trace.uddot[n] + problem.a2(tn) * d + problem.a3(tn) * trace.u[n] +
           problem.restoring(trace.u[n], trace.udot[n]) - problem.p(tn);
}

double max_scaled_residual(const OscillatorProblem& problem, const SolutionTrace& trace)
{
    double worst = 0.0;
    for (std::size_t n = 1; n < trace.size(); ++n) {
        const double tn = trace.t[n];
        const double scale = residual_scale(problem.p(tn), problem.a3(tn) * trace.u[n]);
        worst = std::max(worst, std::abs(discrete_residual(problem, trace, n)) / scale);
    }
    return worst;
}

}  // namespace vofde

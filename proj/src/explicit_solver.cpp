#include "vofde/explicit_solver.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "vofde/errors.hpp"
#include "text.hpp"
#include "vofde/stability.hpp"

namespace vofde {

namespace {

constexpr double kMaxCondition = 1e14;

}  // namespace

StepMatrices step_operators(std::size_t n, const OscillatorProblem& problem, double c_last,
                            double c_prev)
{
    const double h = problem.grid.h;
    const double tn = problem.grid.time(n);
    const double a1 = problem.a1(tn);
    const double a2 = problem.a2(tn);
    const double a3 = problem.a3(tn);
    if (a1 == 0.0 || !std::isfinite(a1))
        throw DegenerateProblemError("a1(t) vanishes or is not finite at step " +
                                     detail::str(n) + " (t=" + detail::str(tn) + ")");
    const double c1 = 0.5 * h * h;
    const double c2 = h;

    StepMatrices m;
    m.L = Mat3{Vec3{a1, 0.5 * a2 * c_last, a3},
               Vec3{0.5 * c1, -h, 1.0},
               Vec3{-0.5 * c2, 1.0, 0.0}};
    m.R = Mat3{Vec3{0.0, -a2 * 0.5 * (c_prev + c_last), 0.0},
               Vec3{-0.5 * c1, 0.0, 1.0},
               Vec3{0.5 * c2, 1.0, 0.0}};
    return m;
}

StepMatrices build_step(std::size_t n, const OscillatorProblem& problem,
                        const CoefficientRow& row, const VelocityHistory& hist)
{
    if (n == 0 || row.n != n || row.size() != n)
        throw IndexError("build_step: row does not belong to step " + detail::str(n));
    if (hist.steps() + 1 < n)
        throw IndexError("build_step: history too short for step " + detail::str(n));

    const double c_last = row.c[n - 1];
    const double c_prev = n >= 2 ? row.c[n - 2] : 0.0;
    StepMatrices m = step_operators(n, problem, c_last, c_prev);

    const double tn = problem.grid.time(n);
    double memory = 0.0;
    if (n >= 2) {
        if (n > 2)
            memory = history_sum(row, hist.means(), n - 2);
        memory += 0.5 * c_prev * hist.velocity(n - 2);
    }
    m.g = problem.p(tn) - problem.a2(tn) * memory;
    return m;
}

StepState solve_step(std::size_t n, const StepMatrices& mats, const StepState& prev)
{
    const Lu3 lu(mats.L);
    const double cond = lu.condition_inf();
    if (!(cond <= kMaxCondition))
        throw StepFailure("step " + detail::str(n) + ": step matrix is singular (condition " +
                              detail::str(cond) + ")",
                          n);
    Vec3 rhs = multiply(mats.R, Vec3{prev.q, prev.udot, prev.u});
    rhs[0] += mats.g;
    const Vec3 x = lu.solve(rhs);
    if (!(std::isfinite(x[0]) && std::isfinite(x[1]) && std::isfinite(x[2])))
        throw StepFailure("step " + detail::str(n) + ": non-finite solution", n);
    return StepState{x[0], x[1], x[2]};
}

SolutionTrace solve_explicit(const OscillatorProblem& problem, const ExplicitOptions& options)
{
    validate(problem);
    if (!problem.alpha.time_only())
        throw DegenerateProblemError(
            "solve_explicit: order depends on the state; use the implicit solver");
    if (!problem.linear())
        throw DegenerateProblemError(
            "solve_explicit: nonlinear restoring term requires the implicit solver");

    const double nan = std::numeric_limits<double>::quiet_NaN();
    const Grid& grid = problem.grid;
    const double q0 = initial_acceleration(problem);
    SolutionTrace trace = start_trace(problem, q0, problem.alpha.raw(0.0, nan, nan));
    if (options.record_spectral_radius) {
        trace.rho.reserve(grid.N + 1);
        trace.rho.push_back(nan);
    }

    StepState prev{q0, problem.v0, problem.u0};
    for (std::size_t n = 1; n <= grid.N; ++n) {
        const double tn = grid.time(n);
        // A time-only order ignores the state; NaN exposes a mislabelled one
        // through the range check.
        double alpha;
        try {
            alpha = problem.alpha(tn, nan, nan);
        } catch (const OrderDomainError& e) {
            throw OrderDomainError(std::string(e.what()) + " (step " + detail::str(n) + ")", e.alpha());
        }
        const CoefficientRow row = coefficient_row(n, grid.h, alpha);
        const StepMatrices mats = build_step(n, problem, row, trace.history);
        const StepState next = solve_step(n, mats, prev);
        trace.append(tn, next, alpha);
        if (options.record_spectral_radius)
            trace.rho.push_back(spectral_radius(Lu3(mats.L).solve(mats.R)));
        prev = next;
    }
    return trace;
}

}  // namespace vofde

#include "vofde/implicit_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "text.hpp"

namespace vofde {

void RootSolveConfig::validate() const
{
    if (!(tol_q > 0.0) || !(tol_res > 0.0))
        throw DomainError("RootSolveConfig: tolerances must be positive");
    if (max_iters < 2)
        throw DomainError("RootSolveConfig: max_iters must be at least 2");
}

StepState state_from_q(double q_n, const StepState& prev, double h)
{
    const double qsum = q_n + prev.q;
    const double udot = prev.udot + 0.5 * h * qsum;
    const double u = prev.u + h * udot - 0.25 * h * h * qsum;
    return StepState{q_n, udot, u};
}

StepResidual::StepResidual(std::size_t n, const OscillatorProblem& problem, const StepState& prev,
                           const VelocityHistory& hist)
    : n_(n), problem_(problem), prev_(prev), hist_(hist), tn_(problem.grid.time(n))
{
    if (n == 0)
        throw IndexError("residual: step index must be >= 1");
    if (hist.steps() + 1 != n)
        throw IndexError("residual: history holds " + detail::str(hist.steps()) +
                         " steps, step " + detail::str(n) + " needs " + detail::str(n - 1));
    a1_ = problem.a1(tn_);
    a2_ = problem.a2(tn_);
    a3_ = problem.a3(tn_);
    p_ = problem.p(tn_);
}

ResidualValue StepResidual::operator()(double q_n)
{
    ++evaluations_;
    const StepState s = state_from_q(q_n, prev_, problem_.grid.h);
    double alpha;
    try {
        alpha = problem_.alpha(tn_, s.u, s.udot);
    } catch (const OrderDomainError& e) {
        throw OrderDomainError(std::string(e.what()) + " (step " + detail::str(n_) +
                                   ", trial q=" + detail::str(q_n) + ")",
                               e.alpha());
    }
    if (!have_row_ || std::abs(alpha - row_.alpha) >= 1e-14) {
        row_ = coefficient_row(n_, problem_.grid.h, alpha);
        memory_ = history_sum(row_, hist_.means(), n_ - 1);
        have_row_ = true;
        ++row_builds_;
    }
    const double last_mean = 0.5 * (prev_.udot + s.udot);
    const double d = memory_ + row_.c[n_ - 1] * last_mean;
    const double value =
        a1_ * q_n + a2_ * d + a3_ * s.u + problem_.restoring(s.u, s.udot) - p_;
    return ResidualValue{value, row_.alpha, s, residual_scale(p_, a3_ * s.u)};
}

double residual(double q_n, std::size_t n, const OscillatorProblem& problem, const StepState& prev,
                const VelocityHistory& hist)
{
    StepResidual f(n, problem, prev, hist);
    return f(q_n).value;
}

namespace {

bool converged(const ResidualValue& r, const RootSolveConfig& cfg)
{
    return std::abs(r.value) <= cfg.tol_res * r.scale;
}

StepResult accept(const ResidualValue& r, int iterations)
{
    return StepResult{r.state, r.alpha, r.value, iterations};
}

bool opposite(double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

}  // namespace

StepResult solve_step_nonlinear(std::size_t n, const OscillatorProblem& problem,
                                const StepState& prev, const VelocityHistory& hist,
                                const RootSolveConfig& cfg)
{
    cfg.validate();
    StepResidual f(n, problem, prev, hist);

    double x0 = prev.q;
    ResidualValue r0 = f(x0);
    if (!std::isfinite(r0.value))
        throw StepFailure("step " + detail::str(n) + ": non-finite residual at q=" +
                              detail::str(x0),
                          n);
    if (converged(r0, cfg))
        return accept(r0, 1);

    double x1 = prev.q * (1.0 + 1e-6) + 1e-6;
    ResidualValue r1 = f(x1);
    int iterations = 2;

    // Bracket [lo, hi] with residuals of opposite sign, once one is seen.
    std::optional<std::pair<double, double>> bracket;
    double f_lo = 0.0;
    if (opposite(r0.value, r1.value)) {
        bracket = std::minmax(x0, x1);
        f_lo = x0 < x1 ? r0.value : r1.value;
    }

    while (true) {
        if (!std::isfinite(r1.value))
            throw StepFailure("step " + detail::str(n) + ": non-finite residual at q=" +
                                  detail::str(x1),
                              n);
        if (converged(r1, cfg))
            return accept(r1, iterations);
        if (iterations >= cfg.max_iters)
            break;

        const double df = r1.value - r0.value;
        double x2 = df != 0.0 ? x1 - r1.value * (x1 - x0) / df
                              : std::numeric_limits<double>::quiet_NaN();
        if (bracket) {
            const auto [lo, hi] = *bracket;
            if (!std::isfinite(x2) || !(x2 > lo && x2 < hi))
                x2 = 0.5 * (lo + hi);
        } else if (!std::isfinite(x2)) {
            throw StepFailure("step " + detail::str(n) +
                                  ": residual is flat in q, secant step undefined at q=" +
                                  detail::str(x1),
                              n);
        }
        if (std::abs(x2 - x1) <= cfg.tol_q * std::max(1.0, std::abs(x1)))
            throw StepFailure("step " + detail::str(n) + ": iteration stagnated at q=" +
                                  detail::str(x1) + " with residual " +
                                  detail::str(r1.value),
                              n);

        ResidualValue r2 = f(x2);
        ++iterations;

        if (bracket) {
            auto& [lo, hi] = *bracket;
            if (opposite(r2.value, f_lo)) {
                hi = x2;
            } else {
                lo = x2;
                f_lo = r2.value;
            }
        } else if (opposite(r2.value, r1.value)) {
            bracket = std::minmax(x1, x2);
            f_lo = x1 < x2 ? r1.value : r2.value;
        }
        x0 = x1;
        r0 = r1;
        x1 = x2;
        r1 = r2;
    }
    throw StepFailure("step " + detail::str(n) + ": no convergence after " +
                          detail::str(cfg.max_iters) + " iterations, last q=" +
                          detail::str(x1) + " residual " + detail::str(r1.value),
                      n);
}

SolutionTrace solve_implicit(const OscillatorProblem& problem, const RootSolveConfig& cfg)
{
    validate(problem);
    cfg.validate();
    const Grid& grid = problem.grid;
    const double q0 = initial_acceleration(problem);
    SolutionTrace trace = start_trace(problem, q0, problem.alpha.raw(0.0, problem.u0, problem.v0));
    trace.iterations.reserve(grid.N + 1);
    trace.iterations.push_back(0);

    StepState prev{q0, problem.v0, problem.u0};
    for (std::size_t n = 1; n <= grid.N; ++n) {
        StepResult step;
        try {
            step = solve_step_nonlinear(n, problem, prev, trace.history, cfg);
        } catch (const StepFailure& e) {
            throw ImplicitSolveError(e.what(), n, std::make_shared<const SolutionTrace>(trace));
        } catch (const OrderDomainError& e) {
            throw ImplicitSolveError(e.what(), n, std::make_shared<const SolutionTrace>(trace));
        }
        trace.append(grid.time(n), step.state, step.alpha);
        trace.iterations.push_back(step.iterations);
        prev = step.state;
    }
    return trace;
}

}  // namespace vofde

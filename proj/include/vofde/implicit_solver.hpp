#pragma once

// Solver for orders that depend on the state (α(t, u, u̇)) and for nonlinear
// restoring terms. The trapezoidal relations give u̇_n and u_n as affine
// functions of q_n, which turns each step into a scalar equation in q_n:
//
//   a1 q_n + a2 Σ_r c_r^n(α*) u̇_r^m + a3 u_n + f(u_n, u̇_n) - p_n = 0,
//   α* = α(t_n, u_n(q_n), u̇_n(q_n)).

#include <cstddef>
#include <memory>
#include <string>

#include "vofde/errors.hpp"
#include "vofde/model.hpp"
#include "vofde/vo_core.hpp"

namespace vofde {

struct RootSolveConfig {
    /// Minimum relative change in q_n; below it the iteration has stagnated.
    double tol_q = 1e-14;
    /// Residual tolerance relative to max(1, |p_n|, |a3 u_n|).
    double tol_res = 1e-10;
    int max_iters = 50;

    /// Throws DomainError for non-positive tolerances or max_iters < 2.
    void validate() const;
};

/// (u̇_n, u_n) from q_n:
///   u̇_n = u̇_{n-1} + (h/2)(q_n + q_{n-1})
///   u_n = u_{n-1} + h u̇_n - (h²/4)(q_n + q_{n-1})
StepState state_from_q(double q_n, const StepState& prev, double h);

struct ResidualValue {
    double value = 0.0;
    /// Order the coefficient row was built with.
    double alpha = 0.0;
    StepState state;
    /// max(1, |p_n|, |a3 u_n|)
    double scale = 1.0;
};

/// Residual of step n as a function of the trial q_n. The coefficient row is
/// rebuilt whenever α* moves by 1e-14 or more since the previous evaluation.
class StepResidual {
public:
    /// `hist` must hold the n-1 completed steps and outlive this object.
    StepResidual(std::size_t n, const OscillatorProblem& problem, const StepState& prev,
                 const VelocityHistory& hist);

    ResidualValue operator()(double q_n);

    std::size_t evaluations() const noexcept { return evaluations_; }
    std::size_t row_builds() const noexcept { return row_builds_; }

private:
    std::size_t n_;
    const OscillatorProblem& problem_;
    StepState prev_;
    const VelocityHistory& hist_;
    double tn_;
    double a1_;
    double a2_;
    double a3_;
    double p_;
    CoefficientRow row_;
    double memory_ = 0.0;  // Σ_{r<n} c_r^n u̇_r^m for row_
    bool have_row_ = false;
    std::size_t evaluations_ = 0;
    std::size_t row_builds_ = 0;
};

/// One-shot residual evaluation.
double residual(double q_n, std::size_t n, const OscillatorProblem& problem, const StepState& prev,
                const VelocityHistory& hist);

struct StepResult {
    StepState state;
    double alpha = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

/// Secant iteration on the step residual, started at q_{n-1}, with bisection
/// whenever a sign change is bracketed and the secant step leaves the bracket.
/// Throws StepFailure on non-convergence and OrderDomainError when a trial
/// state drives the order out of (0, 1).
StepResult solve_step_nonlinear(std::size_t n, const OscillatorProblem& problem,
                                const StepState& prev, const VelocityHistory& hist,
                                const RootSolveConfig& cfg = {});

/// Step failure during solve_implicit; holds the trace up to the last
/// completed step.
class ImplicitSolveError : public StepFailure {
public:
    ImplicitSolveError(const std::string& what, std::size_t step,
                       std::shared_ptr<const SolutionTrace> partial)
        : StepFailure(what, step), partial_(std::move(partial)) {}

    const SolutionTrace& partial() const noexcept { return *partial_; }

private:
    std::shared_ptr<const SolutionTrace> partial_;
};

SolutionTrace solve_implicit(const OscillatorProblem& problem, const RootSolveConfig& cfg = {});

}  // namespace vofde

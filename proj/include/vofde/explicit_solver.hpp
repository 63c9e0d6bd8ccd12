#pragma once

// Step-by-step solver for the linear equation with a time-only order.
// Each step solves the 3×3 system
//
//   [ a1        a2 c_n/2   a3 ] [q_n ]   [ 0     -a2 (c_{n-1}+c_n)/2  0 ] [q_{n-1} ]   [g_n]
//   [ h²/4      -h         1  ] [u̇_n ] = [ -h²/4  0                   1 ] [u̇_{n-1}] + [ 0 ]
//   [ -h/2      1          0  ] [u_n ]   [ h/2    1                   0 ] [u_{n-1} ]   [ 0 ]
//
// with c_r = c_r^n and g_n = p_n - a2 [Σ_{r=1}^{n-2} c_r u̇_r^m + (c_{n-1}/2) u̇_{n-2}].

#include <cstddef>

#include "vofde/mat3.hpp"
#include "vofde/model.hpp"
#include "vofde/vo_core.hpp"

namespace vofde {

struct StepMatrices {
    Mat3 L{};
    Mat3 R{};
    double g = 0.0;
};

/// L and R for step n given c_n^n and c_{n-1}^n (pass 0 for n = 1); g is 0.
/// Throws DegenerateProblemError if a1(t_n) = 0.
StepMatrices step_operators(std::size_t n, const OscillatorProblem& problem, double c_last,
                            double c_prev);

/// Full step system for step n. `hist` must hold the n-1 completed steps.
StepMatrices build_step(std::size_t n, const OscillatorProblem& problem,
                        const CoefficientRow& row, const VelocityHistory& hist);

/// Solves L x = R prev + [g, 0, 0]ᵀ. Throws StepFailure (carrying n) when L is
/// singular or its condition estimate exceeds 1e14.
StepState solve_step(std::size_t n, const StepMatrices& mats, const StepState& prev);

struct ExplicitOptions {
    /// Record ρ(L⁻¹R) per step in SolutionTrace::rho.
    bool record_spectral_radius = false;
};

/// Solves a linear problem whose order depends on t only. Throws
/// DegenerateProblemError for a state-dependent order or a nonlinear term.
SolutionTrace solve_explicit(const OscillatorProblem& problem, const ExplicitOptions& options = {});

}  // namespace vofde

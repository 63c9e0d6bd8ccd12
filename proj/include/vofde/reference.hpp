#pragma once

// Ground truth for the benchmark scenarios: exact VO derivatives, limit
// solutions, manufactured forcings, an integer-order ODE oracle, and the
// named scenario registry shared by the CLI and the tests.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vofde/model.hpp"

namespace vofde::reference {

enum class Variant { i, ii };

/// Order of the t² derivative benchmarks: (50t+49)/100 for i, 1 - e^{-t} for ii.
double example1_alpha(Variant v, double t);

/// Exact D^{α(t)} t² for t > 0, i.e. 2 t^{2-α} / Γ(3-α). Throws DomainError for
/// t <= 0.
double example1_exact_vofd(Variant v, double t);

/// Linear oscillator data with a1 = 1, a2 = 2ξω, a3 = ω².
struct OscillatorParams {
    double xi = 0.1;
    double omega = 5.0;
    double u0 = 1.0;
    double v0 = 10.0;

    double a1() const { return 1.0; }
    double a2() const { return 2.0 * xi * omega; }
    double a3() const { return omega * omega; }
};

/// Limit solutions of the linear oscillator with p = 0:
///   i : order -> 1, ü + 2ξω u̇ + ω² u = 0 (underdamped, ξ < 1)
///   ii: order -> 0, a1 ü + (a2 + a3) u = a2 u0
double example2_exact_limits(Variant v, double t, const OscillatorParams& params);

/// Duffing forcing for which u = t² solves ü + 0.2 D^{1-e^{-t}} u + u + u³ = p.
double example4_forcing(double t);

/// Forcing for which u = e^t solves
///   (1+t²) ü + 0.1 √t D^{α} u + (10 + e^{-t}) u = p,  α = 1 - 0.5 e^{-t}.
/// Uses D^α e^t = e^t γ(1-α, t) / Γ(1-α).
double example5_forcing(double t);

/// Second-order integer ODE ü = rhs(t, u, u̇).
using SecondOrderRhs = std::function<double(double t, double u, double udot)>;

/// Adaptive Runge–Kutta–Fehlberg 7(8) solution sampled at increasing,
/// non-negative times. Throws ConvergenceError if the integrator cannot hold
/// the tolerance, DomainError for unsorted samples or tol <= 0.
std::vector<double> ode_limit_oracle(const SecondOrderRhs& rhs, double u0, double v0,
                                     std::span<const double> t_samples, double tol = 1e-10);

enum class ScenarioKind {
    /// Discrete VO derivative of a known function; no equation is solved.
    Derivative,
    /// Oscillator problem solved by one of the step solvers.
    Oscillator,
};

using ScalarFn = std::function<double(double)>;

struct Scenario {
    std::string name;
    std::string source;
    ScenarioKind kind = ScenarioKind::Oscillator;
    OscillatorProblem problem;
    /// Exact solution (and derivatives) of the VO equation itself.
    ScalarFn exact_u;
    ScalarFn exact_udot;
    ScalarFn exact_uddot;
    /// Exact VO derivative, Derivative scenarios only.
    ScalarFn exact_vofd;
    /// Integer-order limit solution the run should approach (not exact).
    ScalarFn limit_u;

    bool has_ground_truth() const { return static_cast<bool>(exact_u) || static_cast<bool>(exact_vofd); }
    /// Explicit solver applies: time-only order and no nonlinear term.
    bool explicit_solvable() const { return problem.alpha.time_only() && problem.linear(); }
};

struct ScenarioInfo {
    std::string name;
    std::string description;
    double horizon;
};

/// Registry in listing order.
const std::vector<ScenarioInfo>& scenario_registry();

/// Builds the named scenario on a grid of step h over its horizon. Throws
/// DomainError for an unknown name.
Scenario make_scenario(const std::string& name, double h);

/// Linear oscillator with order d - k·e^{-t}, p = 0, horizon T.
Scenario make_exp_order_oscillator(const std::string& name, const OscillatorParams& params,
                                   std::function<double(double)> alpha, double T, double h);

/// Oscillator with order d - k·tanh|u̇|, p = 0, horizon T.
Scenario make_velocity_order_oscillator(const std::string& name, const OscillatorParams& params,
                                        double d, double k, double T, double h);

/// a1 ü_ex + a2 D^{α}u_ex + a3 u_ex + f(u_ex, u̇_ex) - p at time t, with the VO
/// term from the quadrature oracle. Requires exact_u, exact_udot, exact_uddot.
double manufactured_residual(const Scenario& s, double t, double tol = 1e-12);

}  // namespace vofde::reference

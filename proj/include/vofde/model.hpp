#pragma once

// Problem and result types shared by the explicit and implicit solvers for
//   a1(t) ü + a2(t) D^{α} u + a3(t) u + f(u, u̇) = p(t),  u(0) = u0, u̇(0) = v0.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "vofde/vo_core.hpp"

namespace vofde {

enum class OrderDependence { TimeOnly, StateDependent };

/// The order function α(t, u, u̇). Evaluation through operator() checks that
/// the value lies in (0, 1) and throws OrderDomainError otherwise; it never
/// clamps.
class AlphaSpec {
public:
    using Fn = std::function<double(double t, double u, double udot)>;

    AlphaSpec() = default;

    static AlphaSpec time_only(std::function<double(double)> fn);
    static AlphaSpec state_dependent(Fn fn);
    static AlphaSpec constant(double value);

    OrderDependence kind() const noexcept { return kind_; }
    bool time_only() const noexcept { return kind_ == OrderDependence::TimeOnly; }
    explicit operator bool() const noexcept { return static_cast<bool>(fn_); }

    double operator()(double t, double u, double udot) const;

    /// Unchecked value, for diagnostics and the unused order at t = 0.
    double raw(double t, double u, double udot) const { return fn_(t, u, udot); }

private:
    AlphaSpec(OrderDependence kind, Fn fn) : kind_(kind), fn_(std::move(fn)) {}

    OrderDependence kind_ = OrderDependence::TimeOnly;
    Fn fn_;
};

struct OscillatorProblem {
    using Coefficient = std::function<double(double)>;
    using Restoring = std::function<double(double u, double udot)>;

    Coefficient a1;
    Coefficient a2;
    Coefficient a3;
    Coefficient p;
    /// Optional nonlinear restoring term; empty means zero.
    Restoring f_nl;
    AlphaSpec alpha;
    double u0 = 0.0;
    double v0 = 0.0;
    Grid grid;

    static Coefficient constant(double value);

    double restoring(double u, double udot) const { return f_nl ? f_nl(u, udot) : 0.0; }
    bool linear() const noexcept { return !f_nl; }
};

/// Unknowns of one step: q = ü, u̇, u.
struct StepState {
    double q = 0.0;
    double udot = 0.0;
    double u = 0.0;
};

struct SolutionTrace {
    std::vector<double> t;
    std::vector<double> u;
    std::vector<double> udot;
    std::vector<double> uddot;
    /// α_n used for row n. Entry 0 is α(0, u0, v0), unchecked and unused.
    std::vector<double> alpha_used;
    /// Spectral radius of the step map per node (entry 0 is NaN). Empty unless
    /// requested from the explicit solver.
    std::vector<double> rho;
    /// Root-solver iterations per node (entry 0 is 0). Implicit solver only.
    std::vector<int> iterations;
    VelocityHistory history{0.0};

    std::size_t size() const noexcept { return t.size(); }
    StepState state(std::size_t n) const { return {uddot.at(n), udot.at(n), u.at(n)}; }

    /// Appends node n's values; the mean velocity follows from udot.
    void append(double time, const StepState& s, double alpha);
};

/// Starts a trace holding node 0.
SolutionTrace start_trace(const OscillatorProblem& problem, double q0, double alpha0);

/// q_0 from the equation at t = 0 with (D^α u)_0 = 0 (continuous integrand):
///   q_0 = (p(0) - a3(0) u0 - f(u0, v0)) / a1(0).
/// Throws DegenerateProblemError when a1(0) = 0.
double initial_acceleration(const OscillatorProblem& problem);

/// Throws DegenerateProblemError if a required coefficient function is missing
/// or the order function is unset.
void validate(const OscillatorProblem& problem);

/// Stopping/verification scale max(1, |p_n|, |a3_n u_n|).
double residual_scale(double p_n, double a3u_n);

/// Discrete equation at node n >= 1 recomputed from the stored trace:
///   a1 q_n + a2 Σ c_r^n(α_n) u̇_r^m + a3 u_n + f(u_n, u̇_n) - p_n.
double discrete_residual(const OscillatorProblem& problem, const SolutionTrace& trace,
                         std::size_t n);

/// max_n |discrete_residual| / residual_scale over n = 1..N.
double max_scaled_residual(const OscillatorProblem& problem, const SolutionTrace& trace);

}  // namespace vofde

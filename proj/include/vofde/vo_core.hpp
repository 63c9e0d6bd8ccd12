#pragma once

// Discrete variable-order Caputo derivative.
//
// With u̇ taken constant and equal to its mean on each step,
//   (D^α u)_n = Σ_{r=1}^{n} c_r^n · u̇_r^m,
//   u̇_r^m     = (u̇_{r-1} + u̇_r) / 2,
// where c_r^n integrates the kernel (nh - x)^{-α_n} / Γ(1 - α_n) exactly
// over [(r-1)h, rh]. The order α_n = α(t_n) is frozen over the whole history
// of step n.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace vofde {

/// Uniform time grid on [0, T] with N = ceil(T / h) steps.
struct Grid {
    double h = 0.0;
    std::size_t N = 0;
    double T = 0.0;

    /// Builds the grid for horizon T > 0 and step h > 0. A ratio T/h that
    /// lands within round-off of an integer is not bumped to the next one.
    static Grid from_horizon(double T, double h);

    double time(std::size_t n) const noexcept { return static_cast<double>(n) * h; }
};

/// Weights c_r^n, r = 1..n, for one step. Stored 0-based: c[r - 1] = c_r^n.
struct CoefficientRow {
    std::size_t n = 0;
    double alpha = 0.0;
    std::vector<double> c;

    double at(std::size_t r) const { return c.at(r - 1); }
    std::size_t size() const noexcept { return c.size(); }
};

/// Endpoint velocities u̇_0..u̇_k and the derived means u̇_1^m..u̇_k^m.
/// Means are only ever computed from the endpoints.
class VelocityHistory {
public:
    explicit VelocityHistory(double v0);

    /// Appends u̇_k for the next completed step and its mean.
    void push(double v);

    /// Number of completed steps k (= number of means).
    std::size_t steps() const noexcept { return means_.size(); }

    double velocity(std::size_t k) const { return velocities_.at(k); }

    /// u̇_r^m for r = 1..steps().
    double mean(std::size_t r) const { return means_.at(r - 1); }

    std::span<const double> velocities() const noexcept { return velocities_; }
    std::span<const double> means() const noexcept { return means_; }

private:
    std::vector<double> velocities_;
    std::vector<double> means_;
};

/// Throws OrderDomainError unless alpha lies in the open interval (0, 1).
void require_order(double alpha, const char* context);

/// Closed-form product-quadrature weight c_r^n for 1 <= r <= n.
double coefficient(std::size_t n, std::size_t r, double h, double alpha);

/// Full row c_1^n..c_n^n for order alpha.
CoefficientRow coefficient_row(std::size_t n, double h, double alpha);

/// Σ_{r=1}^{count} c_r^n · means[r-1]. count must not exceed either length.
double history_sum(const CoefficientRow& row, std::span<const double> means, std::size_t count);

/// (D^α u)_n = Σ_{r=1}^{n} c_r^n u̇_r^m with n = row.n.
double vo_derivative_at(const CoefficientRow& row, const VelocityHistory& hist);

/// Discrete VO derivative on every node of the grid from sampled velocities
/// u̇(t_0..t_N). Entry 0 is zero (continuous integrand); entry n uses the row
/// for alpha(t_n). Throws OrderDomainError naming the offending node.
std::vector<double> vo_derivative_series(std::span<const double> udot_samples,
                                         const std::function<double(double)>& alpha,
                                         const Grid& grid);

/// Direct adaptive quadrature of
///   (1/Γ(1-α)) ∫_0^t (t-x)^{-α} u̇(x) dx
/// for a constant order α ∈ (0,1) at a single time t > 0. The substitution
/// s = (t-x)^{1-α} removes the endpoint singularity. Used as a test oracle.
/// Throws ConvergenceError if the bisection exceeds its depth limit.
double caputo_quadrature_oracle(const std::function<double(double)>& udot, double alpha,
                                double t, double tol = 1e-12);

}  // namespace vofde

#include "vofde/vo_core.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "vofde/errors.hpp"
#include "text.hpp"
#include "vofde/special_functions.hpp"

namespace vofde {

Grid Grid::from_horizon(double T, double h)
{
    if (!(std::isfinite(h) && h > 0.0))
        throw DomainError("grid: step h must be positive, got " + detail::str(h));
    if (!(std::isfinite(T) && T > 0.0))
        throw DomainError("grid: horizon T must be positive, got " + detail::str(T));
    const double ratio = T / h;
    const double nearest = std::round(ratio);
    double steps = std::ceil(ratio);
    if (nearest >= 1.0 && std::abs(ratio - nearest) <= 1e-9 * nearest)
        steps = nearest;
    return Grid{h, static_cast<std::size_t>(std::max(1.0, steps)), T};
}

VelocityHistory::VelocityHistory(double v0) : velocities_{v0} {}

void VelocityHistory::push(double v)
{
    means_.push_back(0.5 * (velocities_.back() + v));
    velocities_.push_back(v);
}

void require_order(double alpha, const char* context)
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw OrderDomainError(std::string(context) + ": order " + detail::str(alpha) +
                                   " outside (0, 1)",
                               alpha);
}

namespace {

// h^{1-α} / Γ(2-α). The closed form carries 1/[Γ(1-α)(α-1)], whose factors
// blow up and vanish in opposite directions as α -> 1; Γ(1-α)(1-α) = Γ(2-α)
// folds them into one finite factor.
double row_scale(double h, double alpha)
{
    const double beta = 1.0 - alpha;
    return std::exp(beta * std::log(h)) / gamma(2.0 - alpha);
}

// (k+1)^β - k^β for k = n - r >= 0, written as k^β·expm1(β·log1p(1/k)) so that
// the difference of two nearly equal powers (β -> 0) keeps full precision.
double kernel_increment(std::size_t k, double beta)
{
    if (k == 0)
        return 1.0;
    const double kd = static_cast<double>(k);
    return std::exp(beta * std::log(kd)) * std::expm1(beta * std::log1p(1.0 / kd));
}

}  // namespace

double coefficient(std::size_t n, std::size_t r, double h, double alpha)
{
    require_order(alpha, "coefficient");
    if (!(std::isfinite(h) && h > 0.0))
        throw DomainError("coefficient: step h must be positive");
    if (n == 0 || r == 0 || r > n)
        throw IndexError("coefficient: need 1 <= r <= n, got n=" + detail::str(n) +
                         " r=" + detail::str(r));
    return row_scale(h, alpha) * kernel_increment(n - r, 1.0 - alpha);
}

CoefficientRow coefficient_row(std::size_t n, double h, double alpha)
{
    require_order(alpha, "coefficient_row");
    if (!(std::isfinite(h) && h > 0.0))
        throw DomainError("coefficient_row: step h must be positive");
    if (n == 0)
        throw IndexError("coefficient_row: n must be >= 1");

    const double scale = row_scale(h, alpha);
    const double beta = 1.0 - alpha;
    CoefficientRow row{n, alpha, std::vector<double>(n)};
    for (std::size_t r = 1; r <= n; ++r)
        row.c[r - 1] = scale * kernel_increment(n - r, beta);
    return row;
}

double history_sum(const CoefficientRow& row, std::span<const double> means, std::size_t count)
{
    if (count > row.c.size() || count > means.size())
        throw IndexError("history_sum: count " + detail::str(count) +
                         " exceeds row or history length");
    double sum = 0.0;
    for (std::size_t i = 0; i < count; ++i)
        sum += row.c[i] * means[i];
    return sum;
}

double vo_derivative_at(const CoefficientRow& row, const VelocityHistory& hist)
{
    if (row.c.size() != row.n)
        throw IndexError("vo_derivative_at: row length does not match its step index");
    if (hist.steps() < row.n)
        throw IndexError("vo_derivative_at: history holds " + detail::str(hist.steps()) +
                         " means, step " + detail::str(row.n) + " needs more");
    return history_sum(row, hist.means(), row.n);
}

std::vector<double> vo_derivative_series(std::span<const double> udot_samples,
                                         const std::function<double(double)>& alpha,
                                         const Grid& grid)
{
    if (udot_samples.size() != grid.N + 1)
        throw IndexError("vo_derivative_series: expected " + detail::str(grid.N + 1) +
                         " velocity samples, got " + detail::str(udot_samples.size()));

    VelocityHistory hist(udot_samples[0]);
    for (std::size_t k = 1; k <= grid.N; ++k)
        hist.push(udot_samples[k]);

    std::vector<double> out(grid.N + 1, 0.0);
    for (std::size_t n = 1; n <= grid.N; ++n) {
        const double a = alpha(grid.time(n));
        if (!(a > 0.0 && a < 1.0))
            throw OrderDomainError("vo_derivative_series: order " + detail::str(a) +
                                       " outside (0, 1) at node " + detail::str(n),
                                   a);
        out[n] = history_sum(coefficient_row(n, grid.h, a), hist.means(), n);
    }
    return out;
}

namespace {

struct Panel {
    double a;
    double b;
    double value;
    double error;
    int depth;

    bool operator<(const Panel& other) const { return error < other.error; }
};

// 7-point Gauss / 15-point Kronrod pair on [a, b].
template <class F>
Panel gauss_kronrod_panel(const F& f, double a, double b, int depth)
{
    using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
    using Gauss = boost::math::quadrature::gauss<double, 7>;
    const auto& x = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = Gauss::weights();

    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f0 = f(mid);
    double kronrod = f0 * wk[0];
    double gauss = f0 * wg[0];
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double pair = f(mid + half * x[i]) + f(mid - half * x[i]);
        kronrod += pair * wk[i];
        if (i % 2 == 0)
            gauss += pair * wg[i / 2];
    }
    kronrod *= half;
    gauss *= half;
    const double err = std::max(std::abs(kronrod - gauss), 4.0 * 2.2e-16 * std::abs(kronrod));
    return Panel{a, b, kronrod, err, depth};
}

constexpr int kMaxDepth = 60;
constexpr std::size_t kMaxPanels = 50000;

}  // namespace

double caputo_quadrature_oracle(const std::function<double(double)>& udot, double alpha,
                                double t, double tol)
{
    require_order(alpha, "caputo_quadrature_oracle");
    if (!(std::isfinite(t) && t > 0.0))
        throw DomainError("caputo_quadrature_oracle: t must be positive");
    if (!(tol >= 1e-12))
        throw DomainError("caputo_quadrature_oracle: tolerance must be >= 1e-12");

    // x = t - s^{1/β}: (t-x)^{-α} dx becomes (1/β) ds on [0, t^β].
    const double beta = 1.0 - alpha;
    const double upper = std::pow(t, beta);
    auto integrand = [&](double s) {
        const double x = std::max(0.0, t - std::pow(s, 1.0 / beta));
        return udot(x);
    };
    // 1/(β Γ(1-α)) = 1/Γ(2-α)
    const double norm = gamma(2.0 - alpha);
    const double panel_tol = tol * norm;

    std::priority_queue<Panel> panels;
    Panel first = gauss_kronrod_panel(integrand, 0.0, upper, 0);
    double total = first.value;
    double total_err = first.error;
    panels.push(first);
    while (!(total_err <= panel_tol)) {
        if (!std::isfinite(total_err))
            throw ConvergenceError("caputo_quadrature_oracle: integrand is not finite near t=" +
                                   detail::str(t));
        Panel worst = panels.top();
        if (worst.depth >= kMaxDepth || panels.size() >= kMaxPanels)
            throw ConvergenceError("caputo_quadrature_oracle: subdivision limit reached at t=" +
                                   detail::str(t) + ", error estimate " +
                                   detail::str(total_err / norm));
        panels.pop();
        const double m = 0.5 * (worst.a + worst.b);
        Panel left = gauss_kronrod_panel(integrand, worst.a, m, worst.depth + 1);
        Panel right = gauss_kronrod_panel(integrand, m, worst.b, worst.depth + 1);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }
    // Re-sum from the panels to shed the drift of the running update.
    total = 0.0;
    for (; !panels.empty(); panels.pop())
        total += panels.top().value;
    return total / norm;
}

}  // namespace vofde

#include "vofde/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "vofde/errors.hpp"
#include "text.hpp"
#include "vofde/explicit_solver.hpp"

namespace vofde {

namespace {

struct Cubic {
    // λ³ + a λ² + b λ + c
    double a;
    double b;
    double c;

    double operator()(double x) const { return ((x + a) * x + b) * x + c; }
    double derivative(double x) const { return (3.0 * x + 2.0 * a) * x + b; }
};

double polish(const Cubic& p, double x)
{
    double fx = p(x);
    for (int i = 0; i < 4 && fx != 0.0; ++i) {
        const double d = p.derivative(x);
        if (d == 0.0)
            break;
        const double next = x - fx / d;
        const double fnext = p(next);
        if (!(std::abs(fnext) < std::abs(fx)))
            break;
        x = next;
        fx = fnext;
    }
    return x;
}

std::array<std::complex<double>, 3> cubic_roots(const Cubic& p)
{
    const double a = p.a;
    const double q = (a * a - 3.0 * p.b) / 9.0;
    const double r = (2.0 * a * a * a - 9.0 * a * p.b + 27.0 * p.c) / 54.0;
    const double q3 = q * q * q;

    if (r * r < q3) {
        // Three real roots.
        const double theta = std::acos(std::clamp(r / std::sqrt(q3), -1.0, 1.0));
        const double m = -2.0 * std::sqrt(q);
        const double shift = a / 3.0;
        const double two_pi = 2.0 * std::numbers::pi;
        return {std::complex<double>(polish(p, m * std::cos(theta / 3.0) - shift)),
                std::complex<double>(polish(p, m * std::cos((theta + two_pi) / 3.0) - shift)),
                std::complex<double>(polish(p, m * std::cos((theta - two_pi) / 3.0) - shift))};
    }

    // One real root plus a pair, possibly complex.
    const double big = -std::copysign(std::cbrt(std::abs(r) + std::sqrt(r * r - q3)), r);
    const double small = big != 0.0 ? q / big : 0.0;
    const double root = polish(p, big + small - a / 3.0);

    // Deflate to λ² + B λ + C. Forward division is stable when the removed
    // root is the smallest, division through the constant term when it is the
    // largest.
    double bq;
    double cq;
    if (root != 0.0 && std::abs(root) > std::cbrt(std::abs(p.c))) {
        cq = -p.c / root;
        bq = (cq - p.b) / root;
    } else {
        bq = a + root;
        cq = p.b + root * bq;
    }
    const double disc = 0.25 * bq * bq - cq;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        const double r1 = -0.5 * bq - std::copysign(s, bq);
        const double r2 = r1 != 0.0 ? cq / r1 : 0.0;
        return {std::complex<double>(root), std::complex<double>(polish(p, r1)),
                std::complex<double>(polish(p, r2))};
    }
    const double im = std::sqrt(-disc);
    return {std::complex<double>(root), std::complex<double>(-0.5 * bq, im),
            std::complex<double>(-0.5 * bq, -im)};
}

}  // namespace

std::array<std::complex<double>, 3> eigenvalues(const Mat3& m)
{
    for (const auto& row : m)
        for (double x : row)
            if (!std::isfinite(x))
                throw DomainError("eigenvalues: matrix has non-finite entries");

    const double s = norm_inf(m);
    if (s == 0.0)
        return {};
    const Mat3 a = scale(m, 1.0 / s);

    const double trace = a[0][0] + a[1][1] + a[2][2];
    const double minors = a[0][0] * a[1][1] - a[0][1] * a[1][0] + a[0][0] * a[2][2] -
                          a[0][2] * a[2][0] + a[1][1] * a[2][2] - a[1][2] * a[2][1];
    const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                       a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                       a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);

    auto roots = cubic_roots(Cubic{-trace, minors, -det});
    for (auto& z : roots)
        z *= s;
    return roots;
}

double spectral_radius(const Mat3& a)
{
    double rho = 0.0;
    for (const auto& z : eigenvalues(a))
        rho = std::max(rho, std::abs(z));
    return rho;
}

Mat3 amplification_matrix(std::size_t n, const OscillatorProblem& problem, const CoefficientRow& row)
{
    if (n == 0 || row.n != n || row.size() != n)
        throw IndexError("amplification_matrix: row does not belong to step " + detail::str(n));
    const double c_prev = n >= 2 ? row.c[n - 2] : 0.0;
    const StepMatrices m = step_operators(n, problem, row.c[n - 1], c_prev);
    const Lu3 lu(m.L);
    if (!(lu.condition_inf() <= 1e14))
        throw StepFailure("amplification_matrix: step matrix is singular at step " +
                              detail::str(n),
                          n);
    return lu.solve(m.R);
}

Mat3 amplification_matrix(std::size_t n, const OscillatorProblem& problem, double alpha_n)
{
    if (n == 0)
        throw IndexError("amplification_matrix: step index must be >= 1");
    const double h = problem.grid.h;
    const double c_last = coefficient(n, n, h, alpha_n);
    const double c_prev = n >= 2 ? coefficient(n, n - 1, h, alpha_n) : 0.0;
    const StepMatrices m = step_operators(n, problem, c_last, c_prev);
    const Lu3 lu(m.L);
    if (!(lu.condition_inf() <= 1e14))
        throw StepFailure("amplification_matrix: step matrix is singular at step " +
                              detail::str(n),
                          n);
    return lu.solve(m.R);
}

namespace {

void finish(StabilityReport& report)
{
    report.max_rho = report.rho.empty() ? 0.0 : *std::max_element(report.rho.begin(), report.rho.end());
    report.satisfied = report.max_rho <= 1.0 + report.tolerance;
}

}  // namespace

StabilityReport stability_report(const OscillatorProblem& problem, double tolerance)
{
    validate(problem);
    if (!problem.alpha.time_only())
        throw DegenerateProblemError(
            "stability_report: state-dependent order; report along a computed trace instead");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    StabilityReport report;
    report.tolerance = tolerance;
    report.rho.reserve(problem.grid.N);
    for (std::size_t n = 1; n <= problem.grid.N; ++n) {
        const double alpha = problem.alpha(problem.grid.time(n), nan, nan);
        report.rho.push_back(spectral_radius(amplification_matrix(n, problem, alpha)));
    }
    finish(report);
    return report;
}

StabilityReport stability_report(const OscillatorProblem& problem, const SolutionTrace& trace,
                                 double tolerance)
{
    validate(problem);
    StabilityReport report;
    report.tolerance = tolerance;
    report.trace_conditional = !problem.alpha.time_only();
    report.rho.reserve(trace.size());
    for (std::size_t n = 1; n < trace.size(); ++n)
        report.rho.push_back(spectral_radius(amplification_matrix(n, problem, trace.alpha_used[n])));
    finish(report);
    return report;
}

}  // namespace vofde

#pragma once

// Spectral-radius check ρ(A_n) <= 1 for the step map A_n = L⁻¹R of the
// explicit scheme.

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "vofde/mat3.hpp"
#include "vofde/model.hpp"
#include "vofde/vo_core.hpp"

namespace vofde {

struct StabilityReport {
    /// ρ(A_n) for n = 1..N, stored 0-based.
    std::vector<double> rho;
    double max_rho = 0.0;
    bool satisfied = true;
    double tolerance = 1e-12;
    /// The orders came from a computed trace (state-dependent α).
    bool trace_conditional = false;
};

/// Eigenvalues from the characteristic cubic, solved in closed form and
/// polished by Newton steps. Throws DomainError on non-finite entries.
std::array<std::complex<double>, 3> eigenvalues(const Mat3& a);

double spectral_radius(const Mat3& a);

/// A_n = L⁻¹R for step n. Only c_n^n and c_{n-1}^n of the row enter.
/// Throws DegenerateProblemError for a1(t_n) = 0 and StepFailure when L is
/// numerically singular.
Mat3 amplification_matrix(std::size_t n, const OscillatorProblem& problem, const CoefficientRow& row);

/// Same, from the order value directly.
Mat3 amplification_matrix(std::size_t n, const OscillatorProblem& problem, double alpha_n);

/// ρ(A_n) along the grid for a time-only order.
StabilityReport stability_report(const OscillatorProblem& problem, double tolerance = 1e-12);

/// ρ(A_n) with α_n read from a computed trace; valid for any order kind.
StabilityReport stability_report(const OscillatorProblem& problem, const SolutionTrace& trace,
                                 double tolerance = 1e-12);

}  // namespace vofde

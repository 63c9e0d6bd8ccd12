#include "vofde/reference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "vofde/errors.hpp"
#include "vofde/special_functions.hpp"

namespace vofde::reference {

double example1_alpha(Variant v, double t)
{
    return v == Variant::i ? (50.0 * t + 49.0) / 100.0 : 1.0 - std::exp(-t);
}

double example1_exact_vofd(Variant v, double t)
{
    if (!(t > 0.0))
        throw DomainError("example1_exact_vofd: t must be positive");
    if (v == Variant::i) {
        // 2 t^{2-α} / Γ(3-α) with 2 - α = (151 - 50t)/100.
        const double alpha = example1_alpha(v, t);
        return 2.0 * std::pow(t, 2.0 - alpha) / gamma(3.0 - alpha);
    }
    // α = 1 - e^{-t}: 2 e^{2t} t^{e^{-t}+1} / ((e^t + 1) Γ(e^{-t})).
    const double et = std::exp(-t);
    return 2.0 * std::exp(2.0 * t) * std::pow(t, et + 1.0) / ((std::exp(t) + 1.0) * gamma(et));
}

double example2_exact_limits(Variant v, double t, const OscillatorParams& prm)
{
    if (v == Variant::i) {
        const double wd = prm.omega * std::sqrt(1.0 - prm.xi * prm.xi);
        const double decay = std::exp(-prm.xi * prm.omega * t);
        return decay * ((prm.v0 + prm.xi * prm.omega * prm.u0) / wd * std::sin(wd * t) +
                        prm.u0 * std::cos(wd * t));
    }
    const double k = prm.a2() + prm.a3();
    const double w = std::sqrt(k / prm.a1());
    const double shift = prm.a2() * prm.u0 / k;
    return shift + (prm.u0 - shift) * std::cos(w * t) + prm.v0 / w * std::sin(w * t);
}

double example4_forcing(double t)
{
    const double t2 = t * t;
    double p = 2.0 + t2 + t2 * t2 * t2;
    if (t > 0.0)
        p += 0.2 * example1_exact_vofd(Variant::ii, t);
    return p;
}

double example5_forcing(double t)
{
    const double s = 0.5 * std::exp(-t);  // 1 - α
    const double vo = t > 0.0 ? lower_incomplete_gamma(s, t) / gamma(s) : 0.0;
    return ((1.0 + t * t) + 0.1 * std::sqrt(t) * vo + (10.0 + std::exp(-t))) * std::exp(t);
}

std::vector<double> ode_limit_oracle(const SecondOrderRhs& rhs, double u0, double v0,
                                     std::span<const double> t_samples, double tol)
{
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, 2>;

    if (!(tol > 0.0))
        throw DomainError("ode_limit_oracle: tolerance must be positive");
    if (t_samples.empty())
        return {};
    if (t_samples.front() < 0.0 || !std::is_sorted(t_samples.begin(), t_samples.end()))
        throw DomainError("ode_limit_oracle: sample times must be non-negative and sorted");

    std::vector<double> times;
    times.reserve(t_samples.size() + 1);
    if (t_samples.front() > 0.0)
        times.push_back(0.0);
    times.insert(times.end(), t_samples.begin(), t_samples.end());

    auto system = [&rhs](const State& x, State& dxdt, double t) {
        dxdt[0] = x[1];
        dxdt[1] = rhs(t, x[0], x[1]);
    };
    std::vector<double> values;
    values.reserve(times.size());
    auto observer = [&values](const State& x, double) { values.push_back(x[0]); };

    // Local tolerance two decades below the requested global accuracy.
    const double local = tol * 1e-2;
    auto stepper = odeint::make_controlled(local, local, odeint::runge_kutta_fehlberg78<State>());
    State x{u0, v0};
    const double dt0 = times.size() > 1 ? std::max(1e-6, (times[1] - times[0]) * 1e-2) : 1e-3;
    try {
        odeint::integrate_times(stepper, system, x, times.begin(), times.end(), dt0, observer,
                                odeint::max_step_checker(100000));
    } catch (const std::exception& e) {
        throw ConvergenceError(std::string("ode_limit_oracle: ") + e.what());
    }
    if (values.size() != times.size())
        throw ConvergenceError("ode_limit_oracle: integrator stopped early");
    for (double v : values)
        if (!std::isfinite(v))
            throw ConvergenceError("ode_limit_oracle: solution is not finite");

    if (times.size() > t_samples.size())
        values.erase(values.begin());
    return values;
}

namespace {

constexpr double kNearOne = 1.0 - 1e-10;

OscillatorProblem linear_oscillator(const OscillatorParams& prm, AlphaSpec alpha, double T, double h)
{
    OscillatorProblem p;
    p.a1 = OscillatorProblem::constant(prm.a1());
    p.a2 = OscillatorProblem::constant(prm.a2());
    p.a3 = OscillatorProblem::constant(prm.a3());
    p.p = OscillatorProblem::constant(0.0);
    p.alpha = std::move(alpha);
    p.u0 = prm.u0;
    p.v0 = prm.v0;
    p.grid = Grid::from_horizon(T, h);
    return p;
}

Scenario derivative_scenario(const std::string& name, Variant v, double h)
{
    Scenario s;
    s.name = name;
    s.source = v == Variant::i ? "VO derivative of t^2, alpha = (50t+49)/100"
                               : "VO derivative of t^2, alpha = 1 - exp(-t)";
    s.kind = ScenarioKind::Derivative;
    s.problem.alpha = AlphaSpec::time_only([v](double t) { return example1_alpha(v, t); });
    s.problem.grid = Grid::from_horizon(1.0, h);
    s.exact_u = [](double t) { return t * t; };
    s.exact_udot = [](double t) { return 2.0 * t; };
    s.exact_uddot = [](double) { return 2.0; };
    s.exact_vofd = [v](double t) { return t > 0.0 ? example1_exact_vofd(v, t) : 0.0; };
    return s;
}

Scenario duffing(double h)
{
    Scenario s;
    s.name = "ex4";
    s.source = "Duffing oscillator, alpha = 1 - exp(-t), exact u = t^2";
    OscillatorProblem& p = s.problem;
    p.a1 = OscillatorProblem::constant(1.0);
    p.a2 = OscillatorProblem::constant(0.2);
    p.a3 = OscillatorProblem::constant(1.0);
    p.f_nl = [](double u, double) { return u * u * u; };
    p.p = example4_forcing;
    p.alpha = AlphaSpec::time_only([](double t) { return 1.0 - std::exp(-t); });
    p.u0 = 0.0;
    p.v0 = 0.0;
    p.grid = Grid::from_horizon(1.0, h);
    s.exact_u = [](double t) { return t * t; };
    s.exact_udot = [](double t) { return 2.0 * t; };
    s.exact_uddot = [](double) { return 2.0; };
    return s;
}

Scenario variable_coefficients(double h)
{
    Scenario s;
    s.name = "ex5";
    s.source = "time-varying coefficients, alpha = 1 - 0.5 exp(-t), exact u = e^t";
    OscillatorProblem& p = s.problem;
    p.a1 = [](double t) { return 1.0 + t * t; };
    p.a2 = [](double t) { return 0.1 * std::sqrt(t); };
    p.a3 = [](double t) { return 10.0 + std::exp(-t); };
    p.p = example5_forcing;
    p.alpha = AlphaSpec::time_only([](double t) { return 1.0 - 0.5 * std::exp(-t); });
    p.u0 = 1.0;
    p.v0 = 1.0;
    p.grid = Grid::from_horizon(1.0, h);
    s.exact_u = [](double t) { return std::exp(t); };
    s.exact_udot = [](double t) { return std::exp(t); };
    s.exact_uddot = [](double t) { return std::exp(t); };
    return s;
}

const OscillatorParams kEx2{0.1, 5.0, 1.0, 10.0};
const OscillatorParams kEx3{0.1, 2.0, 0.0, 1.0};
const OscillatorParams kEx3iii{0.1, 2.0, 0.0, 10.0};
constexpr double kEx2Horizon = 5.0;
constexpr double kEx3Horizon = 5.0;

}  // namespace

Scenario make_exp_order_oscillator(const std::string& name, const OscillatorParams& params,
                                   std::function<double(double)> alpha, double T, double h)
{
    Scenario s;
    s.name = name;
    s.problem = linear_oscillator(params, AlphaSpec::time_only(std::move(alpha)), T, h);
    return s;
}

Scenario make_velocity_order_oscillator(const std::string& name, const OscillatorParams& params,
                                        double d, double k, double T, double h)
{
    Scenario s;
    s.name = name;
    s.problem = linear_oscillator(
        params,
        AlphaSpec::state_dependent(
            [d, k](double, double, double udot) { return d - k * std::tanh(std::abs(udot)); }),
        T, h);
    return s;
}

const std::vector<ScenarioInfo>& scenario_registry()
{
    static const std::vector<ScenarioInfo> registry{
        {"ex1i", "VO derivative of t^2 with alpha = (50t+49)/100 on [0,1]", 1.0},
        {"ex1ii", "VO derivative of t^2 with alpha = 1 - exp(-t) on [0,1]", 1.0},
        {"ex2i", "linear oscillator, alpha = 0.9999 - 1e-9 exp(-t) (near 1)", kEx2Horizon},
        {"ex2ii", "linear oscillator, alpha = 1e-10 - 1e-10 exp(-t) (near 0)", kEx2Horizon},
        {"ex2iii_a", "linear oscillator, alpha = 1 - 1e-10 (integer limit)", kEx2Horizon},
        {"ex2iii_b", "linear oscillator, alpha = 1 - exp(-t)", kEx2Horizon},
        {"ex2iii_c", "linear oscillator, alpha = 0.8", kEx2Horizon},
        {"ex2iii_d", "linear oscillator, alpha = 0.8 (1 - exp(-t))", kEx2Horizon},
        {"ex2iii_e", "linear oscillator, alpha = 0.5 (1 - exp(-t))", kEx2Horizon},
        {"ex3i", "velocity-dependent order 0.9999 - 1e-9 tanh|udot| (near 1)", kEx3Horizon},
        {"ex3ii", "velocity-dependent order 1e-10 - 1e-10 tanh|udot| (near 0)", kEx3Horizon},
        {"ex3iii", "velocity-dependent order (1 - 1e-10) - 0.5 tanh|udot|, udot0 = 10", kEx3Horizon},
        {"ex4", "Duffing oscillator, alpha = 1 - exp(-t), exact u = t^2", 1.0},
        {"ex5", "time-varying coefficients, alpha = 1 - 0.5 exp(-t), exact u = e^t", 1.0},
    };
    return registry;
}

Scenario make_scenario(const std::string& name, double h)
{
    if (name == "ex1i")
        return derivative_scenario(name, Variant::i, h);
    if (name == "ex1ii")
        return derivative_scenario(name, Variant::ii, h);
    if (name == "ex4")
        return duffing(h);
    if (name == "ex5")
        return variable_coefficients(h);

    if (name == "ex2i" || name == "ex2ii") {
        const bool near_one = name == "ex2i";
        const double d = near_one ? 0.9999 : 1e-10;
        const double k = near_one ? 1e-9 : 1e-10;
        Scenario s = make_exp_order_oscillator(
            name, kEx2, [d, k](double t) { return d - k * std::exp(-t); }, kEx2Horizon, h);
        const Variant v = near_one ? Variant::i : Variant::ii;
        s.limit_u = [v](double t) { return example2_exact_limits(v, t, kEx2); };
        s.source = near_one ? "order near 1: damped integer-order limit"
                            : "order near 0: shifted undamped limit";
        return s;
    }

    static const std::map<std::string, std::function<double(double)>> ex2iii{
        {"ex2iii_a", [](double) { return kNearOne; }},
        {"ex2iii_b", [](double t) { return 1.0 - std::exp(-t); }},
        {"ex2iii_c", [](double) { return 0.8; }},
        {"ex2iii_d", [](double t) { return 0.8 * (1.0 - std::exp(-t)); }},
        {"ex2iii_e", [](double t) { return 0.5 * (1.0 - std::exp(-t)); }},
    };
    if (auto it = ex2iii.find(name); it != ex2iii.end()) {
        Scenario s = make_exp_order_oscillator(name, kEx2, it->second, kEx2Horizon, h);
        s.source = "order comparison family";
        return s;
    }

    if (name == "ex3i" || name == "ex3ii") {
        const bool near_one = name == "ex3i";
        Scenario s = make_velocity_order_oscillator(name, kEx3, near_one ? 0.9999 : 1e-10,
                                                    near_one ? 1e-9 : 1e-10, kEx3Horizon, h);
        const Variant v = near_one ? Variant::i : Variant::ii;
        s.limit_u = [v](double t) { return example2_exact_limits(v, t, kEx3); };
        s.source = near_one ? "velocity-dependent order near 1" : "velocity-dependent order near 0";
        return s;
    }
    if (name == "ex3iii") {
        Scenario s = make_velocity_order_oscillator(name, kEx3iii, kNearOne, 0.5, kEx3Horizon, h);
        s.source = "velocity-dependent order, large initial velocity";
        return s;
    }
    throw DomainError("unknown scenario '" + name + "'");
}

double manufactured_residual(const Scenario& s, double t, double tol)
{
    if (!s.exact_u || !s.exact_udot || !s.exact_uddot)
        throw DomainError("manufactured_residual: scenario '" + s.name + "' has no exact solution");
    const OscillatorProblem& p = s.problem;
    const double u = s.exact_u(t);
    const double udot = s.exact_udot(t);
    const double alpha = p.alpha(t, u, udot);
    const double d = caputo_quadrature_oracle(s.exact_udot, alpha, t, tol);
    return p.a1(t) * s.exact_uddot(t) + p.a2(t) * d + p.a3(t) * u + p.restoring(u, udot) - p.p(t);
}

}  // namespace vofde::reference

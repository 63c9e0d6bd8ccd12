#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "vofde/explicit_solver.hpp"
#include "vofde/implicit_solver.hpp"
#include "vofde/stability.hpp"
#include "vofde/vo_core.hpp"

namespace vofde::cli {

using nlohmann::json;
using reference::Scenario;
using reference::ScenarioKind;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& ctx)
{
    if (!obj.is_object())
        throw ConfigError(ctx + ": expected an object");
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key))
            throw ConfigError(ctx + ": unknown key '" + key + "'");
}

double number(const json& obj, const std::string& key, const std::string& ctx)
{
    if (!obj.contains(key))
        throw ConfigError(ctx + ": missing '" + key + "'");
    const json& v = obj.at(key);
    if (!v.is_number())
        throw ConfigError(ctx + ": '" + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
        throw ConfigError(ctx + ": '" + key + "' must be finite");
    return x;
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& ctx)
{
    return obj.contains(key) ? number(obj, key, ctx) : fallback;
}

std::string text(const json& obj, const std::string& key, const std::string& ctx)
{
    if (!obj.contains(key) || !obj.at(key).is_string())
        throw ConfigError(ctx + ": '" + key + "' must be a string");
    return obj.at(key).get<std::string>();
}

struct FormSpec {
    std::string form;
    json params;
};

FormSpec form_of(const json& spec, const std::string& ctx)
{
    check_keys(spec, {"form", "params"}, ctx);
    FormSpec f{text(spec, "form", ctx), spec.value("params", json::object())};
    if (!f.params.is_object())
        throw ConfigError(ctx + ": 'params' must be an object");
    return f;
}

Scenario scenario_for_reference(const std::string& name, const std::string& ctx)
{
    try {
        return reference::make_scenario(name, 0.01);
    } catch (const DomainError& e) {
        throw ConfigError(ctx + ": " + e.what());
    }
}

/// Time-only forms shared by coefficients and orders; empty if the form is
/// not one of them.
std::function<double(double)> time_form(const FormSpec& f, const std::string& ctx)
{
    const json& p = f.params;
    if (f.form == "constant") {
        check_keys(p, {"value"}, ctx);
        const double v = number(p, "value", ctx);
        return [v](double) { return v; };
    }
    if (f.form == "polynomial") {
        check_keys(p, {"coefficients"}, ctx);
        if (!p.contains("coefficients") || !p.at("coefficients").is_array() || p.at("coefficients").empty())
            throw ConfigError(ctx + ": 'coefficients' must be a nonempty array");
        std::vector<double> c;
        for (const json& x : p.at("coefficients")) {
            if (!x.is_number())
                throw ConfigError(ctx + ": coefficients must be numbers");
            c.push_back(x.get<double>());
        }
        return [c](double t) {
            double acc = 0.0;
            for (auto it = c.rbegin(); it != c.rend(); ++it)
                acc = acc * t + *it;
            return acc;
        };
    }
    if (f.form == "exp_decay") {
        check_keys(p, {"d", "k", "rate"}, ctx);
        const double d = number(p, "d", ctx);
        const double k = number(p, "k", ctx);
        const double rate = number_or(p, "rate", 1.0, ctx);
        return [d, k, rate](double t) { return d - k * std::exp(-rate * t); };
    }
    if (f.form == "power") {
        check_keys(p, {"coef", "exponent"}, ctx);
        const double c = number(p, "coef", ctx);
        const double e = number(p, "exponent", ctx);
        if (e < 0.0)
            throw ConfigError(ctx + ": 'exponent' must be non-negative");
        return [c, e](double t) { return c * std::pow(t, e); };
    }
    return {};
}

OscillatorProblem::Coefficient coefficient_form(const json& spec, const std::string& field,
                                                const std::string& ctx)
{
    if (spec.is_number()) {
        const double v = spec.get<double>();
        return [v](double) { return v; };
    }
    const FormSpec f = form_of(spec, ctx);
    if (auto fn = time_form(f, ctx))
        return fn;
    if (f.form == "scenario") {
        check_keys(f.params, {"name"}, ctx);
        const Scenario s = scenario_for_reference(text(f.params, "name", ctx), ctx);
        const OscillatorProblem& p = s.problem;
        const auto& fn = field == "a1" ? p.a1 : field == "a2" ? p.a2 : field == "a3" ? p.a3 : p.p;
        if (!fn)
            throw ConfigError(ctx + ": scenario '" + s.name + "' has no " + field);
        return fn;
    }
    throw ConfigError(ctx + ": unknown form '" + f.form + "'");
}

AlphaSpec order_form(const json& spec, const std::string& ctx)
{
    if (spec.is_number())
        return AlphaSpec::constant(spec.get<double>());
    const FormSpec f = form_of(spec, ctx);
    if (auto fn = time_form(f, ctx))
        return AlphaSpec::time_only(std::move(fn));
    if (f.form == "tanh_abs_velocity" || f.form == "tanh_abs_displacement") {
        check_keys(f.params, {"d", "k"}, ctx);
        const double d = number(f.params, "d", ctx);
        const double k = number(f.params, "k", ctx);
        if (f.form == "tanh_abs_velocity")
            return AlphaSpec::state_dependent(
                [d, k](double, double, double udot) { return d - k * std::tanh(std::abs(udot)); });
        return AlphaSpec::state_dependent(
            [d, k](double, double u, double) { return d - k * std::tanh(std::abs(u)); });
    }
    if (f.form == "scenario") {
        check_keys(f.params, {"name"}, ctx);
        return scenario_for_reference(text(f.params, "name", ctx), ctx).problem.alpha;
    }
    throw ConfigError(ctx + ": unknown form '" + f.form + "'");
}

OscillatorProblem::Restoring restoring_form(const json& spec, const std::string& ctx)
{
    const FormSpec f = form_of(spec, ctx);
    if (f.form == "cubic") {
        check_keys(f.params, {"coef"}, ctx);
        const double c = number_or(f.params, "coef", 1.0, ctx);
        return [c](double u, double) { return c * u * u * u; };
    }
    if (f.form == "scenario") {
        check_keys(f.params, {"name"}, ctx);
        const Scenario s = scenario_for_reference(text(f.params, "name", ctx), ctx);
        if (!s.problem.f_nl)
            throw ConfigError(ctx + ": scenario '" + s.name + "' has no nonlinear term");
        return s.problem.f_nl;
    }
    throw ConfigError(ctx + ": unknown form '" + f.form + "'");
}

ScenarioFactory inline_problem(const json& spec, std::string& label)
{
    const std::string ctx = "problem";
    check_keys(spec, {"name", "a1", "a2", "a3", "p", "alpha", "f_nl", "u0", "v0", "T"}, ctx);
    for (const char* key : {"a1", "a2", "a3", "alpha"})
        if (!spec.contains(key))
            throw ConfigError(ctx + ": missing '" + key + "'");

    OscillatorProblem base;
    base.a1 = coefficient_form(spec.at("a1"), "a1", "problem.a1");
    base.a2 = coefficient_form(spec.at("a2"), "a2", "problem.a2");
    base.a3 = coefficient_form(spec.at("a3"), "a3", "problem.a3");
    base.p = spec.contains("p") ? coefficient_form(spec.at("p"), "p", "problem.p") : OscillatorProblem::constant(0.0);
    base.alpha = order_form(spec.at("alpha"), "problem.alpha");
    if (spec.contains("f_nl"))
        base.f_nl = restoring_form(spec.at("f_nl"), "problem.f_nl");
    base.u0 = number_or(spec, "u0", 0.0, ctx);
    base.v0 = number_or(spec, "v0", 0.0, ctx);
    const double T = number(spec, "T", ctx);
    if (!(T > 0.0))
        throw ConfigError(ctx + ": T must be positive");
    label = spec.contains("name") ? text(spec, "name", ctx) : "custom";

    return [base, T, label](double h) {
        Scenario s;
        s.name = label;
        s.source = "inline problem";
        s.problem = base;
        s.problem.grid = Grid::from_horizon(T, h);
        return s;
    };
}

void require_step(double h, const std::string& ctx)
{
    if (!(h > 0.0) || !std::isfinite(h))
        throw ConfigError(ctx + ": step must be positive and finite");
}

ScenarioFactory registry_factory(const std::string& name)
{
    const auto& reg = reference::scenario_registry();
    if (std::none_of(reg.begin(), reg.end(), [&](const auto& info) { return info.name == name; }))
        throw ConfigError("unknown scenario '" + name + "' (see 'vofde list')");
    return [name](double h) { return reference::make_scenario(name, h); };
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ConfigError("cannot open '" + path + "' for writing");
    return out;
}

SolutionTrace solve(const Scenario& s)
{
    return s.explicit_solvable() ? solve_explicit(s.problem) : solve_implicit(s.problem);
}

std::vector<double> derivative_series(const Scenario& s)
{
    const Grid& g = s.problem.grid;
    std::vector<double> udot(g.N + 1);
    for (std::size_t n = 0; n <= g.N; ++n)
        udot[n] = s.exact_udot(g.time(n));
    const AlphaSpec& alpha = s.problem.alpha;
    return vo_derivative_series(udot, [&alpha](double t) { return alpha.raw(t, 0.0, 0.0); }, g);
}

void write_derivative_csv(const Scenario& s, const std::vector<double>& d, const std::string& path)
{
    std::ofstream out = open_output(path);
    out << "t,vofd,exact,error\n";
    for (std::size_t n = 0; n < d.size(); ++n) {
        const double t = s.problem.grid.time(n);
        const double exact = s.exact_vofd(t);
        out << format_double(t) << ',' << format_double(d[n]) << ',' << format_double(exact) << ','
            << format_double(d[n] - exact) << '\n';
    }
}

void write_trace_csv(const SolutionTrace& tr, const StabilityReport* report, const std::string& path)
{
    std::ofstream out = open_output(path);
    out << "t,u,udot,uddot,alpha" << (report ? ",rho" : "") << '\n';
    for (std::size_t n = 0; n < tr.size(); ++n) {
        out << format_double(tr.t[n]) << ',' << format_double(tr.u[n]) << ',' << format_double(tr.udot[n])
            << ',' << format_double(tr.uddot[n]) << ',' << format_double(tr.alpha_used[n]);
        if (report) {
            out << ',';
            if (n >= 1 && n - 1 < report->rho.size())
                out << format_double(report->rho[n - 1]);
        }
        out << '\n';
    }
}

void write_stability_json(const std::string& label, const Grid& grid, const StabilityReport& r,
                          const std::string& path)
{
    json doc;
    doc["scenario"] = label;
    doc["h"] = grid.h;
    doc["N"] = grid.N;
    doc["tolerance"] = r.tolerance;
    doc["max_rho"] = r.max_rho;
    doc["satisfied"] = r.satisfied;
    doc["trace_conditional"] = r.trace_conditional;
    if (r.trace_conditional)
        doc["warning"] = "order depends on the state; radii are conditional on the computed trace";
    doc["rho"] = r.rho;
    std::ofstream out = open_output(path);
    out << doc.dump(2) << '\n';
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, const std::string& path)
{
    std::ofstream out = open_output(path);
    out << "h,N,max_abs_error,observed_ratio\n";
    for (const ConvergenceRow& r : rows) {
        out << format_double(r.h) << ',' << r.N << ',' << format_double(r.max_abs_error) << ',';
        if (r.observed_ratio)
            out << format_double(*r.observed_ratio);
        out << '\n';
    }
}

std::string describe(const std::exception& e)
{
    std::string msg = e.what();
    if (const auto* f = dynamic_cast<const StepFailure*>(&e)) {
        const std::string tag = "step " + std::to_string(f->step());
        if (msg.find(tag) == std::string::npos)
            msg = tag + ": " + msg;
    }
    return msg;
}

}  // namespace

std::string format_double(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string stability_path(const std::string& out_path)
{
    return std::filesystem::path(out_path).replace_extension(".stability.json").string();
}

std::string convergence_path(const std::string& out_path)
{
    return std::filesystem::path(out_path).replace_extension(".convergence.csv").string();
}

RunConfig parse_config(const json& doc)
{
    check_keys(doc, {"scenario", "problem", "h", "outputs", "convergence_steps", "out_path"}, "config");
    RunConfig cfg;
    if (doc.contains("scenario") == doc.contains("problem"))
        throw ConfigError("config: exactly one of 'scenario' and 'problem' is required");
    if (doc.contains("scenario")) {
        cfg.label = text(doc, "scenario", "config");
        cfg.make = registry_factory(cfg.label);
    } else {
        cfg.make = inline_problem(doc.at("problem"), cfg.label);
    }

    cfg.h = number(doc, "h", "config");
    require_step(cfg.h, "config.h");
    cfg.out_path = text(doc, "out_path", "config");
    if (cfg.out_path.empty())
        throw ConfigError("config: 'out_path' is empty");

    if (doc.contains("outputs")) {
        const json& outs = doc.at("outputs");
        if (!outs.is_array() || outs.empty())
            throw ConfigError("config: 'outputs' must be a nonempty array");
        cfg.trace = false;
        for (const json& o : outs) {
            const std::string name = o.is_string() ? o.get<std::string>() : "";
            if (name == "trace")
                cfg.trace = true;
            else if (name == "stability")
                cfg.stability = true;
            else if (name == "convergence")
                cfg.convergence = true;
            else
                throw ConfigError("config: unknown output '" + o.dump() + "'");
        }
    }
    if (doc.contains("convergence_steps")) {
        const json& steps = doc.at("convergence_steps");
        if (!steps.is_array())
            throw ConfigError("config: 'convergence_steps' must be an array");
        for (const json& s : steps) {
            if (!s.is_number())
                throw ConfigError("config: convergence steps must be numbers");
            cfg.convergence_steps.push_back(s.get<double>());
            require_step(cfg.convergence_steps.back(), "config.convergence_steps");
        }
    }
    if (cfg.convergence && cfg.convergence_steps.empty())
        throw ConfigError("config: convergence requested but 'convergence_steps' is empty");
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config '" + path + "'");
    try {
        return parse_config(json::parse(in));
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
}

std::vector<ConvergenceRow> convergence_study(const ScenarioFactory& make, const std::vector<double>& steps)
{
    std::vector<ConvergenceRow> rows;
    for (double h : steps) {
        const Scenario s = make(h);
        if (!s.has_ground_truth())
            throw ConfigError("convergence study needs an exact solution; scenario '" + s.name + "' has none");
        const Grid& g = s.problem.grid;
        double err = 0.0;
        if (s.kind == ScenarioKind::Derivative) {
            const std::vector<double> d = derivative_series(s);
            for (std::size_t n = 0; n < d.size(); ++n)
                err = std::max(err, std::abs(d[n] - s.exact_vofd(g.time(n))));
        } else {
            const SolutionTrace tr = solve(s);
            for (std::size_t n = 0; n < tr.size(); ++n)
                err = std::max(err, std::abs(tr.u[n] - s.exact_u(tr.t[n])));
        }
        ConvergenceRow row{h, g.N, err, std::nullopt};
        if (!rows.empty())
            row.observed_ratio = rows.back().max_abs_error / err;
        rows.push_back(row);
    }
    return rows;
}

int run(const RunConfig& config, std::ostream& err)
{
    Scenario s;
    try {
        s = config.make(config.h);
        if (s.kind == ScenarioKind::Oscillator)
            validate(s.problem);
        if (config.stability && s.kind == ScenarioKind::Derivative)
            throw ConfigError("stability is not defined for derivative scenario '" + s.name + "'");
    } catch (const Error& e) {
        err << "vofde: config error: " << e.what() << '\n';
        return kConfigError;
    }

    int status = kOk;
    try {
        if (s.kind == ScenarioKind::Derivative) {
            if (config.trace)
                write_derivative_csv(s, derivative_series(s), config.out_path);
        } else if (config.trace || config.stability) {
            std::unique_ptr<SolutionTrace> trace;
            try {
                trace = std::make_unique<SolutionTrace>(solve(s));
            } catch (const ImplicitSolveError& e) {
                if (config.trace) {
                    write_trace_csv(e.partial(), nullptr, config.out_path);
                    err << "vofde: partial trace (" << e.partial().size() << " nodes) written to "
                        << config.out_path << '\n';
                }
                throw;
            }
            std::optional<StabilityReport> report;
            if (config.stability) {
                if (s.problem.alpha.time_only()) {
                    report = stability_report(s.problem);
                } else {
                    report = stability_report(s.problem, *trace);
                    err << "vofde: warning: order of '" << s.name
                        << "' depends on the state; stability report is conditional on the computed trace\n";
                    status = kImplicitStability;
                }
                write_stability_json(config.label, s.problem.grid, *report, stability_path(config.out_path));
                if (!report->satisfied)
                    err << "vofde: warning: spectral radius " << format_double(report->max_rho)
                        << " exceeds 1\n";
            }
            if (config.trace)
                write_trace_csv(*trace, report ? &*report : nullptr, config.out_path);
        }
        if (config.convergence)
            write_convergence_csv(convergence_study(config.make, config.convergence_steps),
                                  convergence_path(config.out_path));
    } catch (const ConfigError& e) {
        err << "vofde: config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const Error& e) {
        err << "vofde: solver failure: " << describe(e) << '\n';
        return kSolverFailure;
    }
    return status;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Variable-order fractional oscillator solver"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "Run a JSON config");
    run_cmd->add_option("--config", config_path, "Config file")->required();

    std::string name;
    double h = 0.0;
    bool stability = false;
    std::vector<double> steps;
    std::string out_path;
    auto* sc = app.add_subcommand("scenario", "Run a named scenario and write its trace");
    sc->set_help_flag("--help", "Print this help message and exit");
    sc->add_option("--name", name, "Scenario name")->required();
    sc->add_option("--h", h, "Step size")->required();
    sc->add_flag("--stability", stability, "Write the spectral-radius report");
    sc->add_option("--convergence", steps, "Comma-separated steps for a convergence table")->delimiter(',');
    sc->add_option("--out", out_path, "Trace CSV path")->required();

    auto* list = app.add_subcommand("list", "List the scenario registry");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, x;
        const int rc = app.exit(e, o, x);
        out << o.str();
        err << x.str();
        return rc == 0 ? kOk : kConfigError;
    }

    if (list->parsed()) {
        for (const auto& info : reference::scenario_registry()) {
            char horizon[16];
            std::snprintf(horizon, sizeof horizon, "%g", info.horizon);
            out << info.name << std::string(10 - std::min<std::size_t>(9, info.name.size()), ' ') << "T="
                << horizon << "  " << info.description << '\n';
        }
        return kOk;
    }

    RunConfig cfg;
    try {
        if (run_cmd->parsed()) {
            cfg = load_config(config_path);
        } else {
            cfg.label = name;
            cfg.make = registry_factory(name);
            require_step(h, "--h");
            cfg.h = h;
            cfg.stability = stability;
            cfg.convergence = !steps.empty();
            for (double s : steps)
                require_step(s, "--convergence");
            cfg.convergence_steps = steps;
            cfg.out_path = out_path;
        }
    } catch (const ConfigError& e) {
        err << "vofde: config error: " << e.what() << '\n';
        return kConfigError;
    }
    return run(cfg, err);
}

}  // namespace vofde::cli

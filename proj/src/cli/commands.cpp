#include "occbound/cli.hpp"

#include "occbound/core_bounds.hpp"
#include "occbound/errors.hpp"
#include "occbound/integral_bounds.hpp"
#include "occbound/simulation.hpp"
#include "occbound/verification.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>

namespace occbound::cli {

namespace {

struct Common {
    double a = 1.0, b = 1.0, k = 0.0;
    std::uint64_t seed = 1;
    std::optional<double> tol;
    std::string format;
    std::string out;
    unsigned threads = 0;

    CoefficientBox box() const { return CoefficientBox(a, b, k); }
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--a", c.a, "lower diffusion bound")->capture_default_str();
    sub->add_option("--b", c.b, "upper diffusion bound")->capture_default_str();
    sub->add_option("--k", c.k, "drift ratio, |beta| <= k sigma^2")->capture_default_str();
    sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
    sub->add_option("--tol", c.tol, "absolute tolerance");
    sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", c.out, "write output to this file instead of stdout");
    sub->add_option("--threads", c.threads, "worker threads, 0 = hardware")
        ->envname("OCCBOUND_THREADS")
        ->capture_default_str();
}

void emit(const Common& c, const std::string& text, std::ostream& out) {
    if (c.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw InputError("cannot write " + c.out);
    f << text;
}

void emit_table(const Common& c, const Table& t, std::ostream& out) {
    emit(c, c.format == "json" ? to_json(t) : to_csv(t), out);
}

struct BoundArgs {
    double x = 0.0;
    std::vector<double> y{0.0};
    std::vector<double> T{1.0};
    std::string grid;
};

Table cmd_bound(const Common& c, const BoundArgs& args) {
    const auto box = c.box();
    const double tol = c.tol.value_or(bounds::kDefaultTol);
    std::vector<std::array<double, 3>> points;
    if (!args.grid.empty()) {
        const auto csv = read_csv_file(args.grid);
        const int iy = csv.column("y"), iT = csv.column("T"), ix = csv.column("x");
        if (iy < 0 || iT < 0) throw InputError(args.grid + ": need columns y and T");
        for (const auto& r : csv.rows) points.push_back({ix >= 0 ? r[ix] : args.x, r[iy], r[iT]});
    } else {
        for (double y : args.y) {
            for (double T : args.T) points.push_back({args.x, y, T});
        }
    }
    Table t{{"x", "y", "T", "G", "error_estimate"}, {}};
    for (const auto& [x, y, T] : points) {
        const auto rep = bounds::occupation_bound(box, Query(x, y, T), tol);
        t.add({x, y, T, rep.value, rep.abs_error_estimate});
    }
    return t;
}

struct ResolventArgs {
    std::vector<double> r{0.0};
    std::vector<double> lambda{1.0};
};

Table cmd_resolvent(const Common& c, const ResolventArgs& args) {
    const auto box = c.box();
    Table t{{"r", "lambda", "Q"}, {}};
    for (double r : args.r) {
        for (double l : args.lambda) t.add({r, l, bounds::resolvent_bound(box, r, l)});
    }
    return t;
}

struct IntegralArgs {
    double x = 0.0;
    double T = 1.0;
    std::string profile;
};

Table cmd_integral_bound(const Common& c, const IntegralArgs& args) {
    const auto box = c.box();
    const double tol = c.tol.value_or(integral::kDefaultTol);
    const auto csv = read_csv_file(args.profile);
    const int it = csv.column("t"), iy = csv.column("y"), iff = csv.column("f");
    if (iy < 0 || iff < 0) throw InputError(args.profile + ": need columns y,f or t,y,f");
    BoundReport rep;
    std::string mode;
    if (it >= 0) {
        std::vector<integral::TimeProfileNode> nodes;
        for (const auto& r : csv.rows) nodes.push_back({r[it], r[iy], r[iff]});
        rep = integral::time_integral_bound(box, args.x, args.T, integral::time_profile_from_grid(nodes), tol);
        mode = "time";
    } else {
        std::vector<std::pair<double, double>> nodes;
        for (const auto& r : csv.rows) nodes.emplace_back(r[iy], r[iff]);
        rep = integral::path_integral_bound(box, args.x, args.T, integral::ProfileFunction::piecewise_linear(nodes), tol);
        mode = "path";
    }
    Table t{{"x", "T", "mode", "bound", "error_estimate"}, {}};
    t.add({args.x, args.T, mode, rep.value, rep.abs_error_estimate});
    return t;
}

struct SimulateArgs {
    std::string control = "extremal";
    std::string control_file;
    std::vector<double> y{0.0};
    std::optional<double> target;
    double x0 = 0.0;
    double T = 1.0;
    double dt = 1e-4;
    std::size_t n_paths = 1000;
    double N = 50.0;
    int M = 50;
    std::string estimator = "window";
    std::string noise = "gaussian";
};

sim::FeedbackControl load_control_file(const CoefficientBox& box, const std::string& path, double T,
                                       std::ostream& err) {
    const auto csv = read_csv_file(path);
    const int ix = csv.column("x"), ib = csv.column("beta"), is = csv.column("sigma");
    if (ix < 0 || ib < 0 || is < 0) throw InputError(path + ": need columns x,beta,sigma");
    std::vector<sim::ControlNode> nodes;
    for (const auto& r : csv.rows) nodes.push_back({r[ix], r[ib], r[is]});
    auto ctrl = sim::make_table_control(nodes, "file");
    auto grid = sim::SamplingGrid::uniform(0.0, T, 2, nodes.front().x, nodes.back().x, 401);
    for (const auto& n : nodes) grid.positions.push_back(n.x);
    const auto rep = sim::validate_admissible(box, ctrl, grid, 1e-12, std::numeric_limits<std::size_t>::max());
    if (!rep.passed) {
        for (auto kind : {sim::Violation::Kind::diffusion_range, sim::Violation::Kind::drift_bound}) {
            const char* what = kind == sim::Violation::Kind::diffusion_range ? "sigma outside [a, b]" : "|beta| > k sigma^2";
            std::size_t count = 0;
            for (const auto& v : rep.violations) {
                if (v.kind != kind) continue;
                if (++count <= 5) err << "violation: " << what << " at t=" << v.t << " x=" << v.x << " by " << v.amount << "\n";
            }
            if (count > 5) err << "violation: " << what << " at " << count - 5 << " more point(s)\n";
        }
        throw InputError(path + ": control is not admissible (worst violation " + std::to_string(rep.worst_violation) + ")");
    }
    return ctrl;
}

Table cmd_simulate(const Common& c, const SimulateArgs& args, std::ostream& err) {
    const auto box = c.box();
    sim::SimConfig cfg;
    cfg.T = args.T;
    cfg.dt = args.dt;
    cfg.n_paths = args.n_paths;
    cfg.x0 = args.x0;
    cfg.N = args.N;
    cfg.seed = c.seed;
    cfg.threads = c.threads;
    cfg.noise = args.noise == "zero" ? sim::NoiseMode::zero : sim::NoiseMode::gaussian;
    cfg.validate();
    if (args.y.empty()) throw InputError("simulate: need at least one level --y");
    const double target = args.target.value_or(args.y.front());
    const auto ctrl = args.control_file.empty()
                          ? sim::make_preset(args.control, box, target, args.T, sim::MollificationParams(args.M))
                          : load_control_file(box, args.control_file, args.T, err);

    const auto prof = sim::estimate_occupation_profile(ctrl, cfg, args.y);
    Table t{{"control", "estimator", "y", "N", "mean", "std_error", "n_paths", "failed_paths"}, {}};
    auto put = [&](const std::vector<sim::OccupationEstimate>& ests, const char* name) {
        for (const auto& e : ests) {
            t.add({ctrl.label, std::string(name), e.level, args.N, e.mean, e.std_error,
                   static_cast<std::int64_t>(e.n_paths), static_cast<std::int64_t>(e.failed_paths)});
            for (const auto& w : e.warnings) err << "warning: " << name << " y=" << e.level << ": " << w << "\n";
        }
    };
    if (args.estimator != "local_time") put(prof.window, "window");
    if (args.estimator != "window") put(prof.local_time, "local_time");
    return t;
}

struct VerifyArgs {
    std::vector<std::string> only;
    bool strict = false;
    std::optional<double> min_ratio;
    std::size_t n_paths = 1000;
    double dt = 1e-4;
    double N = 15.0;
};

int cmd_verify(const Common& c, const VerifyArgs& args, std::ostream& out, std::ostream& err) {
    auto wanted = [&](const std::string& s) {
        return args.only.empty() || std::find(args.only.begin(), args.only.end(), s) != args.only.end();
    };
    std::vector<verify::CheckReport> reports;
    auto append = [&](std::vector<verify::CheckReport> more) {
        reports.insert(reports.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    };
    if (wanted("analytic")) {
        verify::SuiteOptions opts;
        opts.tolerance_override = c.tol;
        append(verify::run_analytic_suite(verify::AnalyticGrid::defaults(), opts));
    }
    sim::SimConfig cfg;
    cfg.T = 1.0;
    cfg.dt = args.dt;
    cfg.n_paths = args.n_paths;
    cfg.N = args.N;
    cfg.seed = c.seed;
    cfg.threads = c.threads;
    const verify::ExperimentOptions eopts{args.strict, args.min_ratio};
    const CoefficientBox box(1, 2, 1);
    const sim::MollificationParams m(20);
    if (wanted("validity")) {
        cfg.validate();
        append(verify::run_validity_experiment(box, sim::adversarial_suite(box, 0.0, cfg.T, m),
                                               {{0, 0}, {0, 0.2}, {0, -0.5}, {0.3, 0}, {0.3, 0.2}, {0.3, -0.5}}, cfg,
                                               eopts));
    }
    if (wanted("sharpness")) {
        cfg.validate();
        append(verify::run_sharpness_experiment(box, 0.0, 0.0, cfg.T, {m.M()}, cfg, eopts));
        append(verify::run_sharpness_experiment(CoefficientBox(1, 1, 1), 0.0, 0.0, cfg.T, {m.M()}, cfg, eopts));
    }
    if (wanted("integral")) {
        cfg.validate();
        std::vector<sim::FeedbackControl> ctrls;
        for (const char* name : {"extremal", "brownian", "bang_bang"}) ctrls.push_back(sim::make_preset(name, box, 0.0, cfg.T, m));
        append(verify::run_integral_experiment(
            box, ctrls, {integral::ProfileFunction::indicator(-0.2, 0.3), integral::ProfileFunction::tent(0.0, 0.5, 1.0)},
            cfg, eopts));
    }

    if (c.format == "csv") {
        Table t{{"check", "point", "value", "tolerance", "passed", "runtime_s"}, {}};
        for (const auto& r : reports) {
            t.add({r.name, r.point, r.value, r.tolerance, std::int64_t{r.passed}, r.runtime_s});
        }
        emit(c, to_csv(t), out);
    } else {
        emit(c, verify::to_json_lines(reports), out);
    }
    err << verify::summary_table(reports);
    return verify::all_passed(reports) ? kPass : kVerificationFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Occupation density bounds for controlled diffusions", "occbound"};
    app.require_subcommand(1);
    app.set_config("--config", "", "scenario file (TOML); flags override its values");

    Common common;
    int status = kPass;

    BoundArgs bound;
    auto* s_bound = app.add_subcommand("bound", "sharp upper bound G(x, y, T)");
    add_common(s_bound, common);
    s_bound->add_option("--x", bound.x, "start point")->capture_default_str();
    s_bound->add_option("--y", bound.y, "level(s)")->delimiter(',');
    s_bound->add_option("--T", bound.T, "horizon(s)")->delimiter(',');
    s_bound->add_option("--grid", bound.grid, "CSV with columns y,T (optional x)");

    ResolventArgs res;
    auto* s_res = app.add_subcommand("resolvent", "Laplace-domain bound Q_lambda(r)");
    add_common(s_res, common);
    s_res->add_option("--r", res.r, "distance(s) |x - y|")->delimiter(',');
    s_res->add_option("--lambda", res.lambda, "rate(s) lambda > 0")->delimiter(',');

    IntegralArgs integ;
    auto* s_int = app.add_subcommand("integral-bound", "bound on E int_0^T f(X_s) ds for a tabulated profile");
    add_common(s_int, common);
    s_int->add_option("--x", integ.x, "start point")->capture_default_str();
    s_int->add_option("--T", integ.T, "horizon")->capture_default_str();
    s_int->add_option("--profile", integ.profile, "CSV with columns y,f or t,y,f")->required();

    SimulateArgs simargs;
    auto* s_sim = app.add_subcommand("simulate", "Monte Carlo occupation density estimates");
    add_common(s_sim, common);
    s_sim->add_option("--control", simargs.control, "preset name")
        ->check(CLI::IsMember(sim::preset_names()))
        ->capture_default_str();
    s_sim->add_option("--control-file", simargs.control_file, "CSV with columns x,beta,sigma");
    s_sim->add_option("--y", simargs.y, "level(s)")->delimiter(',');
    s_sim->add_option("--target", simargs.target, "level the preset steers towards (default: first --y)");
    s_sim->add_option("--x0", simargs.x0, "start point")->capture_default_str();
    s_sim->add_option("--T", simargs.T, "horizon")->capture_default_str();
    s_sim->add_option("--dt", simargs.dt, "Euler step")->capture_default_str();
    s_sim->add_option("--n-paths", simargs.n_paths, "number of paths")->capture_default_str();
    s_sim->add_option("--N", simargs.N, "window half-width is 1/N")->capture_default_str();
    s_sim->add_option("--M", simargs.M, "ramp parameter of the extremal control")->capture_default_str();
    s_sim->add_option("--estimator", simargs.estimator, "window, local_time or both")
        ->check(CLI::IsMember({"window", "local_time", "both"}))
        ->capture_default_str();
    s_sim->add_option("--noise", simargs.noise, "gaussian or zero")
        ->check(CLI::IsMember({"gaussian", "zero"}))
        ->capture_default_str();

    VerifyArgs ver;
    auto* s_ver = app.add_subcommand("verify", "run verification suites; exit 0 iff all checks pass");
    add_common(s_ver, common);
    s_ver->add_option("--only", ver.only, "suites to run")
        ->delimiter(',')
        ->check(CLI::IsMember({"analytic", "validity", "sharpness", "integral"}));
    s_ver->add_flag("--strict", ver.strict, "fail checks that carry warnings");
    s_ver->add_option("--min-ratio", ver.min_ratio, "sharpness: also require mean >= ratio * G");
    s_ver->add_option("--n-paths", ver.n_paths, "paths per Monte Carlo estimate")->capture_default_str();
    s_ver->add_option("--dt", ver.dt, "Euler step")->capture_default_str();
    s_ver->add_option("--N", ver.N, "window half-width is 1/N")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        if (s_bound->parsed()) emit_table(common, cmd_bound(common, bound), out);
        if (s_res->parsed()) emit_table(common, cmd_resolvent(common, res), out);
        if (s_int->parsed()) emit_table(common, cmd_integral_bound(common, integ), out);
        if (s_sim->parsed()) emit_table(common, cmd_simulate(common, simargs, err), out);
        if (s_ver->parsed()) status = cmd_verify(common, ver, out, err);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kInputError;
    } catch (const ToleranceError& e) {
        err << "error: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::length_error& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kNumericalFailure;
    }
    return status;
}

}  // namespace occbound::cli

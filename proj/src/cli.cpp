#include "quadprop/cli.hpp"

#include "quadprop/errors.hpp"
#include "quadprop/gridprop.hpp"
#include "quadprop/io.hpp"
#include "quadprop/nls.hpp"
#include "quadprop/strichartz.hpp"
#include "quadprop/verify.hpp"

#include <cmath>
#include <fstream>
#include <iostream>

namespace quadprop {

namespace {

struct RunContext {
    json config;
    std::filesystem::path out_dir;
    std::uint64_t seed = 20250810;
    std::string format = "csv"; // csv | binary | json
    json report;
    std::vector<std::string> artifacts;

    void note_artifact(const std::filesystem::path& p) { artifacts.push_back(p.string()); }
};

const std::vector<std::string> kTopKeys = {
    "schema", "command", "spec",   "preset",  "grid",       "time",  "initial", "method",
    "nls",    "kernel",  "output", "tolerances", "strichartz", "seed", "verify"};

HamiltonianSpec spec_from_config(const json& cfg) {
    if (cfg.contains("spec") && cfg.contains("preset"))
        throw SpecError("config: give either 'spec' or 'preset', not both");
    if (cfg.contains("spec")) return spec_from_json(cfg.at("spec"));
    if (cfg.contains("preset")) {
        const json& p = cfg.at("preset");
        reject_unknown_keys(p, {"name", "E", "omega", "lambda", "omega1", "omega2", "t_max",
                                "omega_sq", "force"},
                            "preset");
        PresetParams pp;
        pp.E = p.value("E", pp.E);
        pp.omega = p.value("omega", pp.omega);
        pp.lambda = p.value("lambda", pp.lambda);
        pp.omega1 = p.value("omega1", pp.omega1);
        pp.omega2 = p.value("omega2", pp.omega2);
        pp.t_max = p.value("t_max", pp.t_max);
        if (p.contains("omega_sq")) pp.omega_sq = coefficient_from_json(p.at("omega_sq"));
        if (p.contains("force")) pp.force = coefficient_from_json(p.at("force"));
        return preset(p.at("name").get<std::string>(), pp);
    }
    throw SpecError("config: missing 'spec' or 'preset'");
}

Grid grid_from_config(const json& cfg, int dimension) {
    if (!cfg.contains("grid")) throw SpecError("config: missing 'grid'");
    const json& g = cfg.at("grid");
    std::vector<GridAxis> axes;
    auto axis_from = [](const json& a) {
        reject_unknown_keys(a, {"n", "center", "spacing"}, "grid axis");
        GridAxis ax;
        ax.n = a.at("n").get<std::size_t>();
        ax.center = a.value("center", 0.0);
        ax.spacing = a.at("spacing").get<double>();
        return ax;
    };
    if (g.contains("axes")) {
        reject_unknown_keys(g, {"axes"}, "grid");
        for (const auto& a : g.at("axes")) axes.push_back(axis_from(a));
    } else {
        axes.push_back(axis_from(g));
    }
    if (static_cast<int>(axes.size()) == 1 && dimension > 1)
        axes.assign(static_cast<std::size_t>(dimension), axes[0]);
    if (static_cast<int>(axes.size()) != dimension)
        throw SpecError("config: grid axes count does not match the spec dimension");
    return make_grid(axes);
}

std::vector<cdouble> profile_from_config(const json& j, const GridAxis& ax) {
    reject_unknown_keys(j, {"kind", "center", "width", "momentum", "n", "amp", "speed"},
                        "initial profile");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "gaussian")
        return gaussian_profile(ax, j.value("center", 0.0), j.value("width", 1.0),
                                j.value("momentum", 0.0));
    if (kind == "hermite")
        return hermite_profile(ax, j.at("n").get<int>(), j.value("center", 0.0),
                               j.value("width", 1.0));
    if (kind == "soliton")
        return soliton_profile(ax, j.value("amp", 1.0), j.value("speed", 0.0),
                               j.value("center", 0.0));
    throw SpecError("unknown initial profile kind: " + kind);
}

GridState initial_state(const json& cfg, const Grid& grid) {
    if (!cfg.contains("initial")) throw SpecError("config: missing 'initial'");
    const json& init = cfg.at("initial");
    if (init.contains("kind") && init.at("kind") == "file") {
        reject_unknown_keys(init, {"kind", "path"}, "initial");
        return read_state_binary(init.at("path").get<std::string>());
    }
    std::vector<std::vector<cdouble>> profs;
    if (init.contains("axes")) {
        const auto& list = init.at("axes");
        if (static_cast<int>(list.size()) != grid.dim())
            throw SpecError("initial.axes must match the grid dimension");
        for (int a = 0; a < grid.dim(); ++a)
            profs.push_back(profile_from_config(list[static_cast<std::size_t>(a)],
                                                grid.axes[static_cast<std::size_t>(a)]));
    } else {
        for (int a = 0; a < grid.dim(); ++a)
            profs.push_back(profile_from_config(init, grid.axes[static_cast<std::size_t>(a)]));
    }
    return product_state(grid, profs);
}

Method method_from_config(const json& cfg) {
    const std::string m = cfg.value("method", "fast");
    if (m == "fast") return Method::Fast;
    if (m == "direct") return Method::Direct;
    throw SpecError("config: method must be 'fast' or 'direct'");
}

PropagatorOptions options_from_config(const json& cfg) {
    PropagatorOptions opt;
    if (cfg.contains("tolerances")) {
        const json& t = cfg.at("tolerances");
        reject_unknown_keys(t, {"characteristic", "quadrature", "split_step_dt", "fast_floor_frac"},
                            "tolerances");
        opt.characteristic_tol = t.value("characteristic", opt.characteristic_tol);
        opt.phase.quad_abs_tol = t.value("quadrature", opt.phase.quad_abs_tol);
        opt.split_step_dt = t.value("split_step_dt", opt.split_step_dt);
        opt.fast_floor_frac = t.value("fast_floor_frac", opt.fast_floor_frac);
    }
    return opt;
}

std::vector<double> times_from_config(const json& cfg, const char* ctx) {
    if (!cfg.contains("time")) throw SpecError(std::string("config: missing 'time' for ") + ctx);
    const json& t = cfg.at("time");
    reject_unknown_keys(t, {"t", "times", "T", "dt"}, "time");
    if (t.contains("t")) return {t.at("t").get<double>()};
    if (t.contains("times")) return t.at("times").get<std::vector<double>>();
    if (t.contains("T") && t.contains("dt")) {
        std::vector<double> out;
        const double T = t.at("T").get<double>(), dt = t.at("dt").get<double>();
        if (!(dt > 0.0) || !(T > 0.0)) throw SpecError("time: T and dt must be positive");
        for (double x = dt; x <= T + dt / 2.0; x += dt) out.push_back(x);
        return out;
    }
    throw SpecError("time: give 't', 'times' or {'T','dt'}");
}

void cmd_derive(RunContext& ctx) {
    auto spec = spec_from_config(ctx.config);
    auto times = times_from_config(ctx.config, "derive");
    const double horizon = *std::max_element(times.begin(), times.end());
    auto opt = options_from_config(ctx.config);
    json axes_report = json::array();
    for (int a = 0; a < spec.dimension; ++a) {
        CharacteristicOptions copt;
        copt.tol = opt.characteristic_tol;
        auto sol = std::make_shared<CharacteristicSolution>(
            solve_characteristic(spec, a, horizon, copt));
        auto path = ctx.out_dir / ("characteristic_axis" + std::to_string(a) + ".csv");
        write_characteristic_csv(path, *sol);
        ctx.note_artifact(path);

        PhaseCalculator calc(spec, a, sol, opt.phase);
        std::vector<MehlerPhase> phases;
        for (double t : times)
            if (!sol->in_caustic_band(t)) phases.push_back(calc.at(t));
        auto ppath = ctx.out_dir / ("phases_axis" + std::to_string(a) + ".csv");
        write_phases_csv(ppath, phases);
        ctx.note_artifact(ppath);

        json ja;
        ja["axis"] = a;
        ja["method"] = sol->method() == CharacteristicSolution::Method::ClosedForm ? "closed-form"
                                                                                   : "numeric";
        ja["caustics"] = sol->caustics();
        ja["turning_points"] = sol->turning_points();
        axes_report.push_back(ja);
    }
    ctx.report["axes"] = axes_report;
}

void cmd_kernel(RunContext& ctx) {
    auto spec = spec_from_config(ctx.config);
    const json& k = ctx.config.value("kernel", json::object());
    reject_unknown_keys(k, {"y", "x_min", "x_max", "samples"}, "kernel");
    auto times = times_from_config(ctx.config, "kernel");
    const double horizon = *std::max_element(times.begin(), times.end());
    Propagator prop(spec, horizon, options_from_config(ctx.config));
    const double y0 = k.value("y", 0.0);
    const double x_min = k.value("x_min", -5.0), x_max = k.value("x_max", 5.0);
    const int samples = k.value("samples", 256);
    for (double t : times) {
        auto phases = prop.phases_at(t);
        std::vector<double> xs(static_cast<std::size_t>(samples));
        std::vector<cdouble> vals(xs.size());
        std::vector<double> xv(static_cast<std::size_t>(spec.dimension), 0.0);
        std::vector<double> yv(static_cast<std::size_t>(spec.dimension), 0.0);
        yv[0] = y0;
        for (int i = 0; i < samples; ++i) {
            xs[static_cast<std::size_t>(i)] = x_min + (x_max - x_min) * i / (samples - 1);
            xv[0] = xs[static_cast<std::size_t>(i)];
            vals[static_cast<std::size_t>(i)] = eval_kernel(phases, xv, yv);
        }
        auto path = ctx.out_dir / ("kernel_t" + format_double(t) + ".csv");
        write_kernel_slice_csv(path, xs, vals);
        ctx.note_artifact(path);
    }
}

void cmd_propagate(RunContext& ctx) {
    auto spec = spec_from_config(ctx.config);
    auto grid = grid_from_config(ctx.config, spec.dimension);
    auto u0 = initial_state(ctx.config, grid);
    auto times = times_from_config(ctx.config, "propagate");
    const auto method = method_from_config(ctx.config);
    Propagator prop(spec, *std::max_element(times.begin(), times.end()),
                    options_from_config(ctx.config));
    json runs = json::array();
    for (double t : times) {
        auto out = prop.propagate(u0, t, method);
        json jr;
        jr["t"] = t;
        jr["norm"] = l2_norm(out);
        jr["norm_drift"] = std::abs(l2_norm(out) / l2_norm(u0) - 1.0);
        jr["centroid"] = centroid(out);
        jr["sup"] = sup_norm(out);
        runs.push_back(jr);
        const std::string stem = "state_t" + format_double(t);
        if (ctx.format == "csv" || ctx.format == "json") {
            auto path = ctx.out_dir / (stem + ".csv");
            write_state_csv(path, out);
            ctx.note_artifact(path);
        }
        if (ctx.format == "binary") {
            auto path = ctx.out_dir / (stem + ".qprd");
            write_state_binary(path, out);
            ctx.note_artifact(path);
        }
    }
    ctx.report["states"] = runs;
}

void cmd_nls(RunContext& ctx) {
    auto spec = spec_from_config(ctx.config);
    auto grid = grid_from_config(ctx.config, spec.dimension);
    auto u0 = initial_state(ctx.config, grid);
    if (!ctx.config.contains("nls")) throw SpecError("config: missing 'nls' section");
    const json& jn = ctx.config.at("nls");
    reject_unknown_keys(jn, {"p", "h"}, "nls");
    Nonlinearity nl;
    nl.p = jn.at("p").get<double>();
    nl.h = jn.contains("h") ? coefficient_from_json(jn.at("h")) : CoefficientFn::constant(1.0);
    const json& t = ctx.config.at("time");
    const double T = t.at("T").get<double>(), dt = t.at("dt").get<double>();

    auto traj = solve_nls(spec, nl, u0, T, dt);
    auto path = ctx.out_dir / "trajectory.csv";
    write_trajectory_csv(path, traj);
    ctx.note_artifact(path);
    if (ctx.format == "binary") {
        for (const auto& [ts, snap] : traj.snapshots) {
            auto sp = ctx.out_dir / ("snapshot_t" + format_double(ts) + ".qprd");
            write_state_binary(sp, snap);
            ctx.note_artifact(sp);
        }
    }
    ctx.report["steps"] = traj.times.size() - 1;
    ctx.report["final_mass"] = traj.mass_log.back();
    ctx.report["mass_drift"] = std::abs(traj.mass_log.back() / traj.mass_log.front() - 1.0);
    if (traj.truncated_by_guard)
        throw NumericError(traj.diagnostic);
}

void cmd_strichartz(RunContext& ctx) {
    const json& s = ctx.config.value("strichartz", json::object());
    reject_unknown_keys(s, {"pairs", "weight"}, "strichartz");
    json table = json::array();
    std::ofstream csv;
    auto path = ctx.out_dir / "admissibility.csv";
    {
        std::error_code ec;
        std::filesystem::create_directories(ctx.out_dir, ec);
    }
    csv.open(path);
    if (!csv) throw IoError("cannot open " + path.string());
    csv << "q,r,sigma,classification\n";
    auto cls_name = [](Admissibility a) {
        switch (a) {
        case Admissibility::Sharp: return "sharp";
        case Admissibility::Nonsharp: return "nonsharp";
        case Admissibility::Inadmissible: return "inadmissible";
        case Admissibility::ForbiddenEndpoint: return "forbidden_endpoint";
        }
        return "?";
    };
    if (s.contains("pairs")) {
        for (const auto& row : s.at("pairs")) {
            const double q = row.at(0).get<double>();
            const double r = row.at(1).get<double>();
            const double sg = row.at(2).get<double>();
            auto a = is_admissible(q, r, sg);
            csv << format_double(q) << ',' << format_double(r) << ',' << format_double(sg) << ','
                << cls_name(a) << '\n';
            json jrow;
            jrow["q"] = q;
            jrow["r"] = r;
            jrow["sigma"] = sg;
            jrow["classification"] = cls_name(a);
            table.push_back(jrow);
        }
    }
    ctx.note_artifact(path);
    ctx.report["pairs"] = table;

    if (s.contains("weight")) {
        const json& w = s.at("weight");
        reject_unknown_keys(w, {"omegas", "deltas", "k", "delta_cut", "C", "t_max", "spacing"},
                            "weight");
        auto omegas = w.at("omegas").get<std::vector<double>>();
        auto deltas = w.at("deltas").get<std::vector<int>>();
        const int kk = w.value("k", 0);
        const double cut = w.value("delta_cut", 0.1), C = w.value("C", 1.0);
        const double tmax = w.value("t_max", 10.0), h = w.value("spacing", 5e-4);
        std::vector<double> mesh, ws;
        for (double t = h; t <= tmax; t += h) {
            if (std::abs(std::sin(t)) < 1e-9) continue;
            mesh.push_back(t);
            ws.push_back(decay_weight(omegas, deltas, kk, cut, C, t));
        }
        std::vector<double> lambdas;
        for (int i = 0; i <= 24; ++i) lambdas.push_back(std::pow(10.0, 3.0 * i / 24.0));
        auto res = weak_l1_check(mesh, ws, lambdas);
        auto wpath = ctx.out_dir / "weak_l1.csv";
        std::ofstream wcsv(wpath);
        wcsv << "lambda,product\n";
        for (std::size_t i = 0; i < res.lambda.size(); ++i)
            wcsv << format_double(res.lambda[i]) << ',' << format_double(res.product[i]) << '\n';
        ctx.note_artifact(wpath);
        ctx.report["weak_l1_max_product"] = res.max_product;
    }
}

void cmd_verify(RunContext& ctx, const CliOverrides& overrides) {
    VerifyOptions vo;
    vo.seed = ctx.seed;
    vo.full = overrides.verify_full || ctx.config.value("verify", json::object()).value("full", false);
    vo.threads = overrides.threads;
    auto results = verify_suite(vo);
    json checks = json::array();
    for (const auto& r : results) {
        json jc;
        jc["name"] = r.name;
        jc["pass"] = r.pass;
        jc["measured"] = r.measured;
        jc["threshold"] = r.threshold;
        jc["detail"] = r.detail;
        jc["seconds"] = r.seconds;
        checks.push_back(jc);
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << "  (measured " << r.measured
                  << ", tol " << r.threshold << ", " << r.seconds << "s)\n";
    }
    ctx.report["checks"] = checks;
    ctx.report["mode"] = vo.full ? "full" : "light";
    if (!all_passed(results)) throw NumericError("verification suite reported failures");
}

void write_report(RunContext& ctx, const std::string& status, int exit_code,
                  const std::string& error) {
    ctx.report["schema"] = 1;
    ctx.report["seed"] = ctx.seed;
    ctx.report["status"] = status;
    ctx.report["exit_code"] = exit_code;
    if (!error.empty()) ctx.report["error"] = error;
    ctx.report["artifacts"] = ctx.artifacts;
    try {
        std::error_code ec;
        std::filesystem::create_directories(ctx.out_dir, ec);
        std::ofstream out(ctx.out_dir / "report.json");
        out << ctx.report.dump(2) << "\n";
    } catch (...) {
        std::cerr << "quadprop: failed to write report.json\n";
    }
}

} // namespace

int run_command(const std::string& command,
                const std::optional<std::filesystem::path>& config_path,
                const CliOverrides& overrides) {
    RunContext ctx;
    ctx.report["command"] = command;
    ctx.out_dir = overrides.out_dir.value_or("out");

    auto finish_error = [&](const std::string& status, int code, const std::string& what) {
        std::cerr << "quadprop: " << status << ": " << what << "\n";
        write_report(ctx, status, code, what);
        return code;
    };

    try {
        if (config_path) {
            std::ifstream in(*config_path);
            if (!in) throw IoError("cannot open config: " + config_path->string());
            try {
                in >> ctx.config;
            } catch (const json::exception& e) {
                throw SpecError(std::string("config parse error: ") + e.what());
            }
        } else {
            ctx.config = json::object();
        }
        reject_unknown_keys(ctx.config, kTopKeys, "config");
        if (ctx.config.value("schema", 1) != 1) throw SpecError("unsupported config schema");
        if (ctx.config.contains("command") &&
            ctx.config.at("command").get<std::string>() != command)
            throw SpecError("config 'command' disagrees with the invoked subcommand");
        if (ctx.config.contains("output")) {
            const json& o = ctx.config.at("output");
            reject_unknown_keys(o, {"directory", "formats"}, "output");
            if (!overrides.out_dir && o.contains("directory"))
                ctx.out_dir = o.at("directory").get<std::string>();
            if (o.contains("formats") && !overrides.format)
                ctx.format = o.at("formats").at(0).get<std::string>();
        }
        ctx.seed = overrides.seed.value_or(ctx.config.value("seed", std::uint64_t{20250810}));
        if (overrides.format) ctx.format = *overrides.format;
        if (ctx.format != "csv" && ctx.format != "binary" && ctx.format != "json")
            throw SpecError("format must be csv, binary or json");

        if (command == "derive") cmd_derive(ctx);
        else if (command == "kernel") cmd_kernel(ctx);
        else if (command == "propagate") cmd_propagate(ctx);
        else if (command == "nls") cmd_nls(ctx);
        else if (command == "strichartz") cmd_strichartz(ctx);
        else if (command == "verify") cmd_verify(ctx, overrides);
        else throw SpecError("unknown command: " + command);
    } catch (const SpecError& e) {
        return finish_error("validation-error", 2, e.what());
    } catch (const NumericError& e) {
        return finish_error("numeric-error", 3, e.what());
    } catch (const IoError& e) {
        return finish_error("io-error", 4, e.what());
    } catch (const json::exception& e) {
        return finish_error("validation-error", 2, e.what());
    }

    write_report(ctx, "ok", 0, "");
    return 0;
}

} // namespace quadprop

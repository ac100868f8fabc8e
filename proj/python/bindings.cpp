#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "quadprop/cli.hpp"
#include "quadprop/gridprop.hpp"
#include "quadprop/io.hpp"
#include "quadprop/nls.hpp"
#include "quadprop/strichartz.hpp"
#include "quadprop/verify.hpp"

namespace py = pybind11;
using namespace quadprop;

namespace {

GridState state_from_numpy(const Grid& grid, py::array_t<std::complex<double>> values,
                           double time) {
    auto buf = values.request();
    if (static_cast<std::size_t>(buf.size) != grid.size())
        throw SpecError("values length does not match the grid");
    std::vector<cdouble> v(static_cast<std::size_t>(buf.size));
    auto contiguous = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>::
        ensure(values);
    const auto* ptr = static_cast<const std::complex<double>*>(contiguous.request().ptr);
    for (py::ssize_t i = 0; i < buf.size; ++i) v[static_cast<std::size_t>(i)] = ptr[i];
    return make_state(grid, std::move(v), time);
}

py::array_t<std::complex<double>> state_to_numpy(const GridState& s) {
    std::vector<py::ssize_t> shape;
    for (const auto& ax : s.grid.axes) shape.push_back(static_cast<py::ssize_t>(ax.n));
    py::array_t<std::complex<double>> out(shape);
    auto buf = out.request();
    auto* ptr = static_cast<std::complex<double>*>(buf.ptr);
    for (std::size_t i = 0; i < s.values.size(); ++i) ptr[i] = s.values[i];
    return out;
}

HamiltonianSpec preset_from_kwargs(const std::string& name, double E, double omega, double lambda,
                                   double omega1, double omega2, double t_max) {
    PresetParams p;
    p.E = E;
    p.omega = omega;
    p.lambda = lambda;
    p.omega1 = omega1;
    p.omega2 = omega2;
    p.t_max = t_max;
    return preset(name, p);
}

} // namespace

PYBIND11_MODULE(_quadprop, m) {
    m.doc() = "Exact Gaussian propagators for time-dependent quadratic Hamiltonians";

    py::register_exception<SpecError>(m, "SpecError");
    py::register_exception<NumericError>(m, "NumericError");
    py::register_exception<IoError>(m, "IoError");

    py::class_<CoefficientFn>(m, "CoefficientFn")
        .def_static("constant", &CoefficientFn::constant, py::arg("value"))
        .def_static("polynomial", &CoefficientFn::polynomial, py::arg("coeffs"))
        .def_static("sinusoid", &CoefficientFn::sinusoid, py::arg("offset"), py::arg("amplitude"),
                    py::arg("frequency"), py::arg("phase") = 0.0)
        .def_static("piecewise", &CoefficientFn::piecewise, py::arg("breakpoints"),
                    py::arg("values"))
        .def("__call__", &CoefficientFn::value)
        .def("derivative", &CoefficientFn::derivative)
        .def("integral", &CoefficientFn::integral)
        .def("__repr__", &CoefficientFn::describe);

    py::class_<HamiltonianSpec>(m, "HamiltonianSpec")
        .def_readonly("dimension", &HamiltonianSpec::dimension)
        .def_readonly("kinetic", &HamiltonianSpec::kinetic)
        .def_readonly("t_max", &HamiltonianSpec::t_max)
        .def("to_json", [](const HamiltonianSpec& s) { return spec_to_json(s).dump(); })
        .def_static("from_json", [](const std::string& text) {
            return spec_from_json(json::parse(text));
        });

    m.def("preset", &preset_from_kwargs, py::arg("name"), py::arg("E") = 1.0,
          py::arg("omega") = 2.0, py::arg("lam") = 0.6, py::arg("omega1") = 1.0,
          py::arg("omega2") = 1.0, py::arg("t_max") = 16.0);
    m.def("sigma_of_t",
          [](const HamiltonianSpec& s, int axis, double t) { return sigma_of_t(s, axis, t); });
    m.def("validate", [](const HamiltonianSpec& s) {
        std::vector<std::string> out;
        for (const auto& d : validate(s))
            out.push_back("axis " + std::to_string(d.axis) + " " + d.field + ": " + d.rule);
        return out;
    });

    m.def("closed_form_mu", &closed_form_mu, py::arg("sigma"), py::arg("t"));
    m.def(
        "solve_characteristic",
        [](const HamiltonianSpec& spec, int axis, double t_max) {
            auto sol = solve_characteristic(spec, axis, t_max);
            py::dict out;
            const auto& ts = sol.grid_times();
            std::vector<double> mu, mup, nu, nup;
            for (std::size_t i = 0; i < ts.size(); ++i) {
                auto p = sol.grid_point(i);
                mu.push_back(p.mu);
                mup.push_back(p.mu_prime);
                nu.push_back(p.nu);
                nup.push_back(p.nu_prime);
            }
            out["t"] = ts;
            out["mu"] = mu;
            out["mu_prime"] = mup;
            out["nu"] = nu;
            out["nu_prime"] = nup;
            out["caustics"] = sol.caustics();
            return out;
        },
        py::arg("spec"), py::arg("axis"), py::arg("t_max"));

    py::class_<MehlerPhase>(m, "MehlerPhase")
        .def_readonly("alpha", &MehlerPhase::alpha)
        .def_readonly("beta", &MehlerPhase::beta)
        .def_readonly("gamma", &MehlerPhase::gamma)
        .def_readonly("delta", &MehlerPhase::delta)
        .def_readonly("epsilon", &MehlerPhase::epsilon)
        .def_readonly("kappa", &MehlerPhase::kappa)
        .def_readonly("t", &MehlerPhase::t)
        .def_readonly("mu", &MehlerPhase::mu);

    m.def("phase_coefficients", [](const HamiltonianSpec& spec, int axis, double t) {
        auto sol = std::make_shared<CharacteristicSolution>(
            solve_characteristic(spec, axis, std::min(t * 1.5 + 0.1, spec.t_max)));
        return PhaseCalculator(spec, axis, sol).at(t);
    });
    m.def("riccati_oracle", [](const HamiltonianSpec& spec, int axis, double t0, double t) {
        return riccati_oracle(spec, axis, t0, t);
    });

    m.def("eval_kernel", [](const HamiltonianSpec& spec, std::vector<double> x,
                            std::vector<double> y, double t) {
        std::vector<MehlerPhase> phases;
        for (int a = 0; a < spec.dimension; ++a) {
            auto sol = std::make_shared<CharacteristicSolution>(
                solve_characteristic(spec, a, std::min(t * 1.5 + 0.1, spec.t_max)));
            phases.push_back(PhaseCalculator(spec, a, sol).at(t));
        }
        return eval_kernel(phases, x, y);
    });
    m.def("table1_kernel",
          [](const std::string& name, double x, double y, double t, double E, double omega,
             double lambda, double omega0, double k) {
              Table1Params p;
              p.E = E;
              p.omega = omega;
              p.lambda = lambda;
              p.omega0 = omega0;
              p.k = k;
              return table1_kernel(table1_from_name(name), x, y, t, p);
          },
          py::arg("name"), py::arg("x"), py::arg("y"), py::arg("t"), py::arg("E") = 1.0,
          py::arg("omega") = 2.0, py::arg("lam") = 0.6, py::arg("omega0") = 1.0,
          py::arg("k") = 1.0);

    py::class_<GridAxis>(m, "GridAxis")
        .def_readonly("n", &GridAxis::n)
        .def_readonly("center", &GridAxis::center)
        .def_readonly("spacing", &GridAxis::spacing);

    py::class_<Grid>(m, "Grid")
        .def(py::init([](std::size_t n, double center, double spacing) {
                 return make_grid(n, center, spacing);
             }),
             py::arg("n"), py::arg("center"), py::arg("spacing"))
        .def_static("multi",
                    [](const std::vector<std::tuple<std::size_t, double, double>>& axes) {
                        std::vector<GridAxis> ga;
                        for (const auto& [n, c, s] : axes) ga.push_back({n, c, s, {}});
                        return make_grid(ga);
                    })
        .def_property_readonly("axes", [](const Grid& g) { return g.axes; })
        .def("points", [](const Grid& g, int axis) {
            std::vector<double> xs;
            const auto& ax = g.axes.at(static_cast<std::size_t>(axis));
            for (std::size_t i = 0; i < ax.n; ++i) xs.push_back(ax.point(i));
            return xs;
        });

    py::class_<GridState>(m, "GridState")
        .def(py::init(&state_from_numpy), py::arg("grid"), py::arg("values"), py::arg("time") = 0.0)
        .def_property_readonly("values", &state_to_numpy)
        .def_property_readonly("grid", [](const GridState& s) { return s.grid; })
        .def_readonly("time", &GridState::time)
        .def("mass", [](const GridState& s) { return mass(s); })
        .def("l2_norm", [](const GridState& s) { return l2_norm(s); })
        .def("sup_norm", [](const GridState& s) { return sup_norm(s); })
        .def("centroid", [](const GridState& s) { return centroid(s); });

    m.def("gaussian_state",
          [](const Grid& g, std::vector<double> center, std::vector<double> width,
             std::vector<double> momentum) {
              std::vector<std::vector<cdouble>> profs;
              for (int a = 0; a < g.dim(); ++a)
                  profs.push_back(gaussian_profile(g.axes[static_cast<std::size_t>(a)],
                                                   center.at(static_cast<std::size_t>(a)),
                                                   width.at(static_cast<std::size_t>(a)),
                                                   momentum.at(static_cast<std::size_t>(a))));
              return product_state(g, profs);
          });
    m.def("hermite_state", [](const Grid& g, int n) {
        std::vector<std::vector<cdouble>> profs;
        for (int a = 0; a < g.dim(); ++a)
            profs.push_back(hermite_profile(g.axes[static_cast<std::size_t>(a)], n));
        return product_state(g, profs);
    });
    m.def("soliton_state", [](const Grid& g, double amp, double speed, double center) {
        return make_state(g, soliton_profile(g.axes.at(0), amp, speed, center));
    });
    m.def("resample", [](const GridState& s, const Grid& g) { return resample(s, g); });

    py::enum_<Method>(m, "Method").value("direct", Method::Direct).value("fast", Method::Fast);

    py::class_<Propagator>(m, "Propagator")
        .def(py::init([](const HamiltonianSpec& spec, double horizon) {
                 return Propagator(spec, horizon);
             }),
             py::arg("spec"), py::arg("horizon"))
        .def("propagate", &Propagator::propagate, py::arg("state"), py::arg("t"),
             py::arg("method") = Method::Fast)
        .def("two_time_apply", &Propagator::two_time_apply, py::arg("state"), py::arg("s"),
             py::arg("t"), py::arg("method") = Method::Fast)
        .def("dispersive_sup_check", &Propagator::dispersive_sup_check);

    m.def(
        "propagate",
        [](const HamiltonianSpec& spec, const GridState& s, double t, Method method) {
            return propagate(spec, s, t, method);
        },
        py::arg("spec"), py::arg("state"), py::arg("t"), py::arg("method") = Method::Fast);

    py::class_<Nonlinearity>(m, "Nonlinearity")
        .def(py::init([](double p, double h) {
                 Nonlinearity nl;
                 nl.p = p;
                 nl.h = CoefficientFn::constant(h);
                 return nl;
             }),
             py::arg("p"), py::arg("h"))
        .def(py::init([](double p, const CoefficientFn& h) {
                 Nonlinearity nl;
                 nl.p = p;
                 nl.h = h;
                 return nl;
             }),
             py::arg("p"), py::arg("h"));

    m.def("subcritical_check", &subcritical_check, py::arg("p"), py::arg("d"));

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("times", &Trajectory::times)
        .def_readonly("mass_log", &Trajectory::mass_log)
        .def_readonly("sup_log", &Trajectory::sup_log)
        .def_readonly("centroid_log", &Trajectory::centroid_log)
        .def_readonly("truncated_by_guard", &Trajectory::truncated_by_guard)
        .def_property_readonly("snapshots", [](const Trajectory& t) {
            std::vector<std::pair<double, GridState>> out(t.snapshots.begin(), t.snapshots.end());
            return out;
        });

    m.def("solve_nls",
          [](const HamiltonianSpec& spec, const Nonlinearity& nl, const GridState& u0, double T,
             double dt) { return solve_nls(spec, nl, u0, T, dt); },
          py::arg("spec"), py::arg("nl"), py::arg("u0"), py::arg("T"), py::arg("dt"));

    m.def("is_admissible", [](double q, double r, double sigma) {
        switch (is_admissible(q, r, sigma)) {
        case Admissibility::Sharp: return "sharp";
        case Admissibility::Nonsharp: return "nonsharp";
        case Admissibility::Inadmissible: return "inadmissible";
        case Admissibility::ForbiddenEndpoint: return "forbidden_endpoint";
        }
        return "?";
    });
    m.def("endpoint", [](double sigma) {
        auto p = endpoint(sigma);
        return std::make_pair(p.q, p.r);
    });
    m.def("decay_weight",
          [](std::vector<double> omegas, std::vector<int> deltas, int k, double delta_cut, double C,
             double t) { return decay_weight(omegas, deltas, k, delta_cut, C, t); });
    m.def("mixed_norm", &mixed_norm, py::arg("trajectory"), py::arg("q"), py::arg("r"));

    m.def(
        "verify",
        [](bool full, std::uint64_t seed) {
            VerifyOptions vo;
            vo.full = full;
            vo.seed = seed;
            auto results = verify_suite(vo);
            py::list out;
            for (const auto& r : results) {
                py::dict d;
                d["name"] = r.name;
                d["pass"] = r.pass;
                d["measured"] = r.measured;
                d["threshold"] = r.threshold;
                d["detail"] = r.detail;
                d["seconds"] = r.seconds;
                out.append(d);
            }
            return out;
        },
        py::arg("full") = false, py::arg("seed") = 20250810);
}

#include "quadprop/io.hpp"
#include "quadprop/errors.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace quadprop {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, mode);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    return out;
}

} // namespace

void write_characteristic_csv(const std::filesystem::path& path, const CharacteristicSolution& sol) {
    auto out = open_out(path);
    out << "t,mu,mu_prime,nu,nu_prime\n";
    const auto& ts = sol.grid_times();
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto p = sol.grid_point(i);
        out << format_double(ts[i]) << ',' << format_double(p.mu) << ',' << format_double(p.mu_prime)
            << ',' << format_double(p.nu) << ',' << format_double(p.nu_prime) << '\n';
    }
}

void write_phases_csv(const std::filesystem::path& path, const std::vector<MehlerPhase>& phases) {
    auto out = open_out(path);
    out << "t,alpha,beta,gamma,delta,epsilon,kappa\n";
    for (const auto& p : phases)
        out << format_double(p.t) << ',' << format_double(p.alpha) << ',' << format_double(p.beta)
            << ',' << format_double(p.gamma) << ',' << format_double(p.delta) << ','
            << format_double(p.epsilon) << ',' << format_double(p.kappa) << '\n';
}

void write_state_csv(const std::filesystem::path& path, const GridState& s, int axis) {
    if (axis < 0 || axis >= s.grid.dim()) throw SpecError("write_state_csv: axis out of range");
    auto out = open_out(path);
    out << "x,re,im\n";
    const int d = s.grid.dim();
    std::vector<std::size_t> strides(static_cast<std::size_t>(d));
    std::size_t stride = s.grid.size();
    for (int a = 0; a < d; ++a) {
        stride /= s.grid.axes[static_cast<std::size_t>(a)].n;
        strides[static_cast<std::size_t>(a)] = stride;
    }
    std::size_t base = 0;
    for (int a = 0; a < d; ++a)
        if (a != axis)
            base += (s.grid.axes[static_cast<std::size_t>(a)].n / 2) * strides[static_cast<std::size_t>(a)];
    const auto& ax = s.grid.axes[static_cast<std::size_t>(axis)];
    for (std::size_t i = 0; i < ax.n; ++i) {
        const auto v = s.values[base + i * strides[static_cast<std::size_t>(axis)]];
        out << format_double(ax.point(i)) << ',' << format_double(v.real()) << ','
            << format_double(v.imag()) << '\n';
    }
}

void write_kernel_slice_csv(const std::filesystem::path& path, const std::vector<double>& xs,
                            const std::vector<cdouble>& values) {
    if (xs.size() != values.size()) throw SpecError("kernel slice: mismatched lengths");
    auto out = open_out(path);
    out << "x,re,im,abs\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
        out << format_double(xs[i]) << ',' << format_double(values[i].real()) << ','
            << format_double(values[i].imag()) << ',' << format_double(std::abs(values[i])) << '\n';
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
    auto out = open_out(path);
    out << "t,mass,sup";
    const std::size_t d = traj.centroid_log.empty() ? 0 : traj.centroid_log[0].size();
    for (std::size_t a = 0; a < d; ++a) out << ",centroid" << a;
    out << '\n';
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        out << format_double(traj.times[i]) << ',' << format_double(traj.mass_log[i]) << ','
            << format_double(traj.sup_log[i]);
        if (!traj.centroid_log.empty())
            for (double c : traj.centroid_log[i]) out << ',' << format_double(c);
        out << '\n';
    }
}

void write_state_binary(const std::filesystem::path& path, const GridState& s) {
    auto out = open_out(path, std::ios::out | std::ios::binary);
    out.write("QPRD", 4);
    auto put_u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
    auto put_u64 = [&](std::uint64_t v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    auto put_f64 = [&](double v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    put_u32(1u);
    put_u32(static_cast<std::uint32_t>(s.grid.dim()));
    for (const auto& ax : s.grid.axes) {
        put_u64(ax.n);
        put_f64(ax.center);
        put_f64(ax.spacing);
    }
    for (const auto& v : s.values) {
        put_f64(v.real());
        put_f64(v.imag());
    }
    if (!out) throw IoError("write failed: " + path.string());
}

GridState read_state_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "QPRD", 4) != 0)
        throw IoError("bad magic in " + path.string());
    auto get_u32 = [&]() {
        std::uint32_t v;
        in.read(reinterpret_cast<char*>(&v), 4);
        return v;
    };
    auto get_u64 = [&]() {
        std::uint64_t v;
        in.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    auto get_f64 = [&]() {
        double v;
        in.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    const std::uint32_t version = get_u32();
    if (version != 1u) throw IoError("unsupported binary version");
    const std::uint32_t d = get_u32();
    if (d == 0 || d > 3) throw IoError("bad dimension in binary state");
    std::vector<GridAxis> axes;
    for (std::uint32_t a = 0; a < d; ++a) {
        GridAxis ax;
        ax.n = get_u64();
        ax.center = get_f64();
        ax.spacing = get_f64();
        axes.push_back(ax);
    }
    Grid g = make_grid(axes);
    std::vector<cdouble> vals(g.size());
    for (auto& v : vals) {
        const double re = get_f64();
        const double im = get_f64();
        v = cdouble(re, im);
    }
    if (!in) throw IoError("truncated binary state: " + path.string());
    return make_state(std::move(g), std::move(vals));
}

json coefficient_to_json(const CoefficientFn& fn) {
    json j;
    switch (fn.kind()) {
    case CoefficientKind::Constant:
        j["kind"] = "constant";
        j["value"] = fn.params()[0];
        break;
    case CoefficientKind::Polynomial:
        j["kind"] = "polynomial";
        j["coeffs"] = fn.params();
        break;
    case CoefficientKind::Sinusoidal:
        j["kind"] = "sinusoidal";
        j["offset"] = fn.params()[0];
        j["amplitude"] = fn.params()[1];
        j["frequency"] = fn.params()[2];
        j["phase"] = fn.params()[3];
        break;
    case CoefficientKind::PiecewiseConstant:
        j["kind"] = "piecewise";
        j["breakpoints"] = fn.knots();
        j["values"] = fn.params();
        break;
    }
    return j;
}

CoefficientFn coefficient_from_json(const json& j) {
    if (j.is_number()) return CoefficientFn::constant(j.get<double>());
    if (!j.is_object() || !j.contains("kind"))
        throw SpecError("coefficient document needs a 'kind' field (or a bare number)");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") {
        reject_unknown_keys(j, {"kind", "value"}, "coefficient");
        return CoefficientFn::constant(j.at("value").get<double>());
    }
    if (kind == "polynomial") {
        reject_unknown_keys(j, {"kind", "coeffs"}, "coefficient");
        return CoefficientFn::polynomial(j.at("coeffs").get<std::vector<double>>());
    }
    if (kind == "sinusoidal") {
        reject_unknown_keys(j, {"kind", "offset", "amplitude", "frequency", "phase"}, "coefficient");
        return CoefficientFn::sinusoid(j.value("offset", 0.0), j.at("amplitude").get<double>(),
                                       j.at("frequency").get<double>(), j.value("phase", 0.0));
    }
    if (kind == "piecewise") {
        reject_unknown_keys(j, {"kind", "breakpoints", "values"}, "coefficient");
        return CoefficientFn::piecewise(j.at("breakpoints").get<std::vector<double>>(),
                                        j.at("values").get<std::vector<double>>());
    }
    throw SpecError("unknown coefficient kind: " + kind);
}

json spec_to_json(const HamiltonianSpec& spec) {
    json j;
    j["schema"] = 1;
    j["dimension"] = spec.dimension;
    j["kinetic"] = spec.kinetic;
    j["t_max"] = spec.t_max;
    json axes = json::array();
    for (const auto& ax : spec.axes) {
        json a;
        a["b"] = coefficient_to_json(ax.b);
        a["c"] = coefficient_to_json(ax.c);
        a["f"] = coefficient_to_json(ax.f);
        a["g"] = coefficient_to_json(ax.g);
        axes.push_back(a);
    }
    j["axes"] = axes;
    return j;
}

HamiltonianSpec spec_from_json(const json& j) {
    reject_unknown_keys(j, {"schema", "dimension", "kinetic", "t_max", "axes"}, "spec");
    if (j.value("schema", 1) != 1) throw SpecError("unsupported spec schema version");
    HamiltonianSpec spec;
    spec.dimension = j.at("dimension").get<int>();
    spec.kinetic = j.value("kinetic", 0.5);
    spec.t_max = j.value("t_max", 16.0);
    for (const auto& a : j.at("axes")) {
        reject_unknown_keys(a, {"b", "c", "f", "g"}, "axis");
        AxisCoefficients ax;
        ax.b = a.contains("b") ? coefficient_from_json(a.at("b")) : CoefficientFn::constant(0.0);
        ax.c = a.contains("c") ? coefficient_from_json(a.at("c")) : CoefficientFn::constant(0.0);
        ax.f = a.contains("f") ? coefficient_from_json(a.at("f")) : CoefficientFn::constant(0.0);
        ax.g = a.contains("g") ? coefficient_from_json(a.at("g")) : CoefficientFn::constant(0.0);
        spec.axes.push_back(std::move(ax));
    }
    return spec;
}

void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed,
                         const std::string& context) {
    if (!j.is_object()) return;
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const auto& k : allowed)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok) throw SpecError("unknown key '" + it.key() + "' in " + context + " document");
    }
}

} // namespace quadprop

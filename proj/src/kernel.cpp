#include "quadprop/kernel.hpp"
#include "quadprop/errors.hpp"

#include <cmath>

namespace quadprop {

namespace {

cdouble polar1(double ang) { return cdouble(std::cos(ang), std::sin(ang)); }

void check_args(std::span<const MehlerPhase> phases, std::span<const double> x,
                std::span<const double> y) {
    if (phases.empty() || phases.size() != x.size() || phases.size() != y.size())
        throw SpecError("kernel evaluation needs one phase set and one coordinate per axis");
}

} // namespace

cdouble kernel_prefactor(const MehlerPhase& p) {
    const double mag = 1.0 / std::sqrt(2.0 * M_PI * std::abs(p.mu));
    const double phase = -M_PI / 4.0 - M_PI / 2.0 * static_cast<double>(p.caustics_before);
    return mag * polar1(phase);
}

KernelPoint eval_kernel_point(std::span<const MehlerPhase> phases, std::span<const double> x,
                              std::span<const double> y) {
    check_args(phases, x, y);
    double mag = 1.0, branch = 0.0, S = 0.0;
    for (std::size_t j = 0; j < phases.size(); ++j) {
        const MehlerPhase& p = phases[j];
        mag /= std::sqrt(2.0 * M_PI * std::abs(p.mu));
        branch += -M_PI / 4.0 - M_PI / 2.0 * static_cast<double>(p.caustics_before);
        S += p.alpha * x[j] * x[j] + p.beta * x[j] * y[j] + p.gamma * y[j] * y[j] +
             p.delta * x[j] + p.epsilon * y[j] + p.kappa;
    }
    KernelPoint kp;
    kp.prefactor_magnitude = mag;
    kp.branch_phase = branch;
    kp.value = mag * polar1(branch + S);
    return kp;
}

cdouble eval_kernel(std::span<const MehlerPhase> phases, std::span<const double> x,
                    std::span<const double> y) {
    return eval_kernel_point(phases, x, y).value;
}

cdouble eval_inverse_kernel(std::span<const MehlerPhase> phases, std::span<const double> x,
                            std::span<const double> y) {
    check_args(phases, x, y);
    double mag = 1.0, phase = 0.0, S = 0.0;
    for (std::size_t j = 0; j < phases.size(); ++j) {
        const MehlerPhase& p = phases[j];
        mag /= std::sqrt(2.0 * M_PI * std::abs(p.mu));
        phase += M_PI / 4.0 + M_PI / 2.0 * static_cast<double>(p.caustics_before);
        // S_j(y_j, x_j, t): first argument carries (alpha, delta), second (gamma, epsilon)
        S += p.alpha * y[j] * y[j] + p.beta * y[j] * x[j] + p.gamma * x[j] * x[j] +
             p.delta * y[j] + p.epsilon * x[j] + p.kappa;
    }
    return mag * polar1(phase - S);
}

cdouble eval_two_time_kernel(std::span<const MehlerPhase> at_t, std::span<const MehlerPhase> at_s,
                             std::span<const double> x, std::span<const double> y) {
    check_args(at_t, x, y);
    check_args(at_s, x, y);
    cdouble out(1.0, 0.0);
    for (std::size_t j = 0; j < at_t.size(); ++j) {
        const MehlerPhase& pt = at_t[j];
        const MehlerPhase& ps = at_s[j];
        const double gap = pt.gamma - ps.gamma;
        if (std::abs(gap) < 1e-12 * std::max(1.0, std::abs(pt.gamma)))
            throw NumericError("two-time kernel: degenerate gamma gap (delta kernel at t == s)");
        // int dz G(x,z,t) H(z,y,s): Gaussian in z with quadratic coefficient (gamma_t - gamma_s)
        const cdouble pref_t = kernel_prefactor(pt);
        const cdouble pref_s = std::conj(kernel_prefactor(ps));
        const double fresnel_phase = (gap > 0.0 ? 1.0 : -1.0) * M_PI / 4.0;
        const cdouble fresnel = std::sqrt(M_PI / std::abs(gap)) * polar1(fresnel_phase);
        const double b_lin = pt.beta * x[j] - ps.beta * y[j] + pt.epsilon - ps.epsilon;
        const double S = pt.alpha * x[j] * x[j] - ps.alpha * y[j] * y[j] + pt.delta * x[j] -
                         ps.delta * y[j] + pt.kappa - ps.kappa - b_lin * b_lin / (4.0 * gap);
        out *= pref_t * pref_s * fresnel * polar1(S);
    }
    return out;
}

cdouble table1_kernel(Table1 which, double x, double y, double t, const Table1Params& p) {
    const cdouble I(0.0, 1.0);
    auto singular = [&](double s) {
        if (std::abs(s) < 1e-12)
            throw NumericError("table1_kernel: closed form singular at t=" + std::to_string(t));
    };
    switch (which) {
    case Table1::G0: {
        singular(t);
        return std::sqrt(1.0 / (2.0 * M_PI * I * t)) * std::exp(I * (x - y) * (x - y) / (2.0 * t));
    }
    case Table1::G1: {
        singular(t);
        return std::sqrt(1.0 / (2.0 * M_PI * I * t)) * std::exp(I * (x - y) * (x - y) / (2.0 * t)) *
               std::exp(I * (p.E * (x + y) * t / 2.0 - p.E * p.E * t * t * t / 24.0));
    }
    case Table1::G2: {
        singular(std::sin(t));
        return std::sqrt(1.0 / (2.0 * M_PI * I * std::sin(t))) *
               std::exp(I * ((x * x + y * y) * std::cos(t) - 2.0 * x * y) / (2.0 * std::sin(t)));
    }
    case Table1::G3: {
        singular(std::sinh(t));
        return std::sqrt(1.0 / (2.0 * M_PI * I * std::sinh(t))) *
               std::exp(I * ((x * x + y * y) * std::cosh(t) - 2.0 * x * y) / (2.0 * std::sinh(t)));
    }
    case Table1::G4: {
        const double w = p.omega;
        singular(std::sin(w * t));
        return std::sqrt(w / (2.0 * M_PI * I * std::sin(w * t))) *
               std::exp(I * w * ((x * x + y * y) * std::cos(w * t) - 2.0 * x * y) /
                        (2.0 * std::sin(w * t)));
    }
    case Table1::G6: {
        const double M = std::cos(t) * std::sinh(t) + std::sin(t) * std::cosh(t);
        singular(M);
        const double num = (x * x - y * y) * std::sin(t) * std::sinh(t) + 2.0 * x * y -
                           (x * x + y * y) * std::cos(t) * std::cosh(t);
        return std::sqrt(1.0 / (2.0 * M_PI * I * M)) * std::exp(num / (2.0 * I * M));
    }
    case Table1::G7: {
        const double w0 = p.omega0, lam = p.lambda;
        if (!(w0 * w0 > lam * lam))
            throw SpecError("G7 requires omega0^2 > lambda^2");
        const double w = std::sqrt(w0 * w0 - lam * lam);
        singular(std::sin(w * t));
        return std::sqrt(w / (2.0 * M_PI * I * w0 * std::sin(w * t))) *
               std::exp(I * w * ((x * x + y * y) * std::cos(w * t) - 2.0 * x * y) /
                        (2.0 * w0 * std::sin(w * t))) *
               std::exp(I * lam * (x * x - y * y) / (2.0 * w0));
    }
    case Table1::G8: {
        const double k = p.k;
        singular(std::sinh(k * t));
        const double br = std::exp(-k * t) * x - std::exp(k * t) * y;
        return std::sqrt(k) * std::exp(k * t / 2.0) / std::sqrt(2.0 * M_PI * I * std::sinh(k * t)) *
               std::exp(I * k * std::exp(k * t) * br * br / (4.0 * std::sinh(k * t)));
    }
    case Table1::GCK: {
        const double w0 = p.omega0, lam = p.lambda;
        if (!(w0 * w0 > lam * lam))
            throw SpecError("GCK requires omega0^2 > lambda^2");
        const double w = std::sqrt(w0 * w0 - lam * lam);
        const double st = std::sin(w * t), ct = std::cos(w * t);
        singular(st);
        const double al = (w * ct - lam * st) / (2.0 * w0 * st) * std::exp(2.0 * lam * t);
        const double be = -w / (w0 * st) * std::exp(lam * t);
        const double ga = (w * ct + lam * st) / (2.0 * w0 * st);
        return std::sqrt(w * std::exp(lam * t) / (2.0 * M_PI * I * w0 * st)) *
               std::exp(I * (al * x * x + be * x * y + ga * y * y));
    }
    }
    throw SpecError("unknown Table 1 kernel");
}

Table1 table1_from_name(const std::string& name) {
    if (name == "G0") return Table1::G0;
    if (name == "G1") return Table1::G1;
    if (name == "G2") return Table1::G2;
    if (name == "G3") return Table1::G3;
    if (name == "G4") return Table1::G4;
    if (name == "G6") return Table1::G6;
    if (name == "G7") return Table1::G7;
    if (name == "G8") return Table1::G8;
    if (name == "GCK") return Table1::GCK;
    throw SpecError("unknown Table 1 kernel name: " + name);
}

} // namespace quadprop

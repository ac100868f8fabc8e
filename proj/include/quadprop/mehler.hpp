#ifndef QUADPROP_MEHLER_HPP
#define QUADPROP_MEHLER_HPP

#include "quadprop/characteristic.hpp"
#include "quadprop/hamiltonian.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace quadprop {

// The six real phase coefficients of the Gaussian kernel
//   exp(i (alpha x^2 + beta x y + gamma y^2 + delta x + epsilon y + kappa))
// at one time instant, for one axis. mu/mu_prime and the caustic count ride
// along because the kernel prefactor needs them.
struct MehlerPhase {
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
    double delta = 0.0, epsilon = 0.0, kappa = 0.0;
    double t = 0.0;
    int axis = 0;
    double sigma = 0.0; // sigma(t) provenance record
    double mu = 0.0, mu_prime = 0.0;
    int caustics_before = 0;
};

struct PhaseOptions {
    double quad_abs_tol = 1e-11;
    double ode_tol = 1e-12;
    SigmaConvention convention = SigmaConvention::TableConsistent;
};

// Evaluates the phase coefficients from a characteristic solution.
//
// alpha and beta are quotient formulas in (mu, mu'). gamma/delta/epsilon/kappa
// come from the time-integral formulas while mu' has no zero in (0, t); past the
// first zero of mu' those integrands are singular (the cancellation is exact only
// in exact arithmetic) and the coefficients are continued by their defining ODEs
//   gamma' = -beta^2/2,  epsilon' = (g - delta) beta,  kappa' = g delta - delta^2/2.
// Past the first caustic the ODE path diverges with the coefficients themselves,
// so later segments use the Wronskian-companion closed forms
//   gamma = nu/(2 mu) + c(0)/2,  delta = I/mu,  epsilon = J - I nu/mu,
//   kappa = I^2 nu/(2 mu) - P,
// with I = int (f-cg) mu + g mu', J = int (f-cg) nu + g nu', P = int I J'.
class PhaseCalculator {
public:
    PhaseCalculator(const HamiltonianSpec& spec, int axis,
                    std::shared_ptr<const CharacteristicSolution> sol,
                    const PhaseOptions& opt = {});

    MehlerPhase at(double t) const;

    const CharacteristicSolution& solution() const { return *sol_; }

    // internal cross-check hook: the Wronskian-companion route, valid at any non-caustic t
    MehlerPhase companion_form_at(double t) const;

private:
    struct Cumulative {
        std::vector<double> value; // at solution grid nodes
        std::vector<double> deriv; // integrand at the nodes (Hermite interpolation)
    };

    double cum_eval(const Cumulative& c, double t) const;
    double cum_partial(const Cumulative& c, const std::function<double(double)>& f, double t) const;
    void base_phase(double t, MehlerPhase& p) const;
    MehlerPhase companion_fill(double t, MehlerPhase& p) const;

    const HamiltonianSpec* spec_;
    int axis_;
    std::shared_ptr<const CharacteristicSolution> sol_;
    PhaseOptions opt_;
    bool has_force_ = false;
    double c0_ = 0.0;

    Cumulative i_delta_; // int (f - c g) mu + g mu'
    Cumulative j_nu_;    // int (f - c g) nu + g nu'
    Cumulative p_kappa_; // int I_delta * ((f - c g) nu + g nu')
    // quotient-route integrals, valid up to the first turning point
    Cumulative i_gamma_; // int sigma / mu'^2
    Cumulative i_eps1_;  // int I_delta sigma / mu'^2
    Cumulative i_eps2_;  // int (f - c g) / mu'
    Cumulative i_kap1_;  // int sigma I_delta^2 / mu'^2
    Cumulative i_kap2_;  // int I_delta (f - c g) / mu'

    double quotient_end_ = 0.0;   // 0.9 * first turning point (or segment end)
    double ode_table_end_ = 0.0;  // ODE continuation coverage limit
    OdeResult<3> continuation_;   // (gamma, epsilon, kappa) past the turning point
};

// Convenience single-shot evaluation.
MehlerPhase phase_coefficients(const HamiltonianSpec& spec, const CharacteristicSolution& sol,
                               int axis, double t, const PhaseOptions& opt = {});

// Independent cross-check: integrates the six coupled coefficient ODEs forward
// from initial values supplied by the integral formulas at small t0.
MehlerPhase riccati_oracle(const HamiltonianSpec& spec, int axis, double t0, double t,
                           double tol = 1e-12);

// Max over time samples and over the six coefficient ODEs of |LHS - RHS|,
// with time derivatives by central differences. Needs >= 3 uniform samples.
double residual_check(const HamiltonianSpec& spec, int axis,
                      const std::vector<MehlerPhase>& trajectory);

} // namespace quadprop

#endif

#ifndef QUADPROP_NLS_HPP
#define QUADPROP_NLS_HPP

#include "quadprop/gridprop.hpp"
#include "quadprop/grid.hpp"
#include "quadprop/hamiltonian.hpp"

#include <utility>
#include <vector>

namespace quadprop {

struct Nonlinearity {
    double p = 3.0;                            // algebraic exponent, > 1
    CoefficientFn h = CoefficientFn::constant(1.0); // real coupling, possibly time-dependent
};

// true iff 0 < p - 1 < 4/d strictly (mass-subcritical window)
bool subcritical_check(double p, int d);

struct Trajectory {
    std::vector<double> times;                 // every step time, including t = 0
    std::vector<double> mass_log;              // discrete squared L2 norm per step
    std::vector<double> sup_log;               // sup|u| per step
    std::vector<std::vector<double>> centroid_log;
    std::vector<std::pair<double, GridState>> snapshots; // stride-subsampled states + final
    double dt = 0.0;
    bool truncated_by_guard = false;           // blow-up guard fired
    std::string diagnostic;
};

struct NlsOptions {
    double blowup_factor = 1e6;   // abort when sup|u| grows past this times its initial value
    std::size_t snapshot_stride = 0; // 0: choose automatically (~64 snapshots)
    bool log_centroid = true;
};

// One symmetrized split step over [state.time, state.time + dt]:
//   N(dt/2) D(dt/2) K(dt/2) V(dt) K(dt/2) D(dt/2) N(dt/2)
// with exact pointwise nonlinear kicks, exact kinetic/potential phases (coefficient
// integrals taken analytically) and the exact dilation-translation flow via
// band-limited interpolation. Every sub-flow is norm-preserving.
GridState step_strang(const HamiltonianSpec& spec, const Nonlinearity& nl, const GridState& state,
                      double dt);

// ceil(T/dt) steps; logs mass/sup/centroid per step; aborts with a trajectory
// truncated at the blow-up guard instead of discarding the run.
Trajectory solve_nls(const HamiltonianSpec& spec, const Nonlinearity& nl, const GridState& u0,
                     double T, double dt, const NlsOptions& opt = {});

// Stepper with reusable scratch; one instance per thread.
class StrangStepper {
public:
    StrangStepper(const HamiltonianSpec& spec, Nonlinearity nl);
    void step(GridState& state, double dt) const;

private:
    void nonlinear_kick(GridState& state, double t0, double t1) const;
    void kinetic_half(GridState& state, double tau) const;
    void potential_full(GridState& state, double t0, double t1) const;
    void dilation_half(GridState& state, double t0, double t1) const;

    const HamiltonianSpec* spec_;
    Nonlinearity nl_;
};

} // namespace quadprop

#endif

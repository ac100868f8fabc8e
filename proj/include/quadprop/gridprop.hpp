#ifndef QUADPROP_GRIDPROP_HPP
#define QUADPROP_GRIDPROP_HPP

#include "quadprop/grid.hpp"
#include "quadprop/kernel.hpp"
#include "quadprop/mehler.hpp"

#include <memory>
#include <optional>
#include <span>

namespace quadprop {

enum class Method { Direct, Fast };

struct PropagatorOptions {
    double characteristic_tol = 1e-10;
    PhaseOptions phase;
    SigmaConvention convention = SigmaConvention::TableConsistent;
    // the factorized passes fall back to direct quadrature below
    // |mu| = fast_floor_frac * N dx^2 / (2 pi), where the mu-scaled output grid
    // stops covering the input window
    double fast_floor_frac = 1.0;
    // below an effective |mu| = N dx^2 / (2 pi) neither kernel quadrature
    // resolves the chirp; the near-identity regime is integrated by split-step
    double split_step_dt = 2e-4;
    bool quiet = false; // suppress resolution warnings on stderr
};

// O(N^2)-per-axis trapezoidal quadrature of the kernel integral onto `out_grid`
// (defaults to the input grid). Oracle and small-N fallback.
GridState apply_direct(std::span<const MehlerPhase> phases, const GridState& input,
                       const Grid* out_grid = nullptr, bool quiet = false);

// Chirp-Fourier factorization: input chirp, FFT, frequency-to-position map
// xi = x / (2 pi mu), output chirp. O(N log N); output lives on the mu-scaled grid.
GridState apply_fast(std::span<const MehlerPhase> phases, const GridState& input,
                     bool quiet = false);

// Inverse factorized pass (the evolution operator's inverse at the phases' time).
GridState apply_fast_inverse(std::span<const MehlerPhase> phases, const GridState& input,
                             bool quiet = false);

// Full pipeline around one Hamiltonian spec: characteristic solve + phase
// calculators are built once and shared across time queries.
class Propagator {
public:
    Propagator(HamiltonianSpec spec, double t_horizon, const PropagatorOptions& opt = {});

    // state at time t from the initial state (time 0)
    GridState propagate(const GridState& input, double t, Method method) const;
    // state at time t from a state at time s (group element U(t) U^{-1}(s))
    GridState two_time_apply(const GridState& input_at_s, double s, double t, Method method) const;
    // (sup-norm of the propagated state, dispersive bound prod (2 pi |mu_j(t-s)|)^{-1/2} l1(input))
    std::pair<double, double> dispersive_sup_check(const GridState& input_at_s, double s,
                                                   double t) const;

    std::vector<MehlerPhase> phases_at(double t) const;
    const CharacteristicSolution& solution(int axis) const { return *solutions_[static_cast<std::size_t>(axis)]; }
    const HamiltonianSpec& spec() const { return spec_; }
    double horizon() const { return t_horizon_; }

    // linear split-step evolution (kinetic/potential/dilation sub-flows); total in t,
    // valid through caustics; used below the kernel-quadrature resolution floor
    GridState split_step_linear(const GridState& input, double t0, double t1) const;

private:
    GridState kernel_apply(const GridState& input, double s, double t, Method method) const;
    bool below_quadrature_floor(const Grid& g, double mu_eff_min) const;

    HamiltonianSpec spec_;
    double t_horizon_;
    PropagatorOptions opt_;
    std::vector<std::shared_ptr<const CharacteristicSolution>> solutions_;
    std::vector<std::unique_ptr<PhaseCalculator>> calcs_;
};

// Convenience wrappers building a Propagator per call.
GridState propagate(const HamiltonianSpec& spec, const GridState& input, double t, Method method,
                    const PropagatorOptions& opt = {});
GridState two_time_apply(const HamiltonianSpec& spec, const GridState& input_at_s, double s,
                         double t, Method method, const PropagatorOptions& opt = {});
std::pair<double, double> dispersive_sup_check(const HamiltonianSpec& spec,
                                               const GridState& input_at_s, double s, double t,
                                               const PropagatorOptions& opt = {});

} // namespace quadprop

#endif

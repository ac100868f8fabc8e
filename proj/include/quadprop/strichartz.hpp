#ifndef QUADPROP_STRICHARTZ_HPP
#define QUADPROP_STRICHARTZ_HPP

#include "quadprop/nls.hpp"

#include <span>
#include <vector>

namespace quadprop {

enum class Admissibility { Sharp, Nonsharp, Inadmissible, ForbiddenEndpoint };

struct ExponentPair {
    double q = 2.0;
    double r = 2.0;
    double sigma = 1.0;
    bool sharp = false;
};

// Classifies (q, r) against 1/q + sigma/r <= sigma/2 with q, r >= 2 and the
// excluded endpoint (2, inf, 1). Infinities are admitted (1/inf = 0).
Admissibility is_admissible(double q, double r, double sigma);

// The sharp endpoint P = (2, 2 sigma/(sigma-1)); requires sigma > 1.
ExponentPair endpoint(double sigma);

// w(t) = C ( 1/|t| for |t| <= delta_cut,
//            (e^{-omega_k t} prod_{j != k} 1/(2 pi |sin(omega_j t)|))^{1/d} otherwise ).
// Axis k must be the hyperbolic one (delta = -1), all others +1.
double decay_weight(std::span<const double> omegas, std::span<const int> deltas, int k,
                    double delta_cut, double C, double t);

struct WeakL1Result {
    std::vector<double> lambda;
    std::vector<double> product; // lambda * measure{ w > lambda }
    double max_product = 0.0;
};

// Empirical distribution-function products over a sampled mesh. The mesh must
// resolve the sine singularities: spacing <= 1e-3.
WeakL1Result weak_l1_check(std::span<const double> t_mesh, std::span<const double> w_samples,
                           std::span<const double> lambdas);

// Discrete ( sum_t dt ( sum_x dx |u|^r )^{q/r} )^{1/q} over the trajectory
// snapshots, with sup conventions at q = inf or r = inf.
double mixed_norm(const Trajectory& traj, double q, double r);

} // namespace quadprop

#endif

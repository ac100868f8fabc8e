#ifndef QUADPROP_CHARACTERISTIC_HPP
#define QUADPROP_CHARACTERISTIC_HPP

#include "quadprop/hamiltonian.hpp"
#include "quadprop/ode.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace quadprop {

struct CharacteristicOptions {
    double tol = 1e-10; // absolute and relative ODE tolerance
    SigmaConvention convention = SigmaConvention::TableConsistent;
    bool force_numeric = false; // skip closed-form shortcut (testing hook)
};

// Sampled solution of mu'' + 4 sigma(t) mu = 0 with mu(0)=0, mu'(0)=1,
// together with the companion solution nu(0)=1, nu'(0)=0.
// The Wronskian mu' nu - mu nu' = 1 is a constant of motion.
class CharacteristicSolution {
public:
    enum class Method { ClosedForm, Numeric };

    struct Point {
        double mu, mu_prime, nu, nu_prime;
    };

    Point eval(double t) const;
    double mu(double t) const { return eval(t).mu; }

    Method method() const { return method_; }
    double t_max() const { return t_max_; }
    double sigma_constant() const { return sigma_const_; }

    const std::vector<double>& grid_times() const { return table_.t; }
    Point grid_point(std::size_t i) const;

    // zeros of mu in (0, t_max], refined by bisection
    const std::vector<double>& caustics() const { return caustics_; }
    // zeros of mu' in (0, t_max]
    const std::vector<double>& turning_points() const { return turning_points_; }

    int caustics_before(double t) const;

    // guard band half-width around caustics: 1e-6 * max(1, |mu'|)
    double caustic_guard(double t) const;
    bool in_caustic_band(double t) const;

private:
    friend CharacteristicSolution solve_characteristic(const HamiltonianSpec&, int, double,
                                                       const CharacteristicOptions&);
    Method method_ = Method::Numeric;
    double sigma_const_ = 0.0;
    double t_max_ = 0.0;
    OdeResult<4> table_; // (mu, mu', nu, nu') on the accepted-step grid
    std::vector<double> caustics_;
    std::vector<double> turning_points_;
};

// Closed-form characteristic value for constant sigma:
//   sigma>0: (sin(wt)/w, cos(wt)) with w=2 sqrt(sigma)
//   sigma=0: (t, 1)
//   sigma<0: (sinh(wt)/w, cosh(wt)) with w=2 sqrt(-sigma)
std::pair<double, double> closed_form_mu(double sigma, double t);

CharacteristicSolution solve_characteristic(const HamiltonianSpec& spec, int axis, double t_max,
                                            const CharacteristicOptions& options = {});

// All zeros of mu inside [lo, hi] (sub-range of the solved interval).
std::vector<double> find_caustics(const CharacteristicSolution& sol, double lo, double hi);

} // namespace quadprop

#endif

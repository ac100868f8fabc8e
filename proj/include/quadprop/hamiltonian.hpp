#ifndef QUADPROP_HAMILTONIAN_HPP
#define QUADPROP_HAMILTONIAN_HPP

#include "quadprop/coefficients.hpp"

#include <string>
#include <vector>

namespace quadprop {

// Per-axis coefficient quadruple of the quadratic generator
//   -a d^2/dx^2 + (b/2) x^2 - f x + i g d/dx - i (c/2) (2 x d/dx + 1).
struct AxisCoefficients {
    CoefficientFn b, c, f, g;
};

struct HamiltonianSpec {
    int dimension = 1;
    std::vector<AxisCoefficients> axes;
    double kinetic = 0.5; // must be 1/2 for the derivation pipeline
    double t_max = 16.0;
};

// The characteristic frequency map. TableConsistent is the working convention
// sigma = b/4 - c^2/4 - c'/4 (the b/2 variant is kept as a negative control).
enum class SigmaConvention { TableConsistent, PrintedBOverTwo };

double sigma_of_t(const HamiltonianSpec& spec, int axis, double t,
                  SigmaConvention convention = SigmaConvention::TableConsistent);

struct Diagnostic {
    int axis = -1; // -1: spec-level
    std::string field;
    std::string rule;
};

// Empty iff the spec satisfies every type invariant. Never throws.
std::vector<Diagnostic> validate(const HamiltonianSpec& spec);

// Throws SpecError when the spec cannot enter the derivation pipeline.
void require_pipeline_ready(const HamiltonianSpec& spec);

struct PresetParams {
    double E = 1.0;        // constant_field
    double omega = 2.0;    // anisotropic
    double lambda = 0.6;   // damped (0 <= lambda < 1)
    double omega1 = 1.0;   // hybrid, hyperbolic axis
    double omega2 = 1.0;   // hybrid, trigonometric axis
    CoefficientFn omega_sq; // forced_parametric: b(t)
    CoefficientFn force;    // forced_parametric: f(t)
    double t_max = 16.0;
};

// free | constant_field | isotropic | repulsive | anisotropic | damped | hybrid | forced_parametric
HamiltonianSpec preset(const std::string& name, const PresetParams& params = {});

// Knot times of every coefficient on the axis (integration/quadrature split points).
std::vector<double> axis_knots(const HamiltonianSpec& spec, int axis);

} // namespace quadprop

#endif

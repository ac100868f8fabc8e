#ifndef QUADPROP_COEFFICIENTS_HPP
#define QUADPROP_COEFFICIENTS_HPP

#include <string>
#include <vector>

namespace quadprop {

enum class CoefficientKind { Constant, Polynomial, Sinusoidal, PiecewiseConstant };

// Time coefficient restricted to four analytic kinds so that derivatives and
// time integrals are exact (no numerical differentiation inside sigma).
class CoefficientFn {
public:
    CoefficientFn() : kind_(CoefficientKind::Constant), params_{0.0} {}

    static CoefficientFn constant(double value);
    // c0 + c1 t + c2 t^2 + ... (ascending powers)
    static CoefficientFn polynomial(std::vector<double> coeffs);
    // offset + amplitude * sin(frequency * t + phase)
    static CoefficientFn sinusoid(double offset, double amplitude, double frequency, double phase);
    // values[i] on [breakpoints[i-1], breakpoints[i]); values.size() == breakpoints.size() + 1
    static CoefficientFn piecewise(std::vector<double> breakpoints, std::vector<double> values);

    double value(double t) const;
    double derivative(double t) const;
    // exact antiderivative difference: \int_{t0}^{t1} value
    double integral(double t0, double t1) const;

    CoefficientKind kind() const { return kind_; }
    bool is_constant() const;
    bool is_zero() const;
    // knot times where the value or derivative is non-smooth (piecewise breakpoints)
    const std::vector<double>& knots() const { return breakpoints_; }
    const std::vector<double>& params() const { return params_; }

    std::string describe() const;

private:
    CoefficientKind kind_;
    std::vector<double> params_;
    std::vector<double> breakpoints_; // piecewise only
};

} // namespace quadprop

#endif

#ifndef QUADPROP_QUADRATURE_HPP
#define QUADPROP_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace quadprop {

struct QuadratureOptions {
    double abs_tol = 1e-11;
    int max_depth = 48;
    std::vector<double> split_points; // known non-smooth knots inside the interval
};

// Adaptive Gauss-Kronrod (G7/K15) with interval bisection.
// Throws NumericError when the tolerance cannot be met within max_depth.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opt = {});

} // namespace quadprop

#endif

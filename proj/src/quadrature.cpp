#include "quadprop/quadrature.hpp"
#include "quadprop/errors.hpp"

#include <algorithm>
#include <cmath>

namespace quadprop {

namespace {

// 15-point Kronrod nodes/weights on [-1,1] with the embedded 7-point Gauss rule.
constexpr double XGK[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                           0.741531185599394, 0.586087235467691, 0.405845151377397,
                           0.207784955007898, 0.000000000000000};
constexpr double WGK[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                           0.140653259715525, 0.169004726639267, 0.190350578064785,
                           0.204432940075298, 0.209482141084728};
constexpr double WG[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                          0.417959183673469};

struct GK {
    double kronrod;
    double err;
};

GK gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * XGK[i]);
        fv[14 - i] = f(c + h * XGK[i]);
    }
    fv[7] = f(c);
    double kr = WGK[7] * fv[7];
    double gs = WG[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        kr += WGK[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) gs += WG[i / 2] * (fv[i] + fv[14 - i]);
    }
    kr *= h;
    gs *= h;
    return {kr, std::abs(kr - gs)};
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth,
             int max_depth) {
    GK r = gk15(f, a, b);
    if (r.err <= tol || std::abs(b - a) < 1e-15 * std::max(1.0, std::abs(a)))
        return r.kronrod;
    if (depth >= max_depth)
        throw NumericError("adaptive quadrature failed to converge on [" + std::to_string(a) +
                           ", " + std::to_string(b) + "]");
    const double m = 0.5 * (a + b);
    return adapt(f, a, m, tol * 0.5, depth + 1, max_depth) +
           adapt(f, m, b, tol * 0.5, depth + 1, max_depth);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opt) {
    if (a == b) return 0.0;
    if (b < a) return -integrate(f, b, a, opt);
    std::vector<double> knots{a};
    for (double s : opt.split_points)
        if (s > a && s < b) knots.push_back(s);
    knots.push_back(b);
    std::sort(knots.begin(), knots.end());
    double acc = 0.0;
    const double per = opt.abs_tol / static_cast<double>(knots.size() - 1);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        acc += adapt(f, knots[i], knots[i + 1], per, 0, opt.max_depth);
    return acc;
}

} // namespace quadprop

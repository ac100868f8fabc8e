#ifndef QUADPROP_ODE_HPP
#define QUADPROP_ODE_HPP

#include "quadprop/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace quadprop {

// Dormand-Prince 5(4) embedded pair with step-size control. State is a fixed-size
// array; the right-hand side is any callable rhs(t, y) -> y'.
template <std::size_t K>
struct OdeResult {
    std::vector<double> t;
    std::vector<std::array<double, K>> y;
    std::vector<std::array<double, K>> dy; // derivatives at the nodes (for Hermite interpolation)
};

struct OdeOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;       // 0: auto
    std::size_t max_steps = 2000000; // underflow guard
    double state_bound = 1e12;       // abort when |y| exceeds this (blow-up guard)
};

namespace detail {

// Butcher tableau (Dormand-Prince RK45)
inline constexpr double DP_C[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
inline constexpr double DP_A[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
inline constexpr double DP_B5[7] = {35.0 / 384,     0.0,  500.0 / 1113, 125.0 / 192,
                                    -2187.0 / 6784, 11.0 / 84, 0.0};
inline constexpr double DP_B4[7] = {5179.0 / 57600,  0.0,        7571.0 / 16695, 393.0 / 640,
                                    -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

} // namespace detail

template <std::size_t K, typename Rhs>
OdeResult<K> integrate_ode(Rhs&& rhs, std::array<double, K> y0, double t0, double t1,
                           const OdeOptions& opt = {}) {
    OdeResult<K> out;
    const double dir = (t1 >= t0) ? 1.0 : -1.0;
    const double span = std::abs(t1 - t0);
    if (span == 0.0) {
        out.t = {t0};
        out.y = {y0};
        out.dy = {rhs(t0, y0)};
        return out;
    }

    std::array<double, K> y = y0;
    std::array<double, K> f0 = rhs(t0, y);
    double h = opt.initial_step > 0.0 ? opt.initial_step : std::min(span / 100.0, opt.max_step);
    h = std::min(h, opt.max_step);

    out.t.push_back(t0);
    out.y.push_back(y);
    out.dy.push_back(f0);

    double t = t0;
    std::size_t steps = 0;
    std::array<std::array<double, K>, 7> k;
    k[0] = f0;
    while (dir * (t1 - t) > 0.0) {
        if (++steps > opt.max_steps)
            throw NumericError("ODE integrator exceeded step limit (stiff or singular coefficients?)");
        h = std::min(h, std::min(opt.max_step, std::abs(t1 - t)));
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw NumericError("ODE step-size underflow at t=" + std::to_string(t));

        const double hs = dir * h;
        for (int s = 1; s < 7; ++s) {
            std::array<double, K> ys = y;
            for (int j = 0; j < s; ++j) {
                const double a = detail::DP_A[s][j];
                if (a == 0.0) continue;
                for (std::size_t i = 0; i < K; ++i) ys[i] += hs * a * k[static_cast<std::size_t>(j)][i];
            }
            k[static_cast<std::size_t>(s)] = rhs(t + detail::DP_C[s] * hs, ys);
        }

        std::array<double, K> y5{}, y4{};
        for (std::size_t i = 0; i < K; ++i) {
            double a5 = 0.0, a4 = 0.0;
            for (int s = 0; s < 7; ++s) {
                a5 += detail::DP_B5[s] * k[static_cast<std::size_t>(s)][i];
                a4 += detail::DP_B4[s] * k[static_cast<std::size_t>(s)][i];
            }
            y5[i] = y[i] + hs * a5;
            y4[i] = y[i] + hs * a4;
        }

        double err = 0.0;
        for (std::size_t i = 0; i < K; ++i) {
            const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            const double e = (y5[i] - y4[i]) / sc;
            err += e * e;
        }
        err = std::sqrt(err / static_cast<double>(K));

        if (err <= 1.0) {
            t += hs;
            y = y5;
            k[0] = k[6]; // FSAL
            out.t.push_back(t);
            out.y.push_back(y);
            out.dy.push_back(k[0]);
            for (std::size_t i = 0; i < K; ++i)
                if (!std::isfinite(y[i]) || std::abs(y[i]) > opt.state_bound)
                    throw NumericError("ODE state blow-up at t=" + std::to_string(t));
        }
        const double factor = (err == 0.0) ? 5.0 : 0.9 * std::pow(err, -0.2);
        h *= std::clamp(factor, 0.2, 5.0);
    }
    return out;
}

// Cubic Hermite evaluation on a node table (t ascending). Returns value and derivative.
template <std::size_t K>
void hermite_eval(const OdeResult<K>& tab, double t, std::array<double, K>& y,
                  std::array<double, K>* dy = nullptr) {
    const auto& ts = tab.t;
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    std::size_t i1 = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(
        it - ts.begin(), 1, static_cast<std::ptrdiff_t>(ts.size()) - 1));
    std::size_t i0 = i1 - 1;
    const double h = ts[i1] - ts[i0];
    const double s = (t - ts[i0]) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    const double g00 = (6 * s2 - 6 * s) / h, g10 = 3 * s2 - 4 * s + 1;
    const double g01 = (6 * s - 6 * s2) / h, g11 = 3 * s2 - 2 * s;
    for (std::size_t i = 0; i < K; ++i) {
        y[i] = h00 * tab.y[i0][i] + h10 * h * tab.dy[i0][i] + h01 * tab.y[i1][i] +
               h11 * h * tab.dy[i1][i];
        if (dy)
            (*dy)[i] = g00 * tab.y[i0][i] + g10 * tab.dy[i0][i] + g01 * tab.y[i1][i] +
                       g11 * tab.dy[i1][i];
    }
}

} // namespace quadprop

#endif

#include "quadprop/coefficients.hpp"
#include "quadprop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace quadprop {

CoefficientFn CoefficientFn::constant(double value) {
    CoefficientFn f;
    f.kind_ = CoefficientKind::Constant;
    f.params_ = {value};
    return f;
}

CoefficientFn CoefficientFn::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) coeffs.push_back(0.0);
    CoefficientFn f;
    f.kind_ = CoefficientKind::Polynomial;
    f.params_ = std::move(coeffs);
    return f;
}

CoefficientFn CoefficientFn::sinusoid(double offset, double amplitude, double frequency, double phase) {
    CoefficientFn f;
    f.kind_ = CoefficientKind::Sinusoidal;
    f.params_ = {offset, amplitude, frequency, phase};
    return f;
}

CoefficientFn CoefficientFn::piecewise(std::vector<double> breakpoints, std::vector<double> values) {
    if (values.size() != breakpoints.size() + 1)
        throw SpecError("piecewise coefficient needs values.size() == breakpoints.size() + 1");
    // breakpoint ordering is a type invariant reported by validate(), not enforced here
    CoefficientFn f;
    f.kind_ = CoefficientKind::PiecewiseConstant;
    f.params_ = std::move(values);
    f.breakpoints_ = std::move(breakpoints);
    return f;
}

double CoefficientFn::value(double t) const {
    switch (kind_) {
    case CoefficientKind::Constant:
        return params_[0];
    case CoefficientKind::Polynomial: {
        double acc = 0.0;
        for (std::size_t i = params_.size(); i-- > 0;) acc = acc * t + params_[i];
        return acc;
    }
    case CoefficientKind::Sinusoidal:
        return params_[0] + params_[1] * std::sin(params_[2] * t + params_[3]);
    case CoefficientKind::PiecewiseConstant: {
        auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
        return params_[static_cast<std::size_t>(it - breakpoints_.begin())];
    }
    }
    return 0.0;
}

double CoefficientFn::derivative(double t) const {
    switch (kind_) {
    case CoefficientKind::Constant:
        return 0.0;
    case CoefficientKind::Polynomial: {
        double acc = 0.0;
        for (std::size_t i = params_.size(); i-- > 1;)
            acc = acc * t + params_[i] * static_cast<double>(i);
        return acc;
    }
    case CoefficientKind::Sinusoidal:
        return params_[1] * params_[2] * std::cos(params_[2] * t + params_[3]);
    case CoefficientKind::PiecewiseConstant:
        return 0.0; // a.e.
    }
    return 0.0;
}

double CoefficientFn::integral(double t0, double t1) const {
    switch (kind_) {
    case CoefficientKind::Constant:
        return params_[0] * (t1 - t0);
    case CoefficientKind::Polynomial: {
        auto anti = [&](double t) {
            double acc = 0.0;
            for (std::size_t i = params_.size(); i-- > 0;)
                acc = acc * t + params_[i] / static_cast<double>(i + 1);
            return acc * t;
        };
        return anti(t1) - anti(t0);
    }
    case CoefficientKind::Sinusoidal: {
        const double off = params_[0], amp = params_[1], w = params_[2], ph = params_[3];
        if (w == 0.0) return (off + amp * std::sin(ph)) * (t1 - t0);
        return off * (t1 - t0) - amp / w * (std::cos(w * t1 + ph) - std::cos(w * t0 + ph));
    }
    case CoefficientKind::PiecewiseConstant: {
        if (t1 < t0) return -integral(t1, t0);
        double acc = 0.0;
        double lo = t0;
        for (std::size_t i = 0; i < breakpoints_.size() && breakpoints_[i] < t1; ++i) {
            if (breakpoints_[i] > lo) {
                acc += params_[i] * (breakpoints_[i] - lo);
                lo = breakpoints_[i];
            }
        }
        auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), lo);
        acc += params_[static_cast<std::size_t>(it - breakpoints_.begin())] * (t1 - lo);
        return acc;
    }
    }
    return 0.0;
}

bool CoefficientFn::is_constant() const {
    switch (kind_) {
    case CoefficientKind::Constant:
        return true;
    case CoefficientKind::Polynomial:
        return std::all_of(params_.begin() + 1, params_.end(), [](double c) { return c == 0.0; });
    case CoefficientKind::Sinusoidal:
        return params_[1] == 0.0 || params_[2] == 0.0;
    case CoefficientKind::PiecewiseConstant:
        return std::all_of(params_.begin(), params_.end(),
                           [&](double v) { return v == params_[0]; });
    }
    return false;
}

bool CoefficientFn::is_zero() const {
    return is_constant() && value(0.0) == 0.0;
}

std::string CoefficientFn::describe() const {
    std::ostringstream os;
    switch (kind_) {
    case CoefficientKind::Constant:
        os << "constant(" << params_[0] << ")";
        break;
    case CoefficientKind::Polynomial:
        os << "polynomial(deg " << params_.size() - 1 << ")";
        break;
    case CoefficientKind::Sinusoidal:
        os << params_[0] << " + " << params_[1] << " sin(" << params_[2] << " t + " << params_[3] << ")";
        break;
    case CoefficientKind::PiecewiseConstant:
        os << "piecewise(" << params_.size() << " pieces)";
        break;
    }
    return os.str();
}

} // namespace quadprop

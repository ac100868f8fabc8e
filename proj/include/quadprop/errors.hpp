#ifndef QUADPROP_ERRORS_HPP
#define QUADPROP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace quadprop {

// Error taxonomy mirrors the CLI exit codes: SpecError -> 2, NumericError -> 3, IoError -> 4.
class SpecError : public std::runtime_error {
public:
    explicit SpecError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation requested inside the caustic guard band |mu(t)| <= tol.
class CausticError : public NumericError {
public:
    CausticError(double t, double mu)
        : NumericError("caustic guard band at t=" + std::to_string(t) +
                       " (|mu|=" + std::to_string(mu) + ")"),
          time(t), mu_value(mu) {}
    double time;
    double mu_value;
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace quadprop

#endif

#ifndef QUADPROP_VERIFY_HPP
#define QUADPROP_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace quadprop {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;  // worst observed value
    double threshold = 0.0; // the pinned tolerance it is compared against
    std::string detail;
    double seconds = 0.0;
    double budget_seconds = 0.0; // 0: no budget
};

struct VerifyOptions {
    std::uint64_t seed = 20250810;
    int threads = 0;  // 0: QUADPROP_THREADS or hardware
    bool full = false; // full = acceptance intensity; light = quick CLI suite
};

// The verification suite: Table I agreement, dual-path coefficients, unitarity,
// group law, fast-vs-direct, dispersive bound, coherent-state dynamics, the
// nonlinear solver checks, small-time asymptotics, admissibility/weak-L1
// bookkeeping, plus the two negative controls.
std::vector<CheckResult> verify_suite(const VerifyOptions& opt = {});

bool all_passed(const std::vector<CheckResult>& results);

} // namespace quadprop

#endif

#ifndef QUADPROP_CLI_HPP
#define QUADPROP_CLI_HPP

#include "quadprop/verify.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace quadprop {

struct CliOverrides {
    std::optional<std::filesystem::path> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> format; // csv | binary | json
    bool verify_full = false;
    int threads = 0;
};

// Executes one command against a config document. Exit codes:
//   0 success, 2 validation failure, 3 numerical failure (caustic, blow-up
//   guard, failed verification), 4 I/O failure.
// A json report is written to <out>/report.json on every path, including failures.
int run_command(const std::string& command,
                const std::optional<std::filesystem::path>& config_path,
                const CliOverrides& overrides);

} // namespace quadprop

#endif

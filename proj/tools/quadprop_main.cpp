#include "quadprop/cli.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <optional>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"quadprop: exact Gaussian propagators for time-dependent quadratic Hamiltonians"};
    app.require_subcommand(1);

    struct Common {
        std::string config;
        std::string out;
        std::uint64_t seed = 0;
        bool seed_set = false;
        std::string format;
    };

    std::vector<std::pair<CLI::App*, std::shared_ptr<Common>>> subs;
    auto add_sub = [&](const std::string& name, const std::string& desc, bool config_required) {
        auto* sub = app.add_subcommand(name, desc);
        auto common = std::make_shared<Common>();
        auto* copt = sub->add_option("--config", common->config, "config document (json)");
        if (config_required) copt->required()->check(CLI::ExistingFile);
        sub->add_option("--out", common->out, "output directory");
        sub->add_option("--seed", common->seed, "random seed for ensemble checks")
            ->each([common](const std::string&) { common->seed_set = true; });
        sub->add_option("--format", common->format, "csv|binary|json")
            ->check(CLI::IsMember({"csv", "binary", "json"}));
        subs.emplace_back(sub, common);
        return sub;
    };

    add_sub("derive", "solve the characteristic equation and emit phase coefficients", true);
    add_sub("kernel", "evaluate propagator kernel slices", true);
    add_sub("propagate", "apply the evolution operator to an initial state", true);
    add_sub("nls", "solve the nonlinear equation by operator splitting", true);
    add_sub("strichartz", "admissibility tables and dispersive decay bookkeeping", true);
    auto* verify = add_sub("verify", "run the cross-check suite", false);
    bool full = false;
    int threads = 0;
    verify->add_flag("--full", full, "acceptance-level intensity");
    verify->add_option("--threads", threads, "cap suite parallelism (QUADPROP_THREADS also applies)");

    CLI11_PARSE(app, argc, argv);

    for (auto& [sub, common] : subs) {
        if (!sub->parsed()) continue;
        quadprop::CliOverrides ov;
        if (!common->out.empty()) ov.out_dir = common->out;
        if (common->seed_set) ov.seed = common->seed;
        if (!common->format.empty()) ov.format = common->format;
        ov.verify_full = full;
        ov.threads = threads;
        std::optional<std::filesystem::path> cfg;
        if (!common->config.empty()) cfg = common->config;
        return quadprop::run_command(sub->get_name(), cfg, ov);
    }
    return 1;
}

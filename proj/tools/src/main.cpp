#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <adbd/errors.hpp>

#include "CLI11.hpp"
#include "adbd_cli/commands.hpp"
#include "adbd_cli/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitVerify = 3;

struct CommonFlags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> steps;
    std::optional<std::string> depth_grid;
    std::optional<double> cutoff;
    std::optional<std::string> targets;
    std::string fault = "none";
};

void add_common(CLI::App* sub, CommonFlags& f) {
    sub->add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--seed", f.seed, "global seed");
    sub->add_option("--out", f.out, "run directory");
    sub->add_option("--steps", f.steps, "ODE sub-steps per unit time");
    sub->add_option("--depth-grid", f.depth_grid, "comma-separated depths in [0, 1]");
    sub->add_option("--cutoff", f.cutoff, "high-pass cutoff as a fraction of Nyquist");
}

// Defaults, then the config file, then flags.
adbd::cli::RunConfig resolve(const CommonFlags& f) {
    auto cfg = f.config.empty() ? adbd::cli::RunConfig{} : adbd::cli::load_run_config(f.config);
    if (f.seed) cfg.seed = *f.seed;
    if (f.out) cfg.out = *f.out;
    if (f.steps) cfg.steps_per_unit_time = *f.steps;
    if (f.depth_grid) cfg.sweep.depth_grid = adbd::cli::parse_number_list(*f.depth_grid);
    if (f.cutoff) cfg.highpass.cutoff_fraction = *f.cutoff;
    if (f.targets) cfg.label_targets = adbd::cli::parse_number_list(*f.targets);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adbd: depth-controlled bidirectional diffusion between paired toy domains"};
    app.set_version_flag("--version", adbd::cli::kToolVersion);
    app.require_subcommand(1);

    CommonFlags flags;
    auto* gen = app.add_subcommand("gen", "sample source and target domains");
    auto* train = app.add_subcommand("train", "train one noise predictor per domain");
    auto* migrate = app.add_subcommand("migrate", "migrate source samples into the target domain");
    auto* sweep = app.add_subcommand("sweep", "depth sweep with soft labels");
    auto* label = app.add_subcommand("label", "calibrated dataset for target soft labels");
    auto* verify = app.add_subcommand("verify", "run the numerical oracle suite");
    for (auto* sub : {gen, train, migrate, sweep, label, verify}) add_common(sub, flags);
    label->add_option("--targets", flags.targets, "comma-separated target labels in [0, 1]");
    verify->add_option("--inject-fault", flags.fault, "corrupt a component to exercise failure paths")
        ->check(CLI::IsMember({"none", "schedule"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        const auto cfg = resolve(flags);
        if (gen->parsed()) adbd::cli::cmd_gen(cfg);
        if (train->parsed()) adbd::cli::cmd_train(cfg);
        if (migrate->parsed()) adbd::cli::cmd_migrate(cfg);
        if (sweep->parsed()) adbd::cli::cmd_sweep(cfg);
        if (label->parsed()) adbd::cli::cmd_label(cfg);
        if (verify->parsed()) {
            const auto fault = flags.fault == "schedule" ? adbd::cli::Fault::Schedule : adbd::cli::Fault::None;
            if (!adbd::cli::cmd_verify(cfg, std::cout, fault).passed()) return kExitVerify;
        }
    } catch (const adbd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const adbd::FormatError& e) {
        std::cerr << "format error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const adbd::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "adbd_cli/run_config.hpp"

namespace adbd::cli {

// Every command writes under cfg.out (frames/, labels/, checkpoints/,
// manifest.json) and merges its records into the manifest.
void cmd_gen(const RunConfig& cfg);
void cmd_train(const RunConfig& cfg);
void cmd_migrate(const RunConfig& cfg);
void cmd_sweep(const RunConfig& cfg);
void cmd_label(const RunConfig& cfg);

enum class Fault { None, Schedule };

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool passed() const;
};

VerifyReport run_verification(const RunConfig& cfg, Fault fault = Fault::None);
// Runs the checks, prints one line each to `out`, records them in the manifest.
VerifyReport cmd_verify(const RunConfig& cfg, std::ostream& out, Fault fault = Fault::None);

// Sample seeds shared by gen and the bridge commands, so migrate/sweep/label
// start from exactly the files gen writes.
std::uint64_t source_seed(const RunConfig& cfg);
std::uint64_t target_seed(const RunConfig& cfg);

}  // namespace adbd::cli

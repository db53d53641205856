#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace adbd::cli {

struct OutputRecord {
    std::string path;     // relative to the run directory, '/' separated
    std::string kind;     // frame, points, labels, checkpoint, loss
    std::string command;  // producing subcommand
    std::optional<std::size_t> sample;
    std::optional<double> depth;
    std::optional<double> label;
    std::optional<double> target_label;
    std::optional<std::uint64_t> seed;
};

// manifest.json of one run directory. Each subcommand replaces its own
// records and summary and leaves the others in place, so the file always
// lists every emitted file exactly once.
class Manifest {
public:
    static Manifest open(const std::filesystem::path& run_dir);

    void begin(const std::string& command, const nlohmann::json& config);
    void add(OutputRecord record);
    void set_summary(const std::string& command, nlohmann::json summary);
    void set_timing(const std::string& command, double seconds);
    void save() const;

    const nlohmann::json& document() const noexcept { return doc_; }
    std::vector<OutputRecord> outputs() const;

private:
    std::filesystem::path path_;
    nlohmann::json doc_;
};

nlohmann::json to_json(const OutputRecord& r);
OutputRecord record_from_json(const nlohmann::json& j);

}  // namespace adbd::cli

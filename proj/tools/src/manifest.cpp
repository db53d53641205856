#include "adbd_cli/manifest.hpp"

#include <fstream>

#include <adbd/errors.hpp>

#include "adbd_cli/version.hpp"

namespace adbd::cli {

using nlohmann::json;

json to_json(const OutputRecord& r) {
    json j{{"path", r.path}, {"kind", r.kind}, {"command", r.command}};
    if (r.sample) j["sample"] = *r.sample;
    if (r.depth) j["depth"] = *r.depth;
    if (r.label) j["label"] = *r.label;
    if (r.target_label) j["target_label"] = *r.target_label;
    if (r.seed) j["seed"] = *r.seed;
    return j;
}

OutputRecord record_from_json(const json& j) {
    OutputRecord r;
    r.path = j.at("path").get<std::string>();
    r.kind = j.at("kind").get<std::string>();
    r.command = j.at("command").get<std::string>();
    if (j.contains("sample")) r.sample = j["sample"].get<std::size_t>();
    if (j.contains("depth")) r.depth = j["depth"].get<double>();
    if (j.contains("label")) r.label = j["label"].get<double>();
    if (j.contains("target_label")) r.target_label = j["target_label"].get<double>();
    if (j.contains("seed")) r.seed = j["seed"].get<std::uint64_t>();
    return r;
}

Manifest Manifest::open(const std::filesystem::path& run_dir) {
    Manifest m;
    m.path_ = run_dir / "manifest.json";
    if (std::filesystem::exists(m.path_)) {
        std::ifstream in(m.path_);
        try {
            m.doc_ = json::parse(in);
        } catch (const json::parse_error& e) {
            throw FormatError("manifest '" + m.path_.string() + "' is not valid JSON: " + e.what());
        }
    }
    if (!m.doc_.is_object()) m.doc_ = json::object();
    m.doc_["tool"] = "adbd";
    m.doc_["version"] = kToolVersion;
    for (const char* key : {"outputs"}) {
        if (!m.doc_.contains(key)) m.doc_[key] = json::array();
    }
    for (const char* key : {"summaries", "timings"}) {
        if (!m.doc_.contains(key)) m.doc_[key] = json::object();
    }
    return m;
}

void Manifest::begin(const std::string& command, const json& config) {
    doc_["config"] = config;
    json kept = json::array();
    for (const auto& r : doc_["outputs"]) {
        if (r.value("command", "") != command) kept.push_back(r);
    }
    doc_["outputs"] = std::move(kept);
    doc_["summaries"].erase(command);
    doc_["timings"].erase(command);
}

void Manifest::add(OutputRecord record) {
    auto& outputs = doc_["outputs"];
    for (auto it = outputs.begin(); it != outputs.end(); ++it) {
        if ((*it)["path"] == record.path) {
            outputs.erase(it);
            break;
        }
    }
    outputs.push_back(to_json(record));
}

void Manifest::set_summary(const std::string& command, json summary) {
    doc_["summaries"][command] = std::move(summary);
}

void Manifest::set_timing(const std::string& command, double seconds) { doc_["timings"][command] = seconds; }

void Manifest::save() const {
    std::ofstream out(path_, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write manifest '" + path_.string() + "'");
    out << doc_.dump(2) << '\n';
    if (!out) throw ConfigError("failed writing manifest '" + path_.string() + "'");
}

std::vector<OutputRecord> Manifest::outputs() const {
    std::vector<OutputRecord> out;
    for (const auto& r : doc_.at("outputs")) out.push_back(record_from_json(r));
    return out;
}

}  // namespace adbd::cli

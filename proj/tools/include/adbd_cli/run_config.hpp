#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <adbd/bridge.hpp>
#include <adbd/domains.hpp>
#include <adbd/mlp.hpp>
#include <adbd/schedule.hpp>
#include <adbd/softlabel.hpp>
#include <adbd/train.hpp>

#include "json.hpp"

namespace adbd::cli {

enum class DomainKind { Gmm, Texture };
enum class ModelKind { Analytic, Mlp };
// Soft-label endpoints: each sample against its own full-depth migration, or
// every sample against the batch means.
enum class LabelEndpoints { PerSample, Batch };

struct DomainConfig {
    DomainKind kind = DomainKind::Texture;
    std::string texture = "stripes";
    std::size_t size = 32;
    std::size_t samples = 8;  // per domain for gen, sources for migrate/sweep/label
};

struct AttentionSettings {
    std::size_t tokens = 0;
    std::size_t heads = 1;
    std::size_t windows = 1;
};

struct ModelConfig {
    ModelKind kind = ModelKind::Analytic;
    std::vector<std::size_t> hidden{64, 64};
    std::size_t time_dim = 16;
    Activation activation = Activation::Silu;
    std::optional<AttentionSettings> attention;
    std::size_t train_samples = 2000;
};

struct SweepConfig {
    std::vector<double> depth_grid;  // empty means uniform with `points`
    std::size_t points = 17;
};

// Everything a run needs; a run is reproducible from this alone.
struct RunConfig {
    std::uint64_t seed = 0;
    std::filesystem::path out = "run";
    ScheduleParams schedule;
    DomainConfig domain;
    ModelConfig model;
    TrainConfig train;
    std::size_t steps_per_unit_time = 1000;
    Integrator integrator = Integrator::Euler;
    double migrate_depth = 1.0;
    SweepConfig sweep;
    std::vector<double> label_targets{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    LabelEndpoints label_endpoints = LabelEndpoints::PerSample;
    HighpassSpec highpass;
    unsigned workers = 0;

    void validate() const;
    DomainPair domain_pair() const;
    NoiseSchedule noise_schedule() const { return make_schedule(schedule); }
    BridgeConfig bridge() const;
    std::vector<double> depth_grid() const;
    MlpSpec mlp_spec(AttentionPriority priority) const;
};

nlohmann::json to_json(const RunConfig& cfg);
// Missing keys keep their defaults; unknown keys are rejected.
RunConfig from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);

// "0,0.25,0.5" -> {0, 0.25, 0.5}
std::vector<double> parse_number_list(const std::string& text);

}  // namespace adbd::cli

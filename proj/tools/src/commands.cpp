#include "adbd_cli/commands.hpp"

#include <chrono>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>

#include <adbd/checkpoint.hpp>
#include <adbd/denoiser.hpp>
#include <adbd/errors.hpp>
#include <adbd/parallel.hpp>
#include <adbd/pgm.hpp>
#include <adbd/rng.hpp>
#include <adbd/stats.hpp>

#include "adbd_cli/manifest.hpp"

namespace adbd::cli {
namespace fs = std::filesystem;

namespace {

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string indexed(const char* pattern, std::size_t a, std::size_t b = 0) {
    char buf[96];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

void prepare_layout(const fs::path& out) {
    std::error_code ec;
    for (const char* sub : {"frames", "labels", "checkpoints"}) {
        fs::create_directories(out / sub, ec);
        if (ec) throw ConfigError("cannot create '" + (out / sub).string() + "': " + ec.message());
    }
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    f << text;
    if (!f) throw ConfigError("failed writing '" + path.string() + "'");
}

std::string points_csv(const std::vector<Field>& points) {
    std::string s;
    const std::size_t d = points.empty() ? 0 : points.front().size();
    for (std::size_t k = 0; k < d; ++k) s += (k ? ",x" : "x") + std::to_string(k);
    s += '\n';
    for (const auto& p : points) {
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (k) s += ',';
            s += num(p[k]);
        }
        s += '\n';
    }
    return s;
}

struct Models {
    std::unique_ptr<EpsilonModel> source;
    std::unique_ptr<EpsilonModel> target;
};

Models load_models(const RunConfig& cfg, const DomainPair& pair) {
    const auto schedule = cfg.noise_schedule();
    if (cfg.model.kind == ModelKind::Analytic) {
        return {make_analytic_model(pair.source, schedule), make_analytic_model(pair.target, schedule)};
    }
    const auto dir = cfg.out / "checkpoints";
    for (const char* name : {"source.ckpt", "target.ckpt"}) {
        if (!fs::exists(dir / name)) {
            throw ConfigError("model.kind is mlp but '" + (dir / name).string() + "' is missing; run train first");
        }
    }
    auto src = std::make_unique<MlpDenoiser>(load_checkpoint(dir / "source.ckpt"));
    auto tgt = std::make_unique<MlpDenoiser>(load_checkpoint(dir / "target.ckpt"));
    if (src->field_shape() != pair.shape || tgt->field_shape() != pair.shape) {
        throw ConfigError("checkpoint field shape does not match the configured domain");
    }
    return {std::move(src), std::move(tgt)};
}

void require_images(const DomainPair& pair, const char* command) {
    if (!is_image_domain(pair.source)) {
        throw ConfigError(std::string(command) + " needs an image domain (domain.kind = texture)");
    }
}

// One depth sweep per source sample. Per-sample endpoints label each source
// against its own full-depth migration; batch endpoints use the means.
std::vector<std::vector<SweepPoint>> sweep_sources(const RunConfig& cfg, const DomainPair& pair,
                                                   const std::vector<Field>& sources) {
    const auto models = load_models(cfg, pair);
    const auto bridge = cfg.bridge();
    const auto grid = cfg.depth_grid();
    std::vector<double> a_source(sources.size()), a_target(sources.size());
    parallel_for(
        sources.size(),
        [&](std::size_t k) {
            const auto full = ubdp_migrate(sources[k], *models.source, *models.target, bridge);
            a_source[k] = highpass_magnitude(sources[k], cfg.highpass);
            a_target[k] = highpass_magnitude(full.migrated, cfg.highpass);
        },
        cfg.workers);
    if (cfg.label_endpoints == LabelEndpoints::Batch) {
        std::fill(a_source.begin(), a_source.end(), mean(a_source));
        std::fill(a_target.begin(), a_target.end(), mean(a_target));
    }
    std::vector<std::vector<SweepPoint>> sweeps(sources.size());
    parallel_for(
        sources.size(),
        [&](std::size_t k) {
            sweeps[k] = depth_sweep(sources[k], a_source[k], a_target[k], *models.source, *models.target, bridge,
                                    grid, cfg.highpass);
        },
        cfg.workers);
    return sweeps;
}

std::string label_columns(std::size_t sample, const SweepPoint& p) {
    const auto& m = p.measurement;
    return std::to_string(sample) + "," + num(p.depth) + "," + num(m.label.raw) + "," + num(m.label.value) + "," +
           num(m.a_source) + "," + num(m.a_intermediate) + "," + num(m.a_target);
}

template <class Body>
void run_command(const RunConfig& cfg, const std::string& name, Body&& body) {
    cfg.validate();
    prepare_layout(cfg.out);
    Stopwatch clock;
    auto manifest = Manifest::open(cfg.out);
    manifest.begin(name, to_json(cfg));
    body(manifest);
    manifest.set_timing(name, clock.seconds());
    manifest.save();
}

}  // namespace

std::uint64_t source_seed(const RunConfig& cfg) { return mix64(cfg.seed ^ 0x736f75726365ull); }
std::uint64_t target_seed(const RunConfig& cfg) { return mix64(cfg.seed ^ 0x746172676574ull); }

void cmd_gen(const RunConfig& cfg) {
    run_command(cfg, "gen", [&](Manifest& manifest) {
        const auto pair = cfg.domain_pair();
        const std::pair<const char*, std::uint64_t> sides[] = {{"source", source_seed(cfg)},
                                                               {"target", target_seed(cfg)}};
        for (const auto& [side, seed] : sides) {
            const auto& spec = std::string(side) == "source" ? pair.source : pair.target;
            const auto samples = sample_domain(spec, cfg.domain.samples, seed);
            if (is_image_domain(spec)) {
                for (std::size_t k = 0; k < samples.size(); ++k) {
                    const std::string rel = "frames/" + std::string(side) + indexed("_%04zu.pgm", k);
                    save_pgm(samples[k], cfg.out / rel);
                    manifest.add({rel, "frame", "gen", k, std::nullopt, std::nullopt, std::nullopt, seed});
                }
            } else {
                const std::string rel = "frames/" + std::string(side) + ".csv";
                write_text(cfg.out / rel, points_csv(samples));
                manifest.add({rel, "points", "gen", std::nullopt, std::nullopt, std::nullopt, std::nullopt, seed});
            }
        }
        manifest.set_summary("gen", {{"domain", pair.name}, {"samples_per_domain", cfg.domain.samples}});
    });
}

void cmd_train(const RunConfig& cfg) {
    run_command(cfg, "train", [&](Manifest& manifest) {
        const auto pair = cfg.domain_pair();
        const auto schedule = cfg.noise_schedule();
        std::string loss_csv = "domain,epoch,loss\n";
        nlohmann::json summary = nlohmann::json::object();
        const std::tuple<const char*, const DomainSpec*, AttentionPriority, std::uint64_t> jobs[] = {
            {"source", &pair.source, select_priority(Direction::Forward), source_seed(cfg)},
            {"target", &pair.target, select_priority(Direction::Reverse), target_seed(cfg)}};
        for (const auto& [side, spec, priority, seed] : jobs) {
            const auto data = sample_domain(*spec, cfg.model.train_samples, mix64(seed ^ 0x747261696eull));
            MlpDenoiser initial(cfg.mlp_spec(priority), mix64(seed ^ 0x696e6974ull));
            TrainConfig tc = cfg.train;
            tc.seed = mix64(seed ^ 0x6f707421ull);
            auto result = train_denoiser(data, std::move(initial), schedule, tc);
            for (std::size_t e = 0; e < result.epoch_loss.size(); ++e) {
                loss_csv += std::string(side) + "," + std::to_string(e) + "," + num(result.epoch_loss[e]) + "\n";
            }
            const std::string rel = "checkpoints/" + std::string(side) + ".ckpt";
            save_checkpoint(result.model, cfg.out / rel);
            manifest.add({rel, "checkpoint", "train", std::nullopt, std::nullopt, std::nullopt, std::nullopt, seed});
            summary[side] = {{"first_epoch_loss", result.epoch_loss.front()},
                             {"final_epoch_loss", result.epoch_loss.back()},
                             {"attention_priority", to_string(priority)}};
        }
        write_text(cfg.out / "checkpoints/train_loss.csv", loss_csv);
        manifest.add({"checkpoints/train_loss.csv", "loss", "train", std::nullopt, std::nullopt, std::nullopt,
                      std::nullopt, std::nullopt});
        manifest.set_summary("train", summary);
    });
}

void cmd_migrate(const RunConfig& cfg) {
    run_command(cfg, "migrate", [&](Manifest& manifest) {
        const auto pair = cfg.domain_pair();
        const auto models = load_models(cfg, pair);
        const auto sources = sample_domain(pair.source, cfg.domain.samples, source_seed(cfg));
        const auto bridge = cfg.bridge();
        std::vector<BridgeTrajectory> out(sources.size());
        parallel_for(
            sources.size(),
            [&](std::size_t k) { out[k] = depth_migrate(sources[k], *models.source, *models.target, bridge); },
            cfg.workers);

        std::vector<double> before, after;
        std::vector<Field> migrated;
        for (std::size_t k = 0; k < sources.size(); ++k) {
            before.push_back(domain_log_density(pair.target, sources[k]));
            after.push_back(domain_log_density(pair.target, out[k].migrated));
            migrated.push_back(out[k].migrated);
        }
        const double depth = out.empty() ? snap_depth(cfg.migrate_depth, cfg.steps_per_unit_time) : out[0].depth;
        if (is_image_domain(pair.target)) {
            for (std::size_t k = 0; k < migrated.size(); ++k) {
                const std::string rel = indexed("frames/migrated_%04zu.pgm", k);
                save_pgm(migrated[k], cfg.out / rel);
                manifest.add({rel, "frame", "migrate", k, depth, std::nullopt, std::nullopt, source_seed(cfg)});
            }
        } else {
            write_text(cfg.out / "frames/migrated.csv", points_csv(migrated));
            manifest.add({"frames/migrated.csv", "points", "migrate", std::nullopt, depth, std::nullopt,
                          std::nullopt, source_seed(cfg)});
        }
        const double m_before = mean(before);
        const double m_after = mean(after);
        manifest.set_summary("migrate", {{"depth", depth},
                                         {"count", migrated.size()},
                                         {"mean_target_log_density_source", m_before},
                                         {"mean_target_log_density_migrated", m_after},
                                         {"log_density_gain", m_after - m_before}});
    });
}

void cmd_sweep(const RunConfig& cfg) {
    run_command(cfg, "sweep", [&](Manifest& manifest) {
        const auto pair = cfg.domain_pair();
        require_images(pair, "sweep");
        const auto sources = sample_domain(pair.source, cfg.domain.samples, source_seed(cfg));
        const auto sweeps = sweep_sources(cfg, pair, sources);

        std::string csv = "sample_id,depth_snapped,raw_label,clamped_label,A_s,A_i,A_t,frame\n";
        for (std::size_t s = 0; s < sweeps.size(); ++s) {
            for (std::size_t k = 0; k < sweeps[s].size(); ++k) {
                const auto& p = sweeps[s][k];
                const std::string rel = indexed("frames/sweep_s%04zu_k%03zu.pgm", s, k);
                save_pgm(p.frame, cfg.out / rel);
                manifest.add({rel, "frame", "sweep", s, p.depth, p.measurement.label.value, std::nullopt,
                              source_seed(cfg)});
                csv += label_columns(s, p) + "," + rel + "\n";
            }
        }
        write_text(cfg.out / "labels/sweep.csv", csv);
        manifest.add({"labels/sweep.csv", "labels", "sweep", std::nullopt, std::nullopt, std::nullopt,
                      std::nullopt, std::nullopt});
        manifest.set_summary("sweep", {{"samples", sweeps.size()}, {"depth_grid", cfg.depth_grid()}});
    });
}

void cmd_label(const RunConfig& cfg) {
    run_command(cfg, "label", [&](Manifest& manifest) {
        const auto pair = cfg.domain_pair();
        require_images(pair, "label");
        if (cfg.label_targets.empty()) throw ConfigError("label: no target labels configured");
        const auto sources = sample_domain(pair.source, cfg.domain.samples, source_seed(cfg));
        const auto sweeps = sweep_sources(cfg, pair, sources);

        std::string csv = "sample_id,depth_snapped,raw_label,clamped_label,A_s,A_i,A_t,target_label,frame\n";
        for (std::size_t s = 0; s < sweeps.size(); ++s) {
            for (std::size_t k = 0; k < cfg.label_targets.size(); ++k) {
                const double target = cfg.label_targets[k];
                const auto cal = select_depth(target, sweeps[s]);
                const std::string rel = indexed("frames/label_s%04zu_t%03zu.pgm", s, k);
                save_pgm(cal.frame, cfg.out / rel);
                manifest.add({rel, "frame", "label", s, cal.depth, cal.measurement.label.value, target,
                              source_seed(cfg)});
                const SweepPoint chosen{cal.depth, Field{}, cal.measurement};
                csv += label_columns(s, chosen) + "," + num(target) + "," + rel + "\n";
            }
        }
        write_text(cfg.out / "labels/labels.csv", csv);
        manifest.add({"labels/labels.csv", "labels", "label", std::nullopt, std::nullopt, std::nullopt,
                      std::nullopt, std::nullopt});
        manifest.set_summary("label", {{"samples", sweeps.size()}, {"targets", cfg.label_targets}});
    });
}

bool VerifyReport::passed() const {
    for (const auto& c : checks) {
        if (!c.passed) return false;
    }
    return !checks.empty();
}

VerifyReport cmd_verify(const RunConfig& cfg, std::ostream& out, Fault fault) {
    VerifyReport report;
    run_command(cfg, "verify", [&](Manifest& manifest) {
        report = run_verification(cfg, fault);
        nlohmann::json checks = nlohmann::json::array();
        for (const auto& c : report.checks) {
            char line[256];
            std::snprintf(line, sizeof line, "%s %-20s measured=%.3e threshold=%.3e", c.passed ? "PASS" : "FAIL",
                          c.name.c_str(), c.measured, c.threshold);
            out << line;
            if (!c.detail.empty()) out << "  (" << c.detail << ")";
            out << '\n';
            checks.push_back({{"name", c.name},
                              {"passed", c.passed},
                              {"measured", c.measured},
                              {"threshold", c.threshold},
                              {"detail", c.detail}});
        }
        manifest.set_summary("verify", {{"passed", report.passed()},
                                        {"fault", fault == Fault::Schedule ? "schedule" : "none"},
                                        {"checks", checks}});
    });
    return report;
}

}  // namespace adbd::cli

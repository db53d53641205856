#include "adbd_cli/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <adbd/errors.hpp>

namespace adbd::cli {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError("config: '" + where + "' must be an object");
    for (const auto& [key, _] : j.items()) {
        if (!allowed.contains(key)) throw ConfigError("config: unknown key '" + where + "." + key + "'");
    }
}

template <class T>
void read(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
    }
}

std::string domain_kind_name(DomainKind k) { return k == DomainKind::Gmm ? "gmm" : "texture"; }
std::string model_kind_name(ModelKind k) { return k == ModelKind::Analytic ? "analytic" : "mlp"; }

DomainKind parse_domain_kind(const std::string& s) {
    if (s == "gmm") return DomainKind::Gmm;
    if (s == "texture") return DomainKind::Texture;
    throw ConfigError("config: domain.kind must be gmm or texture, got '" + s + "'");
}

ModelKind parse_model_kind(const std::string& s) {
    if (s == "analytic") return ModelKind::Analytic;
    if (s == "mlp") return ModelKind::Mlp;
    throw ConfigError("config: model.kind must be analytic or mlp, got '" + s + "'");
}

}  // namespace

void RunConfig::validate() const {
    if (schedule.steps == 0) throw ConfigError("config: schedule.steps must be positive");
    if (domain.samples == 0) throw ConfigError("config: domain.samples must be positive");
    if (model.train_samples == 0) throw ConfigError("config: model.train_samples must be positive");
    if (!(migrate_depth >= 0.0 && migrate_depth <= 1.0)) throw ConfigError("config: migrate.depth outside [0, 1]");
    for (double t : label_targets) {
        if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("config: label target outside [0, 1]");
    }
    for (double d : sweep.depth_grid) {
        if (!(d >= 0.0 && d <= 1.0)) throw ConfigError("config: depth grid value outside [0, 1]");
    }
    if (sweep.depth_grid.empty() && sweep.points < 2) throw ConfigError("config: sweep.points must be >= 2");
    highpass.validate();
    train.validate();
    bridge().validate();
    domain_pair();
    noise_schedule();
}

DomainPair RunConfig::domain_pair() const {
    if (domain.kind == DomainKind::Gmm) return default_gmm_pair();
    return make_texture_pair(domain.texture, domain.size, seed);
}

BridgeConfig RunConfig::bridge() const {
    BridgeConfig b{noise_schedule()};
    b.steps_per_unit_time = steps_per_unit_time;
    b.integrator = integrator;
    b.depth = migrate_depth;
    return b;
}

std::vector<double> RunConfig::depth_grid() const {
    return sweep.depth_grid.empty() ? uniform_depth_grid(sweep.points) : sweep.depth_grid;
}

MlpSpec RunConfig::mlp_spec(AttentionPriority priority) const {
    MlpSpec s;
    s.field_shape = domain_pair().shape;
    s.hidden = model.hidden;
    s.time_dim = model.time_dim;
    s.activation = model.activation;
    s.schedule_steps = schedule.steps;
    if (model.attention) {
        s.attention = MlpAttentionSpec{model.attention->tokens, model.attention->heads, model.attention->windows,
                                       priority};
    }
    s.validate();
    return s;
}

json to_json(const RunConfig& c) {
    json j;
    j["seed"] = c.seed;
    j["out"] = c.out.string();
    j["schedule"] = {{"steps", c.schedule.steps},
                     {"beta_start", c.schedule.beta_start},
                     {"beta_end", c.schedule.beta_end}};
    j["domain"] = {{"kind", domain_kind_name(c.domain.kind)},
                   {"texture", c.domain.texture},
                   {"size", c.domain.size},
                   {"samples", c.domain.samples}};
    json model = {{"kind", model_kind_name(c.model.kind)},
                  {"hidden", c.model.hidden},
                  {"time_dim", c.model.time_dim},
                  {"activation", to_string(c.model.activation)},
                  {"train_samples", c.model.train_samples}};
    if (c.model.attention) {
        model["attention"] = {{"tokens", c.model.attention->tokens},
                              {"heads", c.model.attention->heads},
                              {"windows", c.model.attention->windows}};
    } else {
        model["attention"] = nullptr;
    }
    j["model"] = model;
    j["train"] = {{"epochs", c.train.epochs},
                  {"batch_size", c.train.batch_size},
                  {"learning_rate", c.train.learning_rate},
                  {"optimizer", to_string(c.train.optimizer)}};
    j["bridge"] = {{"steps_per_unit_time", c.steps_per_unit_time}, {"integrator", to_string(c.integrator)}};
    j["migrate"] = {{"depth", c.migrate_depth}};
    j["sweep"] = {{"depth_grid", c.sweep.depth_grid}, {"points", c.sweep.points}};
    j["label"] = {{"targets", c.label_targets},
                  {"endpoints", c.label_endpoints == LabelEndpoints::PerSample ? "per_sample" : "batch"}};
    j["highpass"] = {{"cutoff", c.highpass.cutoff_fraction}};
    j["workers"] = c.workers;
    return j;
}

RunConfig from_json(const json& j) {
    RunConfig c;
    reject_unknown(j,
                   {"seed", "out", "schedule", "domain", "model", "train", "bridge", "migrate", "sweep", "label",
                    "highpass", "workers"},
                   "config");
    read(j, "seed", c.seed);
    if (j.contains("out")) {
        std::string out;
        read(j, "out", out);
        c.out = out;
    }
    read(j, "workers", c.workers);
    if (j.contains("schedule")) {
        const auto& s = j["schedule"];
        reject_unknown(s, {"steps", "beta_start", "beta_end"}, "schedule");
        read(s, "steps", c.schedule.steps);
        read(s, "beta_start", c.schedule.beta_start);
        read(s, "beta_end", c.schedule.beta_end);
    }
    if (j.contains("domain")) {
        const auto& d = j["domain"];
        reject_unknown(d, {"kind", "texture", "size", "samples"}, "domain");
        std::string kind = domain_kind_name(c.domain.kind);
        read(d, "kind", kind);
        c.domain.kind = parse_domain_kind(kind);
        read(d, "texture", c.domain.texture);
        read(d, "size", c.domain.size);
        read(d, "samples", c.domain.samples);
    }
    if (j.contains("model")) {
        const auto& m = j["model"];
        reject_unknown(m, {"kind", "hidden", "time_dim", "activation", "attention", "train_samples"}, "model");
        std::string kind = model_kind_name(c.model.kind);
        read(m, "kind", kind);
        c.model.kind = parse_model_kind(kind);
        read(m, "hidden", c.model.hidden);
        read(m, "time_dim", c.model.time_dim);
        read(m, "train_samples", c.model.train_samples);
        std::string act = to_string(c.model.activation);
        read(m, "activation", act);
        c.model.activation = parse_activation(act);
        if (m.contains("attention") && !m["attention"].is_null()) {
            const auto& a = m["attention"];
            reject_unknown(a, {"tokens", "heads", "windows"}, "model.attention");
            AttentionSettings s;
            read(a, "tokens", s.tokens);
            read(a, "heads", s.heads);
            read(a, "windows", s.windows);
            c.model.attention = s;
        }
    }
    if (j.contains("train")) {
        const auto& t = j["train"];
        reject_unknown(t, {"epochs", "batch_size", "learning_rate", "optimizer"}, "train");
        read(t, "epochs", c.train.epochs);
        read(t, "batch_size", c.train.batch_size);
        read(t, "learning_rate", c.train.learning_rate);
        std::string opt = to_string(c.train.optimizer);
        read(t, "optimizer", opt);
        c.train.optimizer = parse_optimizer(opt);
    }
    if (j.contains("bridge")) {
        const auto& b = j["bridge"];
        reject_unknown(b, {"steps_per_unit_time", "integrator"}, "bridge");
        read(b, "steps_per_unit_time", c.steps_per_unit_time);
        std::string integ = to_string(c.integrator);
        read(b, "integrator", integ);
        c.integrator = parse_integrator(integ);
    }
    if (j.contains("migrate")) {
        reject_unknown(j["migrate"], {"depth"}, "migrate");
        read(j["migrate"], "depth", c.migrate_depth);
    }
    if (j.contains("sweep")) {
        reject_unknown(j["sweep"], {"depth_grid", "points"}, "sweep");
        read(j["sweep"], "depth_grid", c.sweep.depth_grid);
        read(j["sweep"], "points", c.sweep.points);
    }
    if (j.contains("label")) {
        reject_unknown(j["label"], {"targets", "endpoints"}, "label");
        read(j["label"], "targets", c.label_targets);
        std::string endpoints = "per_sample";
        read(j["label"], "endpoints", endpoints);
        if (endpoints == "per_sample") {
            c.label_endpoints = LabelEndpoints::PerSample;
        } else if (endpoints == "batch") {
            c.label_endpoints = LabelEndpoints::Batch;
        } else {
            throw ConfigError("config: label.endpoints must be per_sample or batch, got '" + endpoints + "'");
        }
    }
    if (j.contains("highpass")) {
        reject_unknown(j["highpass"], {"cutoff"}, "highpass");
        read(j["highpass"], "cutoff", c.highpass.cutoff_fraction);
    }
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return from_json(j);
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ConfigError("not a number: '" + item + "'");
        }
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
        if (used != item.size()) throw ConfigError("not a number: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("empty number list");
    return out;
}

}  // namespace adbd::cli

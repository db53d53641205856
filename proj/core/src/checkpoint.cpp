#include "adbd/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "adbd/errors.hpp"

namespace adbd {
namespace {

constexpr char kMagic[8] = {'A', 'D', 'B', 'D', 'M', 'L', 'P', '\0'};
constexpr std::uint64_t kMaxCount = 1ull << 32;

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

class Writer {
public:
    void bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        out_.insert(out_.end(), b, b + n);
    }
    void u32(std::uint32_t v) { bytes(&v, sizeof v); }
    void u64(std::uint64_t v) { bytes(&v, sizeof v); }
    void f64(double v) { bytes(&v, sizeof v); }
    std::vector<std::uint8_t> take() { return std::move(out_); }

private:
    std::vector<std::uint8_t> out_;
};

class Reader {
public:
    explicit Reader(const std::vector<std::uint8_t>& in) : in_(in) {}

    void bytes(void* p, std::size_t n) {
        if (in_.size() - pos_ < n) throw FormatError("checkpoint: truncated file");
        std::memcpy(p, in_.data() + pos_, n);
        pos_ += n;
    }
    std::uint32_t u32() {
        std::uint32_t v;
        bytes(&v, sizeof v);
        return v;
    }
    std::uint64_t u64() {
        std::uint64_t v;
        bytes(&v, sizeof v);
        return v;
    }
    std::uint64_t count(const char* what) {
        const auto v = u64();
        if (v > kMaxCount) throw FormatError(std::string("checkpoint: implausible ") + what);
        return v;
    }
    double f64() {
        double v;
        bytes(&v, sizeof v);
        return v;
    }
    bool done() const { return pos_ == in_.size(); }

private:
    const std::vector<std::uint8_t>& in_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const MlpDenoiser& model) {
    const auto& spec = model.spec();
    Writer w;
    w.bytes(kMagic, sizeof kMagic);
    w.u32(kCheckpointVersion);
    w.u32(static_cast<std::uint32_t>(spec.field_shape.size()));
    for (auto d : spec.field_shape) w.u64(d);
    w.u32(static_cast<std::uint32_t>(spec.time_dim));
    w.u32(spec.activation == Activation::Silu ? 0u : 1u);
    w.u32(static_cast<std::uint32_t>(spec.hidden.size()));
    for (auto h : spec.hidden) w.u64(h);
    w.u32(spec.attention ? 1u : 0u);
    if (spec.attention) {
        w.u64(spec.attention->token_count);
        w.u64(spec.attention->heads);
        w.u64(spec.attention->windows);
        w.u32(spec.attention->priority == AttentionPriority::GlobalFirst ? 0u : 1u);
    }
    w.u64(spec.schedule_steps);
    w.u64(model.parameter_count());
    for (double p : model.parameters()) w.f64(p);
    return w.take();
}

MlpDenoiser decode_checkpoint(const std::vector<std::uint8_t>& bytes) {
    Reader r(bytes);
    char magic[8];
    r.bytes(magic, sizeof magic);
    if (std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw FormatError("checkpoint: bad magic");
    const auto version = r.u32();
    if (version != kCheckpointVersion) {
        throw FormatError("checkpoint: unsupported version " + std::to_string(version));
    }
    MlpSpec spec;
    const auto rank = r.u32();
    if (rank == 0 || rank > 8) throw FormatError("checkpoint: bad field rank");
    for (std::uint32_t i = 0; i < rank; ++i) spec.field_shape.push_back(r.count("field dimension"));
    spec.time_dim = r.u32();
    const auto act = r.u32();
    if (act > 1) throw FormatError("checkpoint: unknown activation code");
    spec.activation = act == 0 ? Activation::Silu : Activation::Tanh;
    const auto hidden = r.u32();
    if (hidden > 64) throw FormatError("checkpoint: too many hidden layers");
    for (std::uint32_t i = 0; i < hidden; ++i) spec.hidden.push_back(r.count("hidden width"));
    const auto has_attn = r.u32();
    if (has_attn > 1) throw FormatError("checkpoint: bad attention flag");
    if (has_attn) {
        MlpAttentionSpec a;
        a.token_count = r.count("token count");
        a.heads = r.count("head count");
        a.windows = r.count("window count");
        const auto pr = r.u32();
        if (pr > 1) throw FormatError("checkpoint: unknown attention priority");
        a.priority = pr == 0 ? AttentionPriority::GlobalFirst : AttentionPriority::LocalFirst;
        spec.attention = a;
    }
    spec.schedule_steps = r.count("schedule steps");
    const auto n = r.count("parameter count");
    std::vector<double> params(n);
    for (auto& p : params) p = r.f64();
    if (!r.done()) throw FormatError("checkpoint: trailing bytes");
    try {
        return MlpDenoiser(std::move(spec), std::move(params));
    } catch (const ConfigError& e) {
        throw FormatError(std::string("checkpoint: inconsistent header: ") + e.what());
    }
}

void save_checkpoint(const MlpDenoiser& model, const std::filesystem::path& path) {
    const auto bytes = encode_checkpoint(model);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("checkpoint: cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("checkpoint: write failed for " + path.string());
}

MlpDenoiser load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("checkpoint: cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_checkpoint(bytes);
}

}  // namespace adbd

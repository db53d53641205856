#include "adbd/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

namespace adbd {
namespace {

constexpr std::size_t kMaxDimension = 1u << 15;

class HeaderReader {
public:
    HeaderReader(const std::vector<std::uint8_t>& bytes, std::size_t start) : bytes_(bytes), pos_(start) {}

    std::size_t pos() const { return pos_; }

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const auto c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(c)) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::size_t number(const char* what) {
        skip_space_and_comments();
        std::size_t value = 0;
        std::size_t digits = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
            if (value > kMaxDimension * kMaxDimension) {
                throw FormatError(std::string("pgm: ") + what + " overflows");
            }
            ++pos_;
            ++digits;
        }
        if (digits == 0) throw FormatError(std::string("pgm: missing ") + what);
        return value;
    }

    void single_whitespace() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            throw FormatError("pgm: header must end with one whitespace byte");
        }
        ++pos_;
    }

private:
    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_;
};

}  // namespace

std::vector<std::uint8_t> encode_pgm(const Field& image) {
    if (image.rank() != 2) throw ConfigError("save_pgm: field must be 2-D, got " + shape_string(image.shape()));
    const std::string header =
        "P5\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(header.size() + image.size());
    for (double v : image.values()) {
        if (!std::isfinite(v)) throw ConfigError("save_pgm: non-finite pixel");
        const double scaled = std::floor((std::clamp(v, -1.0, 1.0) + 1.0) * 127.5 + 0.5);
        out.push_back(static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0)));
    }
    return out;
}

Field decode_pgm(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') throw FormatError("pgm: missing P5 magic");
    HeaderReader reader(bytes, 2);
    const std::size_t width = reader.number("width");
    const std::size_t height = reader.number("height");
    const std::size_t maxval = reader.number("maxval");
    reader.single_whitespace();
    if (width == 0 || height == 0) throw FormatError("pgm: zero dimension");
    if (width > kMaxDimension || height > kMaxDimension) throw FormatError("pgm: dimension overflow");
    if (maxval != 255) throw FormatError("pgm: only maxval 255 is supported");
    const std::size_t count = width * height;
    if (bytes.size() - reader.pos() < count) throw FormatError("pgm: truncated pixel data");
    Field image({height, width});
    for (std::size_t i = 0; i < count; ++i) {
        image[i] = static_cast<double>(bytes[reader.pos() + i]) / 127.5 - 1.0;
    }
    return image;
}

void save_pgm(const Field& image, const std::filesystem::path& path) {
    const auto bytes = encode_pgm(image);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("pgm: cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("pgm: write failed for " + path.string());
}

Field load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("pgm: cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_pgm(bytes);
}

}  // namespace adbd

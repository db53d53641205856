#include <gtest/gtest.h>

#include <filesystem>
#include <string>

#include <adbd/errors.hpp>
#include <adbd/pgm.hpp>
#include <adbd/rng.hpp>

namespace adbd {
namespace {

using namespace std::string_literals;

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

TEST(Pgm, HeaderAndExtremes) {
    const auto lo = encode_pgm(Field::filled({2, 3}, -1.0));
    const std::string header = "P5\n3 2\n255\n";
    ASSERT_EQ(lo.size(), header.size() + 6);
    EXPECT_EQ(std::string(lo.begin(), lo.begin() + header.size()), header);
    for (std::size_t i = header.size(); i < lo.size(); ++i) EXPECT_EQ(lo[i], 0);
    const auto hi = encode_pgm(Field::filled({2, 3}, 1.0));
    for (std::size_t i = header.size(); i < hi.size(); ++i) EXPECT_EQ(hi[i], 255);
}

TEST(Pgm, RoundHalfUp) {
    // v = 0 -> 127.5 -> 128; v just below maps down.
    const auto b = encode_pgm(Field({1, 2}, {0.0, -1.0 / 127.5}));
    EXPECT_EQ(b[b.size() - 2], 128);
    EXPECT_EQ(b[b.size() - 1], 127);
}

TEST(Pgm, RoundTripWithinQuantization) {
    CounterRng rng(1);
    Field f({7, 5});
    for (auto& v : f.values()) v = 2.0 * rng.uniform() - 1.0;
    const auto back = decode_pgm(encode_pgm(f));
    ASSERT_EQ(back.shape(), f.shape());
    EXPECT_LE(max_abs_diff(f, back), 1.0 / 127.5);
    EXPECT_EQ(encode_pgm(back), encode_pgm(f));
}

TEST(Pgm, FileRoundTrip) {
    const auto path = std::filesystem::temp_directory_path() / "adbd_pgm_test.pgm";
    const Field f({2, 2}, {-1.0, -0.5, 0.5, 1.0});
    save_pgm(f, path);
    EXPECT_EQ(encode_pgm(load_pgm(path)), encode_pgm(f));
    std::filesystem::remove(path);
    EXPECT_THROW(load_pgm(path), FormatError);
}

TEST(Pgm, HeaderComments) {
    const auto f = decode_pgm(bytes_of("P5 # note\n2 # w\n1\n255\n\x00\xff"s));
    EXPECT_EQ(f.shape(), (std::vector<std::size_t>{1, 2}));
    EXPECT_EQ(f[0], -1.0);
    EXPECT_EQ(f[1], 1.0);
}

TEST(Pgm, RejectsMalformed) {
    EXPECT_THROW(decode_pgm(bytes_of("P2\n1 1\n255\n0"s)), FormatError);
    EXPECT_THROW(decode_pgm(bytes_of("P5\n2 2\n255\n\x01"s)), FormatError);
    EXPECT_THROW(decode_pgm(bytes_of("P5\n1 1\n65535\n\x01\x01"s)), FormatError);
    EXPECT_THROW(decode_pgm(bytes_of("P5\n99999999999999999999 1\n255\n"s)), FormatError);
    EXPECT_THROW(decode_pgm(bytes_of("P5\n0 1\n255\n"s)), FormatError);
    EXPECT_THROW(decode_pgm(bytes_of("P5\n1"s)), FormatError);
}

TEST(Pgm, RejectsNonImageField) {
    EXPECT_THROW(encode_pgm(Field::point({0.0, 1.0})), ConfigError);
}

}  // namespace
}  // namespace adbd

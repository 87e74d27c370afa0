#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "franson/errors.hpp"
#include "franson/stream.hpp"
#include "oracles.hpp"

using namespace franson;
namespace fs = std::filesystem;

namespace {

TimestampStream example() {
    TimestampStream s;
    s.channel_id = 0x0102;
    s.duration_ps = 0x1122334455;
    s.timestamps = {0, 7, 0x0A0B0C0D0E, 0x1122334455};
    s.truth = {{Origin::Pair, 3}, {Origin::Dark, 0}, {Origin::SpRS, 0}, {Origin::Unknown, 0}};
    return s;
}

fs::path temp_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("franson_stream_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST(StreamBinary, ExactLayout) {
    std::ostringstream out(std::ios::binary);
    write_stream_binary(out, example());
    const std::string b = out.str();
    ASSERT_EQ(b.size(), 4u + 2 + 2 + 8 + 8 + 4 * 8);
    EXPECT_EQ(b.substr(0, 4), "FTS1");
    EXPECT_EQ(static_cast<unsigned char>(b[4]), 0x02);
    EXPECT_EQ(static_cast<unsigned char>(b[5]), 0x01);
    EXPECT_EQ(b[6], 0);
    EXPECT_EQ(b[7], 0);
    EXPECT_EQ(static_cast<unsigned char>(b[8]), 0x55);   // duration, little-endian
    EXPECT_EQ(static_cast<unsigned char>(b[12]), 0x11);
    EXPECT_EQ(static_cast<unsigned char>(b[16]), 4);     // count
    EXPECT_EQ(static_cast<unsigned char>(b[32]), 7);     // second timestamp
    EXPECT_EQ(static_cast<unsigned char>(b[40]), 0x0E);  // third timestamp low byte
}

TEST(StreamBinary, RoundTrip) {
    std::stringstream io(std::ios::in | std::ios::out | std::ios::binary);
    write_stream_binary(io, example());
    const auto back = read_stream_binary(io);
    EXPECT_EQ(back.channel_id, example().channel_id);
    EXPECT_EQ(back.duration_ps, example().duration_ps);
    EXPECT_EQ(back.timestamps, example().timestamps);
    EXPECT_TRUE(back.truth.empty());
}

TEST(StreamBinary, PropertyRoundTripRandom) {
    oracle::Gen gen(4);
    for (int trial = 0; trial < 50; ++trial) {
        TimestampStream s;
        s.channel_id = static_cast<std::uint16_t>(gen.integer(0, 65535));
        s.duration_ps = gen.integer(0, 1'000'000'000'000'000);
        s.timestamps = gen.sorted_times(static_cast<std::size_t>(gen.integer(0, 500)), s.duration_ps);
        std::stringstream io(std::ios::in | std::ios::out | std::ios::binary);
        write_stream_binary(io, s);
        const auto back = read_stream_binary(io);
        EXPECT_EQ(back.timestamps, s.timestamps);
        EXPECT_EQ(back.duration_ps, s.duration_ps);
        EXPECT_EQ(back.channel_id, s.channel_id);
    }
}

TEST(StreamBinary, RejectsBadInput) {
    std::istringstream bad_magic(std::string("FTS2") + std::string(20, '\0'));
    EXPECT_THROW(read_stream_binary(bad_magic), FormatError);

    std::ostringstream out(std::ios::binary);
    write_stream_binary(out, example());
    std::istringstream truncated(out.str().substr(0, out.str().size() - 3));
    EXPECT_THROW(read_stream_binary(truncated), FormatError);

    TimestampStream unsorted;
    unsorted.duration_ps = 10;
    unsorted.timestamps = {5, 3};
    std::ostringstream sink;
    EXPECT_THROW(write_stream_binary(sink, unsorted), FormatError);

    TimestampStream outside;
    outside.duration_ps = 10;
    outside.timestamps = {11};
    EXPECT_THROW(outside.validate(), FormatError);
}

TEST(StreamText, RoundTripAndComments) {
    std::stringstream io;
    write_stream_text(io, example());
    EXPECT_EQ(io.str().substr(0, 4), "0\n7\n");
    const auto back = read_stream_text(io, 3);
    EXPECT_EQ(back.timestamps, example().timestamps);
    EXPECT_EQ(back.channel_id, 3);
    EXPECT_EQ(back.duration_ps, example().timestamps.back());

    std::istringstream commented("# header\n10\n\n20\n");
    const auto c = read_stream_text(commented, 0, 100);
    EXPECT_EQ(c.timestamps, (std::vector<std::int64_t>{10, 20}));
    EXPECT_EQ(c.duration_ps, 100);

    std::istringstream junk("10\nabc\n");
    EXPECT_THROW(read_stream_text(junk), FormatError);
}

TEST(TruthSidecar, RoundTrip) {
    std::stringstream io;
    write_truth_sidecar(io, example().truth);
    EXPECT_EQ(io.str(), "pair 3\ndark\nsprs\nunknown\n");
    EXPECT_EQ(read_truth_sidecar(io), example().truth);
    std::istringstream bad("pair\n");
    EXPECT_THROW(read_truth_sidecar(bad), FormatError);
    std::istringstream unknown("photon\n");
    EXPECT_THROW(read_truth_sidecar(unknown), FormatError);
}

TEST(LoadStream, DetectsFormatAndAttachesTags) {
    const auto dir = temp_dir("load");
    save_stream(dir / "a.fts", example());
    EXPECT_TRUE(fs::exists(dir / "a.fts.tags"));
    const auto a = load_stream(dir / "a.fts");
    EXPECT_EQ(a.timestamps, example().timestamps);
    EXPECT_EQ(a.truth, example().truth);

    {
        std::ofstream t(dir / "b.txt");
        t << "5\n6\n";
    }
    EXPECT_EQ(load_stream(dir / "b.txt").timestamps, (std::vector<std::int64_t>{5, 6}));

    {
        std::ofstream j(dir / "c.bin", std::ios::binary);
        j << "JUNKJUNKJUNK";
    }
    EXPECT_THROW(load_stream(dir / "c.bin"), FormatError);
    EXPECT_THROW(load_stream(dir / "missing.fts"), FormatError);

    {
        std::ofstream t(dir / "d.txt");
        t << "5\n6\n";
        std::ofstream tags(dir / "d.txt.tags");
        tags << "dark\n";
    }
    EXPECT_THROW(load_stream(dir / "d.txt"), FormatError);
    fs::remove_all(dir);
}

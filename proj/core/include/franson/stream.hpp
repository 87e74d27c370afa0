#pragma once

// Detector timestamp streams and their on-disk formats.
//
// Binary layout (little-endian):
//   "FTS1" | u16 channel | u16 reserved (0) | u64 duration_ps | u64 count |
//   count x u64 timestamps, ascending.
// The optional truth sidecar is text, one tag per line: "pair <id>", "sprs"
// "dark" or "unknown". The plain-text stream alternative is one decimal ps value per line.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace franson {

enum class Origin : std::uint8_t { Pair, SpRS, Dark, Unknown };

struct TruthTag {
    Origin origin = Origin::Pair;
    std::uint64_t pair_id = 0;  ///< meaningful for Origin::Pair only

    friend bool operator==(const TruthTag&, const TruthTag&) = default;
};

struct TimestampStream {
    std::uint16_t channel_id = 0;
    std::int64_t duration_ps = 0;
    std::vector<std::int64_t> timestamps;
    std::vector<TruthTag> truth;  ///< empty, or one tag per timestamp

    bool has_truth() const { return !truth.empty(); }
    std::size_t size() const { return timestamps.size(); }
    double duration_s() const { return static_cast<double>(duration_ps) * 1e-12; }

    /// Throws FormatError if unsorted, out of [0, duration] or tags mismatch.
    void validate() const;
};

inline constexpr char kStreamMagic[4] = {'F', 'T', 'S', '1'};

void write_stream_binary(std::ostream& out, const TimestampStream& stream);
TimestampStream read_stream_binary(std::istream& in);

void write_stream_text(std::ostream& out, const TimestampStream& stream);
/// Text streams carry no header; duration is the last timestamp unless given.
TimestampStream read_stream_text(std::istream& in, std::uint16_t channel_id = 0,
                                 std::optional<std::int64_t> duration_ps = std::nullopt);

void write_truth_sidecar(std::ostream& out, const std::vector<TruthTag>& tags);
std::vector<TruthTag> read_truth_sidecar(std::istream& in);

/// Reads a stream file, detecting binary (by magic) or text format, and
/// attaches `<path>.tags` when present.
TimestampStream load_stream(const std::filesystem::path& path);
/// Writes binary stream plus `<path>.tags` when the stream carries truth.
void save_stream(const std::filesystem::path& path, const TimestampStream& stream);

std::string to_string(Origin origin);

}  // namespace franson

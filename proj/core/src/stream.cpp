#include "franson/stream.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "franson/errors.hpp"

namespace franson {

namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
    std::array<char, sizeof(T)> bytes{};
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        bytes[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFFu);
    }
    out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in, const char* what) {
    std::array<unsigned char, sizeof(T)> bytes{};
    in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
    if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
        throw FormatError(std::string("truncated stream file while reading ") + what);
    }
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    }
    return static_cast<T>(value);
}

}  // namespace

void TimestampStream::validate() const {
    if (duration_ps < 0) {
        throw FormatError("stream duration is negative");
    }
    if (!std::is_sorted(timestamps.begin(), timestamps.end())) {
        throw FormatError("stream timestamps are not sorted ascending");
    }
    if (!timestamps.empty() && (timestamps.front() < 0 || timestamps.back() > duration_ps)) {
        throw FormatError("stream timestamps fall outside [0, duration]");
    }
    if (!truth.empty() && truth.size() != timestamps.size()) {
        throw FormatError("truth tag count does not match timestamp count");
    }
}

void write_stream_binary(std::ostream& out, const TimestampStream& stream) {
    stream.validate();
    out.write(kStreamMagic, sizeof(kStreamMagic));
    put_le<std::uint16_t>(out, stream.channel_id);
    put_le<std::uint16_t>(out, 0);
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(stream.duration_ps));
    put_le<std::uint64_t>(out, stream.timestamps.size());
    for (std::int64_t t : stream.timestamps) {
        put_le<std::uint64_t>(out, static_cast<std::uint64_t>(t));
    }
    if (!out) {
        throw FormatError("failed writing stream");
    }
}

TimestampStream read_stream_binary(std::istream& in) {
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (in.gcount() != 4 || std::memcmp(magic.data(), kStreamMagic, 4) != 0) {
        throw FormatError("bad stream magic (expected FTS1)");
    }
    TimestampStream stream;
    stream.channel_id = get_le<std::uint16_t>(in, "channel id");
    (void)get_le<std::uint16_t>(in, "reserved");
    const auto duration = get_le<std::uint64_t>(in, "duration");
    const auto count = get_le<std::uint64_t>(in, "count");
    if (duration > static_cast<std::uint64_t>(INT64_MAX)) {
        throw FormatError("stream duration overflows int64");
    }
    stream.duration_ps = static_cast<std::int64_t>(duration);
    if (count > (1ULL << 40)) {
        throw FormatError("implausible event count in stream header");
    }
    stream.timestamps.resize(count);
    for (auto& t : stream.timestamps) {
        t = static_cast<std::int64_t>(get_le<std::uint64_t>(in, "timestamp"));
    }
    stream.validate();
    return stream;
}

void write_stream_text(std::ostream& out, const TimestampStream& stream) {
    for (std::int64_t t : stream.timestamps) {
        out << t << '\n';
    }
}

TimestampStream read_stream_text(std::istream& in, std::uint16_t channel_id,
                                 std::optional<std::int64_t> duration_ps) {
    TimestampStream stream;
    stream.channel_id = channel_id;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::istringstream ls(line);
        std::int64_t t = 0;
        if (!(ls >> t)) {
            throw FormatError("text stream line " + std::to_string(line_no) +
                              " is not an integer timestamp");
        }
        stream.timestamps.push_back(t);
    }
    stream.duration_ps = duration_ps.value_or(stream.timestamps.empty() ? 0 : stream.timestamps.back());
    stream.validate();
    return stream;
}

std::string to_string(Origin origin) {
    switch (origin) {
        case Origin::Pair: return "pair";
        case Origin::SpRS: return "sprs";
        case Origin::Dark: return "dark";
        case Origin::Unknown: return "unknown";
    }
    return "unknown";
}

void write_truth_sidecar(std::ostream& out, const std::vector<TruthTag>& tags) {
    for (const auto& tag : tags) {
        out << to_string(tag.origin);
        if (tag.origin == Origin::Pair) {
            out << ' ' << tag.pair_id;
        }
        out << '\n';
    }
}

std::vector<TruthTag> read_truth_sidecar(std::istream& in) {
    std::vector<TruthTag> tags;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        TruthTag tag;
        if (kind == "pair") {
            tag.origin = Origin::Pair;
            if (!(ls >> tag.pair_id)) {
                throw FormatError("pair tag without id in truth sidecar");
            }
        } else if (kind == "sprs") {
            tag.origin = Origin::SpRS;
        } else if (kind == "dark") {
            tag.origin = Origin::Dark;
        } else if (kind == "unknown") {
            tag.origin = Origin::Unknown;
        } else {
            throw FormatError("unknown truth tag '" + kind + "'");
        }
        tags.push_back(tag);
    }
    return tags;
}

TimestampStream load_stream(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open stream file " + path.string());
    }
    std::array<char, 4> head{};
    in.read(head.data(), head.size());
    const auto head_len = in.gcount();
    const bool looks_binary = head_len == 4 && std::memcmp(head.data(), kStreamMagic, 4) == 0;
    in.clear();
    in.seekg(0);
    TimestampStream stream;
    if (looks_binary) {
        stream = read_stream_binary(in);
    } else {
        // A text stream starts with a digit; anything else is a bad binary file.
        if (head_len > 0 && !(head[0] >= '0' && head[0] <= '9') && head[0] != '#') {
            throw FormatError("bad stream magic in " + path.string());
        }
        stream = read_stream_text(in);
    }
    auto tags_path = path;
    tags_path += ".tags";
    if (std::filesystem::exists(tags_path)) {
        std::ifstream tin(tags_path);
        stream.truth = read_truth_sidecar(tin);
        stream.validate();
    }
    return stream;
}

void save_stream(const std::filesystem::path& path, const TimestampStream& stream) {
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw FormatError("cannot write stream file " + path.string());
        }
        write_stream_binary(out, stream);
    }
    if (stream.has_truth()) {
        auto tags_path = path;
        tags_path += ".tags";
        std::ofstream out(tags_path, std::ios::trunc);
        if (!out) {
            throw FormatError("cannot write truth sidecar " + tags_path.string());
        }
        write_truth_sidecar(out, stream.truth);
    }
}

}  // namespace franson

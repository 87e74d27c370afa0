#include "franson/csv.hpp"

#include <array>
#include <charconv>

namespace franson::csv {

std::string format(double value) {
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        return "nan";
    }
    return std::string(buf.data(), end);
}

void Writer::header(std::initializer_list<std::string_view> columns) {
    bool first = true;
    for (auto c : columns) {
        write_cell(c, first);
    }
    out_ << '\n';
}

}  // namespace franson::csv

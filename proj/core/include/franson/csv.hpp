#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace franson::csv {

/// Shortest round-trip decimal representation, independent of the C++ locale.
std::string format(double value);

/// Writes comma-separated rows; numbers go through `format`.
class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void header(std::initializer_list<std::string_view> columns);

    template <typename... Ts>
    void row(const Ts&... values) {
        bool first = true;
        ((write_cell(values, first)), ...);
        out_ << '\n';
    }

private:
    void write_cell(double v, bool& first) { separator(first); out_ << format(v); }
    void write_cell(float v, bool& first) { write_cell(static_cast<double>(v), first); }
    void write_cell(long long v, bool& first) { separator(first); out_ << v; }
    void write_cell(unsigned long long v, bool& first) { separator(first); out_ << v; }
    void write_cell(long v, bool& first) { separator(first); out_ << v; }
    void write_cell(unsigned long v, bool& first) { separator(first); out_ << v; }
    void write_cell(int v, bool& first) { separator(first); out_ << v; }
    void write_cell(unsigned v, bool& first) { separator(first); out_ << v; }
    void write_cell(std::string_view v, bool& first) { separator(first); out_ << v; }
    void write_cell(const std::string& v, bool& first) { separator(first); out_ << v; }
    void write_cell(const char* v, bool& first) { separator(first); out_ << v; }

    void separator(bool& first) {
        if (!first) {
            out_ << ',';
        }
        first = false;
    }

    std::ostream& out_;
};

}  // namespace franson::csv

#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace curator {

// Shortest round-trip decimal representation of a double. Used for every
// float we persist so that reruns are byte-identical and reloads are exact.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s);
long long parse_int(std::string_view s);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

// Minimal CSV: comma separator, no quoting (our fields never contain commas).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

// Scenario files of a corpus directory, sorted by filename.
std::vector<std::filesystem::path> list_scenario_files(const std::filesystem::path& dir);

}  // namespace curator

#pragma once

#include <string>
#include <vector>

namespace tscal::cli {

/// %.17g — enough digits to round-trip a double exactly.
std::string g17(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_string() const; // UTF-8, LF line endings
    static CsvTable parse(const std::string& text);

    std::size_t column(const std::string& name) const; // throws if absent
};

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

} // namespace tscal::cli

#pragma once

#include <string>
#include <vector>

namespace rydgate {

// Rectangular numeric table with provenance comments. Written
// deterministically: '#'-prefixed comments, one header line, rows at 12
// significant digits — identical configs always produce identical bytes.
struct CsvTable {
    std::vector<std::string> comments;  // without the leading "# "
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

std::string format_number(double x);  // %.12g
std::string to_csv_string(const CsvTable& table);
void write_csv(const std::string& path, const CsvTable& table);

// Minimal reader for the files this project writes (used by tests and the
// plot scripts' sanity checks): skips comments, parses the header and rows.
CsvTable read_csv(const std::string& path);

}  // namespace rydgate

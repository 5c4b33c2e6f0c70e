#include "rydgate/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rydgate/errors.hpp"

namespace rydgate {

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::string to_csv_string(const CsvTable& table) {
    std::ostringstream out;
    for (const std::string& c : table.comments) out << "# " << c << "\n";
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out << ",";
        out << table.header[i];
    }
    out << "\n";
    for (const auto& row : table.rows) {
        if (!table.header.empty() && row.size() != table.header.size())
            throw ConfigError("CSV row width does not match header");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            out << format_number(row[i]);
        }
        out << "\n";
    }
    return out.str();
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open " + path + " for writing");
    f << to_csv_string(table);
    if (!f) throw ConfigError("write failed for " + path);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open " + path);
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string c = line.substr(1);
            if (!c.empty() && c[0] == ' ') c = c.substr(1);
            table.comments.push_back(c);
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        if (!have_header) {
            while (std::getline(ss, cell, ',')) table.header.push_back(cell);
            have_header = true;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace rydgate

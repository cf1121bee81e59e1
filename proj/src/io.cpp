#include "csb/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "csb/errors.hpp"

namespace csb {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(trim(cur));
    return fields;
}

bool parse_double(const std::string& s, double& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    const char* begin = t.data();
    const char* end = begin + t.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

} // namespace

GroupedData ingest_grouped_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open '" + path + "'");
    std::string line;
    long lineno = 0;
    if (!std::getline(in, line)) throw data_error("'" + path + "': empty file");
    ++lineno;
    {
        const auto header = split_csv_line(line);
        if (header.size() != 2 || header[0] != "group" || header[1] != "value")
            throw data_error("'" + path + "' line 1: expected header 'group,value'");
    }
    GroupedData data;
    std::map<std::string, std::size_t> index;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 2)
            throw data_error("'" + path + "' line " + std::to_string(lineno) +
                             ": expected 2 fields, got " + std::to_string(fields.size()));
        double value;
        if (!parse_double(fields[1], value))
            throw data_error("'" + path + "' line " + std::to_string(lineno) +
                             ": non-numeric value '" + fields[1] + "'");
        auto [it, inserted] = index.try_emplace(fields[0], data.groups.size());
        if (inserted) data.groups.emplace_back();
        data.groups[it->second].push_back(value);
    }
    if (data.group_count() < 2)
        throw data_error("'" + path + "': fewer than 2 groups");
    return data;
}

Matrix ingest_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open '" + path + "'");
    Matrix m;
    std::string line;
    long lineno = 0;
    bool first_content_line = true;
    std::size_t header_cols = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        std::vector<double> row(fields.size());
        bool numeric = true;
        for (std::size_t i = 0; i < fields.size(); ++i)
            if (!parse_double(fields[i], row[i])) {
                numeric = false;
                break;
            }
        if (!numeric) {
            if (first_content_line) { // header row
                first_content_line = false;
                header_cols = fields.size();
                continue;
            }
            throw data_error("'" + path + "' line " + std::to_string(lineno) +
                             ": non-numeric field");
        }
        first_content_line = false;
        if (m.cols == 0) m.cols = row.size();
        if (row.size() != m.cols)
            throw data_error("'" + path + "' line " + std::to_string(lineno) +
                             ": ragged row (expected " + std::to_string(m.cols) +
                             " fields, got " + std::to_string(row.size()) + ")");
        m.data.insert(m.data.end(), row.begin(), row.end());
        ++m.rows;
    }
    if (m.cols == 0) {
        // a lone header line yields an empty matrix with its column count
        if (header_cols == 0) throw data_error("'" + path + "': no numeric rows");
        m.cols = header_cols;
    }
    return m;
}

GroupedData remove_entries(const GroupedData& data,
                           std::span<const std::pair<int, int>> drops) {
    std::set<std::pair<int, int>> to_drop(drops.begin(), drops.end());
    for (const auto& [g, i] : to_drop) {
        if (g < 1 || g > data.group_count())
            throw data_error("remove_entries: group index " + std::to_string(g) +
                             " out of range");
        if (i < 1 || i > static_cast<int>(data.groups[g - 1].size()))
            throw data_error("remove_entries: position " + std::to_string(i) +
                             " out of range in group " + std::to_string(g));
    }
    GroupedData out;
    out.groups.resize(data.groups.size());
    for (int g = 1; g <= data.group_count(); ++g)
        for (int i = 1; i <= static_cast<int>(data.groups[g - 1].size()); ++i)
            if (!to_drop.count({g, i})) out.groups[g - 1].push_back(data.groups[g - 1][i - 1]);
    for (const auto& g : out.groups)
        if (g.empty()) throw data_error("remove_entries: a group lost all observations");
    return out;
}

} // namespace csb

#include "tsagent/csv.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tsagent/errors.hpp"

namespace tsagent {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string strip(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
    return s.substr(a, b - a);
}

bool parse_number(const std::string& text, double& out) {
    const std::string t = strip(text);
    if (t.empty()) return false;
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE) return false;
    out = v;
    return true;
}

}  // namespace

MultivariateSeries load_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw DataError("csv: cannot open '" + path + "'");

    std::string header;
    if (!std::getline(in, header)) throw DataError("csv: zero value columns/rows in '" + path + "'");
    std::vector<std::string> columns = split_line(header);
    for (auto& c : columns) c = strip(c);

    std::size_t ts_col = columns.size();
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == schema.timestamp_column) ts_col = i;
    if (ts_col == columns.size())
        throw DataError("csv: timestamp column '" + schema.timestamp_column + "' not found");

    std::vector<std::size_t> value_cols;
    std::vector<std::string> names;
    if (schema.value_columns.empty()) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i == ts_col) continue;
            value_cols.push_back(i);
            names.push_back(columns[i]);
        }
    } else {
        for (const auto& want : schema.value_columns) {
            std::size_t found = columns.size();
            for (std::size_t i = 0; i < columns.size(); ++i)
                if (columns[i] == want) found = i;
            if (found == columns.size())
                throw DataError("csv: value column '" + want + "' not found");
            value_cols.push_back(found);
            names.push_back(want);
        }
    }
    if (value_cols.empty()) throw DataError("csv: zero value columns/rows in '" + path + "'");

    std::vector<std::int64_t> timestamps;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (strip(line).empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != columns.size())
            throw DataError("csv: row " + std::to_string(line_no) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(columns.size()));
        timestamps.push_back(parse_timestamp(strip(fields[ts_col])));
        std::vector<double> row(value_cols.size());
        for (std::size_t j = 0; j < value_cols.size(); ++j) {
            double v;
            row[j] = parse_number(fields[value_cols[j]], v) ? v : missing_value();
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError("csv: zero value columns/rows in '" + path + "'");

    for (std::size_t i = 1; i < timestamps.size(); ++i) {
        if (timestamps[i] == timestamps[i - 1])
            throw DataError("csv: duplicated timestamp at row " + std::to_string(i + 1));
        if (timestamps[i] < timestamps[i - 1])
            throw DataError("csv: non-monotone timestamp at row " + std::to_string(i + 1));
    }
    const std::int64_t freq = timestamps.size() > 1 ? timestamps[1] - timestamps[0] : 1;

    return MultivariateSeries(std::move(timestamps), std::move(names), Matrix::from_rows(rows),
                              freq);
}

}  // namespace tsagent

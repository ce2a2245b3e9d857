#include "tsagent/series.hpp"

#include <cstdio>
#include <json.hpp>

#include "tsagent/errors.hpp"

namespace tsagent {

namespace {

// Days since 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
    y = static_cast<int>(yy + (m <= 2));
}

}  // namespace

MultivariateSeries::MultivariateSeries(std::vector<std::int64_t> timestamps,
                                       std::vector<std::string> channel_names, Matrix values,
                                       std::int64_t frequency_seconds)
    : timestamps_(std::move(timestamps)),
      channel_names_(std::move(channel_names)),
      values_(std::move(values)),
      frequency_seconds_(frequency_seconds) {
    if (timestamps_.empty() || channel_names_.empty())
        throw DataError("series: zero value columns/rows");
    if (values_.rows() != timestamps_.size())
        throw DataError("series: value row count != timestamp count");
    if (values_.cols() != channel_names_.size())
        throw DataError("series: value column count != channel count");
    if (frequency_seconds_ <= 0) throw DataError("series: frequency must be positive");
    for (std::size_t i = 1; i < timestamps_.size(); ++i) {
        const std::int64_t gap = timestamps_[i] - timestamps_[i - 1];
        if (gap <= 0) throw DataError("series: timestamps not strictly increasing");
        if (gap != frequency_seconds_)
            throw DataError("series: irregular spacing at row " + std::to_string(i) +
                            " (expected " + std::to_string(frequency_seconds_) + "s, got " +
                            std::to_string(gap) + "s)");
    }
}

std::size_t MultivariateSeries::channel_index(const std::string& name) const {
    for (std::size_t i = 0; i < channel_names_.size(); ++i)
        if (channel_names_[i] == name) return i;
    throw DataError("series: unknown channel '" + name + "'");
}

std::string MultivariateSeries::to_json_string() const {
    nlohmann::ordered_json j;
    j["timestamps"] = timestamps_;
    j["channels"] = channel_names_;
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < values_.rows(); ++r) {
        auto row = nlohmann::ordered_json::array();
        for (std::size_t c = 0; c < values_.cols(); ++c) {
            const double v = values_(r, c);
            if (is_missing(v))
                row.push_back(nullptr);
            else
                row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    j["values"] = std::move(rows);
    j["frequency"] = frequency_seconds_;
    return j.dump();
}

MultivariateSeries MultivariateSeries::from_json_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("series json: ") + e.what());
    }
    if (!j.contains("timestamps") || !j.contains("channels") || !j.contains("values") ||
        !j.contains("frequency"))
        throw DataError("series json: missing one of timestamps/channels/values/frequency");
    std::vector<std::int64_t> ts = j["timestamps"].get<std::vector<std::int64_t>>();
    std::vector<std::string> names = j["channels"].get<std::vector<std::string>>();
    const auto& rows = j["values"];
    Matrix m(rows.size(), names.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != names.size()) throw DataError("series json: ragged value row");
        for (std::size_t c = 0; c < names.size(); ++c)
            m(r, c) = rows[r][c].is_null() ? missing_value() : rows[r][c].get<double>();
    }
    return MultivariateSeries(std::move(ts), std::move(names), std::move(m),
                              j["frequency"].get<std::int64_t>());
}

std::vector<CellRef> missing_positions(const MultivariateSeries& series) {
    std::vector<CellRef> out;
    for (std::size_t r = 0; r < series.values().rows(); ++r)
        for (std::size_t c = 0; c < series.values().cols(); ++c)
            if (is_missing(series.values()(r, c))) out.push_back({r, c});
    return out;
}

std::int64_t parse_timestamp(const std::string& text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char sep = 0;
    int n = std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &h, &mi, &s);
    if (n >= 6 && (sep == ' ' || sep == 'T')) {
        if (n == 6) s = 0;
    } else if (std::sscanf(text.c_str(), "%d-%d-%d", &y, &mo, &d) == 3) {
        h = mi = s = 0;
    } else {
        throw DataError("timestamp: cannot parse '" + text + "'");
    }
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 ||
        s > 60)
        throw DataError("timestamp: out-of-range field in '" + text + "'");
    return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
}

std::string format_timestamp(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    std::int64_t rem = epoch_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    int y, m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d", y, m, d,
                  static_cast<int>(rem / 3600), static_cast<int>((rem % 3600) / 60),
                  static_cast<int>(rem % 60));
    return std::string(buf);
}

}  // namespace tsagent

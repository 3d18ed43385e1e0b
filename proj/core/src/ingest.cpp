#include "enerbase/ingest.hpp"

#include "enerbase/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

namespace enerbase {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("failed to read file " + path.string());
    return std::move(buf).str();
}

std::string_view next_line(std::string_view& rest) {
    const std::size_t nl = rest.find('\n');
    std::string_view line;
    if (nl == std::string_view::npos) {
        line = rest;
        rest = {};
    } else {
        line = rest.substr(0, nl);
        rest.remove_prefix(nl + 1);
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

Timestamp parse_timestamp_field(std::string_view field, std::size_t line_no) {
    Timestamp t = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), t);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError("invalid timestamp \"" + std::string(field) + "\"", line_no, "timestamp");
    if (t < 0) throw ParseError("negative timestamp", line_no, "timestamp");
    return t;
}

double parse_value_field(std::string_view field, std::size_t line_no, const char* field_name) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v))
        throw ParseError("invalid value \"" + std::string(field) + "\"", line_no, field_name);
    return v;
}

std::vector<RawReading> parse_csv(const std::string& text, const char* expected_header,
                                  const char* value_field) {
    std::string_view rest(text);
    std::size_t line_no = 1;
    const std::string_view header = next_line(rest);
    if (header != expected_header)
        throw ParseError("expected header \"" + std::string(expected_header) + "\", found \"" +
                             std::string(header) + "\"",
                         1, "header");
    std::vector<RawReading> out;
    out.reserve(text.size() / 14 + 1);
    while (!rest.empty()) {
        ++line_no;
        const std::string_view line = next_line(rest);
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string_view::npos)
            throw ParseError("expected two comma-separated fields", line_no, value_field);
        const Timestamp t = parse_timestamp_field(line.substr(0, comma), line_no);
        const double v = parse_value_field(line.substr(comma + 1), line_no, value_field);
        out.push_back({t, v});
    }
    return out;
}

std::vector<RawReading> parse_json_lines(const std::string& text) {
    std::string_view rest(text);
    std::size_t line_no = 0;
    std::vector<RawReading> out;
    while (!rest.empty()) {
        ++line_no;
        const std::string_view line = next_line(rest);
        if (line.empty()) continue;
        nlohmann::json row = nlohmann::json::parse(line, nullptr, false);
        if (row.is_discarded() || !row.is_object())
            throw ParseError("invalid JSON object", line_no, "row");
        if (!row.contains("t") || !row["t"].is_number_integer())
            throw ParseError("missing or non-integer \"t\"", line_no, "t");
        if (!row.contains("v") || !row["v"].is_number())
            throw ParseError("missing or non-numeric \"v\"", line_no, "v");
        const Timestamp t = row["t"].get<Timestamp>();
        if (t < 0) throw ParseError("negative timestamp", line_no, "t");
        const double v = row["v"].get<double>();
        if (!std::isfinite(v)) throw ParseError("non-finite value", line_no, "v");
        out.push_back({t, v});
    }
    return out;
}

} // namespace

std::vector<RawReading> parse_readings_file(const std::filesystem::path& path,
                                            ReadingsFormat format) {
    const std::string text = read_file(path);
    if (format == ReadingsFormat::Csv) return parse_csv(text, "timestamp,energy_kwh", "energy_kwh");
    return parse_json_lines(text);
}

CleanResult clean_readings(std::vector<RawReading> readings, MeterKind kind,
                           double spike_threshold) {
    if (spike_threshold <= 0.0) throw ValidationError("spike threshold must be positive");

    CleanResult res;
    std::stable_sort(readings.begin(), readings.end(),
                     [](const RawReading& a, const RawReading& b) { return a.t < b.t; });

    // Duplicate timestamps: the last reading in file order wins.
    std::vector<RawReading> dedup;
    dedup.reserve(readings.size());
    for (std::size_t i = 0; i < readings.size(); ++i) {
        if (i + 1 < readings.size() && readings[i + 1].t == readings[i].t) {
            ++res.report.duplicates;
            continue;
        }
        dedup.push_back(readings[i]);
    }

    res.readings.reserve(dedup.size());
    if (kind == MeterKind::IntervalKwh) {
        for (const RawReading& r : dedup) {
            if (r.value < 0.0) {
                ++res.report.dropped_negative;
            } else if (r.value > spike_threshold) {
                ++res.report.dropped_spike;
            } else {
                res.readings.push_back(r);
            }
        }
    } else {
        double offset = 0.0;
        bool have_prev = false;
        double prev_out = 0.0;
        for (const RawReading& r : dedup) {
            if (r.value < 0.0) {
                ++res.report.dropped_negative;
                continue;
            }
            double rebased = r.value + offset;
            if (have_prev && rebased < prev_out) {
                // Counter reset: continue from the new base without a jump.
                ++res.report.counter_resets;
                offset = prev_out - r.value;
                rebased = prev_out;
            }
            res.readings.push_back({r.t, rebased});
            prev_out = rebased;
            have_prev = true;
        }
    }
    res.report.kept = res.readings.size();
    return res;
}

WeatherReadings parse_weather_file(const std::filesystem::path& path, ReadingsFormat format) {
    const std::string text = read_file(path);
    std::vector<RawReading> rows = format == ReadingsFormat::Csv
                                       ? parse_csv(text, "timestamp,temp_c", "temp_c")
                                       : parse_json_lines(text);
    WeatherReadings out;
    out.readings.reserve(rows.size());
    for (const RawReading& r : rows) {
        if (r.value < -60.0 || r.value > 60.0) {
            ++out.rejected_out_of_range;
            continue;
        }
        out.readings.push_back(r);
    }
    return out;
}

void write_readings_csv(const std::vector<RawReading>& readings,
                        const std::filesystem::path& path, const char* value_header) {
    std::ofstream outf(path, std::ios::binary);
    if (!outf) throw IoError("cannot open file for writing: " + path.string());
    outf << "timestamp," << value_header << "\n";
    char buf[64];
    for (const RawReading& r : readings) {
        outf << r.t << ',';
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), r.value);
        outf.write(buf, ptr - buf);
        outf << '\n';
    }
    if (!outf) throw IoError("failed while writing " + path.string());
}

} // namespace enerbase

#include "enerbase/artifacts.hpp"

#include "enerbase/errors.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

namespace enerbase {

namespace {

using nlohmann::json;

json parse_json_file(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw IoError(std::string("cannot open ") + what + ": " + path.string());
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded())
        throw ParseError(std::string("malformed JSON in ") + what + ": " + path.string());
    return doc;
}

void write_json_file(const json& doc, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path.string());
    out << doc.dump(2) << "\n";
    if (!out) throw IoError("failed while writing " + path.string());
}

void append_double(std::string& buf, double v) {
    char tmp[64];
    const auto [ptr, ec] = std::to_chars(tmp, tmp + sizeof(tmp), v);
    buf.append(tmp, static_cast<std::size_t>(ptr - tmp));
}

double json_double_or_missing(const json& v) {
    if (v.is_null()) return kMissing;
    return v.get<double>();
}

json missing_to_null(double v) {
    if (is_missing(v)) return nullptr;
    return v;
}

} // namespace

void write_series_csv(const HourlySeries& s, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path.string());
    std::string buf = "timestamp,energy_kwh\n";
    buf.reserve(s.values.size() * 16 + buf.size());
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        if (!s.present(i)) continue;
        buf += std::to_string(s.time_at(i));
        buf += ',';
        append_double(buf, s.values[i]);
        buf += '\n';
    }
    out << buf;
    if (!out) throw IoError("failed while writing " + path.string());
}

HourlySeries read_series_csv(const std::filesystem::path& path, const TimeZone& zone) {
    const std::vector<RawReading> rows = parse_readings_file(path, ReadingsFormat::Csv);
    return aggregate_to_hourly(rows, MeterKind::IntervalKwh, zone);
}

void write_gap_map_json(const GapMap& gaps, const std::filesystem::path& path) {
    json arr = json::array();
    for (const GapMap::Gap& g : gaps.gaps)
        arr.push_back({{"start_index", g.start_index}, {"length_hours", g.length_hours}});
    write_json_file(json{{"gaps", arr}}, path);
}

GapMap read_gap_map_json(const std::filesystem::path& path) {
    const json doc = parse_json_file(path, "gap map");
    GapMap out;
    try {
        for (const json& g : doc.at("gaps")) {
            out.gaps.push_back(
                {g.at("start_index").get<std::size_t>(), g.at("length_hours").get<std::size_t>()});
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed gap map: ") + e.what());
    }
    return out;
}

void write_clean_report_json(const CleanReport& report, const std::filesystem::path& path) {
    write_json_file(json{{"kept", report.kept},
                         {"dropped_negative", report.dropped_negative},
                         {"dropped_spike", report.dropped_spike},
                         {"counter_resets", report.counter_resets},
                         {"duplicates", report.duplicates}},
                    path);
}

CleanReport read_clean_report_json(const std::filesystem::path& path) {
    const json doc = parse_json_file(path, "clean report");
    CleanReport out;
    try {
        out.kept = doc.at("kept").get<std::size_t>();
        out.dropped_negative = doc.at("dropped_negative").get<std::size_t>();
        out.dropped_spike = doc.at("dropped_spike").get<std::size_t>();
        out.counter_resets = doc.at("counter_resets").get<std::size_t>();
        out.duplicates = doc.value("duplicates", std::size_t{0});
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed clean report: ") + e.what());
    }
    return out;
}

void write_monthly_totals_json(const MonthlyTotals& totals, const std::filesystem::path& path) {
    json arr = json::array();
    for (std::size_t i = 0; i < 12; ++i) {
        const MonthlyTotals::Month& m = totals.months[i];
        arr.push_back({{"month", i + 1},
                       {"total_kwh", m.total_kwh},
                       {"coverage", m.coverage},
                       {"provenance", provenance_name(m.provenance)}});
    }
    write_json_file(json{{"months", arr}}, path);
}

MonthlyTotals read_monthly_totals_json(const std::filesystem::path& path) {
    const json doc = parse_json_file(path, "monthly totals");
    MonthlyTotals out;
    try {
        for (const json& m : doc.at("months")) {
            const std::size_t idx = m.at("month").get<std::size_t>();
            if (idx < 1 || idx > 12) throw ParseError("month index out of range");
            MonthlyTotals::Month& slot = out.months[idx - 1];
            slot.total_kwh = m.at("total_kwh").get<double>();
            slot.coverage = m.at("coverage").get<double>();
            slot.provenance = provenance_from_name(m.at("provenance").get<std::string>());
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed monthly totals: ") + e.what());
    }
    return out;
}

void write_weekly_distribution_json(const WeeklyDistribution& dist,
                                    const std::filesystem::path& path) {
    write_json_file(json{{"shares", dist.shares}}, path);
}

WeeklyDistribution read_weekly_distribution_json(const std::filesystem::path& path) {
    const json doc = parse_json_file(path, "weekly distribution");
    WeeklyDistribution out;
    try {
        const json& shares = doc.at("shares");
        if (shares.size() != kSlotsPerWeek)
            throw ParseError("expected 168 shares, found " + std::to_string(shares.size()));
        for (std::size_t i = 0; i < kSlotsPerWeek; ++i) out.shares[i] = shares[i].get<double>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed weekly distribution: ") + e.what());
    }
    return out;
}

namespace {

int weekday_index_from_name(const std::string& name) {
    for (int d = 0; d < 7; ++d)
        if (name == weekday_name(static_cast<Weekday>(d))) return d;
    throw ParseError("unknown day name \"" + name + "\"");
}

void write_baseline_paper_csv(const BaselineYear& baseline, std::ofstream& out) {
    std::string buf = "month,week,day,hour,kwh\n";
    for (std::size_t m = 0; m < 12; ++m) {
        const std::vector<double>& block = baseline.months[m];
        for (int w = 0; w < kWeeksPerMonth; ++w) {
            for (int d = 0; d < 7; ++d) {
                for (int h = 0; h < 24; ++h) {
                    buf += std::to_string(m + 1);
                    buf += ',';
                    buf += std::to_string(w + 1);
                    buf += ',';
                    buf += weekday_name(static_cast<Weekday>(d));
                    buf += ',';
                    buf += std::to_string(h);
                    buf += ',';
                    append_double(buf,
                                  block[static_cast<std::size_t>(w * kSlotsPerWeek + d * 24 + h)]);
                    buf += '\n';
                }
            }
        }
    }
    out << buf;
}

void write_baseline_calendar_csv(const BaselineYear& baseline, std::ofstream& out,
                                 const TimeZone& zone) {
    std::string buf = "timestamp,kwh\n";
    for (std::size_t m = 0; m < 12; ++m) {
        const std::vector<double>& block = baseline.months[m];
        const int days = static_cast<int>(block.size() / 24);
        for (int day = 0; day < days; ++day) {
            CivilTime midnight{};
            midnight.year = baseline.calendar_year;
            midnight.month = static_cast<int>(m) + 1;
            midnight.day = day + 1;
            const Timestamp day_start = zone.to_utc(midnight);
            for (int h = 0; h < 24; ++h) {
                buf += std::to_string(day_start + static_cast<Timestamp>(h) * kSecondsPerHour);
                buf += ',';
                append_double(buf, block[static_cast<std::size_t>(day * 24 + h)]);
                buf += '\n';
            }
        }
    }
    out << buf;
}

} // namespace

void write_baseline_csv(const BaselineYear& baseline, const std::filesystem::path& path,
                        const TimeZone& zone) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path.string());
    if (baseline.layout == BaselineLayout::PaperLiteral)
        write_baseline_paper_csv(baseline, out);
    else
        write_baseline_calendar_csv(baseline, out, zone);
    if (!out) throw IoError("failed while writing " + path.string());
}

BaselineYear read_baseline_csv(const std::filesystem::path& path, const TimeZone& zone) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open baseline: " + path.string());
    std::string header;
    if (!std::getline(in, header)) throw ParseError("empty baseline file", 1, "header");
    if (!header.empty() && header.back() == '\r') header.pop_back();

    BaselineYear out;
    std::size_t line_no = 1;
    std::string line;
    if (header == "month,week,day,hour,kwh") {
        out.layout = BaselineLayout::PaperLiteral;
        for (auto& block : out.months) block.assign(kHoursPerPaperMonth, 0.0);
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            std::array<std::string, 5> fields;
            std::size_t start = 0;
            for (int f = 0; f < 5; ++f) {
                const std::size_t comma = line.find(',', start);
                if (f < 4 && comma == std::string::npos)
                    throw ParseError("expected 5 comma-separated fields", line_no, "row");
                fields[static_cast<std::size_t>(f)] =
                    line.substr(start, comma == std::string::npos ? std::string::npos
                                                                  : comma - start);
                start = comma + 1;
            }
            try {
                const int m = std::stoi(fields[0]);
                const int w = std::stoi(fields[1]);
                const int d = weekday_index_from_name(fields[2]);
                const int h = std::stoi(fields[3]);
                const double kwh = std::stod(fields[4]);
                if (m < 1 || m > 12 || w < 1 || w > kWeeksPerMonth || h < 0 || h > 23)
                    throw ParseError("index out of range", line_no, "row");
                out.months[static_cast<std::size_t>(m - 1)]
                          [static_cast<std::size_t>((w - 1) * kSlotsPerWeek + d * 24 + h)] = kwh;
            } catch (const std::invalid_argument&) {
                throw ParseError("malformed baseline row", line_no, "row");
            } catch (const std::out_of_range&) {
                throw ParseError("malformed baseline row", line_no, "row");
            }
        }
        return out;
    }
    if (header == "timestamp,kwh") {
        out.layout = BaselineLayout::Calendar;
        std::map<std::pair<int, int>, std::map<std::pair<int, int>, double>> cells;
        int year = 0;
        bool first = true;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            const std::size_t comma = line.find(',');
            if (comma == std::string::npos)
                throw ParseError("expected 2 comma-separated fields", line_no, "row");
            try {
                const Timestamp t = std::stoll(line.substr(0, comma));
                const double kwh = std::stod(line.substr(comma + 1));
                const CivilTime local = zone.local_time(t);
                if (first) {
                    year = local.year;
                    first = false;
                }
                cells[{local.year, local.month}][{local.day, local.hour}] = kwh;
            } catch (const std::invalid_argument&) {
                throw ParseError("malformed baseline row", line_no, "row");
            } catch (const std::out_of_range&) {
                throw ParseError("malformed baseline row", line_no, "row");
            }
        }
        if (first) throw ParseError("baseline file has no rows", line_no, "row");
        out.calendar_year = year;
        for (int m = 1; m <= 12; ++m) {
            const int days = days_in_month(year, m);
            std::vector<double>& block = out.months[static_cast<std::size_t>(m - 1)];
            block.assign(static_cast<std::size_t>(days) * 24, 0.0);
            const auto it = cells.find({year, m});
            if (it == cells.end()) continue;
            for (const auto& [dh, kwh] : it->second) {
                const auto [day, hour] = dh;
                if (day >= 1 && day <= days && hour >= 0 && hour <= 23)
                    block[static_cast<std::size_t>((day - 1) * 24 + hour)] = kwh;
            }
        }
        return out;
    }
    throw ParseError("unrecognized baseline header \"" + header + "\"", 1, "header");
}

void write_savings_report_json(const SavingsReport& report, const std::filesystem::path& path) {
    write_json_file(json{{"E_b", report.E_b},
                         {"E_pr_raw", report.E_pr_raw},
                         {"E_pr", report.E_pr},
                         {"A", report.A},
                         {"S", report.S},
                         {"temp_ratio", report.temp_ratio},
                         {"T_obs_mean", missing_to_null(report.T_obs_mean)},
                         {"T_base_mean", missing_to_null(report.T_base_mean)},
                         {"window_start", report.window_start},
                         {"window_end", report.window_end},
                         {"paired_hours", report.paired_hours}},
                    path);
}

SavingsReport read_savings_report_json(const std::filesystem::path& path) {
    const json doc = parse_json_file(path, "savings report");
    SavingsReport out;
    try {
        out.E_b = doc.at("E_b").get<double>();
        out.E_pr_raw = doc.at("E_pr_raw").get<double>();
        out.E_pr = doc.at("E_pr").get<double>();
        out.A = doc.at("A").get<double>();
        out.S = doc.at("S").get<double>();
        out.temp_ratio = doc.at("temp_ratio").get<double>();
        out.T_obs_mean = json_double_or_missing(doc.at("T_obs_mean"));
        out.T_base_mean = json_double_or_missing(doc.at("T_base_mean"));
        out.window_start = doc.at("window_start").get<Timestamp>();
        out.window_end = doc.at("window_end").get<Timestamp>();
        out.paired_hours = doc.value("paired_hours", std::size_t{0});
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed savings report: ") + e.what());
    }
    return out;
}

void write_fault_plan_json(const FaultPlan& plan, const std::filesystem::path& path) {
    json windows = json::array();
    for (const UnplugWindow& w : plan.unplug_windows)
        windows.push_back({{"start", w.start}, {"hours", w.hours}});
    write_json_file(json{{"seed", plan.seed},
                         {"dropout_rate", plan.dropout_rate},
                         {"unplug_windows", windows},
                         {"corruption_rate", plan.corruption_rate}},
                    path);
}

FaultPlan read_fault_plan_json(const std::filesystem::path& path) {
    const json doc = parse_json_file(path, "fault plan");
    FaultPlan out;
    try {
        out.seed = doc.value("seed", std::uint64_t{0});
        out.dropout_rate = doc.value("dropout_rate", 0.0);
        out.corruption_rate = doc.value("corruption_rate", 0.0);
        if (doc.contains("unplug_windows")) {
            for (const json& w : doc["unplug_windows"])
                out.unplug_windows.push_back(
                    {w.at("start").get<Timestamp>(), w.at("hours").get<std::int64_t>()});
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed fault plan: ") + e.what());
    }
    if (!(out.dropout_rate >= 0.0 && out.dropout_rate <= 1.0) ||
        !(out.corruption_rate >= 0.0 && out.corruption_rate <= 1.0))
        throw ValidationError("fault plan rates must lie in [0, 1]");
    return out;
}

} // namespace enerbase

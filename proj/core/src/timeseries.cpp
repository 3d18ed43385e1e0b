#include "enerbase/timeseries.hpp"

#include "enerbase/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

namespace enerbase {

const char* weekday_name(Weekday d) {
    static constexpr const char* names[7] = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};
    return names[static_cast<int>(d)];
}

Slot slot_of(Timestamp t, const TimeZone& zone) {
    const CivilTime local = zone.local_time(t);
    return Slot{static_cast<Weekday>(local.weekday), local.hour};
}

Slot slot_of(Timestamp t, const std::string& zone_name) {
    return slot_of(t, TimeZone::load(zone_name));
}

std::size_t HourlySeries::present_count() const {
    std::size_t n = 0;
    for (double v : values)
        if (!is_missing(v)) ++n;
    return n;
}

void validate_series(const HourlySeries& s, const TimeZone& zone) {
    if (!zone.is_hour_aligned(s.start))
        throw ValidationError("series start " + std::to_string(s.start) +
                              " is not hour-aligned in zone " + zone.name());
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        const double v = s.values[i];
        if (is_missing(v)) continue;
        if (!std::isfinite(v) || v < 0.0)
            throw ValidationError("series value at index " + std::to_string(i) +
                                  " is negative or non-finite");
    }
}

GapMap detect_gaps(const HourlySeries& s) {
    GapMap out;
    std::size_t i = 0;
    while (i < s.values.size()) {
        if (is_missing(s.values[i])) {
            std::size_t j = i;
            while (j < s.values.size() && is_missing(s.values[j])) ++j;
            out.gaps.push_back({i, j - i});
            i = j;
        } else {
            ++i;
        }
    }
    return out;
}

const char* provenance_name(Provenance p) {
    switch (p) {
    case Provenance::Observed: return "OBSERVED";
    case Provenance::Filled: return "FILLED";
    case Provenance::Absent: return "ABSENT";
    }
    return "ABSENT";
}

Provenance provenance_from_name(const std::string& name) {
    if (name == "OBSERVED") return Provenance::Observed;
    if (name == "FILLED") return Provenance::Filled;
    if (name == "ABSENT") return Provenance::Absent;
    throw ValidationError("unknown provenance \"" + name + "\"");
}

int MonthlyTotals::observed_count() const {
    int n = 0;
    for (const Month& m : months)
        if (m.provenance == Provenance::Observed) ++n;
    return n;
}

bool MonthlyTotals::all_non_absent() const {
    return std::none_of(months.begin(), months.end(),
                        [](const Month& m) { return m.provenance == Provenance::Absent; });
}

double MonthlyTotals::sum_totals() const {
    double s = 0.0;
    for (const Month& m : months) s += m.total_kwh;
    return s;
}

namespace {

void check_sorted(std::span<const RawReading> readings) {
    for (std::size_t i = 1; i < readings.size(); ++i) {
        if (readings[i].t < readings[i - 1].t)
            throw ValidationError("readings are not sorted by timestamp (index " +
                                  std::to_string(i) + ")");
    }
}

HourlySeries trim_missing_edges(HourlySeries s) {
    std::size_t lo = 0;
    while (lo < s.values.size() && is_missing(s.values[lo])) ++lo;
    std::size_t hi = s.values.size();
    while (hi > lo && is_missing(s.values[hi - 1])) --hi;
    if (lo > 0 || hi < s.values.size()) {
        s.start += static_cast<Timestamp>(lo) * kSecondsPerHour;
        s.values.assign(s.values.begin() + static_cast<std::ptrdiff_t>(lo),
                        s.values.begin() + static_cast<std::ptrdiff_t>(hi));
    }
    return s;
}

HourlySeries aggregate_interval(std::span<const RawReading> readings, const TimeZone& zone) {
    HourlySeries out;
    out.timezone = zone.name();
    out.start = zone.floor_hour(readings.front().t);
    const Timestamp grid_end = zone.floor_hour(readings.back().t) + kSecondsPerHour;
    const std::size_t cells =
        static_cast<std::size_t>((grid_end - out.start) / kSecondsPerHour);
    out.values.assign(cells, kMissing);
    for (const RawReading& r : readings) {
        if (r.value < 0.0)
            throw ValidationError("negative interval energy at timestamp " +
                                  std::to_string(r.t) + "; clean readings first");
        const std::size_t cell = static_cast<std::size_t>((r.t - out.start) / kSecondsPerHour);
        if (is_missing(out.values[cell]))
            out.values[cell] = r.value;
        else
            out.values[cell] += r.value;
    }
    return out;
}

constexpr Timestamp kBoundaryTolerance = 300; // +/-5 minutes

HourlySeries aggregate_cumulative(std::span<const RawReading> readings, const TimeZone& zone) {
    const Timestamp first_boundary = zone.floor_hour(readings.front().t);
    const Timestamp last_boundary =
        zone.floor_hour(readings.back().t + kSecondsPerHour - 1) + kSecondsPerHour;
    const std::size_t boundary_count =
        static_cast<std::size_t>((last_boundary - first_boundary) / kSecondsPerHour) + 1;

    // Boundary value = counter of the nearest reading within tolerance.
    std::vector<double> boundary(boundary_count, kMissing);
    std::size_t lo = 0;
    for (std::size_t b = 0; b < boundary_count; ++b) {
        const Timestamp at = first_boundary + static_cast<Timestamp>(b) * kSecondsPerHour;
        while (lo + 1 < readings.size() && readings[lo + 1].t <= at) ++lo;
        Timestamp best_dist = kBoundaryTolerance + 1;
        double best = kMissing;
        for (std::size_t k = lo; k < readings.size() && readings[k].t <= at + kBoundaryTolerance;
             ++k) {
            const Timestamp dist = std::llabs(readings[k].t - at);
            if (dist < best_dist) {
                best_dist = dist;
                best = readings[k].value;
            }
            if (readings[k].t > at && dist >= best_dist) break;
        }
        boundary[b] = best;
    }

    HourlySeries out;
    out.timezone = zone.name();
    out.start = first_boundary;
    out.values.assign(boundary_count - 1, kMissing);
    for (std::size_t i = 0; i + 1 < boundary_count; ++i) {
        if (is_missing(boundary[i]) || is_missing(boundary[i + 1])) continue;
        const double diff = boundary[i + 1] - boundary[i];
        if (diff < 0.0)
            throw ValidationError("cumulative counter decreases across hour boundary at index " +
                                  std::to_string(i) + "; clean readings first");
        out.values[i] = diff;
    }
    return out;
}

} // namespace

HourlySeries aggregate_to_hourly(std::span<const RawReading> readings, MeterKind kind,
                                 const TimeZone& zone) {
    if (readings.empty()) {
        HourlySeries out;
        out.timezone = zone.name();
        out.start = zone.floor_hour(0);
        return out;
    }
    check_sorted(readings);
    HourlySeries out = kind == MeterKind::IntervalKwh ? aggregate_interval(readings, zone)
                                                      : aggregate_cumulative(readings, zone);
    return trim_missing_edges(std::move(out));
}

namespace {

struct MonthKey {
    int year;
    int month;

    friend auto operator<=>(const MonthKey&, const MonthKey&) = default;
};

struct MonthAccum {
    double present_kwh = 0.0;
    std::size_t present_hours = 0;
};

double month_calendar_hours(int year, int month, const TimeZone& zone) {
    CivilTime first{};
    first.year = year;
    first.month = month;
    first.day = 1;
    first.hour = 0;
    CivilTime next = first;
    if (++next.month > 12) {
        next.month = 1;
        ++next.year;
    }
    const Timestamp a = zone.to_utc(first);
    const Timestamp b = zone.to_utc(next);
    return static_cast<double>(b - a) / static_cast<double>(kSecondsPerHour);
}

} // namespace

MonthlyTotals aggregate_to_monthly(const HourlySeries& s, const TimeZone& zone,
                                   double completeness_threshold) {
    if (completeness_threshold <= 0.0 || completeness_threshold > 1.0)
        throw ValidationError("completeness threshold must be in (0, 1]");

    MonthlyTotals out;
    if (s.empty()) return out;

    std::map<MonthKey, MonthAccum> accum;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        const CivilTime local = zone.local_time(s.time_at(i));
        MonthAccum& a = accum[MonthKey{local.year, local.month}];
        if (s.present(i)) {
            a.present_kwh += s.values[i];
            a.present_hours += 1;
        }
    }
    // Months inside the span with no cells at all still count as Absent.
    const CivilTime first = zone.local_time(s.time_at(0));
    const CivilTime last = zone.local_time(s.time_at(s.values.size() - 1));
    for (MonthKey k{first.year, first.month}; k <= MonthKey{last.year, last.month};) {
        accum.try_emplace(k);
        if (++k.month > 12) {
            k.month = 1;
            ++k.year;
        }
    }

    struct Candidate {
        double total = 0.0;
        double coverage = 0.0;
        Provenance prov = Provenance::Absent;
        int year = 0;
        bool set = false;
    };
    std::array<Candidate, 12> best{};
    for (const auto& [key, a] : accum) {
        const double hours = month_calendar_hours(key.year, key.month, zone);
        const double coverage =
            hours > 0.0 ? static_cast<double>(a.present_hours) / hours : 0.0;
        Candidate c;
        c.coverage = std::min(coverage, 1.0);
        c.year = key.year;
        c.set = true;
        if (c.coverage >= completeness_threshold) {
            c.prov = Provenance::Observed;
            c.total = a.present_kwh / c.coverage;
        } else {
            c.prov = Provenance::Absent;
            c.total = a.present_kwh;
        }
        Candidate& slot = best[static_cast<std::size_t>(key.month - 1)];
        if (!slot.set || c.coverage > slot.coverage ||
            (c.coverage == slot.coverage && c.year > slot.year)) {
            slot = c;
        }
    }
    for (int m = 0; m < 12; ++m) {
        const Candidate& c = best[static_cast<std::size_t>(m)];
        if (!c.set) continue;
        out.months[static_cast<std::size_t>(m)] =
            MonthlyTotals::Month{c.total, c.coverage, c.prov};
    }
    return out;
}

std::vector<SlotObservation> collect_slot_observations(const HourlySeries& s,
                                                       const TimeZone& zone) {
    std::vector<SlotObservation> out;
    out.reserve(s.present_count());
    bool have_prev = false;
    std::int64_t prev_key = 0;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        if (!s.present(i)) continue;
        const CivilTime local = zone.local_time(s.time_at(i));
        const std::int64_t key =
            (days_from_civil(local.year, local.month, local.day) * 24) + local.hour;
        if (have_prev && key == prev_key) {
            // Fall-back: second physical hour with the same local label.
            out.back().kwh += s.values[i];
            continue;
        }
        out.push_back({Slot{static_cast<Weekday>(local.weekday), local.hour}, s.values[i]});
        prev_key = key;
        have_prev = true;
    }
    return out;
}

} // namespace enerbase

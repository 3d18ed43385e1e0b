#pragma once

#include "enerbase/timezone.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace enerbase {

/// Missing-hour marker inside an HourlySeries.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

enum class Weekday : int { Mon = 0, Tue, Wed, Thu, Fri, Sat, Sun };

const char* weekday_name(Weekday d);

/// A (day-of-week, hour) cell of the weekly grid; 168 distinct slots.
struct Slot {
    Weekday day = Weekday::Mon;
    int hour = 0; // 0..23

    /// Flat index 0..167, Monday 00 first.
    int index() const { return static_cast<int>(day) * 24 + hour; }

    friend bool operator==(const Slot&, const Slot&) = default;
};

inline constexpr int kSlotsPerWeek = 168;

/// Local day-of-week and hour of an instant under the given zone.
Slot slot_of(Timestamp t, const TimeZone& zone);
Slot slot_of(Timestamp t, const std::string& zone_name);

/// A timestamped scalar reading straight off a meter or sensor file
/// (kWh for energy, degrees Celsius for weather).
struct RawReading {
    Timestamp t = 0;
    double value = 0.0;

    friend bool operator==(const RawReading&, const RawReading&) = default;
};

enum class MeterKind { IntervalKwh, CumulativeKwh };

/// Hourly kWh values over consecutive physical hours. `start` is aligned to
/// a local hour boundary of `timezone`; values[i] covers
/// [start + 3600*i, start + 3600*(i+1)). Missing hours carry kMissing (NaN).
/// Local labels (slots, months) come from the zone; a repeated fall-back
/// local hour is represented by two physical cells that share a label.
struct HourlySeries {
    Timestamp start = 0;
    std::string timezone = "UTC";
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
    Timestamp end() const { return start + static_cast<Timestamp>(values.size()) * kSecondsPerHour; }
    Timestamp time_at(std::size_t i) const { return start + static_cast<Timestamp>(i) * kSecondsPerHour; }
    bool present(std::size_t i) const { return !is_missing(values[i]); }

    std::size_t present_count() const;
};

/// Throws ValidationError unless the series satisfies its invariants:
/// hour-aligned start and every present value finite and >= 0.
void validate_series(const HourlySeries& s, const TimeZone& zone);

/// Maximal runs of missing hours, disjoint and sorted.
struct GapMap {
    struct Gap {
        std::size_t start_index = 0;
        std::size_t length_hours = 0;

        friend bool operator==(const Gap&, const Gap&) = default;
    };
    std::vector<Gap> gaps;

    friend bool operator==(const GapMap&, const GapMap&) = default;
};

GapMap detect_gaps(const HourlySeries& s);

enum class Provenance { Observed, Filled, Absent };

const char* provenance_name(Provenance p);
Provenance provenance_from_name(const std::string& name);

/// Per-calendar-month totals with coverage bookkeeping; index 0 = January.
struct MonthlyTotals {
    struct Month {
        double total_kwh = 0.0;
        double coverage = 0.0; // fraction of the month's hours with data
        Provenance provenance = Provenance::Absent;
    };
    std::array<Month, 12> months{};

    int observed_count() const;
    bool all_non_absent() const;
    double sum_totals() const;
};

/// Buckets readings into hourly cells under the zone's local calendar.
///
/// IntervalKwh: a cell is the sum of interval energies stamped inside it;
/// cells without readings are missing. CumulativeKwh: a cell is the counter
/// difference between its two boundary readings, where a boundary accepts
/// the nearest reading within +/-5 minutes; a cell lacking either boundary
/// is missing. Leading and trailing missing cells are trimmed.
///
/// Readings must be sorted by timestamp and interval energies must be
/// non-negative (clean first); violations throw ValidationError.
HourlySeries aggregate_to_hourly(std::span<const RawReading> readings, MeterKind kind,
                                 const TimeZone& zone);

inline constexpr double kDefaultCompletenessThreshold = 0.95;

/// Rolls a series up to calendar months in its local zone. A month at or
/// above the completeness threshold is Observed with its total scaled by
/// 1/coverage; below it the month is Absent (raw partial total kept for
/// inspection). When the series spans the same calendar month in more than
/// one year, the best-covered instance wins (latest year on ties).
MonthlyTotals aggregate_to_monthly(const HourlySeries& s, const TimeZone& zone,
                                   double completeness_threshold = kDefaultCompletenessThreshold);

/// One merged local-hour observation: consecutive fall-back duplicate hours
/// summed into a single (slot, value) sample. The building block shared by
/// the weekly distribution and the slot sample pools.
struct SlotObservation {
    Slot slot;
    double kwh = 0.0;
};

/// Walks the present hours of a series and merges physical cells that share
/// a local (date, hour) label. Order follows the series.
std::vector<SlotObservation> collect_slot_observations(const HourlySeries& s,
                                                       const TimeZone& zone);

} // namespace enerbase

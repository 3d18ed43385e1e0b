#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace enerbase {

/// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

inline constexpr std::int64_t kSecondsPerHour = 3600;
inline constexpr std::int64_t kSecondsPerDay = 86400;

// --- proleptic Gregorian calendar helpers (Hinnant's algorithms) ---

/// Days since 1970-01-01 for a civil date. Valid for the full int range.
std::int64_t days_from_civil(int year, int month, int day);

struct CivilDate {
    int year;
    int month; // 1..12
    int day;   // 1..31
};

CivilDate civil_from_days(std::int64_t days_since_epoch);

/// 0 = Monday .. 6 = Sunday.
int weekday_from_days(std::int64_t days_since_epoch);

bool is_leap_year(int year);
int days_in_month(int year, int month);

/// A local civil time broken out of an epoch instant under some zone.
struct CivilTime {
    int year = 1970;
    int month = 1;
    int day = 1;
    int hour = 0;
    int minute = 0;
    int second = 0;
    int weekday = 3; // 0 = Monday .. 6 = Sunday

    /// Seconds since the epoch of this civil time read as if it were UTC.
    std::int64_t local_seconds() const {
        return days_from_civil(year, month, day) * kSecondsPerDay +
               hour * 3600 + minute * 60 + second;
    }
};

CivilTime civil_from_local_seconds(std::int64_t local_seconds);

namespace detail {

/// Rule from a POSIX TZ footer string, used past the end of the TZif
/// transition table.
struct PosixDayRule {
    enum class Kind { MonthWeekDay, JulianNoLeap, JulianZeroBased };
    Kind kind = Kind::MonthWeekDay;
    int month = 0;   // 1..12              (MonthWeekDay)
    int week = 0;    // 1..5, 5 = last     (MonthWeekDay)
    int weekday = 0; // 0 = Sunday         (MonthWeekDay)
    int day = 0;     // Jn: 1..365, n: 0..365
    std::int32_t time_of_day = 7200; // seconds after local midnight

    std::int64_t local_seconds_in_year(int year) const;
};

struct PosixTzRule {
    std::int32_t std_offset = 0; // seconds east of UTC
    bool has_dst = false;
    std::int32_t dst_offset = 0;
    PosixDayRule dst_start;
    PosixDayRule dst_end;

    std::int32_t offset_at(std::int64_t utc) const;
};

std::optional<PosixTzRule> parse_posix_tz(const std::string& spec);

} // namespace detail

/// An IANA time zone backed by the binary TZif data shipped with the OS
/// (RFC 8536), plus the POSIX TZ footer rule for instants past the table.
/// Immutable after load; cheap to copy, safe to share across threads.
class TimeZone {
public:
    /// Loads a zone by IANA name from $TZDIR (default /usr/share/zoneinfo).
    /// Throws ConfigError for unknown or unsafe names.
    static TimeZone load(const std::string& name);

    /// The fixed UTC zone, no file access.
    static const TimeZone& utc();

    const std::string& name() const noexcept { return name_; }

    /// UTC offset in seconds east at the given UTC instant.
    std::int32_t offset_at(Timestamp utc) const;

    /// Civil fields of the given instant in this zone.
    CivilTime local_time(Timestamp utc) const;

    /// Inverse of local_time. Local times skipped by a forward transition
    /// resolve to the transition instant; ambiguous (repeated) local times
    /// resolve to their first occurrence.
    Timestamp to_utc(const CivilTime& local) const;

    /// True when the instant lies on a local hour boundary.
    bool is_hour_aligned(Timestamp utc) const;

    /// Largest hour-aligned instant <= utc (local hour boundary).
    Timestamp floor_hour(Timestamp utc) const;

private:
    TimeZone() = default;

    std::string name_;
    std::vector<std::int64_t> transitions_; // ascending UTC instants
    std::vector<std::int32_t> offsets_;     // offset in force from transitions_[i]
    std::int32_t initial_offset_ = 0;       // before the first transition
    std::optional<detail::PosixTzRule> footer_;
};

} // namespace enerbase

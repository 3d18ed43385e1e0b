#include "enerbase/errors.hpp"
#include "enerbase/timezone.hpp"

#include <doctest.h>

using namespace enerbase;

TEST_CASE("civil date round trip") {
    CHECK(days_from_civil(1970, 1, 1) == 0);
    CHECK(days_from_civil(2020, 6, 10) == 18423);
    const CivilDate d = civil_from_days(18423);
    CHECK(d.year == 2020);
    CHECK(d.month == 6);
    CHECK(d.day == 10);
    // 1970-01-01 was a Thursday, 2020-06-10 a Wednesday.
    CHECK(weekday_from_days(0) == 3);
    CHECK(weekday_from_days(18423) == 2);

    for (int year : {1999, 2000, 2020, 2023, 2100}) {
        for (int month = 1; month <= 12; ++month) {
            const int dim = days_in_month(year, month);
            const std::int64_t z = days_from_civil(year, month, dim);
            const CivilDate back = civil_from_days(z);
            CHECK(back.year == year);
            CHECK(back.month == month);
            CHECK(back.day == dim);
        }
    }
    CHECK(days_in_month(2020, 2) == 29);
    CHECK(days_in_month(2100, 2) == 28);
    CHECK(days_in_month(2000, 2) == 29);
}

TEST_CASE("UTC zone is fixed at zero offset") {
    const TimeZone& utc = TimeZone::utc();
    CHECK(utc.offset_at(0) == 0);
    CHECK(utc.offset_at(1591804800) == 0);
    const CivilTime epoch = utc.local_time(0);
    CHECK(epoch.year == 1970);
    CHECK(epoch.hour == 0);
    CHECK(epoch.weekday == 3);
}

TEST_CASE("Athens offsets across the 2020 DST transitions") {
    const TimeZone athens = TimeZone::load("Europe/Athens");
    // EEST (UTC+3) on 2020-06-10, EET (UTC+2) in winter.
    CHECK(athens.offset_at(1591804800) == 3 * 3600);
    CHECK(athens.offset_at(1577836800) == 2 * 3600); // 2020-01-01
    // Spring forward 2020-03-29 01:00 UTC; fall back 2020-10-25 01:00 UTC.
    CHECK(athens.offset_at(1585443600 - 1) == 2 * 3600);
    CHECK(athens.offset_at(1585443600) == 3 * 3600);
    CHECK(athens.offset_at(1603587600 - 1) == 3 * 3600);
    CHECK(athens.offset_at(1603587600) == 2 * 3600);
}

TEST_CASE("Athens local times match the published examples") {
    const TimeZone athens = TimeZone::load("Europe/Athens");
    const CivilTime a = athens.local_time(1591804800);
    CHECK(a.year == 2020);
    CHECK(a.month == 6);
    CHECK(a.day == 10);
    CHECK(a.hour == 19);
    CHECK(a.weekday == 2); // Wednesday
    const CivilTime b = athens.local_time(1592204400);
    CHECK(b.day == 15);
    CHECK(b.hour == 10);
    CHECK(b.weekday == 0); // Monday
}

TEST_CASE("footer rule governs instants past the transition table") {
    const TimeZone athens = TimeZone::load("Europe/Athens");
    // Mid-July 2045 must be EEST under "EET-2EEST,M3.5.0/3,M10.5.0/4".
    const Timestamp jul2045 = (days_from_civil(2045, 7, 15)) * kSecondsPerDay + 12 * 3600;
    CHECK(athens.offset_at(jul2045) == 3 * 3600);
    const Timestamp jan2045 = (days_from_civil(2045, 1, 15)) * kSecondsPerDay + 12 * 3600;
    CHECK(athens.offset_at(jan2045) == 2 * 3600);
}

TEST_CASE("to_utc inverts local_time away from transitions") {
    const TimeZone athens = TimeZone::load("Europe/Athens");
    for (Timestamp t : {Timestamp{1591804800}, Timestamp{1592204400}, Timestamp{1577836800},
                        Timestamp{1603587600 + 7200}}) {
        const CivilTime local = athens.local_time(t);
        CHECK(athens.to_utc(local) == t);
    }
}

TEST_CASE("to_utc picks the first occurrence of a repeated local hour") {
    const TimeZone athens = TimeZone::load("Europe/Athens");
    // Fall back 2020-10-25: local 03:30 occurs at 00:30 UTC (EEST) and 01:30 UTC (EET).
    CivilTime local{};
    local.year = 2020;
    local.month = 10;
    local.day = 25;
    local.hour = 3;
    local.minute = 30;
    const Timestamp t = athens.to_utc(local);
    CHECK(t == 1603585800); // 00:30 UTC, the earlier instant
    CHECK(athens.local_time(t).hour == 3);
}

TEST_CASE("to_utc resolves a skipped local hour to the transition") {
    const TimeZone athens = TimeZone::load("Europe/Athens");
    // Spring forward 2020-03-29: local 03:30 EET never exists.
    CivilTime local{};
    local.year = 2020;
    local.month = 3;
    local.day = 29;
    local.hour = 3;
    local.minute = 30;
    CHECK(athens.to_utc(local) == 1585443600);
}

TEST_CASE("zones with non-hour offsets and midnight transitions") {
    // Kolkata: fixed UTC+5:30, no DST.
    const TimeZone kolkata = TimeZone::load("Asia/Kolkata");
    CHECK(kolkata.offset_at(1591804800) == 5 * 3600 + 1800);
    CHECK_FALSE(kolkata.is_hour_aligned(1591804800));
    CHECK(kolkata.is_hour_aligned(1591804800 + 1800));

    // Sao Paulo sprang forward at local midnight on 2017-10-15; 00:30 never existed.
    const TimeZone sao = TimeZone::load("America/Sao_Paulo");
    CivilTime gap{};
    gap.year = 2017;
    gap.month = 10;
    gap.day = 15;
    gap.hour = 0;
    gap.minute = 30;
    const Timestamp resolved = sao.to_utc(gap);
    CHECK(sao.local_time(resolved).hour == 1);
    CHECK(sao.local_time(resolved).minute == 0);
}

TEST_CASE("unknown and malicious zone names are rejected") {
    CHECK_THROWS_AS(TimeZone::load("Europe/Nowhere"), ConfigError);
    CHECK_THROWS_AS(TimeZone::load("../etc/passwd"), ConfigError);
    CHECK_THROWS_AS(TimeZone::load(""), ConfigError);
}

TEST_CASE("hour alignment helpers") {
    const TimeZone athens = TimeZone::load("Europe/Athens");
    CHECK(athens.is_hour_aligned(1591804800));
    CHECK_FALSE(athens.is_hour_aligned(1591804800 + 1));
    CHECK(athens.floor_hour(1591804800 + 1799) == 1591804800);
    CHECK(athens.floor_hour(1591804800) == 1591804800);
}

TEST_CASE("posix tz parser handles the common footer shapes") {
    using enerbase::detail::parse_posix_tz;
    auto athens = parse_posix_tz("EET-2EEST,M3.5.0/3,M10.5.0/4");
    REQUIRE(athens.has_value());
    CHECK(athens->std_offset == 7200);
    CHECK(athens->dst_offset == 10800);

    auto fixed = parse_posix_tz("UTC0");
    REQUIRE(fixed.has_value());
    CHECK(fixed->std_offset == 0);
    CHECK_FALSE(fixed->has_dst);

    auto bracketed = parse_posix_tz("<+0330>-3:30");
    REQUIRE(bracketed.has_value());
    CHECK(bracketed->std_offset == 3 * 3600 + 1800);

    CHECK_FALSE(parse_posix_tz("garbage,,").has_value());
}

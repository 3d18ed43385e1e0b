#include "enerbase/errors.hpp"
#include "enerbase/timeseries.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "helpers.hpp"

using namespace enerbase;
using testsupport::ValueGen;

TEST_CASE("slot_of reproduces the published Athens examples") {
    CHECK(slot_of(1591804800, "Europe/Athens") == Slot{Weekday::Wed, 19});
    CHECK(slot_of(1592204400, "Europe/Athens") == Slot{Weekday::Mon, 10});
    CHECK(slot_of(0, "UTC") == Slot{Weekday::Thu, 0});
}

TEST_CASE("slot_of rejects unknown zones") {
    CHECK_THROWS_AS(slot_of(0, "Mars/OlympusMons"), ConfigError);
}

TEST_CASE("slot_of under UTC is stable modulo whole weeks") {
    const TimeZone& utc = TimeZone::utc();
    ValueGen gen(101);
    for (int i = 0; i < 500; ++i) {
        const Timestamp t = static_cast<Timestamp>(gen.index(4'000'000'000ULL));
        const Timestamp weeks = static_cast<Timestamp>(gen.index(50)) * 7 * kSecondsPerDay;
        CHECK(slot_of(t, utc) == slot_of(t + weeks, utc));
    }
}

TEST_CASE("slot index covers all 168 cells exactly once over a week") {
    const TimeZone& utc = TimeZone::utc();
    std::array<int, kSlotsPerWeek> seen{};
    // 2020-06-08 00:00 UTC is a Monday.
    const Timestamp monday = days_from_civil(2020, 6, 8) * kSecondsPerDay;
    for (int h = 0; h < kSlotsPerWeek; ++h)
        seen[static_cast<std::size_t>(slot_of(monday + h * kSecondsPerHour, utc).index())]++;
    CHECK(std::all_of(seen.begin(), seen.end(), [](int n) { return n == 1; }));
    CHECK(slot_of(monday, utc) == Slot{Weekday::Mon, 0});
}

TEST_CASE("interval aggregation sums readings inside each local hour") {
    const TimeZone& utc = TimeZone::utc();
    const Timestamp h0 = 1591804800;
    std::vector<RawReading> readings = {
        {h0, 0.25}, {h0 + 900, 0.25}, {h0 + 1800, 0.25}, {h0 + 2700, 0.25}};
    const HourlySeries s = aggregate_to_hourly(readings, MeterKind::IntervalKwh, utc);
    REQUIRE(s.size() == 1);
    CHECK(s.start == h0);
    CHECK(s.values[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cumulative aggregation differences counters across boundaries") {
    const TimeZone& utc = TimeZone::utc();
    const Timestamp h0 = 1591804800;
    std::vector<RawReading> readings = {{h0, 100.0}, {h0 + 3600, 101.2}};
    const HourlySeries s = aggregate_to_hourly(readings, MeterKind::CumulativeKwh, utc);
    REQUIRE(s.size() == 1);
    CHECK(s.values[0] == doctest::Approx(1.2).epsilon(1e-12));
}

TEST_CASE("cumulative boundaries accept jittered readings within 5 minutes") {
    const TimeZone& utc = TimeZone::utc();
    const Timestamp h0 = 1591804800;
    SUBCASE("within tolerance") {
        std::vector<RawReading> readings = {{h0 - 120, 50.0}, {h0 + 3600 + 180, 51.5}};
        const HourlySeries s = aggregate_to_hourly(readings, MeterKind::CumulativeKwh, utc);
        REQUIRE(s.size() == 1);
        CHECK(s.values[0] == doctest::Approx(1.5));
    }
    SUBCASE("outside tolerance the hour is missing") {
        std::vector<RawReading> readings = {{h0 + 600, 50.0}, {h0 + 3600 + 600, 51.5}};
        const HourlySeries s = aggregate_to_hourly(readings, MeterKind::CumulativeKwh, utc);
        CHECK(s.present_count() == 0);
    }
}

TEST_CASE("hours without readings are missing") {
    const TimeZone& utc = TimeZone::utc();
    const Timestamp h0 = 1591804800;
    std::vector<RawReading> readings = {{h0 + 600, 0.5}, {h0 + 2 * 3600 + 600, 0.7}};
    const HourlySeries s = aggregate_to_hourly(readings, MeterKind::IntervalKwh, utc);
    REQUIRE(s.size() == 3);
    CHECK(s.present(0));
    CHECK_FALSE(s.present(1));
    CHECK(s.present(2));
}

TEST_CASE("aggregation validates its preconditions") {
    const TimeZone& utc = TimeZone::utc();
    std::vector<RawReading> unsorted = {{7200, 0.1}, {3600, 0.1}};
    CHECK_THROWS_AS(aggregate_to_hourly(unsorted, MeterKind::IntervalKwh, utc), ValidationError);
    std::vector<RawReading> negative = {{3600, -0.1}};
    CHECK_THROWS_AS(aggregate_to_hourly(negative, MeterKind::IntervalKwh, utc), ValidationError);
    CHECK(aggregate_to_hourly({}, MeterKind::IntervalKwh, utc).empty());
}

TEST_CASE("interval aggregation is insensitive to intra-hour ordering") {
    const TimeZone& utc = TimeZone::utc();
    ValueGen gen(77);
    const Timestamp h0 = 1591804800;
    std::vector<RawReading> readings;
    for (int i = 0; i < 40; ++i)
        readings.push_back({h0 + static_cast<Timestamp>(i % 4) * 900, gen.uniform(0.0, 0.5)});
    std::sort(readings.begin(), readings.end(),
              [](const RawReading& a, const RawReading& b) { return a.t < b.t; });
    const HourlySeries base = aggregate_to_hourly(readings, MeterKind::IntervalKwh, utc);

    // Any stable-sorted permutation of the same multiset lands identically.
    std::vector<RawReading> shuffled = readings;
    for (std::size_t i = shuffled.size(); i > 1; --i)
        std::swap(shuffled[i - 1], shuffled[gen.index(i)]);
    std::stable_sort(shuffled.begin(), shuffled.end(),
                     [](const RawReading& a, const RawReading& b) { return a.t < b.t; });
    const HourlySeries redone = aggregate_to_hourly(shuffled, MeterKind::IntervalKwh, utc);
    REQUIRE(base.size() == redone.size());
    for (std::size_t i = 0; i < base.size(); ++i)
        CHECK(base.values[i] == doctest::Approx(redone.values[i]).epsilon(1e-12));
}

TEST_CASE("detect_gaps finds maximal missing runs") {
    HourlySeries s = testsupport::make_athens_series(48);
    SUBCASE("single interior gap") {
        for (std::size_t i = 10; i < 14; ++i) s.values[i] = kMissing;
        const GapMap gaps = detect_gaps(s);
        REQUIRE(gaps.gaps.size() == 1);
        CHECK(gaps.gaps[0] == GapMap::Gap{10, 4});
    }
    SUBCASE("fully present") { CHECK(detect_gaps(s).gaps.empty()); }
    SUBCASE("fully missing") {
        std::fill(s.values.begin(), s.values.end(), kMissing);
        const GapMap gaps = detect_gaps(s);
        REQUIRE(gaps.gaps.size() == 1);
        CHECK(gaps.gaps[0] == GapMap::Gap{0, 48});
    }
}

TEST_CASE("gap runs reproduce the missing mask exactly") {
    ValueGen gen(2024);
    for (int trial = 0; trial < 50; ++trial) {
        HourlySeries s = testsupport::make_athens_series(200);
        for (std::size_t i = 0; i < s.size(); ++i)
            if (gen.uniform(0, 1) < 0.3) s.values[i] = kMissing;
        const GapMap gaps = detect_gaps(s);
        std::vector<bool> mask(s.size(), false);
        for (const GapMap::Gap& g : gaps.gaps) {
            for (std::size_t i = 0; i < g.length_hours; ++i) mask[g.start_index + i] = true;
        }
        for (std::size_t i = 0; i < s.size(); ++i) CHECK(mask[i] == !s.present(i));
        // Gaps are sorted, disjoint, and maximal.
        for (std::size_t g = 1; g < gaps.gaps.size(); ++g)
            CHECK(gaps.gaps[g].start_index >
                  gaps.gaps[g - 1].start_index + gaps.gaps[g - 1].length_hours);
    }
}

TEST_CASE("monthly aggregation with full coverage matches the plain sum") {
    const TimeZone utc = TimeZone::load("UTC");
    // April 2020: 720 hours of exactly 1 kWh.
    HourlySeries s;
    s.start = days_from_civil(2020, 4, 1) * kSecondsPerDay;
    s.timezone = "UTC";
    s.values.assign(720, 1.0);
    const MonthlyTotals totals = aggregate_to_monthly(s, utc);
    const MonthlyTotals::Month& april = totals.months[3];
    CHECK(april.provenance == Provenance::Observed);
    CHECK(april.coverage == doctest::Approx(1.0));
    CHECK(april.total_kwh == doctest::Approx(720.0).epsilon(1e-9));
    for (std::size_t m = 0; m < 12; ++m) {
        if (m == 3) continue;
        CHECK(totals.months[m].provenance == Provenance::Absent);
    }
}

TEST_CASE("months below the completeness threshold are absent") {
    const TimeZone utc = TimeZone::load("UTC");
    HourlySeries s;
    s.start = days_from_civil(2020, 4, 1) * kSecondsPerDay;
    s.timezone = "UTC";
    s.values.assign(720, 1.0);
    for (std::size_t i = 0; i < 720; i += 2) s.values[i] = kMissing; // 50% coverage
    const MonthlyTotals totals = aggregate_to_monthly(s, utc);
    CHECK(totals.months[3].provenance == Provenance::Absent);
    CHECK(totals.months[3].coverage == doctest::Approx(0.5));
}

TEST_CASE("observed months at partial coverage are scaled by 1/coverage") {
    const TimeZone utc = TimeZone::load("UTC");
    HourlySeries s;
    s.start = days_from_civil(2020, 4, 1) * kSecondsPerDay;
    s.timezone = "UTC";
    s.values.assign(720, 1.0);
    // 36 missing hours -> coverage 0.95, exactly at the default threshold.
    for (std::size_t i = 0; i < 36; ++i) s.values[i * 20] = kMissing;
    const MonthlyTotals totals = aggregate_to_monthly(s, utc);
    CHECK(totals.months[3].provenance == Provenance::Observed);
    CHECK(totals.months[3].coverage == doctest::Approx(0.95));
    CHECK(totals.months[3].total_kwh == doctest::Approx(684.0 / 0.95).epsilon(1e-9));
}

TEST_CASE("monthly totals match a naive full scan over a gappy fixture") {
    const TimeZone athens = TimeZone::load("Europe/Athens");
    HourlySeries s = testsupport::make_athens_series(1464); // May + June 2020
    ValueGen gen(5);
    for (std::size_t i = 0; i < s.size(); ++i)
        if (gen.uniform(0, 1) < 0.02) s.values[i] = kMissing;

    // Oracle: naive per-month accumulation over every row of the fixture.
    double may_sum = 0.0, june_sum = 0.0;
    std::size_t may_hours = 0, june_hours = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!s.present(i)) continue;
        const CivilTime local = athens.local_time(s.time_at(i));
        if (local.month == 5) {
            may_sum += s.values[i];
            ++may_hours;
        } else {
            june_sum += s.values[i];
            ++june_hours;
        }
    }
    const double may_cov = static_cast<double>(may_hours) / 744.0;
    const double june_cov = static_cast<double>(june_hours) / 720.0;

    const MonthlyTotals totals = aggregate_to_monthly(s, athens);
    CHECK(totals.months[4].coverage == doctest::Approx(may_cov).epsilon(1e-12));
    CHECK(totals.months[5].coverage == doctest::Approx(june_cov).epsilon(1e-12));
    CHECK(totals.months[4].total_kwh == doctest::Approx(may_sum / may_cov).epsilon(1e-12));
    CHECK(totals.months[5].total_kwh == doctest::Approx(june_sum / june_cov).epsilon(1e-12));
}

TEST_CASE("DST fall-back hours merge into one slot observation") {
    const TimeZone athens = TimeZone::load("Europe/Athens");
    // 2020-10-25 (fall back at 04:00 EEST -> 03:00 EET): the local day has
    // 25 physical hours but must yield 24 slot observations.
    const Timestamp midnight = athens.to_utc(CivilTime{2020, 10, 25, 0, 0, 0, 0});
    HourlySeries s;
    s.start = midnight;
    s.timezone = "Europe/Athens";
    s.values.assign(25, 1.0);
    const std::vector<SlotObservation> obs = collect_slot_observations(s, athens);
    REQUIRE(obs.size() == 24);
    double total = 0.0;
    int doubled_hours = 0;
    for (const SlotObservation& o : obs) {
        CHECK(o.slot.day == Weekday::Sun);
        total += o.kwh;
        if (o.kwh == doctest::Approx(2.0)) ++doubled_hours;
    }
    CHECK(total == doctest::Approx(25.0));
    CHECK(doubled_hours == 1);
}

TEST_CASE("DST spring-forward day yields 23 slot observations") {
    const TimeZone athens = TimeZone::load("Europe/Athens");
    const Timestamp midnight = athens.to_utc(CivilTime{2020, 3, 29, 0, 0, 0, 0});
    HourlySeries s;
    s.start = midnight;
    s.timezone = "Europe/Athens";
    s.values.assign(23, 1.0); // physical hours of that local day
    const std::vector<SlotObservation> obs = collect_slot_observations(s, athens);
    CHECK(obs.size() == 23);
    // Local hour 03 never exists that day.
    for (const SlotObservation& o : obs) CHECK(o.slot.hour != 3);
}

TEST_CASE("series validation enforces alignment and non-negative values") {
    const TimeZone athens = TimeZone::load("Europe/Athens");
    HourlySeries good = testsupport::make_athens_series(24);
    CHECK_NOTHROW(validate_series(good, athens));

    HourlySeries misaligned = good;
    misaligned.start += 1;
    CHECK_THROWS_AS(validate_series(misaligned, athens), ValidationError);

    HourlySeries negative = good;
    negative.values[3] = -0.5;
    CHECK_THROWS_AS(validate_series(negative, athens), ValidationError);
}

#include "enerbase/errors.hpp"
#include "enerbase/ingest.hpp"

#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"

using namespace enerbase;
using testsupport::TempDir;
using testsupport::ValueGen;
using testsupport::write_text;

TEST_CASE("csv readings parse in file order") {
    TempDir dir("ingest");
    write_text(dir.file("r.csv"), "timestamp,energy_kwh\n1591804800,0.42\n1591808400,0.5\n");
    const auto readings = parse_readings_file(dir.file("r.csv"), ReadingsFormat::Csv);
    REQUIRE(readings.size() == 2);
    CHECK(readings[0] == RawReading{1591804800, 0.42});
    CHECK(readings[1] == RawReading{1591808400, 0.5});
}

TEST_CASE("header-only file parses to an empty list") {
    TempDir dir("ingest");
    write_text(dir.file("r.csv"), "timestamp,energy_kwh\n");
    CHECK(parse_readings_file(dir.file("r.csv"), ReadingsFormat::Csv).empty());
}

TEST_CASE("malformed rows carry the line number and field") {
    TempDir dir("ingest");
    write_text(dir.file("r.csv"), "timestamp,energy_kwh\nabc,0.42\n");
    try {
        parse_readings_file(dir.file("r.csv"), ReadingsFormat::Csv);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.field() == "timestamp");
    }

    write_text(dir.file("v.csv"), "timestamp,energy_kwh\n1591804800,0.42\n1591808400,oops\n");
    try {
        parse_readings_file(dir.file("v.csv"), ReadingsFormat::Csv);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.field() == "energy_kwh");
    }
}

TEST_CASE("wrong header and missing file are rejected") {
    TempDir dir("ingest");
    write_text(dir.file("r.csv"), "time,kwh\n1,2\n");
    CHECK_THROWS_AS(parse_readings_file(dir.file("r.csv"), ReadingsFormat::Csv), ParseError);
    CHECK_THROWS_AS(parse_readings_file(dir.file("absent.csv"), ReadingsFormat::Csv), IoError);
}

TEST_CASE("json lines readings parse strictly") {
    TempDir dir("ingest");
    write_text(dir.file("r.jsonl"), "{\"t\": 1591804800, \"v\": 0.42}\n{\"t\": 1591808400, \"v\": 1.0}\n");
    const auto readings = parse_readings_file(dir.file("r.jsonl"), ReadingsFormat::JsonLines);
    REQUIRE(readings.size() == 2);
    CHECK(readings[0] == RawReading{1591804800, 0.42});

    write_text(dir.file("bad.jsonl"), "{\"t\": 1591804800}\n");
    try {
        parse_readings_file(dir.file("bad.jsonl"), ReadingsFormat::JsonLines);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.field() == "v");
    }
}

TEST_CASE("readings round-trip through the csv writer") {
    TempDir dir("ingest");
    ValueGen gen(9);
    std::vector<RawReading> readings;
    for (int i = 0; i < 300; ++i)
        readings.push_back({1591804800 + i * 900, gen.uniform(0.0, 3.0)});
    write_readings_csv(readings, dir.file("rt.csv"));
    const auto back = parse_readings_file(dir.file("rt.csv"), ReadingsFormat::Csv);
    CHECK(back == readings);
}

TEST_CASE("cleaning drops negatives and spikes for interval meters") {
    std::vector<RawReading> rs = {{0, 0.3}, {900, -0.1}, {1800, 0.2}};
    const CleanResult res = clean_readings(rs, MeterKind::IntervalKwh, 100.0);
    REQUIRE(res.readings.size() == 2);
    CHECK(res.readings[0].value == 0.3);
    CHECK(res.readings[1].value == 0.2);
    CHECK(res.report.dropped_negative == 1);
    CHECK(res.report.kept == 2);

    std::vector<RawReading> spike = {{0, 0.3}, {900, 500.0}};
    const CleanResult res2 = clean_readings(spike, MeterKind::IntervalKwh, 100.0);
    CHECK(res2.report.dropped_spike == 1);
    CHECK(res2.report.kept == 1);
}

TEST_CASE("counter resets rebase subsequent readings") {
    // Hand-walked oracle: 100.0 -> 101.0 is a 1.0 kWh delta; the reset to
    // 3.0 contributes nothing; 3.0 -> 4.2 is a 1.2 kWh delta.
    std::vector<RawReading> rs = {{0, 100.0}, {3600, 101.0}, {7200, 3.0}, {10800, 4.2}};
    const CleanResult res = clean_readings(rs, MeterKind::CumulativeKwh, 100.0);
    CHECK(res.report.counter_resets == 1);
    REQUIRE(res.readings.size() == 4);
    const double d1 = res.readings[1].value - res.readings[0].value;
    const double d2 = res.readings[2].value - res.readings[1].value;
    const double d3 = res.readings[3].value - res.readings[2].value;
    CHECK(d1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d2 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(d3 == doctest::Approx(1.2).epsilon(1e-12));
}

TEST_CASE("duplicate timestamps keep the last reading") {
    std::vector<RawReading> rs = {{3600, 0.1}, {3600, 0.9}, {7200, 0.2}};
    const CleanResult res = clean_readings(rs, MeterKind::IntervalKwh, 100.0);
    REQUIRE(res.readings.size() == 2);
    CHECK(res.readings[0].value == 0.9);
    CHECK(res.report.duplicates == 1);
}

TEST_CASE("cleaning sorts unsorted input") {
    std::vector<RawReading> rs = {{7200, 0.2}, {0, 0.3}, {3600, 0.1}};
    const CleanResult res = clean_readings(rs, MeterKind::IntervalKwh, 100.0);
    REQUIRE(res.readings.size() == 3);
    CHECK(std::is_sorted(res.readings.begin(), res.readings.end(),
                         [](const RawReading& a, const RawReading& b) { return a.t < b.t; }));
}

TEST_CASE("cleaning is idempotent and counts partition the input") {
    ValueGen gen(31);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<RawReading> rs;
        const int n = 200;
        for (int i = 0; i < n; ++i) {
            Timestamp t = static_cast<Timestamp>(gen.index(100)) * 900;
            double v = gen.uniform(-1.0, 4.0);
            if (gen.uniform(0, 1) < 0.05) v = gen.uniform(100.0, 2000.0);
            rs.push_back({t, v});
        }
        const MeterKind kind =
            trial % 2 == 0 ? MeterKind::IntervalKwh : MeterKind::CumulativeKwh;
        const CleanResult once = clean_readings(rs, kind, 100.0);
        const CleanResult twice = clean_readings(once.readings, kind, 100.0);
        CHECK(twice.readings == once.readings);
        CHECK(twice.report.dropped_negative == 0);
        CHECK(twice.report.dropped_spike == 0);
        CHECK(twice.report.counter_resets == 0);
        CHECK(twice.report.duplicates == 0);

        CHECK(once.report.kept + once.report.dropped_negative + once.report.dropped_spike +
                  once.report.duplicates ==
              rs.size());
    }
}

TEST_CASE("weather files parse with the range rule") {
    TempDir dir("weather");
    write_text(dir.file("w.csv"), "timestamp,temp_c\n1591804800,24.1\n1591808400,99.0\n");
    const WeatherReadings w = parse_weather_file(dir.file("w.csv"));
    REQUIRE(w.readings.size() == 1);
    CHECK(w.readings[0].value == doctest::Approx(24.1));
    CHECK(w.rejected_out_of_range == 1);

    write_text(dir.file("empty.csv"), "timestamp,temp_c\n");
    CHECK(parse_weather_file(dir.file("empty.csv")).readings.empty());

    write_text(dir.file("bad.csv"), "timestamp,temp_c\n1591804800,warm\n");
    CHECK_THROWS_AS(parse_weather_file(dir.file("bad.csv")), ParseError);
}

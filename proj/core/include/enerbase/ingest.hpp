#pragma once

#include "enerbase/timeseries.hpp"

#include <cstddef>
#include <filesystem>
#include <vector>

namespace enerbase {

enum class ReadingsFormat { Csv, JsonLines };

/// What cleaning did to a batch of raw readings. Counts partition the
/// input: kept + dropped_negative + dropped_spike + duplicates = input size.
struct CleanReport {
    std::size_t kept = 0;
    std::size_t dropped_negative = 0;
    std::size_t dropped_spike = 0;
    std::size_t counter_resets = 0;
    std::size_t duplicates = 0;

    friend bool operator==(const CleanReport&, const CleanReport&) = default;
};

struct CleanResult {
    std::vector<RawReading> readings;
    CleanReport report;
};

/// Parses an energy readings file. CSV schema: header `timestamp,energy_kwh`,
/// UTF-8, LF endings, decimal point. JSON-lines schema: one {"t": int,
/// "v": number} object per line. Malformed rows throw ParseError with the
/// 1-based line number and offending field.
std::vector<RawReading> parse_readings_file(const std::filesystem::path& path,
                                            ReadingsFormat format);

inline constexpr double kDefaultSpikeThresholdKwh = 100.0;

/// Sorts, deduplicates (last reading wins), and scrubs a reading list.
/// Interval meters: negative energies and values above the spike threshold
/// are dropped. Cumulative meters: negative counter values are dropped and
/// counter decreases are treated as meter resets, rebasing later readings
/// so that downstream differences stay correct. Anomalies never throw; they
/// are tallied in the report. Idempotent.
CleanResult clean_readings(std::vector<RawReading> readings, MeterKind kind,
                           double spike_threshold = kDefaultSpikeThresholdKwh);

struct WeatherReadings {
    std::vector<RawReading> readings; // degrees Celsius
    std::size_t rejected_out_of_range = 0;
};

/// Parses a weather file (CSV header `timestamp,temp_c` or JSON lines).
/// Temperatures outside [-60, 60] C are rejected row by row and counted.
WeatherReadings parse_weather_file(const std::filesystem::path& path,
                                   ReadingsFormat format = ReadingsFormat::Csv);

/// Writes readings back out in the canonical CSV schema (present values
/// only). Inverse of parse_readings_file for well-formed lists.
void write_readings_csv(const std::vector<RawReading>& readings,
                        const std::filesystem::path& path,
                        const char* value_header = "energy_kwh");

} // namespace enerbase

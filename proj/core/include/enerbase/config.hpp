#pragma once

#include "enerbase/baseline.hpp"
#include "enerbase/ingest.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace enerbase {

/// Per-household pipeline settings, persisted as a JSON document with the
/// same field names.
struct HouseholdConfig {
    std::string user_id;
    std::string timezone = "UTC";
    std::string country;
    FactorMode factor_mode = FactorMode::Ratio;
    BaselineLayout layout_mode = BaselineLayout::PaperLiteral;
    double spike_threshold = kDefaultSpikeThresholdKwh;
    double completeness_threshold = kDefaultCompletenessThreshold;
    std::optional<std::uint64_t> seed;
    int calendar_year = 2020; // month lengths for the calendar layout
};

/// Throws ValidationError / ConfigError on out-of-range thresholds, bad
/// enum names, or an unknown time zone.
void validate_config(const HouseholdConfig& config);

HouseholdConfig load_household_config(const std::filesystem::path& path);
void save_household_config(const HouseholdConfig& config, const std::filesystem::path& path);

} // namespace enerbase

#include "enerbase/config.hpp"

#include "enerbase/errors.hpp"
#include "enerbase/timezone.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace enerbase {

void validate_config(const HouseholdConfig& config) {
    if (config.user_id.empty()) throw ValidationError("config user_id must not be empty");
    TimeZone::load(config.timezone); // throws ConfigError for unknown zones
    if (!(config.spike_threshold > 0.0))
        throw ValidationError("spike_threshold must be positive");
    if (!(config.completeness_threshold > 0.0 && config.completeness_threshold <= 1.0))
        throw ValidationError("completeness_threshold must lie in (0, 1]");
    if (config.calendar_year < 1970 || config.calendar_year > 9999)
        throw ValidationError("calendar_year out of range");
}

HouseholdConfig load_household_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw ParseError("config is not a JSON object: " + path.string());

    HouseholdConfig config;
    try {
        config.user_id = doc.at("user_id").get<std::string>();
        config.timezone = doc.at("timezone").get<std::string>();
        config.country = doc.value("country", std::string{});
        if (doc.contains("factor_mode"))
            config.factor_mode = factor_mode_from_name(doc["factor_mode"].get<std::string>());
        if (doc.contains("layout_mode"))
            config.layout_mode = layout_from_name(doc["layout_mode"].get<std::string>());
        config.spike_threshold = doc.value("spike_threshold", kDefaultSpikeThresholdKwh);
        config.completeness_threshold =
            doc.value("completeness_threshold", kDefaultCompletenessThreshold);
        if (doc.contains("seed")) config.seed = doc["seed"].get<std::uint64_t>();
        config.calendar_year = doc.value("calendar_year", 2020);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed config: ") + e.what());
    }
    validate_config(config);
    return config;
}

void save_household_config(const HouseholdConfig& config, const std::filesystem::path& path) {
    validate_config(config);
    nlohmann::json doc;
    doc["user_id"] = config.user_id;
    doc["timezone"] = config.timezone;
    doc["country"] = config.country;
    doc["factor_mode"] = factor_mode_name(config.factor_mode);
    doc["layout_mode"] = layout_name(config.layout_mode);
    doc["spike_threshold"] = config.spike_threshold;
    doc["completeness_threshold"] = config.completeness_threshold;
    if (config.seed) doc["seed"] = *config.seed;
    doc["calendar_year"] = config.calendar_year;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path.string());
    out << doc.dump(2) << "\n";
    if (!out) throw IoError("failed while writing " + path.string());
}

} // namespace enerbase

#pragma once

#include <array>
#include <filesystem>
#include <string>

namespace enerbase {

/// Country-level monthly household consumption profile used to fill months
/// without recordings. Values are per-household kWh, January first; any
/// per-capita normalization happens when the file is authored.
struct ReferenceProfile {
    std::string country;      // ISO 3166-1 alpha-2
    std::string source_label; // free text provenance note
    std::array<double, 12> monthly_kwh{};

    friend bool operator==(const ReferenceProfile&, const ReferenceProfile&) = default;
};

/// Throws ValidationError unless the profile has a well-formed country code
/// and exactly 12 strictly positive finite monthly values.
void validate_profile(const ReferenceProfile& profile);

/// Loads and validates a profile from its JSON document:
///   {"country": "EL", "source": "...", "monthly_kwh": [12 numbers, Jan..Dec]}
ReferenceProfile load_reference_profile(const std::filesystem::path& path);

void save_reference_profile(const ReferenceProfile& profile, const std::filesystem::path& path);

} // namespace enerbase

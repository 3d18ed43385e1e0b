#include "enerbase/reference.hpp"

#include "enerbase/errors.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <cmath>
#include <fstream>

namespace enerbase {

void validate_profile(const ReferenceProfile& profile) {
    if (profile.country.size() != 2 ||
        !std::isupper(static_cast<unsigned char>(profile.country[0])) ||
        !std::isupper(static_cast<unsigned char>(profile.country[1])))
        throw ValidationError("country must be an ISO 3166-1 alpha-2 code, got \"" +
                              profile.country + "\"");
    for (std::size_t i = 0; i < 12; ++i) {
        const double v = profile.monthly_kwh[i];
        if (!std::isfinite(v) || v <= 0.0)
            throw ValidationError("monthly_kwh for month " + std::to_string(i + 1) +
                                  " must be strictly positive and finite");
    }
}

ReferenceProfile load_reference_profile(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open reference profile " + path.string());
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw ParseError("reference profile is not a JSON object: " + path.string());

    if (!doc.contains("country") || !doc["country"].is_string())
        throw ParseError("reference profile missing string field \"country\"");
    if (!doc.contains("monthly_kwh") || !doc["monthly_kwh"].is_array())
        throw ParseError("reference profile missing array field \"monthly_kwh\"");
    const auto& arr = doc["monthly_kwh"];
    if (arr.size() != 12)
        throw ParseError("expected 12 monthly values, found " + std::to_string(arr.size()));

    ReferenceProfile profile;
    profile.country = doc["country"].get<std::string>();
    if (doc.contains("source")) {
        if (!doc["source"].is_string()) throw ParseError("field \"source\" must be a string");
        profile.source_label = doc["source"].get<std::string>();
    }
    for (std::size_t i = 0; i < 12; ++i) {
        if (!arr[i].is_number())
            throw ParseError("monthly_kwh entry " + std::to_string(i + 1) + " is not a number");
        profile.monthly_kwh[i] = arr[i].get<double>();
    }
    validate_profile(profile);
    return profile;
}

void save_reference_profile(const ReferenceProfile& profile, const std::filesystem::path& path) {
    validate_profile(profile);
    nlohmann::json doc;
    doc["country"] = profile.country;
    doc["source"] = profile.source_label;
    doc["monthly_kwh"] = profile.monthly_kwh;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path.string());
    out << doc.dump(2) << "\n";
    if (!out) throw IoError("failed while writing " + path.string());
}

} // namespace enerbase

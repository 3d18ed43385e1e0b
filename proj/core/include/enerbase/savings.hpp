#pragma once

#include "enerbase/timeseries.hpp"

#include <span>
#include <string>

namespace enerbase {

/// Half-open [start, end) comparison period; both bounds must be
/// hour-aligned in the zone.
struct ComparisonWindow {
    Timestamp start = 0;
    Timestamp end = 0;
    std::string zone = "UTC";

    std::size_t hours() const {
        return static_cast<std::size_t>((end - start) / kSecondsPerHour);
    }
};

/// Throws ValidationError unless start < end and both are hour-aligned.
void validate_window(const ComparisonWindow& window, const TimeZone& zone);

/// Minimum baseline-period mean temperature for which a Celsius ratio is
/// accepted; below it the adjustment is undefined.
inline constexpr double kMinBaseMeanCelsius = 0.5;

/// mean(observed temps) / mean(baseline temps), both in Celsius. Throws
/// InsufficientDataError on empty input and AdjustmentUndefinedError when
/// the baseline mean is at or below the guard value.
double temperature_ratio(std::span<const double> obs_temps, std::span<const double> base_temps);

/// Scales every present hour by the ratio; missing hours stay missing.
HourlySeries adjust_observed(const HourlySeries& observed, double ratio);

/// The savings comparison over one window. S = E_b - E_pr and
/// A = E_pr - E_pr_raw hold by construction.
struct SavingsReport {
    double E_b = 0.0;        // baseline energy over the paired hours
    double E_pr_raw = 0.0;   // observed energy before adjustment
    double E_pr = 0.0;       // observed energy after temperature adjustment
    double A = 0.0;          // adjustment magnitude, E_pr - E_pr_raw
    double S = 0.0;          // savings, E_b - E_pr
    double temp_ratio = 1.0;
    double T_obs_mean = kMissing;  // NaN when adjustment disabled without temps
    double T_base_mean = kMissing;
    Timestamp window_start = 0;
    Timestamp window_end = 0;
    std::size_t paired_hours = 0;
};

/// Compares a baseline slice against observed consumption over the window.
/// `baseline` must hold one value per window hour. Hours missing in the
/// observed series are excluded pairwise from both sums. With `temp_adjust`
/// the ratio comes from the two temperature lists; without it the ratio is
/// fixed at 1 and temperature lists may be empty.
SavingsReport compute_savings(std::span<const double> baseline, const HourlySeries& observed,
                              std::span<const double> obs_temps,
                              std::span<const double> base_temps, const ComparisonWindow& window,
                              bool temp_adjust = true);

} // namespace enerbase

#include "enerbase/savings.hpp"

#include "enerbase/errors.hpp"

#include <cmath>
#include <numeric>

namespace enerbase {

void validate_window(const ComparisonWindow& window, const TimeZone& zone) {
    if (window.start >= window.end)
        throw ValidationError("comparison window start must precede end");
    if (!zone.is_hour_aligned(window.start) || !zone.is_hour_aligned(window.end))
        throw ValidationError("comparison window bounds must be hour-aligned in zone " +
                              zone.name());
}

double temperature_ratio(std::span<const double> obs_temps, std::span<const double> base_temps) {
    if (obs_temps.empty() || base_temps.empty())
        throw InsufficientDataError("temperature ratio requires non-empty temperature lists");
    const double obs_mean = std::accumulate(obs_temps.begin(), obs_temps.end(), 0.0) /
                            static_cast<double>(obs_temps.size());
    const double base_mean = std::accumulate(base_temps.begin(), base_temps.end(), 0.0) /
                             static_cast<double>(base_temps.size());
    if (base_mean <= kMinBaseMeanCelsius)
        throw AdjustmentUndefinedError(
            "baseline mean temperature " + std::to_string(base_mean) +
            " C is too close to zero for a Celsius ratio; disable the adjustment instead");
    return obs_mean / base_mean;
}

HourlySeries adjust_observed(const HourlySeries& observed, double ratio) {
    if (!(ratio > 0.0) || !std::isfinite(ratio))
        throw ValidationError("adjustment ratio must be positive and finite");
    HourlySeries out = observed;
    for (double& v : out.values)
        if (!is_missing(v)) v *= ratio;
    return out;
}

SavingsReport compute_savings(std::span<const double> baseline, const HourlySeries& observed,
                              std::span<const double> obs_temps,
                              std::span<const double> base_temps, const ComparisonWindow& window,
                              bool temp_adjust) {
    const TimeZone zone = TimeZone::load(window.zone);
    validate_window(window, zone);
    if (baseline.size() != window.hours())
        throw ValidationError("baseline slice has " + std::to_string(baseline.size()) +
                              " hours but the window spans " + std::to_string(window.hours()));

    SavingsReport report;
    report.window_start = window.start;
    report.window_end = window.end;
    if (temp_adjust) {
        report.temp_ratio = temperature_ratio(obs_temps, base_temps);
    } else {
        report.temp_ratio = 1.0;
    }
    if (!obs_temps.empty())
        report.T_obs_mean = std::accumulate(obs_temps.begin(), obs_temps.end(), 0.0) /
                            static_cast<double>(obs_temps.size());
    if (!base_temps.empty())
        report.T_base_mean = std::accumulate(base_temps.begin(), base_temps.end(), 0.0) /
                             static_cast<double>(base_temps.size());

    // Pairwise sums: an hour missing in the observed series contributes to
    // neither side.
    for (std::size_t i = 0; i < baseline.size(); ++i) {
        const Timestamp t = window.start + static_cast<Timestamp>(i) * kSecondsPerHour;
        if (t < observed.start || t >= observed.end()) continue;
        const std::size_t idx =
            static_cast<std::size_t>((t - observed.start) / kSecondsPerHour);
        if (!observed.present(idx)) continue;
        report.E_b += baseline[i];
        report.E_pr_raw += observed.values[idx];
        ++report.paired_hours;
    }
    if (report.paired_hours == 0)
        throw InsufficientDataError("no paired hours: the observed series does not cover the window");

    report.E_pr = report.E_pr_raw * report.temp_ratio;
    report.A = report.E_pr - report.E_pr_raw;
    report.S = report.E_b - report.E_pr;
    return report;
}

} // namespace enerbase

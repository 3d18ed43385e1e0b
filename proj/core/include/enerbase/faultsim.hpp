#pragma once

#include "enerbase/timeseries.hpp"

#include <cstdint>
#include <vector>

namespace enerbase {

/// A contiguous outage: the gateway lost power for `hours` starting at
/// `start` (which must lie on the series' hour grid).
struct UnplugWindow {
    Timestamp start = 0;
    std::int64_t hours = 0;

    friend bool operator==(const UnplugWindow&, const UnplugWindow&) = default;
};

/// Deterministic script of field-failure modes to replay against a clean
/// series: connectivity dropouts, unplug outages, and storage corruption.
struct FaultPlan {
    std::uint64_t seed = 0;
    double dropout_rate = 0.0;    // fraction of present hours to blank
    std::vector<UnplugWindow> unplug_windows;
    double corruption_rate = 0.0; // fraction of present hours to corrupt

    friend bool operator==(const FaultPlan&, const FaultPlan&) = default;
};

/// Blanks a seeded pseudo-random subset of floor(rate * present) hours.
HourlySeries inject_dropouts(HourlySeries s, double rate, std::uint64_t seed);

/// Blanks the contiguous window. Throws ValidationError when the window
/// falls outside the series or off its hour grid.
HourlySeries inject_unplug(HourlySeries s, const UnplugWindow& window);

/// Replaces a seeded subset of floor(rate * present) hours with values the
/// default cleaning rules must reject: alternately -(|v| + 1) and
/// 10 * spike_threshold, in ascending index order.
HourlySeries inject_corruption(HourlySeries s, double rate, std::uint64_t seed,
                               double spike_threshold = 100.0);

/// Applies a whole plan: unplug windows, then dropouts, then corruption.
/// Dropout and corruption subsets use seeds derived from plan.seed so the
/// two stages stay independent.
HourlySeries apply_fault_plan(HourlySeries s, const FaultPlan& plan,
                              double spike_threshold = 100.0);

} // namespace enerbase

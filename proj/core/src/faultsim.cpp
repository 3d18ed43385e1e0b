#include "enerbase/faultsim.hpp"

#include "enerbase/errors.hpp"
#include "enerbase/rng.hpp"

#include <algorithm>
#include <cmath>

namespace enerbase {

namespace {

void check_rate(double rate) {
    if (!(rate >= 0.0 && rate <= 1.0))
        throw ValidationError("fault rate must lie in [0, 1], got " + std::to_string(rate));
}

/// floor(rate * present) distinct present indices, chosen by a partial
/// Fisher-Yates shuffle under SplitMix64. Returned in ascending order.
std::vector<std::size_t> pick_present_subset(const HourlySeries& s, double rate,
                                             std::uint64_t seed) {
    std::vector<std::size_t> present;
    present.reserve(s.values.size());
    for (std::size_t i = 0; i < s.values.size(); ++i)
        if (s.present(i)) present.push_back(i);

    const std::size_t count =
        static_cast<std::size_t>(std::floor(rate * static_cast<double>(present.size())));
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.bounded(present.size() - i));
        std::swap(present[i], present[j]);
    }
    present.resize(count);
    std::sort(present.begin(), present.end());
    return present;
}

} // namespace

HourlySeries inject_dropouts(HourlySeries s, double rate, std::uint64_t seed) {
    check_rate(rate);
    for (std::size_t i : pick_present_subset(s, rate, seed)) s.values[i] = kMissing;
    return s;
}

HourlySeries inject_unplug(HourlySeries s, const UnplugWindow& window) {
    if (window.hours < 0) throw ValidationError("unplug window hours must be non-negative");
    if (window.hours == 0) return s;
    if (window.start < s.start || (window.start - s.start) % kSecondsPerHour != 0 ||
        window.start + window.hours * kSecondsPerHour > s.end())
        throw ValidationError("unplug window [" + std::to_string(window.start) + ", +" +
                              std::to_string(window.hours) + "h) falls outside the series");
    const std::size_t first = static_cast<std::size_t>((window.start - s.start) / kSecondsPerHour);
    for (std::size_t i = 0; i < static_cast<std::size_t>(window.hours); ++i)
        s.values[first + i] = kMissing;
    return s;
}

HourlySeries inject_corruption(HourlySeries s, double rate, std::uint64_t seed,
                               double spike_threshold) {
    check_rate(rate);
    if (spike_threshold <= 0.0) throw ValidationError("spike threshold must be positive");
    const std::vector<std::size_t> targets = pick_present_subset(s, rate, seed);
    bool negative_turn = true;
    for (std::size_t i : targets) {
        // -(|v| + 1) keeps zero-valued hours detectably negative.
        s.values[i] = negative_turn ? -(std::fabs(s.values[i]) + 1.0) : spike_threshold * 10.0;
        negative_turn = !negative_turn;
    }
    return s;
}

HourlySeries apply_fault_plan(HourlySeries s, const FaultPlan& plan, double spike_threshold) {
    for (const UnplugWindow& w : plan.unplug_windows) s = inject_unplug(std::move(s), w);
    s = inject_dropouts(std::move(s), plan.dropout_rate, derive_seed(plan.seed, 1));
    s = inject_corruption(std::move(s), plan.corruption_rate, derive_seed(plan.seed, 2),
                          spike_threshold);
    return s;
}

} // namespace enerbase

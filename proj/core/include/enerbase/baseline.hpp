#pragma once

#include "enerbase/reference.hpp"
#include "enerbase/timeseries.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace enerbase {

/// How the scalar relating observed monthly totals to the reference profile
/// is read. PaperLiteral computes the mean relative shortfall
/// (1/k) * sum (ref - obs) / ref; Ratio computes the mean ratio
/// (1/k) * sum obs / ref. The two always sum to one. Ratio is the default:
/// a household that exactly matches the reference fills missing months with
/// the reference values rather than with zero.
enum class FactorMode { PaperLiteral, Ratio };

const char* factor_mode_name(FactorMode m);
FactorMode factor_mode_from_name(const std::string& name);

struct AdjustmentFactor {
    double value = 0.0;
    FactorMode mode = FactorMode::Ratio;
    int months_used = 0; // k: observed months entering the mean
};

/// Computes the adjustment factor over the Observed months of `observed`.
/// Throws InsufficientDataError when no month is Observed.
AdjustmentFactor adjustment_factor(const MonthlyTotals& observed, const ReferenceProfile& ref,
                                   FactorMode mode);

/// Completes the 12-month vector: Observed (and already Filled) months pass
/// through; Absent months become Filled with factor * reference. In Ratio
/// mode a non-positive factor is rejected. In PaperLiteral mode the fill is
/// applied verbatim, which can go negative for households consuming above
/// the reference; such totals are only suitable for side-by-side comparison.
MonthlyTotals fill_monthly(const MonthlyTotals& observed, const ReferenceProfile& ref,
                           const AdjustmentFactor& factor);

/// The 168 per-slot shares of a week's consumption, Monday 00 first.
/// Shares are non-negative and sum to 1.
struct WeeklyDistribution {
    std::array<double, kSlotsPerWeek> shares{};

    double share(Slot s) const { return shares[static_cast<std::size_t>(s.index())]; }
};

/// Observed hourly values grouped by slot; the empirical per-slot
/// distributions that stochastic generation resamples.
struct SlotSamplePool {
    std::array<std::vector<double>, kSlotsPerWeek> samples{};

    const std::vector<double>& at(Slot s) const {
        return samples[static_cast<std::size_t>(s.index())];
    }
    bool all_empty() const;
};

struct DistributionResult {
    WeeklyDistribution distribution;
    SlotSamplePool pool;
};

/// Builds the weekly percentage distribution from the observed hours of a
/// series: per-slot means across all observed weeks, normalized to sum 1.
/// Slots never observed are imputed with the mean of the same hour on the
/// other days, falling back to the global mean. Throws
/// InsufficientDataError when nothing is present and DegenerateDataError
/// when everything present is zero.
DistributionResult weekly_distribution(const HourlySeries& series, const TimeZone& zone);

/// PaperLiteral months are 4 identical synthetic weeks of 168 hours;
/// Calendar months follow the real month lengths of a chosen year.
enum class BaselineLayout { PaperLiteral, Calendar };

const char* layout_name(BaselineLayout l);
BaselineLayout layout_from_name(const std::string& name);

inline constexpr int kWeeksPerMonth = 4;
inline constexpr int kHoursPerPaperMonth = kWeeksPerMonth * kSlotsPerWeek; // 672

/// A synthesized hourly consumption year: 12 month blocks. PaperLiteral
/// blocks hold 4 weeks x 168 hours; Calendar blocks hold 24 values per real
/// day of the month in `calendar_year`.
struct BaselineYear {
    BaselineLayout layout = BaselineLayout::PaperLiteral;
    bool stochastic = false;
    std::uint64_t seed = 0;
    int calendar_year = 2020; // meaningful in Calendar layout
    std::array<std::vector<double>, 12> months{};

    std::size_t hour_count() const;
};

/// Deterministic synthesis: every hour of month k carries
/// share(slot) * total_k / 4 (PaperLiteral), or the weekly pattern tiled
/// over the month's real days and rescaled to total_k (Calendar).
/// All 12 months must be non-Absent and non-negative.
BaselineYear synthesize_baseline(const WeeklyDistribution& dist, const MonthlyTotals& months,
                                 BaselineLayout layout, int calendar_year = 2020);

/// Stochastic synthesis: each hour draws uniformly with replacement from
/// its slot's sample pool (SplitMix64 seeded with `seed`; draw order is
/// month-major, then day-major, then hour within day), after which every
/// month block is rescaled to its monthly total. Empty slot pools take the
/// deterministic imputed slot value without consuming a draw. `draw_log`,
/// when given, receives every pre-rescale hour value in draw order.
BaselineYear sample_stochastic(const SlotSamplePool& pool, const MonthlyTotals& months,
                               std::uint64_t seed, BaselineLayout layout = BaselineLayout::PaperLiteral,
                               int calendar_year = 2020, std::vector<double>* draw_log = nullptr);

/// Total kWh over the synthesized year.
double annual_total(const BaselineYear& baseline);

/// Hourly baseline values for each physical hour in [start, end), looked up
/// by the hour's local (month, day-of-month, weekday, hour) label.
/// PaperLiteral maps day-of-month 1..7 to week 1, ..., 22..31 to week 4.
std::vector<double> baseline_slice(const BaselineYear& baseline, Timestamp start, Timestamp end,
                                   const TimeZone& zone);

} // namespace enerbase

#include "enerbase/baseline.hpp"

#include "enerbase/errors.hpp"
#include "enerbase/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace enerbase {

const char* factor_mode_name(FactorMode m) {
    return m == FactorMode::PaperLiteral ? "paper_literal" : "ratio";
}

FactorMode factor_mode_from_name(const std::string& name) {
    if (name == "paper_literal") return FactorMode::PaperLiteral;
    if (name == "ratio") return FactorMode::Ratio;
    throw ValidationError("unknown factor mode \"" + name + "\"");
}

const char* layout_name(BaselineLayout l) {
    return l == BaselineLayout::PaperLiteral ? "paper_literal" : "calendar";
}

BaselineLayout layout_from_name(const std::string& name) {
    if (name == "paper_literal") return BaselineLayout::PaperLiteral;
    if (name == "calendar") return BaselineLayout::Calendar;
    throw ValidationError("unknown layout \"" + name + "\"");
}

bool SlotSamplePool::all_empty() const {
    return std::all_of(samples.begin(), samples.end(),
                       [](const std::vector<double>& s) { return s.empty(); });
}

std::size_t BaselineYear::hour_count() const {
    std::size_t n = 0;
    for (const auto& block : months) n += block.size();
    return n;
}

AdjustmentFactor adjustment_factor(const MonthlyTotals& observed, const ReferenceProfile& ref,
                                   FactorMode mode) {
    validate_profile(ref);
    double sum = 0.0;
    int k = 0;
    for (std::size_t i = 0; i < 12; ++i) {
        const MonthlyTotals::Month& m = observed.months[i];
        if (m.provenance != Provenance::Observed) continue;
        const double c = m.total_kwh;
        const double ref_c = ref.monthly_kwh[i];
        sum += mode == FactorMode::PaperLiteral ? (ref_c - c) / ref_c : c / ref_c;
        ++k;
    }
    if (k == 0)
        throw InsufficientDataError(
            "adjustment factor requires at least one observed month; found 0");
    return AdjustmentFactor{sum / static_cast<double>(k), mode, k};
}

MonthlyTotals fill_monthly(const MonthlyTotals& observed, const ReferenceProfile& ref,
                           const AdjustmentFactor& factor) {
    validate_profile(ref);
    if (factor.mode == FactorMode::Ratio && factor.value <= 0.0)
        throw ValidationError("ratio adjustment factor must be positive, got " +
                              std::to_string(factor.value));
    MonthlyTotals out = observed;
    for (std::size_t i = 0; i < 12; ++i) {
        if (out.months[i].provenance != Provenance::Absent) continue;
        out.months[i].total_kwh = factor.value * ref.monthly_kwh[i];
        out.months[i].provenance = Provenance::Filled;
    }
    return out;
}

namespace {

/// Per-slot means plus the imputation rule for slots with no observations:
/// mean of the same hour's means on the other days, then the global mean.
std::array<double, kSlotsPerWeek> slot_means_imputed(const SlotSamplePool& pool) {
    std::array<double, kSlotsPerWeek> means{};
    std::array<bool, kSlotsPerWeek> has{};
    double global_sum = 0.0;
    std::size_t global_count = 0;
    for (std::size_t s = 0; s < kSlotsPerWeek; ++s) {
        const std::vector<double>& obs = pool.samples[s];
        if (obs.empty()) continue;
        const double sum = std::accumulate(obs.begin(), obs.end(), 0.0);
        means[s] = sum / static_cast<double>(obs.size());
        has[s] = true;
        global_sum += sum;
        global_count += obs.size();
    }
    const double global_mean = global_count > 0 ? global_sum / static_cast<double>(global_count)
                                                : 0.0;
    for (int h = 0; h < 24; ++h) {
        double hour_sum = 0.0;
        int hour_n = 0;
        for (int d = 0; d < 7; ++d) {
            const std::size_t s = static_cast<std::size_t>(d * 24 + h);
            if (has[s]) {
                hour_sum += means[s];
                ++hour_n;
            }
        }
        const double hour_mean = hour_n > 0 ? hour_sum / hour_n : global_mean;
        for (int d = 0; d < 7; ++d) {
            const std::size_t s = static_cast<std::size_t>(d * 24 + h);
            if (!has[s]) means[s] = hour_mean;
        }
    }
    return means;
}

} // namespace

DistributionResult weekly_distribution(const HourlySeries& series, const TimeZone& zone) {
    const std::vector<SlotObservation> observations = collect_slot_observations(series, zone);
    if (observations.empty())
        throw InsufficientDataError("weekly distribution requires at least one present hour");

    DistributionResult res;
    for (const SlotObservation& o : observations)
        res.pool.samples[static_cast<std::size_t>(o.slot.index())].push_back(o.kwh);

    std::array<double, kSlotsPerWeek> means = slot_means_imputed(res.pool);
    const double total = std::accumulate(means.begin(), means.end(), 0.0);
    if (total <= 0.0)
        throw DegenerateDataError("cannot normalize an all-zero weekly distribution");
    for (std::size_t s = 0; s < kSlotsPerWeek; ++s)
        res.distribution.shares[s] = means[s] / total;
    return res;
}

namespace {

void require_fillable(const MonthlyTotals& months) {
    for (std::size_t i = 0; i < 12; ++i) {
        if (months.months[i].provenance == Provenance::Absent)
            throw ValidationError("month " + std::to_string(i + 1) +
                                  " is absent; fill monthly totals first");
        if (!std::isfinite(months.months[i].total_kwh) || months.months[i].total_kwh < 0.0)
            throw ValidationError("month " + std::to_string(i + 1) +
                                  " total must be finite and non-negative for synthesis");
    }
}

int first_weekday_of_month(int year, int month) {
    return weekday_from_days(days_from_civil(year, month, 1)); // 0 = Monday
}

} // namespace

BaselineYear synthesize_baseline(const WeeklyDistribution& dist, const MonthlyTotals& months,
                                 BaselineLayout layout, int calendar_year) {
    require_fillable(months);
    BaselineYear out;
    out.layout = layout;
    out.calendar_year = calendar_year;
    for (std::size_t k = 0; k < 12; ++k) {
        const double total = months.months[k].total_kwh;
        std::vector<double>& block = out.months[k];
        if (layout == BaselineLayout::PaperLiteral) {
            block.resize(kHoursPerPaperMonth);
            const double month_share = total / static_cast<double>(kWeeksPerMonth);
            for (int w = 0; w < kWeeksPerMonth; ++w)
                for (int s = 0; s < kSlotsPerWeek; ++s)
                    block[static_cast<std::size_t>(w * kSlotsPerWeek + s)] =
                        dist.shares[static_cast<std::size_t>(s)] * month_share;
        } else {
            const int days = days_in_month(calendar_year, static_cast<int>(k) + 1);
            const int first_dow = first_weekday_of_month(calendar_year, static_cast<int>(k) + 1);
            block.resize(static_cast<std::size_t>(days) * 24);
            double raw_sum = 0.0;
            for (int j = 0; j < days; ++j) {
                const int dow = (first_dow + j) % 7;
                for (int h = 0; h < 24; ++h) {
                    const double v = dist.shares[static_cast<std::size_t>(dow * 24 + h)];
                    block[static_cast<std::size_t>(j * 24 + h)] = v;
                    raw_sum += v;
                }
            }
            // Every weekday occurs in a month, so raw_sum >= 4 * sum(shares) > 0.
            const double scale = total / raw_sum;
            for (double& v : block) v *= scale;
        }
    }
    return out;
}

BaselineYear sample_stochastic(const SlotSamplePool& pool, const MonthlyTotals& months,
                               std::uint64_t seed, BaselineLayout layout, int calendar_year,
                               std::vector<double>* draw_log) {
    require_fillable(months);
    if (pool.all_empty())
        throw InsufficientDataError("stochastic generation requires at least one non-empty slot pool");

    const std::array<double, kSlotsPerWeek> imputed = slot_means_imputed(pool);
    SplitMix64 rng(seed);
    BaselineYear out;
    out.layout = layout;
    out.stochastic = true;
    out.seed = seed;
    out.calendar_year = calendar_year;

    auto draw_slot = [&](int slot_index) {
        const std::vector<double>& samples = pool.samples[static_cast<std::size_t>(slot_index)];
        double v;
        if (!samples.empty())
            v = samples[static_cast<std::size_t>(rng.bounded(samples.size()))];
        else
            v = imputed[static_cast<std::size_t>(slot_index)];
        if (draw_log) draw_log->push_back(v);
        return v;
    };

    for (std::size_t k = 0; k < 12; ++k) {
        std::vector<double>& block = out.months[k];
        if (layout == BaselineLayout::PaperLiteral) {
            block.resize(kHoursPerPaperMonth);
            std::size_t pos = 0;
            for (int w = 0; w < kWeeksPerMonth; ++w)
                for (int d = 0; d < 7; ++d)
                    for (int h = 0; h < 24; ++h) block[pos++] = draw_slot(d * 24 + h);
        } else {
            const int days = days_in_month(calendar_year, static_cast<int>(k) + 1);
            const int first_dow = first_weekday_of_month(calendar_year, static_cast<int>(k) + 1);
            block.resize(static_cast<std::size_t>(days) * 24);
            std::size_t pos = 0;
            for (int j = 0; j < days; ++j) {
                const int dow = (first_dow + j) % 7;
                for (int h = 0; h < 24; ++h) block[pos++] = draw_slot(dow * 24 + h);
            }
        }
        const double total = months.months[k].total_kwh;
        const double block_sum = std::accumulate(block.begin(), block.end(), 0.0);
        if (block_sum <= 0.0) {
            if (total == 0.0) {
                std::fill(block.begin(), block.end(), 0.0);
                continue;
            }
            throw DegenerateDataError("month " + std::to_string(k + 1) +
                                      " drew an all-zero block; cannot rescale to " +
                                      std::to_string(total) + " kWh");
        }
        const double scale = total / block_sum;
        for (double& v : block) v *= scale;
    }
    return out;
}

double annual_total(const BaselineYear& baseline) {
    double sum = 0.0;
    for (const auto& block : baseline.months)
        sum = std::accumulate(block.begin(), block.end(), sum);
    return sum;
}

std::vector<double> baseline_slice(const BaselineYear& baseline, Timestamp start, Timestamp end,
                                   const TimeZone& zone) {
    if (start >= end) throw ValidationError("slice window start must precede end");
    for (std::size_t k = 0; k < 12; ++k) {
        if (baseline.months[k].empty())
            throw ValidationError("baseline month " + std::to_string(k + 1) + " is empty");
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>((end - start) / kSecondsPerHour));
    for (Timestamp t = start; t < end; t += kSecondsPerHour) {
        const CivilTime local = zone.local_time(t);
        const std::vector<double>& block =
            baseline.months[static_cast<std::size_t>(local.month - 1)];
        std::size_t idx;
        if (baseline.layout == BaselineLayout::PaperLiteral) {
            const int week = std::min((local.day - 1) / 7, kWeeksPerMonth - 1);
            idx = static_cast<std::size_t>(week * kSlotsPerWeek + local.weekday * 24 + local.hour);
        } else {
            const int block_days = static_cast<int>(block.size() / 24);
            const int day = std::min(local.day, block_days) - 1;
            idx = static_cast<std::size_t>(day * 24 + local.hour);
        }
        out.push_back(block[idx]);
    }
    return out;
}

} // namespace enerbase

#pragma once

#include "enerbase/baseline.hpp"
#include "enerbase/faultsim.hpp"
#include "enerbase/ingest.hpp"
#include "enerbase/savings.hpp"
#include "enerbase/timeseries.hpp"

#include <filesystem>

namespace enerbase {

/// File round-trips for every intermediate pipeline artifact. All formats
/// are plain CSV/JSON so runs can be inspected and replayed.

/// Hourly series CSV: header `timestamp,energy_kwh`, one row per present
/// hour; missing hours are simply absent rows.
void write_series_csv(const HourlySeries& s, const std::filesystem::path& path);
HourlySeries read_series_csv(const std::filesystem::path& path, const TimeZone& zone);

void write_gap_map_json(const GapMap& gaps, const std::filesystem::path& path);
GapMap read_gap_map_json(const std::filesystem::path& path);

void write_clean_report_json(const CleanReport& report, const std::filesystem::path& path);
CleanReport read_clean_report_json(const std::filesystem::path& path);

void write_monthly_totals_json(const MonthlyTotals& totals, const std::filesystem::path& path);
MonthlyTotals read_monthly_totals_json(const std::filesystem::path& path);

void write_weekly_distribution_json(const WeeklyDistribution& dist,
                                    const std::filesystem::path& path);
WeeklyDistribution read_weekly_distribution_json(const std::filesystem::path& path);

/// Baseline CSV. PaperLiteral layout: header `month,week,day,hour,kwh`
/// with day names Mon..Sun. Calendar layout: header `timestamp,kwh` with
/// hour stamps anchored at each local midnight of the calendar year.
void write_baseline_csv(const BaselineYear& baseline, const std::filesystem::path& path,
                        const TimeZone& zone);
BaselineYear read_baseline_csv(const std::filesystem::path& path, const TimeZone& zone);

void write_savings_report_json(const SavingsReport& report, const std::filesystem::path& path);
SavingsReport read_savings_report_json(const std::filesystem::path& path);

void write_fault_plan_json(const FaultPlan& plan, const std::filesystem::path& path);
FaultPlan read_fault_plan_json(const std::filesystem::path& path);

} // namespace enerbase

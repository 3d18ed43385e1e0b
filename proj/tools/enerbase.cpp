// enerbase - hourly consumption baselines and temperature-adjusted savings
// from partial smart-meter recordings plus country reference statistics.

#include "enerbase/artifacts.hpp"
#include "enerbase/baseline.hpp"
#include "enerbase/config.hpp"
#include "enerbase/errors.hpp"
#include "enerbase/faultsim.hpp"
#include "enerbase/ingest.hpp"
#include "enerbase/reference.hpp"
#include "enerbase/savings.hpp"
#include "enerbase/timeseries.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <charconv>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace enerbase;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitInsufficientData = 3;
constexpr int kExitAdjustmentUndefined = 4;

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

struct IngestArgs {
    std::vector<std::string> readings;
    std::string kind = "interval";
    std::string config_path;
    std::string out_dir;
    std::string format = "csv";
    unsigned jobs = 1;
};

ReadingsFormat parse_format(const std::string& name) {
    if (name == "csv") return ReadingsFormat::Csv;
    if (name == "jsonl") return ReadingsFormat::JsonLines;
    throw ValidationError("unknown readings format \"" + name + "\"");
}

MeterKind parse_kind(const std::string& name) {
    if (name == "interval") return MeterKind::IntervalKwh;
    if (name == "cumulative") return MeterKind::CumulativeKwh;
    throw ValidationError("unknown meter kind \"" + name + "\"");
}

/// Ingests one readings file into <prefix>series.csv, <prefix>clean_report.json,
/// <prefix>gaps.json. Returns the kept-readings count.
std::size_t ingest_one(const fs::path& input, const IngestArgs& args,
                       const HouseholdConfig& config, const TimeZone& zone,
                       const std::string& prefix) {
    const std::vector<RawReading> raw = parse_readings_file(input, parse_format(args.format));
    CleanResult cleaned = clean_readings(raw, parse_kind(args.kind), config.spike_threshold);
    const HourlySeries series =
        aggregate_to_hourly(cleaned.readings, parse_kind(args.kind), zone);
    const GapMap gaps = detect_gaps(series);

    const fs::path out_dir(args.out_dir);
    write_series_csv(series, out_dir / (prefix + "series.csv"));
    write_clean_report_json(cleaned.report, out_dir / (prefix + "clean_report.json"));
    write_gap_map_json(gaps, out_dir / (prefix + "gaps.json"));
    return cleaned.report.kept;
}

int run_ingest(const IngestArgs& args) {
    const HouseholdConfig config = load_household_config(args.config_path);
    const TimeZone zone = TimeZone::load(config.timezone);
    fs::create_directories(args.out_dir);

    const bool multi = args.readings.size() > 1;
    std::size_t total_kept = 0;
    if (!multi || args.jobs <= 1) {
        for (const std::string& input : args.readings) {
            const std::string prefix = multi ? fs::path(input).stem().string() + "." : "";
            total_kept += ingest_one(input, args, config, zone, prefix);
        }
    } else {
        // Batch mode: households are independent, so a thread pool over the
        // input files produces the same artifacts as a sequential run.
        std::atomic<std::size_t> next{0};
        std::atomic<std::size_t> kept{0};
        std::mutex error_mutex;
        std::exception_ptr first_error;
        auto worker = [&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= args.readings.size()) return;
                try {
                    const std::string prefix = fs::path(args.readings[i]).stem().string() + ".";
                    kept += ingest_one(args.readings[i], args, config, zone, prefix);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        const unsigned n = std::min<unsigned>(args.jobs, static_cast<unsigned>(args.readings.size()));
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
        total_kept = kept.load();
    }
    std::cout << total_kept << "\n";
    return kExitOk;
}

struct BuildBaselineArgs {
    std::string series_path;
    std::string reference_path;
    std::string config_path;
    std::string out_dir;
    bool stochastic = false;
    std::optional<std::uint64_t> seed;
};

int run_build_baseline(const BuildBaselineArgs& args) {
    const HouseholdConfig config = load_household_config(args.config_path);
    const TimeZone zone = TimeZone::load(config.timezone);
    const ReferenceProfile reference = load_reference_profile(args.reference_path);
    if (!config.country.empty() && reference.country != config.country)
        std::cerr << "warning: reference profile country " << reference.country
                  << " does not match config country " << config.country << "\n";

    const HourlySeries series = read_series_csv(args.series_path, zone);
    const MonthlyTotals observed =
        aggregate_to_monthly(series, zone, config.completeness_threshold);
    if (observed.observed_count() == 0)
        throw InsufficientDataError("need >= 1 observed month; found 0");

    const AdjustmentFactor factor = adjustment_factor(observed, reference, config.factor_mode);
    const MonthlyTotals filled = fill_monthly(observed, reference, factor);
    const DistributionResult dist = weekly_distribution(series, zone);

    BaselineYear baseline;
    if (args.stochastic) {
        std::uint64_t seed;
        if (args.seed)
            seed = *args.seed;
        else if (config.seed)
            seed = *config.seed;
        else
            throw ValidationError("--stochastic requires --seed (or a seed in the config)");
        baseline = sample_stochastic(dist.pool, filled, seed, config.layout_mode,
                                     config.calendar_year);
    } else {
        baseline =
            synthesize_baseline(dist.distribution, filled, config.layout_mode, config.calendar_year);
    }

    const fs::path out_dir(args.out_dir);
    fs::create_directories(out_dir);
    write_monthly_totals_json(filled, out_dir / "monthly_totals.json");
    write_weekly_distribution_json(dist.distribution, out_dir / "weekly_distribution.json");
    write_baseline_csv(baseline, out_dir / "baseline.csv", zone);

    std::cout << format_double(annual_total(baseline)) << "\n";
    return kExitOk;
}

struct SavingsArgs {
    std::string baseline_path;
    std::string observed_path;
    std::string weather_obs_path;
    std::string weather_base_path;
    std::vector<Timestamp> window;
    std::string config_path;
    std::string out_path = "savings_report.json";
    std::string plot_path;
    bool no_temp_adjust = false;
};

std::vector<double> temps_in_window(const std::vector<RawReading>& readings, Timestamp start,
                                    Timestamp end) {
    std::vector<double> out;
    for (const RawReading& r : readings)
        if (r.t >= start && r.t < end) out.push_back(r.value);
    return out;
}

int run_savings(const SavingsArgs& args) {
    const HouseholdConfig config = load_household_config(args.config_path);
    const TimeZone zone = TimeZone::load(config.timezone);
    const ComparisonWindow window{args.window[0], args.window[1], config.timezone};
    validate_window(window, zone);

    const BaselineYear baseline = read_baseline_csv(args.baseline_path, zone);
    const std::vector<double> slice = baseline_slice(baseline, window.start, window.end, zone);
    const HourlySeries observed = read_series_csv(args.observed_path, zone);

    std::vector<double> obs_temps;
    std::vector<double> base_temps;
    if (!args.no_temp_adjust) {
        // Observed weather must cover the window; the baseline weather file
        // is the matching extract from the baseline period and is used as-is.
        const WeatherReadings obs_weather = parse_weather_file(args.weather_obs_path);
        const WeatherReadings base_weather = parse_weather_file(args.weather_base_path);
        obs_temps = temps_in_window(obs_weather.readings, window.start, window.end);
        for (const RawReading& r : base_weather.readings) base_temps.push_back(r.value);
    }

    const SavingsReport report =
        compute_savings(slice, observed, obs_temps, base_temps, window, !args.no_temp_adjust);
    write_savings_report_json(report, args.out_path);

    if (!args.plot_path.empty()) {
        std::ofstream plot(args.plot_path, std::ios::binary);
        if (!plot) throw IoError("cannot open file for writing: " + args.plot_path);
        plot << "timestamp,baseline,observed,adjusted\n";
        for (std::size_t i = 0; i < slice.size(); ++i) {
            const Timestamp t = window.start + static_cast<Timestamp>(i) * kSecondsPerHour;
            if (t < observed.start || t >= observed.end()) continue;
            const std::size_t idx =
                static_cast<std::size_t>((t - observed.start) / kSecondsPerHour);
            if (!observed.present(idx)) continue;
            plot << t << ',' << format_double(slice[i]) << ','
                 << format_double(observed.values[idx]) << ','
                 << format_double(observed.values[idx] * report.temp_ratio) << '\n';
        }
    }

    std::cout << format_double(report.S) << "\n";
    return kExitOk;
}

struct FaultsimArgs {
    std::string series_path;
    std::string plan_path;
    std::string out_path;
};

int run_faultsim(const FaultsimArgs& args) {
    const FaultPlan plan = read_fault_plan_json(args.plan_path);
    // Fault plans carry no zone; grid arithmetic below is zone-independent.
    const HourlySeries series = read_series_csv(args.series_path, TimeZone::utc());
    const HourlySeries faulted = apply_fault_plan(series, plan);
    write_series_csv(faulted, args.out_path);
    std::cout << faulted.present_count() << "\n";
    return kExitOk;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"Hourly consumption baselines and temperature-adjusted energy savings"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "enerbase 0.1.0");

    IngestArgs ingest_args;
    CLI::App* ingest = app.add_subcommand(
        "ingest", "Parse, clean, and aggregate raw meter readings into hourly artifacts");
    ingest->add_option("--readings", ingest_args.readings, "Readings file(s)")
        ->required()
        ->check(CLI::ExistingFile);
    ingest->add_option("--kind", ingest_args.kind, "Meter kind: interval | cumulative")
        ->check(CLI::IsMember({"interval", "cumulative"}));
    ingest->add_option("--format", ingest_args.format, "File format: csv | jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    ingest->add_option("--config", ingest_args.config_path, "Household config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    ingest->add_option("--out", ingest_args.out_dir, "Output directory for artifacts")->required();
    ingest->add_option("--jobs", ingest_args.jobs,
                       "Worker threads for multi-file batches (results match sequential runs)");

    BuildBaselineArgs bb_args;
    CLI::App* build = app.add_subcommand(
        "build-baseline", "Fill monthly totals from the reference profile and synthesize "
                          "the hourly baseline year");
    build->add_option("--series", bb_args.series_path, "Cleaned hourly series CSV (from ingest)")
        ->required()
        ->check(CLI::ExistingFile);
    build->add_option("--reference", bb_args.reference_path, "Country reference profile JSON")
        ->required()
        ->check(CLI::ExistingFile);
    build->add_option("--config", bb_args.config_path, "Household config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    build->add_option("--out", bb_args.out_dir, "Output directory for artifacts")->required();
    build->add_flag("--stochastic", bb_args.stochastic,
                    "Resample hours from the observed per-slot distributions");
    build->add_option("--seed", bb_args.seed, "Seed for --stochastic");

    SavingsArgs sv_args;
    CLI::App* savings = app.add_subcommand(
        "savings", "Compare observed consumption against the baseline over a window");
    savings->add_option("--baseline", sv_args.baseline_path, "Baseline CSV (from build-baseline)")
        ->required()
        ->check(CLI::ExistingFile);
    savings->add_option("--observed", sv_args.observed_path, "Observed hourly series CSV")
        ->required()
        ->check(CLI::ExistingFile);
    savings->add_option("--weather-obs", sv_args.weather_obs_path,
                        "Weather CSV covering the window")
        ->check(CLI::ExistingFile);
    savings->add_option("--weather-base", sv_args.weather_base_path,
                        "Weather CSV for the baseline-equivalent period")
        ->check(CLI::ExistingFile);
    savings->add_option("--window", sv_args.window, "Window bounds: START END (epoch seconds)")
        ->required()
        ->expected(2);
    savings->add_option("--config", sv_args.config_path, "Household config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    savings->add_option("--out", sv_args.out_path, "Savings report JSON path");
    savings->add_flag("--no-temp-adjust", sv_args.no_temp_adjust,
                      "Skip the temperature adjustment (ratio fixed at 1)");
    savings->add_option("--emit-plot-data", sv_args.plot_path,
                        "Write timestamp,baseline,observed,adjusted CSV for plotting");

    FaultsimArgs fs_args;
    CLI::App* faultsim =
        app.add_subcommand("faultsim", "Replay a fault plan against a clean hourly series");
    faultsim->add_option("--series", fs_args.series_path, "Input hourly series CSV")
        ->required()
        ->check(CLI::ExistingFile);
    faultsim->add_option("--plan", fs_args.plan_path, "Fault plan JSON")
        ->required()
        ->check(CLI::ExistingFile);
    faultsim->add_option("--out", fs_args.out_path, "Output series CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        app.exit(e);
        return kExitInputError;
    }

    if (ingest->parsed()) return run_ingest(ingest_args);
    if (build->parsed()) return run_build_baseline(bb_args);
    if (savings->parsed()) {
        if (!sv_args.no_temp_adjust &&
            (sv_args.weather_obs_path.empty() || sv_args.weather_base_path.empty()))
            throw ValidationError(
                "--weather-obs and --weather-base are required unless --no-temp-adjust is given");
        return run_savings(sv_args);
    }
    if (faultsim->parsed()) return run_faultsim(fs_args);
    return kExitInputError;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const InsufficientDataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInsufficientData;
    } catch (const AdjustmentUndefinedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cerr << "hint: pass --no-temp-adjust to skip the temperature adjustment\n";
        return kExitAdjustmentUndefined;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

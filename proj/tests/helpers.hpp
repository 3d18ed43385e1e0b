#pragma once

#include "enerbase/rng.hpp"
#include "enerbase/timeseries.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

namespace testsupport {

/// Self-cleaning unique directory under the system temp path.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("enerbase_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

/// 2020-05-01 00:00 Europe/Athens (EEST, UTC+3).
inline constexpr enerbase::Timestamp kAthensMay2020 = 1588280400;

/// Fully present series of `hours` cells starting at an Athens-aligned hour.
/// Values follow a deterministic daily/weekday shape so slots differ.
inline enerbase::HourlySeries make_athens_series(std::size_t hours,
                                                 enerbase::Timestamp start = kAthensMay2020) {
    enerbase::HourlySeries s;
    s.start = start;
    s.timezone = "Europe/Athens";
    s.values.resize(hours);
    for (std::size_t i = 0; i < hours; ++i) {
        const std::size_t hour_of_day = i % 24;
        const std::size_t day = i / 24;
        s.values[i] = 0.2 + 0.1 * static_cast<double>(hour_of_day % 5) +
                      0.05 * static_cast<double>(day % 7);
    }
    return s;
}

/// Deterministic pseudo-random doubles in [lo, hi) for property tests.
class ValueGen {
public:
    explicit ValueGen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) {
        const double u = static_cast<double>(rng_.next() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }

    std::uint64_t index(std::uint64_t n) { return rng_.bounded(n); }

private:
    enerbase::SplitMix64 rng_;
};

struct CommandResult {
    int exit_code = -1;
    std::string stdout_text;
};

/// Runs a shell command capturing stdout; stderr goes to a file appended to
/// the command so tests can assert on diagnostics.
inline CommandResult run_command(const std::string& command) {
    CommandResult res;
    FILE* pipe = ::popen(command.c_str(), "r");
    if (!pipe) return res;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = ::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        res.stdout_text.append(buf.data(), n);
    const int status = ::pclose(pipe);
    if (WIFEXITED(status)) res.exit_code = WEXITSTATUS(status);
    return res;
}

} // namespace testsupport

#include "enerbase/timezone.hpp"

#include "enerbase/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdlib>
#include <cstring>
#include <fstream>

namespace enerbase {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) {
    return a - floor_div(a, b) * b;
}

} // namespace

std::int64_t days_from_civil(int year, int month, int day) {
    // Howard Hinnant's chrono-compatible civil algorithms.
    year -= month <= 2;
    const std::int64_t era = floor_div(year, 400);
    const unsigned yoe = static_cast<unsigned>(year - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(month + (month > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(day) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = floor_div(z, 146097);
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    return CivilDate{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

int weekday_from_days(std::int64_t days_since_epoch) {
    // 1970-01-01 was a Thursday; 0 = Monday.
    return static_cast<int>(floor_mod(days_since_epoch + 3, 7));
}

bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
    static constexpr std::array<int, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                    31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap_year(year)) return 29;
    return lengths[static_cast<std::size_t>(month - 1)];
}

CivilTime civil_from_local_seconds(std::int64_t local_seconds) {
    const std::int64_t days = floor_div(local_seconds, kSecondsPerDay);
    const std::int64_t sod = local_seconds - days * kSecondsPerDay;
    const CivilDate date = civil_from_days(days);
    CivilTime out;
    out.year = date.year;
    out.month = date.month;
    out.day = date.day;
    out.hour = static_cast<int>(sod / 3600);
    out.minute = static_cast<int>((sod % 3600) / 60);
    out.second = static_cast<int>(sod % 60);
    out.weekday = weekday_from_days(days);
    return out;
}

namespace detail {

std::int64_t PosixDayRule::local_seconds_in_year(int year) const {
    std::int64_t day_index = 0; // days since epoch of the rule date
    switch (kind) {
    case Kind::MonthWeekDay: {
        const std::int64_t first = days_from_civil(year, month, 1);
        // POSIX weekday: 0 = Sunday. days_from_civil(1970,1,1) = 0 = Thursday.
        const int first_wd_sun0 = static_cast<int>(floor_mod(first + 4, 7));
        int dom = 1 + static_cast<int>(floor_mod(weekday - first_wd_sun0, 7)) + (week - 1) * 7;
        while (dom > days_in_month(year, month)) dom -= 7;
        day_index = days_from_civil(year, month, dom);
        break;
    }
    case Kind::JulianNoLeap: {
        // Jn: n in 1..365, February 29 is never counted.
        int n = day;
        int m = 1;
        while (true) {
            const int len = (m == 2) ? 28 : days_in_month(1970, m);
            if (n <= len) break;
            n -= len;
            ++m;
        }
        day_index = days_from_civil(year, m, n);
        break;
    }
    case Kind::JulianZeroBased:
        day_index = days_from_civil(year, 1, 1) + day;
        break;
    }
    return day_index * kSecondsPerDay + time_of_day;
}

std::int32_t PosixTzRule::offset_at(std::int64_t utc) const {
    if (!has_dst) return std_offset;
    const int year = civil_from_days(floor_div(utc + std_offset, kSecondsPerDay)).year;
    // Start time is stated in standard time, end time in DST.
    const std::int64_t start = dst_start.local_seconds_in_year(year) - std_offset;
    const std::int64_t end = dst_end.local_seconds_in_year(year) - dst_offset;
    bool dst;
    if (start <= end) {
        dst = utc >= start && utc < end;
    } else {
        // Southern hemisphere: DST spans the year boundary.
        dst = utc < end || utc >= start;
    }
    return dst ? dst_offset : std_offset;
}

namespace {

// Parses [+|-]hh[:mm[:ss]]; hours may exceed 24 in rule times.
bool parse_posix_time(const std::string& s, std::size_t& pos, std::int64_t& seconds,
                      bool allow_negative) {
    std::int64_t sign = 1;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        if (s[pos] == '-') {
            if (!allow_negative) return false;
            sign = -1;
        }
        ++pos;
    }
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) return false;
    std::int64_t parts[3] = {0, 0, 0};
    for (int i = 0; i < 3; ++i) {
        std::int64_t v = 0;
        std::size_t digits = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])) && digits < 3) {
            v = v * 10 + (s[pos] - '0');
            ++pos;
            ++digits;
        }
        if (digits == 0) return false;
        parts[i] = v;
        if (pos >= s.size() || s[pos] != ':' || i == 2) break;
        ++pos;
    }
    seconds = sign * (parts[0] * 3600 + parts[1] * 60 + parts[2]);
    return true;
}

bool skip_designation(const std::string& s, std::size_t& pos) {
    if (pos < s.size() && s[pos] == '<') {
        const std::size_t close = s.find('>', pos);
        if (close == std::string::npos) return false;
        pos = close + 1;
        return true;
    }
    std::size_t start = pos;
    while (pos < s.size() && (std::isalpha(static_cast<unsigned char>(s[pos])))) ++pos;
    return pos - start >= 3;
}

bool parse_day_rule(const std::string& s, std::size_t& pos, PosixDayRule& rule) {
    if (pos >= s.size()) return false;
    if (s[pos] == 'M') {
        ++pos;
        std::int64_t m = 0, w = 0, d = 0;
        if (!parse_posix_time(s, pos, m, false)) return false;
        m /= 3600;
        if (pos >= s.size() || s[pos] != '.') return false;
        ++pos;
        if (!parse_posix_time(s, pos, w, false)) return false;
        w /= 3600;
        if (pos >= s.size() || s[pos] != '.') return false;
        ++pos;
        if (!parse_posix_time(s, pos, d, false)) return false;
        d /= 3600;
        if (m < 1 || m > 12 || w < 1 || w > 5 || d < 0 || d > 6) return false;
        rule.kind = PosixDayRule::Kind::MonthWeekDay;
        rule.month = static_cast<int>(m);
        rule.week = static_cast<int>(w);
        rule.weekday = static_cast<int>(d);
    } else if (s[pos] == 'J') {
        ++pos;
        std::int64_t n = 0;
        if (!parse_posix_time(s, pos, n, false)) return false;
        n /= 3600;
        if (n < 1 || n > 365) return false;
        rule.kind = PosixDayRule::Kind::JulianNoLeap;
        rule.day = static_cast<int>(n);
    } else {
        std::int64_t n = 0;
        if (!parse_posix_time(s, pos, n, false)) return false;
        n /= 3600;
        if (n < 0 || n > 365) return false;
        rule.kind = PosixDayRule::Kind::JulianZeroBased;
        rule.day = static_cast<int>(n);
    }
    rule.time_of_day = 7200;
    if (pos < s.size() && s[pos] == '/') {
        ++pos;
        std::int64_t t = 0;
        if (!parse_posix_time(s, pos, t, true)) return false;
        rule.time_of_day = static_cast<std::int32_t>(t);
    }
    return true;
}

} // namespace

std::optional<PosixTzRule> parse_posix_tz(const std::string& spec) {
    if (spec.empty() || spec[0] == ':') return std::nullopt;
    PosixTzRule rule;
    std::size_t pos = 0;
    if (!skip_designation(spec, pos)) return std::nullopt;
    std::int64_t std_west = 0;
    if (!parse_posix_time(spec, pos, std_west, true)) return std::nullopt;
    rule.std_offset = static_cast<std::int32_t>(-std_west); // POSIX offsets are west-positive
    if (pos == spec.size()) return rule;                    // fixed offset, no DST
    if (!skip_designation(spec, pos)) return std::nullopt;
    if (pos < spec.size() && spec[pos] != ',') {
        std::int64_t dst_west = 0;
        if (!parse_posix_time(spec, pos, dst_west, true)) return std::nullopt;
        rule.dst_offset = static_cast<std::int32_t>(-dst_west);
    } else {
        rule.dst_offset = rule.std_offset + 3600;
    }
    if (pos >= spec.size() || spec[pos] != ',') return std::nullopt;
    ++pos;
    if (!parse_day_rule(spec, pos, rule.dst_start)) return std::nullopt;
    if (pos >= spec.size() || spec[pos] != ',') return std::nullopt;
    ++pos;
    if (!parse_day_rule(spec, pos, rule.dst_end)) return std::nullopt;
    if (pos != spec.size()) return std::nullopt;
    rule.has_dst = true;
    return rule;
}

} // namespace detail

namespace {

class TzifCursor {
public:
    TzifCursor(const unsigned char* data, std::size_t size) : data_(data), size_(size) {}

    void require(std::size_t n) const {
        if (pos_ + n > size_) throw ConfigError("truncated TZif data");
    }

    std::uint8_t u8() {
        require(1);
        return data_[pos_++];
    }

    std::uint32_t u32be() {
        require(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_++];
        return v;
    }

    std::int32_t i32be() { return static_cast<std::int32_t>(u32be()); }

    std::int64_t i64be() {
        require(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v = (v << 8) | data_[pos_++];
        return static_cast<std::int64_t>(v);
    }

    void skip(std::size_t n) {
        require(n);
        pos_ += n;
    }

    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return size_ - pos_; }
    const unsigned char* at() const { return data_ + pos_; }

private:
    const unsigned char* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

struct TzifHeader {
    char version = '\0';
    std::uint32_t isutcnt = 0, isstdcnt = 0, leapcnt = 0, timecnt = 0, typecnt = 0, charcnt = 0;
};

TzifHeader read_header(TzifCursor& cur) {
    cur.require(4);
    if (std::memcmp(cur.at(), "TZif", 4) != 0) throw ConfigError("not a TZif file");
    cur.skip(4);
    TzifHeader h;
    h.version = static_cast<char>(cur.u8());
    cur.skip(15);
    h.isutcnt = cur.u32be();
    h.isstdcnt = cur.u32be();
    h.leapcnt = cur.u32be();
    h.timecnt = cur.u32be();
    h.typecnt = cur.u32be();
    h.charcnt = cur.u32be();
    if (h.typecnt == 0 && h.timecnt > 0) throw ConfigError("invalid TZif: no time types");
    return h;
}

struct TtInfo {
    std::int32_t utoff = 0;
    bool isdst = false;
};

struct ParsedBlock {
    std::vector<std::int64_t> transitions;
    std::vector<std::uint8_t> types;
    std::vector<TtInfo> infos;
};

ParsedBlock read_block(TzifCursor& cur, const TzifHeader& h, bool wide) {
    ParsedBlock b;
    b.transitions.reserve(h.timecnt);
    for (std::uint32_t i = 0; i < h.timecnt; ++i)
        b.transitions.push_back(wide ? cur.i64be() : static_cast<std::int64_t>(cur.i32be()));
    b.types.reserve(h.timecnt);
    for (std::uint32_t i = 0; i < h.timecnt; ++i) {
        const std::uint8_t t = cur.u8();
        if (t >= h.typecnt) throw ConfigError("invalid TZif: transition type out of range");
        b.types.push_back(t);
    }
    b.infos.reserve(h.typecnt);
    for (std::uint32_t i = 0; i < h.typecnt; ++i) {
        TtInfo info;
        info.utoff = cur.i32be();
        info.isdst = cur.u8() != 0;
        cur.skip(1); // designation index
        b.infos.push_back(info);
    }
    cur.skip(h.charcnt);
    cur.skip(static_cast<std::size_t>(h.leapcnt) * (wide ? 12 : 8));
    cur.skip(h.isstdcnt);
    cur.skip(h.isutcnt);
    return b;
}

bool valid_zone_name(const std::string& name) {
    if (name.empty() || name.size() > 255 || name.front() == '/' || name.back() == '/')
        return false;
    if (name.find("..") != std::string::npos) return false;
    for (char c : name) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '/' || c == '_' || c == '-' ||
              c == '+' || c == '.'))
            return false;
    }
    return true;
}

} // namespace

TimeZone TimeZone::load(const std::string& name) {
    if (!valid_zone_name(name)) throw ConfigError("invalid time zone name \"" + name + "\"");
    if (name == "UTC") return utc();

    const char* env = std::getenv("TZDIR");
    const std::string dir = env && *env ? env : "/usr/share/zoneinfo";
    const std::string path = dir + "/" + name;

    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("unknown time zone \"" + name + "\"");
    std::vector<unsigned char> raw((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (!in.good() && !in.eof()) throw ConfigError("failed to read time zone \"" + name + "\"");

    TzifCursor cur(raw.data(), raw.size());
    const TzifHeader h1 = read_header(cur);
    ParsedBlock block = read_block(cur, h1, /*wide=*/false);
    std::string footer;
    if (h1.version >= '2') {
        const TzifHeader h2 = read_header(cur);
        block = read_block(cur, h2, /*wide=*/true);
        // Footer: '\n' TZ-string '\n'
        if (cur.remaining() >= 2) {
            cur.skip(1);
            const unsigned char* start = cur.at();
            std::size_t len = 0;
            while (len < cur.remaining() && start[len] != '\n') ++len;
            footer.assign(reinterpret_cast<const char*>(start), len);
        }
    }

    TimeZone tz;
    tz.name_ = name;
    tz.transitions_ = std::move(block.transitions);
    tz.offsets_.reserve(tz.transitions_.size());
    for (std::uint8_t t : block.types) tz.offsets_.push_back(block.infos[t].utoff);
    if (!block.infos.empty()) {
        tz.initial_offset_ = block.infos.front().utoff;
        for (const TtInfo& info : block.infos) {
            if (!info.isdst) {
                tz.initial_offset_ = info.utoff;
                break;
            }
        }
    }
    if (!footer.empty()) tz.footer_ = detail::parse_posix_tz(footer);
    return tz;
}

const TimeZone& TimeZone::utc() {
    static const TimeZone zone = [] {
        TimeZone tz;
        tz.name_ = "UTC";
        return tz;
    }();
    return zone;
}

std::int32_t TimeZone::offset_at(Timestamp utc) const {
    if (transitions_.empty()) {
        if (footer_) return footer_->offset_at(utc);
        return initial_offset_;
    }
    if (utc < transitions_.front()) return initial_offset_;
    if (utc >= transitions_.back() && footer_) return footer_->offset_at(utc);
    const auto it = std::upper_bound(transitions_.begin(), transitions_.end(), utc);
    const std::size_t idx = static_cast<std::size_t>(it - transitions_.begin()) - 1;
    return offsets_[idx];
}

CivilTime TimeZone::local_time(Timestamp utc) const {
    return civil_from_local_seconds(utc + offset_at(utc));
}

Timestamp TimeZone::to_utc(const CivilTime& local) const {
    const std::int64_t L = local.local_seconds();

    // Candidate offsets: the pieces around L plus footer offsets.
    std::vector<std::int32_t> candidates;
    candidates.push_back(initial_offset_);
    if (!transitions_.empty()) {
        const auto it = std::upper_bound(transitions_.begin(), transitions_.end(), L);
        const std::int64_t j = (it - transitions_.begin()) - 1;
        for (std::int64_t k = j - 2; k <= j + 2; ++k) {
            if (k >= 0 && k < static_cast<std::int64_t>(offsets_.size()))
                candidates.push_back(offsets_[static_cast<std::size_t>(k)]);
        }
    }
    if (footer_) {
        candidates.push_back(footer_->std_offset);
        if (footer_->has_dst) candidates.push_back(footer_->dst_offset);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    bool found = false;
    Timestamp best = 0;
    for (std::int32_t off : candidates) {
        const Timestamp t = L - off;
        if (offset_at(t) == off) {
            if (!found || t < best) best = t;
            found = true;
        }
    }
    if (found) return best;

    // The local time fell in a forward-transition gap: resolve to the
    // transition instant (first valid instant at or after the request).
    if (!transitions_.empty()) {
        const auto it = std::upper_bound(transitions_.begin(), transitions_.end(), L);
        const std::int64_t j = (it - transitions_.begin());
        for (std::int64_t k = std::max<std::int64_t>(0, j - 3);
             k < std::min<std::int64_t>(static_cast<std::int64_t>(transitions_.size()), j + 3);
             ++k) {
            const Timestamp tr = transitions_[static_cast<std::size_t>(k)];
            const std::int32_t before = (k == 0) ? initial_offset_
                                                 : offsets_[static_cast<std::size_t>(k - 1)];
            const std::int32_t after = offsets_[static_cast<std::size_t>(k)];
            if (before < after && tr + before <= L && L < tr + after) return tr;
        }
    }
    if (footer_ && footer_->has_dst) {
        const int year = civil_from_days(floor_div(L, kSecondsPerDay)).year;
        for (int y = year - 1; y <= year + 1; ++y) {
            const Timestamp start =
                footer_->dst_start.local_seconds_in_year(y) - footer_->std_offset;
            if (start + footer_->std_offset <= L && L < start + footer_->dst_offset) return start;
        }
    }
    // Unreachable for well-formed zones; degrade to the naive inverse.
    return L - offset_at(L);
}

bool TimeZone::is_hour_aligned(Timestamp utc) const {
    return floor_mod(utc + offset_at(utc), kSecondsPerHour) == 0;
}

Timestamp TimeZone::floor_hour(Timestamp utc) const {
    return utc - floor_mod(utc + offset_at(utc), kSecondsPerHour);
}

} // namespace enerbase

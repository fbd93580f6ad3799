#include "rmode/clock_time.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "rmode/errors.hpp"

namespace rmode {

double wrap_tod(double seconds) {
    double w = std::fmod(seconds, kSecondsPerDay);
    if (w < 0.0) w += kSecondsPerDay;
    return w;
}

ClockTime ClockTime::parse(const std::string& text) {
    int h = 0, m = 0, s = 0;
    char extra = 0;
    int fields = std::sscanf(text.c_str(), "%d:%d:%d%c", &h, &m, &s, &extra);
    if (fields == 4 || fields < 2)
        throw FormatError("bad clock time '" + text + "' (expected HH:MM or HH:MM:SS)");
    if (fields == 2) s = 0;
    bool end_of_day = (h == 24 && m == 0 && s == 0);
    if (!end_of_day && (h < 0 || h > 23 || m < 0 || m > 59 || s < 0 || s > 59))
        throw FormatError("clock time out of range: '" + text + "'");
    return ClockTime{h * 3600 + m * 60 + s};
}

std::string ClockTime::str() const {
    char buf[16];
    int s = seconds;
    std::snprintf(buf, sizeof buf, "%02d:%02d:%02d", s / 3600, (s / 60) % 60, s % 60);
    return buf;
}

std::int64_t day_serial_from_date(const std::string& iso_date) {
    int y = 0, mo = 0, d = 0;
    char extra = 0;
    if (std::sscanf(iso_date.c_str(), "%d-%d-%d%c", &y, &mo, &d, &extra) != 3)
        throw FormatError("bad date '" + iso_date + "' (expected YYYY-MM-DD)");
    using namespace std::chrono;
    year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw FormatError("invalid calendar date '" + iso_date + "'");
    return sys_days{ymd}.time_since_epoch().count();
}

std::string date_from_day_serial(std::int64_t serial) {
    using namespace std::chrono;
    year_month_day ymd{sys_days{days{serial}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                  unsigned(ymd.day()));
    return buf;
}

int parse_utc_offset(const std::string& text) {
    if (text == "Z" || text == "z") return 0;
    int h = 0, m = 0;
    char sign = 0, extra = 0;
    if (std::sscanf(text.c_str(), "%c%d:%d%c", &sign, &h, &m, &extra) != 3 ||
        (sign != '+' && sign != '-') || h < 0 || h > 14 || m < 0 || m > 59)
        throw FormatError("bad UTC offset '" + text + "' (expected +HH:MM or -HH:MM)");
    int minutes = h * 60 + m;
    return sign == '-' ? -minutes : minutes;
}

std::string format_utc_offset(int minutes) {
    char buf[16];
    int a = std::abs(minutes);
    std::snprintf(buf, sizeof buf, "%c%02d:%02d", minutes < 0 ? '-' : '+', a / 60, a % 60);
    return buf;
}

LocalTimestamp LocalTimestamp::parse(const std::string& text) {
    // YYYY-MM-DDTHH:MM:SS[.fff][+HH:MM|-HH:MM|Z]
    auto t_pos = text.find('T');
    if (t_pos == std::string::npos) t_pos = text.find(' ');
    if (t_pos == std::string::npos)
        throw FormatError("bad timestamp '" + text + "' (expected ISO-8601 local with offset)");
    std::string date = text.substr(0, t_pos);
    std::string rest = text.substr(t_pos + 1);

    // Offset starts at the last '+', or a '-' after the time began, or 'Z'.
    std::size_t off_pos = std::string::npos;
    for (std::size_t i = 0; i < rest.size(); ++i) {
        char c = rest[i];
        if (c == '+' || c == 'Z' || c == 'z' || (c == '-' && i > 0)) {
            off_pos = i;
            break;
        }
    }
    if (off_pos == std::string::npos)
        throw FormatError("timestamp '" + text + "' is missing a UTC offset");

    std::string time_part = rest.substr(0, off_pos);
    std::string off_part = rest.substr(off_pos);

    int h = 0, mi = 0;
    double sec = 0.0;
    char extra = 0;
    if (std::sscanf(time_part.c_str(), "%d:%d:%lf%c", &h, &mi, &sec, &extra) != 3 || h < 0 ||
        h > 23 || mi < 0 || mi > 59 || sec < 0.0 || sec >= 60.0)
        throw FormatError("bad time of day in timestamp '" + text + "'");

    LocalTimestamp ts;
    ts.day_serial = day_serial_from_date(date);
    ts.tod_s = h * 3600.0 + mi * 60.0 + sec;
    ts.utc_offset_min = parse_utc_offset(off_part);
    return ts;
}

std::string LocalTimestamp::str() const {
    int h = static_cast<int>(tod_s / 3600.0);
    int mi = static_cast<int>(tod_s / 60.0) % 60;
    double sec = tod_s - h * 3600.0 - mi * 60.0;
    // Guard against 59.9995 rounding up to 60.000 in the print.
    long ms = std::lround(sec * 1000.0);
    if (ms >= 60000) ms = 59999;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02ld.%03ld%s", date_from_day_serial(day_serial).c_str(),
                  h, mi, ms / 1000, ms % 1000, format_utc_offset(utc_offset_min).c_str());
    return buf;
}

} // namespace rmode

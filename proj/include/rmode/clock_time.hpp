#ifndef RMODE_CLOCK_TIME_HPP
#define RMODE_CLOCK_TIME_HPP

#include <cstdint>
#include <string>

namespace rmode {

inline constexpr double kSecondsPerDay = 86400.0;

// Wraps any offset in seconds into [0, 86400).
double wrap_tod(double seconds);

// A local wall-clock time of day, parsed from "HH:MM" or "HH:MM:SS".
// "24:00" is accepted as the end-of-day bound.
struct ClockTime {
    int seconds = 0; // since local midnight, [0, 86400]

    static ClockTime parse(const std::string& text); // throws FormatError
    std::string str() const;

    friend bool operator==(const ClockTime&, const ClockTime&) = default;
};

// A local calendar timestamp with an explicit UTC offset, as used by the
// field-log CSV schema ("2022-04-21T13:25:00.500+09:00"). No DST logic:
// the offset in the file is taken at face value.
struct LocalTimestamp {
    std::int64_t day_serial = 0;  // days since 1970-01-01 (local calendar date)
    double tod_s = 0.0;           // seconds since local midnight, [0, 86400)
    int utc_offset_min = 0;

    static LocalTimestamp parse(const std::string& text); // throws FormatError
    std::string str() const;                              // millisecond precision

    // Seconds on the local timeline (day_serial * 86400 + tod_s). Ordering
    // under a constant offset matches instant ordering.
    double local_serial_s() const { return static_cast<double>(day_serial) * kSecondsPerDay + tod_s; }
};

// Days since 1970-01-01 for a calendar date; throws FormatError on "YYYY-MM-DD" parse failure.
std::int64_t day_serial_from_date(const std::string& iso_date);
std::string date_from_day_serial(std::int64_t serial);

// "+09:00" / "-05:30" / "Z" -> minutes; throws FormatError.
int parse_utc_offset(const std::string& text);
std::string format_utc_offset(int minutes);

} // namespace rmode

#endif

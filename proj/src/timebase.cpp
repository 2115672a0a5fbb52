#include "gridcast/timebase.hpp"

#include <cctype>
#include <chrono>
#include <cstdio>

#include "gridcast/errors.hpp"

namespace gridcast {

namespace {

bool all_digits(const std::string& s, std::size_t from, std::size_t count) {
    if (from + count > s.size()) return false;
    for (std::size_t i = from; i < from + count; ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

int to_int(const std::string& s, std::size_t from, std::size_t count) {
    int v = 0;
    for (std::size_t i = from; i < from + count; ++i) v = v * 10 + (s[i] - '0');
    return v;
}

}  // namespace

Day make_day(int year, int month, int day) {
    using namespace std::chrono;
    year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                       std::chrono::day{static_cast<unsigned>(day)}};
    if (!ymd.ok()) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "invalid date %04d-%02d-%02d", year, month, day);
        throw InputError(buf);
    }
    return sys_days{ymd}.time_since_epoch().count();
}

std::string format_day(Day d) {
    using namespace std::chrono;
    year_month_day ymd{sys_days{days{d}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string format_hour(Hour h) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%s %02d:00", format_day(day_of(h)).c_str(), hour_of_day(h) - 1);
    return buf;
}

Day parse_day(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !all_digits(text, 0, 4) ||
        !all_digits(text, 5, 2) || !all_digits(text, 8, 2))
        throw InputError("invalid date '" + text + "', expected YYYY-MM-DD");
    return make_day(to_int(text, 0, 4), to_int(text, 5, 2), to_int(text, 8, 2));
}

Hour parse_hour(const std::string& text) {
    // Date part, then a ' ' or 'T' separator, then HH with optional :MM[:SS].
    if (text.size() < 13 || (text[10] != ' ' && text[10] != 'T'))
        throw InputError("invalid timestamp '" + text + "'");
    Day d = parse_day(text.substr(0, 10));
    if (!all_digits(text, 11, 2)) throw InputError("invalid timestamp '" + text + "'");
    int hh = to_int(text, 11, 2);
    if (hh > 23) throw InputError("invalid timestamp '" + text + "': hour out of range");
    std::size_t pos = 13;
    for (int part = 0; part < 2 && pos != text.size(); ++part) {
        if (text[pos] != ':' || !all_digits(text, pos + 1, 2))
            throw InputError("invalid timestamp '" + text + "'");
        if (to_int(text, pos + 1, 2) != 0)
            throw InputError("invalid timestamp '" + text + "': sub-hour part must be zero");
        pos += 3;
    }
    if (pos != text.size()) throw InputError("invalid timestamp '" + text + "'");
    return day_start(d) + hh;
}

int year_of(Day d) {
    using namespace std::chrono;
    return static_cast<int>(year_month_day{sys_days{days{d}}}.year());
}

}  // namespace gridcast

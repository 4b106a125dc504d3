#include "didchain/common/clock.hpp"

#include "didchain/common/error.hpp"

#include <charconv>
#include <cstdio>

namespace didchain {
namespace {

using namespace std::chrono;

int parse_field(std::string_view text, std::size_t pos, std::size_t len) {
  int value = 0;
  auto field = text.substr(pos, len);
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::MalformedRecord, "bad timestamp: " + std::string(text));
  }
  return value;
}

}  // namespace

std::string Timestamp::iso8601() const {
  auto tp = sys_time<milliseconds>(milliseconds(unix_ms));
  auto day = floor<days>(tp);
  year_month_day ymd{day};
  hh_mm_ss<milliseconds> hms{tp - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02lld.%03lldZ",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<long>(hms.hours().count()),
                static_cast<long>(hms.minutes().count()),
                static_cast<long long>(hms.seconds().count()),
                static_cast<long long>(hms.subseconds().count()));
  return buf;
}

Timestamp Timestamp::parse(std::string_view text) {
  // 2024-03-05T10:00:00.000Z
  if (text.size() != 24 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
      text[13] != ':' || text[16] != ':' || text[19] != '.' || text[23] != 'Z') {
    throw Error(ErrorCode::MalformedRecord, "bad timestamp: " + std::string(text));
  }
  year_month_day ymd{year{parse_field(text, 0, 4)},
                     month{static_cast<unsigned>(parse_field(text, 5, 2))},
                     day{static_cast<unsigned>(parse_field(text, 8, 2))}};
  int hh = parse_field(text, 11, 2);
  int mm = parse_field(text, 14, 2);
  int ss = parse_field(text, 17, 2);
  int ms = parse_field(text, 20, 3);
  if (!ymd.ok() || hh > 23 || mm > 59 || ss > 59) {
    throw Error(ErrorCode::MalformedRecord, "bad timestamp: " + std::string(text));
  }
  auto tp = sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss} + milliseconds{ms};
  return Timestamp{tp.time_since_epoch().count()};
}

Timestamp SystemClock::now() {
  auto now = time_point_cast<milliseconds>(system_clock::now());
  return Timestamp{now.time_since_epoch().count()};
}

std::shared_ptr<Clock> make_system_clock() { return std::make_shared<SystemClock>(); }

}  // namespace didchain

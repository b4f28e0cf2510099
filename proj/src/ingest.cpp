// Copyright 2026 The persmove Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "persmove/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <string>

#include "persmove/error.hpp"

namespace persmove::ingest {

namespace {

__extension__ typedef __int128 Wide;

constexpr int kMaxScale = 18;

Wide pow10(int k) {
  Wide r = 1;
  for (int i = 0; i < k; ++i) r *= 10;
  return r;
}

// round-half-even(num / den) for den > 0.
Ticks round_half_even(Wide num, Wide den) {
  Wide q = num / den;
  Wide r = num % den;
  if (r < 0) {
    r += den;
    q -= 1;
  }
  const Wide twice = 2 * r;
  if (twice > den || (twice == den && (q % 2 != 0))) q += 1;
  if (q > std::numeric_limits<Ticks>::max() || q < std::numeric_limits<Ticks>::min()) {
    throw InputError("quantized price overflows the tick range");
  }
  return static_cast<Ticks>(q);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

template <class Int>
bool parse_int(std::string_view s, Int& out) {
  if (s.empty()) return false;
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, out);
  return res.ec == std::errc{} && res.ptr == end;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2 ? 1 : 0;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool leap(std::int64_t y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

struct Civil {
  std::int64_t year;
  unsigned month;
  unsigned day;
};

Civil parse_civil_date(std::string_view s, std::string_view whole) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') {
    throw InputError("bad date '" + std::string(whole) + "', expected YYYY-MM-DD");
  }
  std::int64_t y = 0;
  unsigned m = 0;
  unsigned d = 0;
  if (!all_digits(s.substr(0, 4)) || !parse_int(s.substr(0, 4), y) || !parse_int(s.substr(5, 2), m) ||
      !parse_int(s.substr(8, 2), d)) {
    throw InputError("bad date '" + std::string(whole) + "'");
  }
  static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m < 1 || m > 12) throw InputError("bad month in '" + std::string(whole) + "'");
  const unsigned dim = kDays[m - 1] + (m == 2 && leap(y) ? 1 : 0);
  if (d < 1 || d > dim) throw InputError("bad day in '" + std::string(whole) + "'");
  return {y, m, d};
}

bool has_digit(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// A header row is recognised by a time field without any digit.
bool is_header(const std::vector<std::string_view>& fields, const ColumnMapping& mapping) {
  for (std::size_t i = 0; i < mapping.columns.size() && i < fields.size(); ++i) {
    if (mapping.columns[i] == Column::time) return !has_digit(fields[i]);
  }
  return false;
}

}  // namespace

Decimal Decimal::parse(std::string_view text) {
  const std::string_view s = trim(text);
  std::string_view body = s;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const std::size_t dot = body.find('.');
  const std::string_view whole = body.substr(0, dot);
  const std::string_view frac = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
  if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
      (!frac.empty() && !all_digits(frac)) || (dot != std::string_view::npos && frac.empty() && whole.empty())) {
    throw InputError("not a decimal number: '" + std::string(text) + "'");
  }
  if (frac.size() > static_cast<std::size_t>(kMaxScale)) {
    throw InputError("too many decimal places in '" + std::string(text) + "'");
  }
  Wide units = 0;
  for (const char c : whole) {
    units = units * 10 + (c - '0');
    if (units > std::numeric_limits<std::int64_t>::max()) throw InputError("decimal out of range: '" + std::string(text) + "'");
  }
  for (const char c : frac) {
    units = units * 10 + (c - '0');
    if (units > std::numeric_limits<std::int64_t>::max()) throw InputError("decimal out of range: '" + std::string(text) + "'");
  }
  Decimal d;
  d.units = static_cast<std::int64_t>(negative ? -units : units);
  d.scale = static_cast<int>(frac.size());
  return d;
}

std::string Decimal::to_string() const {
  Wide magnitude = units < 0 ? -static_cast<Wide>(units) : static_cast<Wide>(units);
  std::string digits;
  do {
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(magnitude % 10)));
    magnitude /= 10;
  } while (magnitude > 0);
  if (scale > 0) {
    if (digits.size() <= static_cast<std::size_t>(scale)) {
      digits.insert(0, static_cast<std::size_t>(scale) - digits.size() + 1, '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(scale), 1, '.');
  }
  return units < 0 ? "-" + digits : digits;
}

bool operator==(const Decimal& a, const Decimal& b) { return (a <=> b) == 0; }

std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) {
  const int s = std::max(a.scale, b.scale);
  const Wide x = static_cast<Wide>(a.units) * pow10(s - a.scale);
  const Wide y = static_cast<Wide>(b.units) * pow10(s - b.scale);
  return x < y ? std::strong_ordering::less : (x > y ? std::strong_ordering::greater : std::strong_ordering::equal);
}

Ticks quantize(const Decimal& price, const Decimal& tick) {
  if (!tick.positive()) throw InvalidArgument("tick size must be positive");
  // (P / 10^a) / (T / 10^b) = P * 10^b / (T * 10^a)
  const Wide num = static_cast<Wide>(price.units) * pow10(tick.scale);
  const Wide den = static_cast<Wide>(tick.units) * pow10(price.scale);
  return round_half_even(num, den);
}

Ticks quantize_mid(const Decimal& bid, const Decimal& ask, const Decimal& tick) {
  if (!tick.positive()) throw InvalidArgument("tick size must be positive");
  const int s = std::max(bid.scale, ask.scale);
  const Wide sum = static_cast<Wide>(bid.units) * pow10(s - bid.scale) +
                   static_cast<Wide>(ask.units) * pow10(s - ask.scale);
  const Wide num = sum * pow10(tick.scale);
  const Wide den = 2 * static_cast<Wide>(tick.units) * pow10(s);
  return round_half_even(num, den);
}

Decimal dequantize(Ticks ticks, const Decimal& tick) {
  const Wide units = static_cast<Wide>(ticks) * tick.units;
  if (units > std::numeric_limits<std::int64_t>::max() || units < std::numeric_limits<std::int64_t>::min()) {
    throw InvalidArgument("dequantized price out of range");
  }
  return {static_cast<std::int64_t>(units), tick.scale};
}

Ticks quantize_record(const TickRecord& r, const InstrumentSpec& spec) {
  if (r.bid && r.ask) {
    if (!r.bid->positive() || !r.ask->positive()) throw InputError("bid and ask must be positive");
    if (*r.bid > *r.ask) {
      throw InputError("crossed market: bid " + r.bid->to_string() + " > ask " + r.ask->to_string());
    }
    return quantize_mid(*r.bid, *r.ask, spec.tick_size);
  }
  if (r.price) {
    if (!r.price->positive()) throw InputError("price must be positive");
    return quantize(*r.price, spec.tick_size);
  }
  throw InputError("record has neither a price nor a bid/ask pair");
}

TimeNs parse_timestamp(std::string_view text) {
  const std::string_view s = trim(text);
  TimeNs epoch = 0;
  if (parse_int(s, epoch)) return epoch;

  if (s.size() < 19 || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' || s[16] != ':') {
    throw InputError("bad timestamp '" + std::string(text) + "'");
  }
  const Civil date = parse_civil_date(s.substr(0, 10), text);
  int hh = 0;
  int mm = 0;
  int ss = 0;
  if (!parse_int(s.substr(11, 2), hh) || !parse_int(s.substr(14, 2), mm) || !parse_int(s.substr(17, 2), ss) ||
      hh > 23 || mm > 59 || ss > 60) {
    throw InputError("bad time of day in '" + std::string(text) + "'");
  }
  std::string_view rest = s.substr(19);
  TimeNs frac_ns = 0;
  if (!rest.empty() && (rest.front() == '.' || rest.front() == ',')) {
    rest.remove_prefix(1);
    std::size_t n = 0;
    while (n < rest.size() && rest[n] >= '0' && rest[n] <= '9') ++n;
    if (n == 0 || n > 9) throw InputError("bad fractional seconds in '" + std::string(text) + "'");
    TimeNs digits = 0;
    parse_int(rest.substr(0, n), digits);
    frac_ns = digits * static_cast<TimeNs>(pow10(9 - static_cast<int>(n)));
    rest.remove_prefix(n);
  }
  TimeNs offset = 0;
  if (rest == "Z" || rest.empty()) {
    offset = 0;
  } else if ((rest.front() == '+' || rest.front() == '-') && rest.size() == 6 && rest[3] == ':') {
    int oh = 0;
    int om = 0;
    if (!parse_int(rest.substr(1, 2), oh) || !parse_int(rest.substr(4, 2), om)) {
      throw InputError("bad UTC offset in '" + std::string(text) + "'");
    }
    offset = (static_cast<TimeNs>(oh) * 3600 + om * 60) * kNanosPerSecond;
    if (rest.front() == '-') offset = -offset;
  } else {
    throw InputError("bad timestamp suffix in '" + std::string(text) + "'");
  }
  const std::int64_t days = days_from_civil(date.year, date.month, date.day);
  const TimeNs secs = days * 86'400 + hh * 3600 + mm * 60 + ss;
  return secs * kNanosPerSecond + frac_ns - offset;
}

TimeNs parse_date(std::string_view text) {
  const Civil d = parse_civil_date(trim(text), text);
  return days_from_civil(d.year, d.month, d.day) * kNanosPerDay;
}

ColumnMapping ColumnMapping::parse(std::string_view spec) {
  ColumnMapping m;
  for (std::string_view name : split(spec, ',')) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "time" || lower == "timestamp") {
      m.columns.push_back(Column::time);
    } else if (lower == "bid") {
      m.columns.push_back(Column::bid);
    } else if (lower == "ask" || lower == "offer") {
      m.columns.push_back(Column::ask);
    } else if (lower == "price" || lower == "mid" || lower == "last") {
      m.columns.push_back(Column::price);
    } else if (lower == "ticks") {
      m.columns.push_back(Column::ticks);
    } else {
      m.columns.push_back(Column::ignore);
    }
  }
  if (!m.has(Column::time)) throw InvalidArgument("column mapping needs a time column");
  const bool quotes = m.has(Column::bid) && m.has(Column::ask);
  if (!quotes && !m.has(Column::price) && !m.has(Column::ticks)) {
    throw InvalidArgument("column mapping needs bid+ask, price or ticks");
  }
  if (m.has(Column::bid) != m.has(Column::ask)) throw InvalidArgument("bid and ask must be mapped together");
  return m;
}

bool ColumnMapping::has(Column c) const {
  return std::find(columns.begin(), columns.end(), c) != columns.end();
}

std::vector<Sample> parse_ticks(std::istream& in, const InstrumentSpec& spec, const ColumnMapping& mapping,
                                const ParseOptions& options) {
  if (!spec.tick_size.positive()) throw InvalidArgument("tick size must be positive");
  std::vector<Sample> out;
  std::string line;
  std::size_t lineno = 0;
  bool first_row = true;
  TimeNs last_time = 0;
  std::size_t last_line = 0;

  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view row = trim(line);
    if (row.empty() || row.front() == '#') continue;
    const auto fields = split(row, options.delimiter);

    const bool was_first = first_row;
    first_row = false;
    if (was_first && is_header(fields, mapping)) continue;

    {
      Sample s;
      try {
        if (fields.size() < mapping.columns.size()) {
          throw InputError("expected " + std::to_string(mapping.columns.size()) + " fields, found " +
                           std::to_string(fields.size()));
        }
        TickRecord rec;
        std::optional<Ticks> direct;
        for (std::size_t i = 0; i < mapping.columns.size(); ++i) {
          switch (mapping.columns[i]) {
            case Column::time: rec.time = parse_timestamp(fields[i]); break;
            case Column::bid: rec.bid = Decimal::parse(fields[i]); break;
            case Column::ask: rec.ask = Decimal::parse(fields[i]); break;
            case Column::price: rec.price = Decimal::parse(fields[i]); break;
            case Column::ticks: {
              Ticks v = 0;
              if (!parse_int(fields[i], v)) throw InputError("not an integer tick count: '" + std::string(fields[i]) + "'");
              direct = v;
              break;
            }
            case Column::ignore: break;
          }
        }
        s.time = rec.time;
        s.value = direct ? *direct : quantize_record(rec, spec);
      } catch (const Error& e) {
        if (options.rejected == nullptr) {
          throw InputError("line " + std::to_string(lineno) + ": " + e.what());
        }
        options.rejected->push_back({lineno, e.what()});
        continue;
      }
      if (!out.empty() && s.time < last_time) {
        throw InputError("line " + std::to_string(lineno) + ": timestamp " + std::to_string(s.time) +
                         " precedes line " + std::to_string(last_line) + " (" + std::to_string(last_time) +
                         "); input must be sorted by time");
      }
      last_time = s.time;
      last_line = lineno;
      out.push_back(s);
    }
  }
  return out;
}

std::vector<Sample> read_ticks(const std::filesystem::path& path, const InstrumentSpec& spec,
                               const ColumnMapping& mapping, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return parse_ticks(in, spec, mapping, options);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

std::vector<ContractExpiry> parse_calendar(std::istream& in, char delimiter) {
  std::vector<ContractExpiry> out;
  std::string line;
  std::size_t lineno = 0;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view row = trim(line);
    if (row.empty() || row.front() == '#') continue;
    const auto fields = split(row, delimiter);
    const bool was_first = first_row;
    first_row = false;
    if (fields.size() < 2) throw InputError("calendar line " + std::to_string(lineno) + ": expected contract_id,expiry_date");
    if (was_first && !has_digit(fields[1])) continue;
    try {
      const Civil c = parse_civil_date(fields[1], fields[1]);
      out.push_back({std::string(fields[0]), days_from_civil(c.year, c.month, c.day) * kNanosPerDay,
                     static_cast<int>(c.month)});
    } catch (const InputError& e) {
      throw InputError("calendar line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ContractExpiry& a, const ContractExpiry& b) { return a.expiry < b.expiry; });
  return out;
}

std::vector<ContractExpiry> read_calendar(const std::filesystem::path& path, char delimiter) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return parse_calendar(in, delimiter);
}

ContinuousSeries build_continuous(std::span<const ContractSeries> contracts, const RollRule& rule) {
  if (rule.days_before_expiry < 0) throw InvalidArgument("days_before_expiry must be non-negative");
  if (!std::is_sorted(rule.calendar.begin(), rule.calendar.end(),
                      [](const ContractExpiry& a, const ContractExpiry& b) { return a.expiry < b.expiry; })) {
    throw InvalidArgument("contract calendar must be sorted by expiry");
  }

  std::map<std::string, const ContractSeries*> by_id;
  for (const ContractSeries& c : contracts) {
    const auto cal = std::find_if(rule.calendar.begin(), rule.calendar.end(),
                                  [&](const ContractExpiry& e) { return e.id == c.id; });
    if (cal == rule.calendar.end()) throw InputError("gap in calendar: contract '" + c.id + "' has no expiry entry");
    for (std::size_t i = 1; i < c.samples.size(); ++i) {
      if (c.samples[i].time < c.samples[i - 1].time) {
        throw InputError("contract '" + c.id + "' series is not sorted at sample " + std::to_string(i));
      }
    }
    if (!by_id.emplace(c.id, &c).second) throw InputError("contract '" + c.id + "' given twice");
  }

  // Eligible calendar entries in expiry order, restricted to the span of
  // contracts that have data.
  std::vector<const ContractExpiry*> eligible;
  for (const ContractExpiry& e : rule.calendar) {
    if (rule.eligible_months.count(e.month) != 0) eligible.push_back(&e);
  }
  std::size_t first = eligible.size();
  std::size_t last = 0;
  for (std::size_t i = 0; i < eligible.size(); ++i) {
    if (by_id.count(eligible[i]->id) != 0) {
      first = std::min(first, i);
      last = i;
    }
  }
  if (first == eligible.size()) throw InputError("no eligible contract has data");
  for (std::size_t i = first; i <= last; ++i) {
    if (by_id.count(eligible[i]->id) == 0) {
      throw InputError("gap in calendar: no quotes for eligible contract '" + eligible[i]->id + "'");
    }
  }

  const TimeNs roll_offset = static_cast<TimeNs>(rule.days_before_expiry) * kNanosPerDay;
  ContinuousSeries out;
  Ticks adjustment = 0;
  std::size_t previous_segment = 0;
  TimeNs lower = std::numeric_limits<TimeNs>::min();
  for (std::size_t i = first; i <= last; ++i) {
    const ContractExpiry& e = *eligible[i];
    const std::vector<Sample>& raw = by_id.at(e.id)->samples;
    const TimeNs upper = i == last ? std::numeric_limits<TimeNs>::max() : e.expiry - roll_offset;

    const auto begin = std::lower_bound(raw.begin(), raw.end(), lower,
                                        [](const Sample& s, TimeNs t) { return s.time < t; });
    const auto end = i == last ? raw.end()
                               : std::lower_bound(begin, raw.end(), upper,
                                                  [](const Sample& s, TimeNs t) { return s.time < t; });

    if (i > first) {
      if (previous_segment == 0 || begin == raw.end() || begin == end) {
        throw InputError("no splice reference at roll into '" + e.id + "' (time " + std::to_string(lower) + ")");
      }
      // Outgoing reference: last retained sample of the previous contract.
      const Ticks outgoing = out.samples.back().value;
      adjustment = outgoing - begin->value;
      out.splices.push_back({eligible[i - 1]->id, e.id, lower, adjustment});
    }
    for (auto it = begin; it != end; ++it) out.samples.push_back({it->time, it->value + adjustment});
    previous_segment = static_cast<std::size_t>(end - begin);
    lower = upper;
  }
  return out;
}

}  // namespace persmove::ingest

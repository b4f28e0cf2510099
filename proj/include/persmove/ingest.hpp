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

// Tick ingestion: decimal parsing, mid-price formation, quantization to
// integer ticks, and differentially forward-adjusted continuous contracts.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "persmove/types.hpp"

namespace persmove::ingest {

/// Exact decimal number units * 10^-scale.
struct Decimal {
  std::int64_t units = 0;
  int scale = 0;

  /// Parses "[+|-]digits[.digits]"; "1." and ".5" are accepted. Throws
  /// InputError on anything else.
  static Decimal parse(std::string_view text);

  [[nodiscard]] std::string to_string() const;
  [[nodiscard]] bool positive() const { return units > 0; }

  friend bool operator==(const Decimal& a, const Decimal& b);
  friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b);
};

struct InstrumentSpec {
  Decimal tick_size{};
  std::string symbol;
};

struct TickRecord {
  TimeNs time = 0;
  std::optional<Decimal> price;
  std::optional<Decimal> bid;
  std::optional<Decimal> ask;
};

/// round-half-even(price / tick).
Ticks quantize(const Decimal& price, const Decimal& tick);

/// round-half-even(((bid + ask) / 2) / tick).
Ticks quantize_mid(const Decimal& bid, const Decimal& ask, const Decimal& tick);

/// ticks * tick as an exact decimal.
Decimal dequantize(Ticks ticks, const Decimal& tick);

/// Quantizes one record; throws InputError for a crossed market or
/// non-positive prices.
Ticks quantize_record(const TickRecord& r, const InstrumentSpec& spec);

/// Epoch nanoseconds (integer) or ISO-8601 "YYYY-MM-DD[T ]HH:MM:SS[.f][Z|+HH:MM]".
TimeNs parse_timestamp(std::string_view text);

/// "YYYY-MM-DD" at 00:00 UTC.
TimeNs parse_date(std::string_view text);

enum class Column : std::uint8_t { time, bid, ask, price, ticks, ignore };

/// Positional meaning of each delimited field, e.g. "time,bid,ask",
/// "time,price" or "time,ticks" (already quantized). Unknown names and "_"
/// are skipped.
struct ColumnMapping {
  std::vector<Column> columns;

  static ColumnMapping parse(std::string_view spec);
  [[nodiscard]] bool has(Column c) const;
};

struct RowError {
  std::size_t line = 0;
  std::string message;
};

struct ParseOptions {
  char delimiter = ',';
  /// When set, unparseable or crossed rows are skipped and recorded here
  /// instead of aborting the parse. Decreasing timestamps always abort.
  std::vector<RowError>* rejected = nullptr;
};

/// Parses delimited tick text. Blank lines and lines starting with '#' are
/// skipped; a first line whose time field has no digit is a header.
/// Throws InputError naming the line for bad rows and for the first line
/// whose timestamp goes backwards.
std::vector<Sample> parse_ticks(std::istream& in, const InstrumentSpec& spec,
                                const ColumnMapping& mapping, const ParseOptions& options = {});

std::vector<Sample> read_ticks(const std::filesystem::path& path, const InstrumentSpec& spec,
                               const ColumnMapping& mapping, const ParseOptions& options = {});

struct ContractExpiry {
  std::string id;
  TimeNs expiry = 0;
  int month = 0;  // 1..12, from the expiry date
};

/// Delimited "contract_id,expiry_date" rows (optional header).
std::vector<ContractExpiry> parse_calendar(std::istream& in, char delimiter = ',');
std::vector<ContractExpiry> read_calendar(const std::filesystem::path& path, char delimiter = ',');

struct RollRule {
  /// Calendar days before expiry at which the position rolls.
  int days_before_expiry = 6;
  std::set<int> eligible_months{3, 6, 9, 12};
  /// Sorted by expiry.
  std::vector<ContractExpiry> calendar;
};

struct ContractSeries {
  std::string id;
  std::vector<Sample> samples;
};

struct Splice {
  std::string from_contract;
  std::string to_contract;
  TimeNs roll_time = 0;
  /// Adjustment added to the incoming contract's raw ticks.
  Ticks adjustment = 0;
};

struct ContinuousSeries {
  std::vector<Sample> samples;
  std::vector<Splice> splices;
};

/// Splices eligible contracts in expiry order. Contract k contributes its
/// samples in [roll_{k-1}, roll_k) where roll_k = expiry_k - days; the first
/// contract has no lower bound and the last no upper bound. Each incoming
/// segment is shifted so that its first sample equals the adjusted last
/// sample of the outgoing segment, so splices add no variation and every
/// within-contract return is preserved.
///
/// Throws InputError for contracts missing from the calendar, eligible
/// calendar gaps between used contracts, unsorted contract series, or a
/// roll without quotes on both sides.
ContinuousSeries build_continuous(std::span<const ContractSeries> contracts, const RollRule& rule);

}  // namespace persmove::ingest

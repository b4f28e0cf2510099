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

// persmove command-line front end. Talks to the library only through the
// C API in persmove.h.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "persmove/persmove.h"

namespace fs = std::filesystem;

namespace {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInputError = 2,
  kInsufficientData = 3,
  kInternal = 4,
  kSelftestFailed = 5,
};

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void raise(pm_status st, const std::string& context) {
  int code = kInternal;
  switch (st) {
    case PM_ERR_INVALID_ARGUMENT: code = kUsage; break;
    case PM_ERR_INPUT: code = kInputError; break;
    case PM_ERR_INSUFFICIENT_DATA: code = kInsufficientData; break;
    default: break;
  }
  throw CliError{code, context + ": " + pm_last_error()};
}

void check(pm_status st, const std::string& context) {
  if (st != PM_OK) raise(st, context);
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using SeriesPtr = std::unique_ptr<pm_series, Deleter<pm_series, pm_series_destroy>>;
using DecompositionPtr = std::unique_ptr<pm_decomposition, Deleter<pm_decomposition, pm_decomposition_destroy>>;
using SpectrumPtr = std::unique_ptr<pm_spectrum, Deleter<pm_spectrum, pm_spectrum_destroy>>;
using RollingPtr = std::unique_ptr<pm_rolling, Deleter<pm_rolling, pm_rolling_destroy>>;
using CalendarPtr = std::unique_ptr<pm_calendar, Deleter<pm_calendar, pm_calendar_destroy>>;
using ContinuousPtr = std::unique_ptr<pm_continuous, Deleter<pm_continuous, pm_continuous_destroy>>;

// Shortest round-trip text, so output bytes depend only on the value.
std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// A table rendered either as delimited text or as a JSON array of objects.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<nlohmann::ordered_json>> rows;
};

std::string cell(const nlohmann::ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return num(v.get<double>());
  return v.dump();
}

struct Output {
  fs::path dir = ".";
  std::string format = "delimited";
  char delimiter = ',';

  [[nodiscard]] std::string extension() const { return format == "json" ? ".json" : ".csv"; }

  // Temp file + rename so readers never see a partial file.
  void write(const std::string& stem, const Table& t) const {
    std::string body;
    if (format == "json") {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < t.header.size(); ++i) obj[t.header[i]] = row[i];
        arr.push_back(std::move(obj));
      }
      body = arr.dump(2) + "\n";
    } else {
      std::ostringstream os;
      for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? std::string(1, delimiter) : "") << t.header[i];
      os << '\n';
      for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? std::string(1, delimiter) : "") << cell(row[i]);
        os << '\n';
      }
      body = os.str();
    }
    std::error_code ec;
    fs::create_directories(dir, ec);
    const fs::path target = dir / (stem + extension());
    const fs::path tmp = dir / ("." + stem + extension() + ".tmp." + std::to_string(::getpid()));
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw CliError{kInternal, "cannot write " + tmp.string()};
      out << body;
      if (!out.flush()) throw CliError{kInternal, "write failed for " + tmp.string()};
    }
    fs::rename(tmp, target, ec);
    if (ec) throw CliError{kInternal, "cannot rename to " + target.string() + ": " + ec.message()};
  }
};

struct InputOptions {
  std::string tick;
  std::string columns = "time,bid,ask";
  std::string delimiter = ",";
};

char delimiter_char(const std::string& d) {
  if (d == "\\t" || d == "tab") return '\t';
  if (d.size() != 1) throw CliError{kUsage, "delimiter must be a single character"};
  return d[0];
}

// "-" reads stdin through a temporary file.
struct InputPath {
  fs::path path;
  bool temporary = false;

  explicit InputPath(const std::string& arg) {
    if (arg != "-") {
      path = arg;
      return;
    }
    path = fs::temp_directory_path() / ("persmove-stdin-" + std::to_string(::getpid()));
    std::ofstream out(path, std::ios::binary);
    out << std::cin.rdbuf();
    temporary = true;
  }
  ~InputPath() {
    if (temporary) {
      std::error_code ec;
      fs::remove(path, ec);
    }
  }
  InputPath(const InputPath&) = delete;
  InputPath& operator=(const InputPath&) = delete;
};

SeriesPtr read_series(const std::string& arg, const InputOptions& in) {
  const InputPath input(arg);
  pm_read_options opts;
  pm_read_options_init(&opts);
  opts.tick_size = in.tick.empty() ? nullptr : in.tick.c_str();
  opts.columns = in.columns.c_str();
  opts.delimiter = delimiter_char(in.delimiter);
  pm_series* s = nullptr;
  check(pm_series_read(input.path.string().c_str(), &opts, &s), arg);
  return SeriesPtr(s);
}

// Integer sizes, one per line, or "size<delim>count" histogram rows.
std::vector<int64_t> read_sizes(const std::string& arg, bool histogram, char delim) {
  const InputPath input(arg);
  std::ifstream in(input.path);
  if (!in) throw CliError{kInputError, "cannot open " + arg};
  std::vector<int64_t> sizes;
  std::string line;
  std::size_t lineno = 0;
  const auto parse = [&](std::string_view s, int64_t& v) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    return r.ec == std::errc{} && r.ptr == s.data() + s.size();
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string_view row(line);
    int64_t size = 0;
    int64_t count = 1;
    bool ok = false;
    if (histogram) {
      const auto pos = row.find(delim);
      ok = pos != std::string_view::npos && parse(row.substr(0, pos), size) && parse(row.substr(pos + 1), count);
    } else {
      ok = parse(row, size);
    }
    if (!ok) {
      if (lineno == 1 && line.find_first_of("0123456789") == std::string::npos) continue;  // header
      throw CliError{kInputError, arg + ": line " + std::to_string(lineno) + ": expected " +
                                      (histogram ? "size,count" : "an integer size")};
    }
    if (size < 1 || count < 1) {
      throw CliError{kInputError, arg + ": line " + std::to_string(lineno) + ": sizes and counts must be positive"};
    }
    sizes.insert(sizes.end(), static_cast<std::size_t>(count), size);
  }
  return sizes;
}

int64_t parse_duration(const std::string& text) {
  static const std::map<std::string, int64_t> units = {
      {"ns", 1},
      {"us", 1'000},
      {"ms", 1'000'000},
      {"s", 1'000'000'000},
      {"m", 60LL * 1'000'000'000},
      {"h", 3600LL * 1'000'000'000},
      {"d", 86'400LL * 1'000'000'000},
      {"w", 7 * 86'400LL * 1'000'000'000},
  };
  std::size_t i = 0;
  while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
  int64_t n = 0;
  const auto r = std::from_chars(text.data(), text.data() + i, n);
  const std::string unit = text.substr(i);
  const auto it = units.find(unit.empty() ? "ns" : unit);
  if (i == 0 || r.ec != std::errc{} || it == units.end() || n <= 0) {
    throw CliError{kUsage, "bad duration '" + text + "' (use e.g. 8w, 14d, 3600s)"};
  }
  return n * it->second;
}

pm_fit_config make_fit_config(const std::string& xmin_range, uint64_t min_tail) {
  pm_fit_config cfg;
  pm_fit_config_init(&cfg);
  cfg.min_tail = min_tail;
  if (!xmin_range.empty()) {
    const auto colon = xmin_range.find(':');
    const std::string lo = xmin_range.substr(0, colon);
    const std::string hi = colon == std::string::npos ? lo : xmin_range.substr(colon + 1);
    const auto parse = [&](const std::string& s, int64_t& v) {
      const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
      return r.ec == std::errc{} && r.ptr == s.data() + s.size();
    };
    int64_t l = 1;
    int64_t h = 0;
    if ((!lo.empty() && !parse(lo, l)) || (!hi.empty() && !parse(hi, h))) {
      throw CliError{kUsage, "bad --xmin-range '" + xmin_range + "' (use lo:hi, lo: or :hi)"};
    }
    cfg.xmin_lo = l;
    cfg.xmin_hi = h;
  }
  return cfg;
}

Table fit_table(const pm_fit_result& f) {
  Table t;
  t.header = {"xmin", "count_exponent", "alpha", "ks_distance", "n_tail", "amplitude"};
  t.rows.push_back({f.xmin, f.count_exponent, f.alpha, f.ks_distance, f.n_tail, f.amplitude});
  return t;
}

const char* kind_name(int32_t k) { return k == PM_MAXIMUM ? "max" : "min"; }

void cmd_decompose(const std::string& input, const InputOptions& in, const Output& out) {
  const SeriesPtr series = read_series(input, in);
  pm_decomposition* raw = nullptr;
  check(pm_decompose(series.get(), &raw), "decompose");
  const DecompositionPtr d(raw);

  Table pairs;
  pairs.header = {"t_min", "v_min_ticks", "t_max", "v_max_ticks", "size_ticks"};
  const pm_pair* p = pm_decomposition_pairs(d.get());
  for (std::size_t i = 0; i < pm_decomposition_pair_count(d.get()); ++i) {
    pairs.rows.push_back({p[i].min_ext.time_ns, p[i].min_ext.ticks, p[i].max_ext.time_ns, p[i].max_ext.ticks, p[i].size});
  }
  Table top;
  top.header = {"time", "ticks", "kind"};
  const pm_extremum* e = pm_decomposition_top(d.get());
  for (std::size_t i = 0; i < pm_decomposition_top_count(d.get()); ++i) {
    top.rows.push_back({e[i].time_ns, e[i].ticks, kind_name(e[i].kind)});
  }
  Table summary;
  summary.header = {"n_samples", "n_pairs", "tv_total", "tv_top"};
  summary.rows.push_back({pm_series_size(series.get()), pm_decomposition_pair_count(d.get()),
                          pm_decomposition_tv_total(d.get()), pm_decomposition_tv_top(d.get())});
  out.write("pairs", pairs);
  out.write("top", top);
  out.write("summary", summary);
}

SpectrumPtr spectrum_for(const std::string& input, const std::string& kind, const InputOptions& in) {
  pm_spectrum* raw = nullptr;
  if (kind == "ticks") {
    const SeriesPtr series = read_series(input, in);
    pm_decomposition* d = nullptr;
    check(pm_decompose(series.get(), &d), "decompose");
    const DecompositionPtr dp(d);
    check(pm_spectrum_from_decomposition(dp.get(), &raw), "spectrum");
  } else {
    const auto sizes = read_sizes(input, kind == "histogram", delimiter_char(in.delimiter));
    check(pm_spectrum_from_sizes(sizes.data(), sizes.size(), &raw), "spectrum");
  }
  return SpectrumPtr(raw);
}

void cmd_spectrum(const std::string& input, const std::string& kind, const InputOptions& in, bool no_fit,
                  const pm_fit_config& cfg, const Output& out) {
  const SpectrumPtr s = spectrum_for(input, kind, in);
  Table spec;
  spec.header = {"m", "n", "S"};
  const pm_spectrum_point* pts = pm_spectrum_points(s.get());
  for (std::size_t i = 0; i < pm_spectrum_size(s.get()); ++i) {
    spec.rows.push_back({pts[i].size, pts[i].count, pts[i].contribution});
  }
  out.write("spectrum", spec);
  if (no_fit) return;

  pm_fit_result f{};
  check(pm_spectrum_fit(s.get(), &cfg, &f), "fit");
  Table overlay;
  overlay.header = {"m", "S_fit"};
  for (std::size_t i = 0; i < pm_spectrum_size(s.get()); ++i) {
    if (pts[i].size >= f.xmin) overlay.rows.push_back({pts[i].size, pm_fit_evaluate(&f, pts[i].size)});
  }
  out.write("fit_overlay", overlay);
  out.write("fit", fit_table(f));
}

void cmd_fit(const std::string& input, const std::string& kind, const InputOptions& in, const pm_fit_config& cfg,
             const Output& out) {
  const SpectrumPtr s = spectrum_for(input, kind, in);
  pm_fit_result f{};
  check(pm_spectrum_fit(s.get(), &cfg, &f), "fit");
  out.write("fit", fit_table(f));
  std::cout << "alpha=" << num(f.alpha) << " count_exponent=" << num(f.count_exponent) << " xmin=" << f.xmin
            << " n_tail=" << f.n_tail << " ks=" << num(f.ks_distance) << "\n";
}

void cmd_rolling(const std::string& input, const InputOptions& in, const std::string& window,
                 const std::string& step, const pm_fit_config& fit_cfg, const Output& out) {
  const SeriesPtr series = read_series(input, in);
  pm_rolling_config cfg;
  pm_rolling_config_init(&cfg);
  cfg.window_ns = parse_duration(window);
  cfg.step_ns = parse_duration(step);
  cfg.fit = fit_cfg;
  pm_rolling* raw = nullptr;
  check(pm_rolling_fit(series.get(), &cfg, &raw), "rolling");
  const RollingPtr r(raw);

  Table t;
  t.header = {"window_end", "alpha", "xmin", "n_tail", "status", "pair_count"};
  const pm_rolling_point* p = pm_rolling_points(r.get());
  for (std::size_t i = 0; i < pm_rolling_size(r.get()); ++i) {
    if (p[i].status == PM_WINDOW_OK) {
      t.rows.push_back({p[i].window_end_ns, p[i].fit.alpha, p[i].fit.xmin, p[i].fit.n_tail, "ok", p[i].pair_count});
    } else {
      t.rows.push_back({p[i].window_end_ns, "", "", "", "insufficient", p[i].pair_count});
    }
  }
  out.write("rolling", t);
}

void cmd_continuous(const std::vector<std::string>& contracts, const std::string& calendar_path, int days,
                    const std::string& months, const InputOptions& in, const Output& out) {
  pm_calendar* cal_raw = nullptr;
  check(pm_calendar_read(calendar_path.c_str(), delimiter_char(in.delimiter), &cal_raw), calendar_path);
  const CalendarPtr cal(cal_raw);

  pm_roll_rule rule;
  pm_roll_rule_init(&rule);
  rule.days_before_expiry = days;
  if (!months.empty()) {
    rule.month_mask = 0;
    std::stringstream ss(months);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      int m = 0;
      const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), m);
      if (r.ec != std::errc{} || m < 1 || m > 12) throw CliError{kUsage, "bad month '" + tok + "' in --months"};
      rule.month_mask |= 1U << (m - 1);
    }
  }

  std::vector<std::string> ids;
  std::vector<SeriesPtr> owned;
  for (const std::string& spec : contracts) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw CliError{kUsage, "contract inputs are ID=path, got '" + spec + "'"};
    ids.push_back(spec.substr(0, eq));
    owned.push_back(read_series(spec.substr(eq + 1), in));
  }
  std::vector<const char*> id_ptrs;
  std::vector<const pm_series*> series_ptrs;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    id_ptrs.push_back(ids[i].c_str());
    series_ptrs.push_back(owned[i].get());
  }
  pm_continuous* raw = nullptr;
  check(pm_continuous_build(id_ptrs.data(), series_ptrs.data(), ids.size(), cal.get(), &rule, &raw), "continuous");
  const ContinuousPtr c(raw);

  Table series;
  series.header = {"time", "ticks"};
  const pm_series* s = pm_continuous_series(c.get());
  const pm_sample* d = pm_series_data(s);
  for (std::size_t i = 0; i < pm_series_size(s); ++i) series.rows.push_back({d[i].time_ns, d[i].ticks});
  Table splices;
  splices.header = {"from_contract", "to_contract", "roll_time", "adjustment_ticks"};
  for (std::size_t i = 0; i < pm_continuous_splice_count(c.get()); ++i) {
    pm_splice sp{};
    check(pm_continuous_splice(c.get(), i, &sp), "splice");
    splices.rows.push_back({sp.from_contract, sp.to_contract, sp.roll_time_ns, sp.adjustment});
  }
  out.write("continuous", series);
  out.write("splices", splices);
}

int cmd_selftest(uint64_t seed, uint64_t walks) {
  pm_selftest_report r{};
  check(pm_selftest(seed, walks, &r), "selftest");
  std::cout << "oracle equivalence: " << r.walks_checked - r.oracle_mismatches << "/" << r.walks_checked
            << " walks match\n"
            << "conservation: " << r.walks_checked - r.conservation_failures << "/" << r.walks_checked
            << " walks exact\n"
            << "fit recovery: count exponent " << num(r.fitted_exponent) << " (xmin " << r.fitted_xmin << ")\n"
            << (r.passed ? "PASS" : "FAIL") << "\n";
  return r.passed ? kOk : kSelftestFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Persistent-movement decomposition, spectrum and scaling fits for tick data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", pm_version());

  InputOptions in;
  Output out;
  std::string out_dir = ".";
  std::string input;
  std::string input_kind = "ticks";
  std::string xmin_range;
  uint64_t min_tail = 50;
  std::string window = "8w";
  std::string step = "2w";
  bool no_fit = false;
  uint64_t seed = 1;
  uint64_t walks = 0;
  std::vector<std::string> contracts;
  std::string calendar;
  int days = 6;
  std::string months;

  const auto add_input = [&](CLI::App* sub, bool positional) {
    if (positional) sub->add_option("input", input, "Input file ('-' for stdin)")->required();
    sub->add_option("--tick", in.tick, "Tick size as a decimal, e.g. 0.0001");
    sub->add_option("--columns", in.columns, "Field layout: time,bid,ask | time,price | time,ticks")
        ->capture_default_str();
    sub->add_option("--delimiter", in.delimiter, "Field delimiter (',' or 'tab')")->capture_default_str();
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    sub->add_option("--format", out.format, "Output format")
        ->check(CLI::IsMember({"delimited", "json"}))
        ->capture_default_str();
  };
  const auto add_fit = [&](CLI::App* sub) {
    sub->add_option("--min-tail", min_tail, "Minimum number of sizes at or above xmin")->capture_default_str();
    sub->add_option("--xmin-range", xmin_range, "Candidate xmin range lo:hi (either side optional)");
  };
  const auto add_kind = [&](CLI::App* sub) {
    sub->add_option("--input-kind", input_kind, "What the input holds")
        ->check(CLI::IsMember({"ticks", "sizes", "histogram"}))
        ->capture_default_str();
  };

  CLI::App* decompose = app.add_subcommand("decompose", "Write persistent pairs, top structure and summary");
  add_input(decompose, true);

  CLI::App* spectrum = app.add_subcommand("spectrum", "Write the persistent-movement spectrum and fit overlay");
  add_input(spectrum, true);
  add_kind(spectrum);
  add_fit(spectrum);
  spectrum->add_flag("--no-fit", no_fit, "Only write the spectrum");

  CLI::App* fit = app.add_subcommand("fit", "Fit the power-law scaling exponent");
  add_input(fit, true);
  add_kind(fit);
  add_fit(fit);

  CLI::App* rolling = app.add_subcommand("rolling", "Windowed scaling-exponent estimates");
  add_input(rolling, true);
  add_fit(rolling);
  rolling->add_option("--window", window, "Window length (e.g. 8w)")->capture_default_str();
  rolling->add_option("--step", step, "Step between window ends (e.g. 2w)")->capture_default_str();

  CLI::App* continuous = app.add_subcommand("continuous", "Splice futures contracts into a forward-adjusted series");
  add_input(continuous, false);
  continuous->add_option("contracts", contracts, "Contract inputs as ID=path")->required();
  continuous->add_option("--calendar", calendar, "contract_id,expiry_date file")->required();
  continuous->add_option("--days-before-expiry", days, "Roll this many calendar days before expiry")
      ->capture_default_str();
  continuous->add_option("--months", months, "Eligible contract months, e.g. 3,6,9,12");

  CLI::App* selftest = app.add_subcommand("selftest", "Oracle equivalence and fit recovery on synthetic data");
  selftest->add_option("--seed", seed, "Seed for synthetic data")->capture_default_str();
  selftest->add_option("--walks", walks, "Number of random walks (0 = default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  out.dir = out_dir;
  out.delimiter = ',';
  try {
    if (!in.delimiter.empty()) out.delimiter = delimiter_char(in.delimiter);
    if (*decompose) cmd_decompose(input, in, out);
    if (*spectrum) cmd_spectrum(input, input_kind, in, no_fit, make_fit_config(xmin_range, min_tail), out);
    if (*fit) cmd_fit(input, input_kind, in, make_fit_config(xmin_range, min_tail), out);
    if (*rolling) cmd_rolling(input, in, window, step, make_fit_config(xmin_range, min_tail), out);
    if (*continuous) cmd_continuous(contracts, calendar, days, months, in, out);
    if (*selftest) return cmd_selftest(seed, walks);
  } catch (const CliError& e) {
    std::cerr << "persmove: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "persmove: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}

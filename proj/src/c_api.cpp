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

#include "persmove/persmove.h"

#include <exception>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "persmove/decomposer.hpp"
#include "persmove/error.hpp"
#include "persmove/ingest.hpp"
#include "persmove/powerlaw.hpp"
#include "persmove/rolling.hpp"
#include "persmove/selftest.hpp"
#include "persmove/spectrum.hpp"

struct pm_series {
  std::vector<pm_sample> samples;
};

struct pm_decomposer {
  persmove::Decomposer impl;
};

struct pm_decomposition {
  std::vector<pm_pair> pairs;
  std::vector<pm_extremum> top;
  int64_t tv_total = 0;
  int64_t tv_top = 0;
};

struct pm_spectrum {
  persmove::SizeHistogram histogram;
  std::vector<pm_spectrum_point> points;
  int64_t area = 0;
};

struct pm_rolling {
  std::vector<pm_rolling_point> points;
};

struct pm_calendar {
  std::vector<persmove::ingest::ContractExpiry> entries;
};

struct pm_continuous {
  pm_series series;
  std::vector<persmove::ingest::Splice> splices;
};

namespace {

using namespace persmove;

thread_local std::string g_last_error;

pm_status fail(pm_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <class Fn>
pm_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return PM_OK;
  } catch (const InvalidArgument& e) {
    return fail(PM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const InputError& e) {
    return fail(PM_ERR_INPUT, e.what());
  } catch (const InsufficientDataError& e) {
    return fail(PM_ERR_INSUFFICIENT_DATA, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PM_ERR_INTERNAL, "unknown error");
  }
}

template <class T>
void require(const T* p, const char* what) {
  if (p == nullptr) throw InvalidArgument(std::string(what) + " must not be NULL");
}

pm_extremum to_c(const Extremum& e) {
  return {e.time, e.value, e.kind == ExtremumKind::maximum ? PM_MAXIMUM : PM_MINIMUM};
}

pm_fit_result to_c(const PowerLawFit& f) {
  return {f.xmin, f.count_exponent, f.alpha, f.ks_distance, static_cast<uint64_t>(f.n_tail), f.amplitude};
}

PowerLawFit from_c(const pm_fit_result& f) {
  PowerLawFit out;
  out.xmin = f.xmin;
  out.count_exponent = f.count_exponent;
  out.alpha = f.alpha;
  out.ks_distance = f.ks_distance;
  out.n_tail = static_cast<std::size_t>(f.n_tail);
  out.amplitude = f.amplitude;
  return out;
}

FitConfig from_c(const pm_fit_config* c) {
  FitConfig cfg;
  if (c == nullptr) return cfg;
  if (c->xmin_lo < 1) throw InvalidArgument("xmin_lo must be at least 1");
  if (c->xmin_hi != 0 && c->xmin_hi < c->xmin_lo) throw InvalidArgument("xmin_hi must be >= xmin_lo");
  cfg.xmin_range = {c->xmin_lo, c->xmin_hi};
  cfg.min_tail = static_cast<std::size_t>(c->min_tail);
  return cfg;
}

std::vector<Sample> to_samples(const pm_series& s) {
  std::vector<Sample> out;
  out.reserve(s.samples.size());
  for (const pm_sample& x : s.samples) out.push_back({x.time_ns, x.ticks});
  return out;
}

pm_series from_samples(const std::vector<Sample>& v) {
  pm_series s;
  s.samples.reserve(v.size());
  for (const Sample& x : v) s.samples.push_back({x.time, x.value});
  return s;
}

std::unique_ptr<pm_decomposition> to_c(const Decomposition& d) {
  auto out = std::make_unique<pm_decomposition>();
  out->pairs.reserve(d.pairs.size());
  for (const PersistentPair& p : d.pairs) out->pairs.push_back({to_c(p.min_ext), to_c(p.max_ext), p.size});
  for (const Extremum& e : d.top.extrema) out->top.push_back(to_c(e));
  out->tv_total = d.tv_total;
  out->tv_top = d.tv_top;
  return out;
}

std::unique_ptr<pm_spectrum> make_spectrum(SizeHistogram h) {
  auto out = std::make_unique<pm_spectrum>();
  for (const SpectrumPoint& p : spectrum(h)) out->points.push_back({p.size, p.count, p.contribution});
  out->area = spectrum_area(spectrum(h));
  out->histogram = std::move(h);
  return out;
}

}  // namespace

extern "C" {

const char* pm_version(void) { return "1.0.0"; }

const char* pm_last_error(void) { return g_last_error.c_str(); }

const char* pm_status_string(pm_status status) {
  switch (status) {
    case PM_OK: return "ok";
    case PM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PM_ERR_INPUT: return "input error";
    case PM_ERR_INSUFFICIENT_DATA: return "insufficient data";
    case PM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void pm_fit_config_init(pm_fit_config* config) {
  if (config == nullptr) return;
  const FitConfig d;
  *config = {d.xmin_range.lo, d.xmin_range.hi, static_cast<uint64_t>(d.min_tail)};
}

void pm_rolling_config_init(pm_rolling_config* config) {
  if (config == nullptr) return;
  const RollingConfig d;
  config->window_ns = d.window;
  config->step_ns = d.step;
  pm_fit_config_init(&config->fit);
}

void pm_roll_rule_init(pm_roll_rule* rule) {
  if (rule == nullptr) return;
  const ingest::RollRule d;
  rule->days_before_expiry = d.days_before_expiry;
  rule->month_mask = 0;
  for (const int m : d.eligible_months) rule->month_mask |= 1U << (m - 1);
}

void pm_read_options_init(pm_read_options* options) {
  if (options == nullptr) return;
  options->tick_size = nullptr;
  options->columns = "time,bid,ask";
  options->delimiter = ',';
}

pm_status pm_series_create(const pm_sample* samples, size_t count, pm_series** out) {
  return guarded([&] {
    require(out, "out");
    if (count > 0) require(samples, "samples");
    auto s = std::make_unique<pm_series>();
    s->samples.assign(samples, samples + count);
    *out = s.release();
  });
}

pm_status pm_series_read(const char* path, const pm_read_options* options, pm_series** out) {
  return guarded([&] {
    require(path, "path");
    require(options, "options");
    require(out, "out");
    require(options->columns, "options->columns");
    const auto mapping = ingest::ColumnMapping::parse(options->columns);
    ingest::InstrumentSpec spec;
    if (options->tick_size != nullptr) {
      try {
        spec.tick_size = ingest::Decimal::parse(options->tick_size);
      } catch (const InputError& e) {
        throw InvalidArgument(std::string("tick size: ") + e.what());
      }
    } else if (!mapping.has(ingest::Column::ticks)) {
      throw InvalidArgument("tick size is required unless the input is already in ticks");
    } else {
      spec.tick_size = {1, 0};
    }
    if (!spec.tick_size.positive()) throw InvalidArgument("tick size must be positive");
    ingest::ParseOptions po;
    po.delimiter = options->delimiter == '\0' ? ',' : options->delimiter;
    *out = std::make_unique<pm_series>(from_samples(ingest::read_ticks(path, spec, mapping, po))).release();
  });
}

size_t pm_series_size(const pm_series* series) { return series ? series->samples.size() : 0; }

const pm_sample* pm_series_data(const pm_series* series) {
  return series && !series->samples.empty() ? series->samples.data() : nullptr;
}

int64_t pm_series_total_variation(const pm_series* series) {
  if (series == nullptr) return 0;
  const auto s = to_samples(*series);
  return total_variation(std::span<const Sample>(s));
}

void pm_series_destroy(pm_series* series) { delete series; }

pm_status pm_decomposer_create(pm_decomposer** out) {
  return guarded([&] {
    require(out, "out");
    *out = new pm_decomposer();
  });
}

pm_status pm_decomposer_push(pm_decomposer* d, pm_sample sample, size_t* new_pairs) {
  return guarded([&] {
    require(d, "decomposer");
    const auto decided = d->impl.push({sample.time_ns, sample.ticks});
    if (new_pairs != nullptr) *new_pairs = decided.size();
  });
}

pm_status pm_decomposer_finish(const pm_decomposer* d, pm_decomposition** out) {
  return guarded([&] {
    require(d, "decomposer");
    require(out, "out");
    *out = to_c(d->impl.finish()).release();
  });
}

void pm_decomposer_destroy(pm_decomposer* d) { delete d; }

pm_status pm_decompose(const pm_series* series, pm_decomposition** out) {
  return guarded([&] {
    require(series, "series");
    require(out, "out");
    const auto s = to_samples(*series);
    *out = to_c(decompose(s)).release();
  });
}

size_t pm_decomposition_pair_count(const pm_decomposition* d) { return d ? d->pairs.size() : 0; }
const pm_pair* pm_decomposition_pairs(const pm_decomposition* d) {
  return d && !d->pairs.empty() ? d->pairs.data() : nullptr;
}
size_t pm_decomposition_top_count(const pm_decomposition* d) { return d ? d->top.size() : 0; }
const pm_extremum* pm_decomposition_top(const pm_decomposition* d) {
  return d && !d->top.empty() ? d->top.data() : nullptr;
}
int64_t pm_decomposition_tv_total(const pm_decomposition* d) { return d ? d->tv_total : 0; }
int64_t pm_decomposition_tv_top(const pm_decomposition* d) { return d ? d->tv_top : 0; }
void pm_decomposition_destroy(pm_decomposition* d) { delete d; }

pm_status pm_spectrum_from_decomposition(const pm_decomposition* d, pm_spectrum** out) {
  return guarded([&] {
    require(d, "decomposition");
    require(out, "out");
    SizeHistogram h;
    for (const pm_pair& p : d->pairs) h.add(p.size);
    *out = make_spectrum(std::move(h)).release();
  });
}

pm_status pm_spectrum_from_sizes(const int64_t* sizes, size_t count, pm_spectrum** out) {
  return guarded([&] {
    require(out, "out");
    if (count > 0) require(sizes, "sizes");
    *out = make_spectrum(histogram_of_sizes(std::span<const Ticks>(sizes, count))).release();
  });
}

size_t pm_spectrum_size(const pm_spectrum* s) { return s ? s->points.size() : 0; }
const pm_spectrum_point* pm_spectrum_points(const pm_spectrum* s) {
  return s && !s->points.empty() ? s->points.data() : nullptr;
}
int64_t pm_spectrum_area(const pm_spectrum* s) { return s ? s->area : 0; }

pm_status pm_spectrum_fit(const pm_spectrum* s, const pm_fit_config* config, pm_fit_result* out) {
  return guarded([&] {
    require(s, "spectrum");
    require(out, "out");
    *out = to_c(fit(s->histogram, from_c(config)));
  });
}

void pm_spectrum_destroy(pm_spectrum* s) { delete s; }

pm_status pm_fit_sizes(const int64_t* sizes, size_t count, const pm_fit_config* config, pm_fit_result* out) {
  return guarded([&] {
    require(out, "out");
    if (count > 0) require(sizes, "sizes");
    *out = to_c(fit(histogram_of_sizes(std::span<const Ticks>(sizes, count)), from_c(config)));
  });
}

pm_status pm_mle_count_exponent(const int64_t* sizes, size_t count, int64_t xmin, double* out) {
  return guarded([&] {
    require(out, "out");
    if (count > 0) require(sizes, "sizes");
    *out = mle_count_exponent(std::span<const Ticks>(sizes, count), xmin);
  });
}

pm_status pm_ks_distance(const int64_t* sizes, size_t count, int64_t xmin, double exponent, double* out) {
  return guarded([&] {
    require(out, "out");
    if (count > 0) require(sizes, "sizes");
    *out = ks_distance(std::span<const Ticks>(sizes, count), xmin, exponent);
  });
}

double pm_fit_evaluate(const pm_fit_result* fit, int64_t size) {
  return fit ? fitted_spectrum(from_c(*fit), size) : 0.0;
}

pm_status pm_rolling_fit(const pm_series* series, const pm_rolling_config* config, pm_rolling** out) {
  return guarded([&] {
    require(series, "series");
    require(config, "config");
    require(out, "out");
    RollingConfig cfg;
    cfg.window = config->window_ns;
    cfg.step = config->step_ns;
    cfg.fit = from_c(&config->fit);
    const auto s = to_samples(*series);
    auto r = std::make_unique<pm_rolling>();
    for (const RollingPoint& p : rolling_fit(s, cfg)) {
      pm_rolling_point c{};
      c.window_end_ns = p.window_end;
      c.pair_count = p.pair_count;
      c.status = p.fit ? PM_WINDOW_OK : PM_WINDOW_INSUFFICIENT;
      if (p.fit) c.fit = to_c(*p.fit);
      r->points.push_back(c);
    }
    *out = r.release();
  });
}

size_t pm_rolling_size(const pm_rolling* r) { return r ? r->points.size() : 0; }
const pm_rolling_point* pm_rolling_points(const pm_rolling* r) {
  return r && !r->points.empty() ? r->points.data() : nullptr;
}
void pm_rolling_destroy(pm_rolling* r) { delete r; }

pm_status pm_calendar_read(const char* path, char delimiter, pm_calendar** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto c = std::make_unique<pm_calendar>();
    c->entries = ingest::read_calendar(path, delimiter == '\0' ? ',' : delimiter);
    *out = c.release();
  });
}

size_t pm_calendar_size(const pm_calendar* c) { return c ? c->entries.size() : 0; }
void pm_calendar_destroy(pm_calendar* c) { delete c; }

pm_status pm_continuous_build(const char* const* contract_ids, const pm_series* const* series, size_t count,
                              const pm_calendar* calendar, const pm_roll_rule* rule, pm_continuous** out) {
  return guarded([&] {
    require(calendar, "calendar");
    require(out, "out");
    if (count > 0) {
      require(contract_ids, "contract_ids");
      require(series, "series");
    }
    ingest::RollRule r;
    if (rule != nullptr) {
      r.days_before_expiry = rule->days_before_expiry;
      r.eligible_months.clear();
      for (int m = 1; m <= 12; ++m) {
        if ((rule->month_mask >> (m - 1)) & 1U) r.eligible_months.insert(m);
      }
    }
    r.calendar = calendar->entries;
    std::vector<ingest::ContractSeries> contracts;
    for (size_t i = 0; i < count; ++i) {
      require(contract_ids[i], "contract id");
      require(series[i], "contract series");
      contracts.push_back({contract_ids[i], to_samples(*series[i])});
    }
    ingest::ContinuousSeries built = ingest::build_continuous(contracts, r);
    auto c = std::make_unique<pm_continuous>();
    c->series = from_samples(built.samples);
    c->splices = std::move(built.splices);
    *out = c.release();
  });
}

const pm_series* pm_continuous_series(const pm_continuous* c) { return c ? &c->series : nullptr; }
size_t pm_continuous_splice_count(const pm_continuous* c) { return c ? c->splices.size() : 0; }

pm_status pm_continuous_splice(const pm_continuous* c, size_t index, pm_splice* out) {
  return guarded([&] {
    require(c, "continuous");
    require(out, "out");
    if (index >= c->splices.size()) throw InvalidArgument("splice index out of range");
    const ingest::Splice& s = c->splices[index];
    *out = {s.from_contract.c_str(), s.to_contract.c_str(), s.roll_time, s.adjustment};
  });
}

void pm_continuous_destroy(pm_continuous* c) { delete c; }

pm_status pm_selftest(uint64_t seed, uint64_t walks, pm_selftest_report* out) {
  return guarded([&] {
    require(out, "out");
    SelftestOptions opts;
    if (walks > 0) opts.walks = static_cast<std::size_t>(walks);
    const SelftestReport r = run_selftest(seed, opts);
    *out = {r.walks_checked, r.oracle_mismatches, r.conservation_failures, r.fitted_exponent, r.fitted_xmin,
            r.passed() ? 1 : 0};
  });
}

}  // extern "C"

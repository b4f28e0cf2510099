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

#include "persmove/powerlaw.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_zeta.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>
#include <vector>

#include "persmove/error.hpp"

namespace persmove {

namespace {

// Distinct sizes with counts and suffix sums, so every xmin candidate's
// tail statistics are O(1).
struct Tail {
  std::vector<Ticks> values;
  std::vector<std::int64_t> counts;
  std::vector<std::int64_t> n_suffix;     // samples with value >= values[i]
  std::vector<double> log_suffix;         // sum count * ln(value)
  std::vector<double> contrib_suffix;     // sum 2 * count * value

  explicit Tail(const SizeHistogram& h) {
    for (const auto& [v, c] : h.entries()) {
      values.push_back(v);
      counts.push_back(c);
    }
    const std::size_t k = values.size();
    n_suffix.assign(k + 1, 0);
    log_suffix.assign(k + 1, 0.0);
    contrib_suffix.assign(k + 1, 0.0);
    for (std::size_t i = k; i-- > 0;) {
      n_suffix[i] = n_suffix[i + 1] + counts[i];
      log_suffix[i] = log_suffix[i + 1] + static_cast<double>(counts[i]) * std::log(static_cast<double>(values[i]));
      contrib_suffix[i] = contrib_suffix[i + 1] + 2.0 * static_cast<double>(counts[i]) * static_cast<double>(values[i]);
    }
  }

  [[nodiscard]] std::size_t first_at_least(Ticks xmin) const {
    return static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), xmin) - values.begin());
  }
};

// GSL's default handler aborts; errors are reported through return codes
// instead. The handler is process-global, so it is switched once.
void disable_gsl_abort() {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}

double approx_from_tail(const Tail& t, std::size_t i, Ticks xmin) {
  const double n = static_cast<double>(t.n_suffix[i]);
  const double shift = std::log(static_cast<double>(xmin) - 0.5);
  const double denom = t.log_suffix[i] - n * shift;
  return 1.0 + n / denom;
}

double mle_from_tail(const Tail& t, std::size_t i, Ticks xmin, const FitConfig& cfg) {
  const double n = static_cast<double>(t.n_suffix[i]);
  const double mean_log = t.log_suffix[i] / n;
  const auto neg_ll = [&](double s) {
    const double z = hurwitz_zeta(s, static_cast<double>(xmin));
    return std::log(z) + s * mean_log;
  };

  // The discrete log-likelihood is concave in the exponent, so a golden
  // section search on the bracket converges to the maximizer.
  constexpr double kInvPhi = 0.6180339887498949;
  double lo = cfg.exponent_lo;
  double hi = cfg.exponent_hi;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = neg_ll(x1);
  double f2 = neg_ll(x2);
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = neg_ll(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = neg_ll(x2);
    }
  }
  const double s = 0.5 * (lo + hi);
  if (!std::isfinite(neg_ll(s))) {
    return std::clamp(approx_from_tail(t, i, xmin), cfg.exponent_lo, cfg.exponent_hi);
  }
  return s;
}

double ks_from_tail(const Tail& t, std::size_t i, Ticks xmin, double s) {
  const double n = static_cast<double>(t.n_suffix[i]);
  const double z_total = hurwitz_zeta(s, static_cast<double>(xmin));

  // zeta(s, cursor) tracked incrementally; long gaps are re-anchored with
  // a direct evaluation.
  Ticks cursor = xmin;
  double z_cursor = z_total;
  const auto advance = [&](Ticks to) {
    if (to - cursor > 64) {
      z_cursor = hurwitz_zeta(s, static_cast<double>(to));
    } else {
      for (Ticks k = cursor; k < to; ++k) z_cursor -= std::pow(static_cast<double>(k), -s);
    }
    cursor = to;
  };

  double worst = 0.0;
  double emp_prev = 0.0;
  std::int64_t seen = 0;
  for (std::size_t j = i; j < t.values.size(); ++j) {
    const Ticks v = t.values[j];
    advance(v);
    const double model_before = 1.0 - z_cursor / z_total;  // F(v - 1)
    worst = std::max(worst, std::abs(emp_prev - model_before));
    advance(v + 1);
    const double model_at = 1.0 - z_cursor / z_total;  // F(v)
    seen += t.counts[j];
    const double emp = static_cast<double>(seen) / n;
    worst = std::max(worst, std::abs(emp - model_at));
    emp_prev = emp;
  }
  return worst;
}

void require_identifiable(const Tail& t, std::size_t i, Ticks xmin) {
  if (t.n_suffix[i] < 2) {
    throw InsufficientDataError("need at least two sizes >= xmin=" + std::to_string(xmin));
  }
  if (i + 1 == t.values.size()) {
    throw InsufficientDataError("all sizes >= xmin=" + std::to_string(xmin) +
                                " are equal; exponent is unidentifiable");
  }
}

Tail tail_of(std::span<const Ticks> sizes, Ticks xmin) {
  if (xmin < 1) throw InvalidArgument("xmin must be at least 1");
  SizeHistogram h;
  for (const Ticks s : sizes) {
    if (s < xmin) {
      throw InvalidArgument("size " + std::to_string(s) + " is below xmin=" + std::to_string(xmin));
    }
    h.add(s);
  }
  return Tail(h);
}

PowerLawFit fit_candidate(const Tail& t, std::size_t i, Ticks xmin, const FitConfig& cfg) {
  PowerLawFit f;
  f.xmin = xmin;
  f.n_tail = static_cast<std::size_t>(t.n_suffix[i]);
  f.count_exponent = mle_from_tail(t, i, xmin, cfg);
  f.alpha = f.count_exponent - 1.0;
  f.ks_distance = ks_from_tail(t, i, xmin, f.count_exponent);
  return f;
}

void set_amplitude(const Tail& t, std::size_t i, PowerLawFit& f) {
  double model = 0.0;
  for (std::size_t j = i; j < t.values.size(); ++j) {
    model += std::pow(static_cast<double>(t.values[j]), -f.alpha);
  }
  f.amplitude = t.contrib_suffix[i] / model;
}

}  // namespace

double hurwitz_zeta(double s, double q) {
  if (!(s > 1.0) || !(q > 0.0)) {
    throw InvalidArgument("hurwitz_zeta requires s > 1 and q > 0");
  }
  disable_gsl_abort();
  gsl_sf_result r;
  if (gsl_sf_hzeta_e(s, q, &r) != GSL_SUCCESS) return std::numeric_limits<double>::quiet_NaN();
  return r.val;
}

double approx_count_exponent(std::span<const Ticks> sizes, Ticks xmin) {
  const Tail t = tail_of(sizes, xmin);
  if (t.n_suffix[0] < 1) throw InsufficientDataError("no sizes given");
  return approx_from_tail(t, 0, xmin);
}

double mle_count_exponent(std::span<const Ticks> sizes, Ticks xmin, const FitConfig& config) {
  const Tail t = tail_of(sizes, xmin);
  require_identifiable(t, 0, xmin);
  return mle_from_tail(t, 0, xmin, config);
}

double ks_distance(std::span<const Ticks> sizes, Ticks xmin, double exponent) {
  if (!(exponent > 1.0)) throw InvalidArgument("exponent must exceed 1");
  const Tail t = tail_of(sizes, xmin);
  if (t.n_suffix[0] < 2) {
    throw InsufficientDataError("need at least two sizes >= xmin=" + std::to_string(xmin));
  }
  return ks_from_tail(t, 0, xmin, exponent);
}

PowerLawFit fit(const SizeHistogram& h, const FitConfig& config) {
  if (h.empty()) throw InsufficientDataError("empty size histogram");
  const Tail t(h);

  std::optional<PowerLawFit> best;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i + 1 < t.values.size(); ++i) {
    const Ticks xmin = t.values[i];
    if (!config.xmin_range.contains(xmin)) continue;
    if (static_cast<std::size_t>(t.n_suffix[i]) < config.min_tail) break;
    PowerLawFit f = fit_candidate(t, i, xmin, config);
    if (!best || f.ks_distance < best->ks_distance) {
      best = f;
      best_index = i;
    }
  }
  if (!best) {
    throw InsufficientDataError("no xmin candidate leaves at least " + std::to_string(config.min_tail) +
                                " sizes in the tail (have " + std::to_string(h.total_pairs()) + ")");
  }
  set_amplitude(t, best_index, *best);
  return *best;
}

PowerLawFit fit_at(const SizeHistogram& h, Ticks xmin, const FitConfig& config) {
  if (xmin < 1) throw InvalidArgument("xmin must be at least 1");
  const Tail t(h);
  const std::size_t i = t.first_at_least(xmin);
  if (i == t.values.size() || static_cast<std::size_t>(t.n_suffix[i]) < config.min_tail) {
    throw InsufficientDataError("fewer than " + std::to_string(config.min_tail) +
                                " sizes >= xmin=" + std::to_string(xmin));
  }
  require_identifiable(t, i, xmin);
  PowerLawFit f = fit_candidate(t, i, xmin, config);
  set_amplitude(t, i, f);
  return f;
}

double fitted_spectrum(const PowerLawFit& f, Ticks size) {
  return f.amplitude * std::pow(static_cast<double>(size), -f.alpha);
}

}  // namespace persmove

#pragma once

// Correlation, significance, effect size and dispersion statistics used to
// compare indicators across journal categories.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "citepotential/error.hpp"

namespace citepotential::stats {

using OptionalValues = std::span<const std::optional<double>>;

/// Two aligned columns with possibly missing cells.
class PairedSeries {
 public:
  using Pair = std::pair<std::optional<double>, std::optional<double>>;

  PairedSeries() = default;
  explicit PairedSeries(std::vector<Pair> pairs) : pairs_(std::move(pairs)) {}

  static PairedSeries from_columns(OptionalValues x, OptionalValues y) {
    if (x.size() != y.size())
      throw Error(ErrorCode::InsufficientData, "paired columns differ in length");
    std::vector<Pair> pairs;
    pairs.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) pairs.emplace_back(x[i], y[i]);
    return PairedSeries(std::move(pairs));
  }

  static PairedSeries from_values(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
      throw Error(ErrorCode::InsufficientData, "paired columns differ in length");
    std::vector<Pair> pairs;
    pairs.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) pairs.emplace_back(x[i], y[i]);
    return PairedSeries(std::move(pairs));
  }

  /// Rows where both values are present.
  std::pair<std::vector<double>, std::vector<double>> complete() const {
    std::pair<std::vector<double>, std::vector<double>> out;
    for (const auto& [x, y] : pairs_) {
      if (!x || !y) continue;
      out.first.push_back(*x);
      out.second.push_back(*y);
    }
    return out;
  }

  std::size_t effective_size() const {
    return static_cast<std::size_t>(
        std::ranges::count_if(pairs_, [](const Pair& p) { return p.first && p.second; }));
  }

  const std::vector<Pair>& pairs() const noexcept { return pairs_; }

 private:
  std::vector<Pair> pairs_;
};

enum class ConfidenceTier { none, p90, p95, p99 };
enum class EffectSize { none, small, medium, large };

inline std::string_view marker(ConfidenceTier tier) {
  switch (tier) {
    case ConfidenceTier::p99: return "***";
    case ConfidenceTier::p95: return "**";
    case ConfidenceTier::p90: return "*";
    case ConfidenceTier::none: break;
  }
  return "";
}

inline std::string_view to_string(ConfidenceTier tier) {
  switch (tier) {
    case ConfidenceTier::p99: return "99";
    case ConfidenceTier::p95: return "95";
    case ConfidenceTier::p90: return "90";
    case ConfidenceTier::none: break;
  }
  return "none";
}

inline std::string_view to_string(EffectSize e) {
  switch (e) {
    case EffectSize::large: return "large";
    case EffectSize::medium: return "medium";
    case EffectSize::small: return "small";
    case EffectSize::none: break;
  }
  return "none";
}

struct CorrelationCell {
  double r = 0.0;
  std::size_t n = 0;
  ConfidenceTier tier = ConfidenceTier::none;
  EffectSize effect = EffectSize::none;
};

inline double mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

/// Sample variance (n - 1 denominator), two-pass.
inline double sample_variance(std::span<const double> v) {
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

/// Product-moment correlation of two complete, equally sized samples.
inline double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::InsufficientData, "samples differ in length");
  if (x.size() < 3)
    throw Error(ErrorCode::InsufficientData, "correlation needs at least 3 complete pairs");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::ZeroVariance, "a variable is constant");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// 1-based ranks; tied values share the mean of the ranks they span.
inline std::vector<double> midranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

/// t = r * sqrt((n - 2) / (1 - r^2)).
inline double t_statistic(double r, std::size_t n) {
  return r * std::sqrt(static_cast<double>(n - 2) / (1.0 - r * r));
}

/// P(|T| >= |t|) for Student's t with `df` degrees of freedom, via the
/// regularized incomplete beta function I_{df/(df+t^2)}(df/2, 1/2).
inline double two_tailed_p(double t, double df) {
  if (t == 0.0) return 1.0;
  const double x = df / (df + t * t);
  return boost::math::ibeta(df / 2.0, 0.5, x);
}

inline ConfidenceTier significance_tier(double r, std::size_t n) {
  if (n < 3) throw Error(ErrorCode::InsufficientData, "significance needs n >= 3");
  if (std::abs(r) >= 1.0) return ConfidenceTier::p99;
  const double p = two_tailed_p(t_statistic(r, n), static_cast<double>(n - 2));
  if (p < 0.01) return ConfidenceTier::p99;
  if (p < 0.05) return ConfidenceTier::p95;
  if (p < 0.10) return ConfidenceTier::p90;
  return ConfidenceTier::none;
}

/// Cohen's thresholds on |r|: 0.10 small, 0.30 medium, 0.50 large.
inline EffectSize classify_effect_size(double r) {
  const double a = std::abs(r);
  if (a >= 0.50) return EffectSize::large;
  if (a >= 0.30) return EffectSize::medium;
  if (a >= 0.10) return EffectSize::small;
  return EffectSize::none;
}

inline CorrelationCell make_cell(double r, std::size_t n) {
  return {r, n, significance_tier(r, n), classify_effect_size(r)};
}

/// Pairwise-complete Pearson correlation.
inline CorrelationCell pearson(const PairedSeries& series) {
  auto [x, y] = series.complete();
  return make_cell(pearson_r(x, y), x.size());
}

/// Pearson correlation of the midranks of the pairwise-complete rows.
inline CorrelationCell spearman(const PairedSeries& series) {
  auto [x, y] = series.complete();
  if (x.size() < 3)
    throw Error(ErrorCode::InsufficientData, "correlation needs at least 3 complete pairs");
  return make_cell(pearson_r(midranks(x), midranks(y)), x.size());
}

/// How missing cells enter dispersion measures (sd, total variance).
/// Centre measures (median, mean, group means) always drop missing cells.
enum class MissingDispersion {
  drop,       // dispersion over present values only
  zero_fill,  // dispersion over the full column with missing cells read as 0
};

struct SummaryStats {
  std::size_t n = 0;  // present values
  double median = 0.0;
  double mean = 0.0;
  std::optional<double> sd;  // undefined below two values
};

inline std::vector<double> present(OptionalValues values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values)
    if (v) out.push_back(*v);
  return out;
}

inline std::vector<double> zero_filled(OptionalValues values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(v.value_or(0.0));
  return out;
}

inline double median(std::vector<double> v) {
  std::ranges::sort(v);
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

inline SummaryStats summarize(OptionalValues values, MissingDispersion dispersion = MissingDispersion::drop) {
  auto v = present(values);
  if (v.empty()) throw Error(ErrorCode::EmptySeries, "no present values to summarize");
  SummaryStats s;
  s.n = v.size();
  s.mean = mean(v);
  s.median = median(v);
  const auto spread = dispersion == MissingDispersion::zero_fill ? zero_filled(values) : v;
  if (spread.size() >= 2) s.sd = std::sqrt(sample_variance(spread));
  return s;
}

struct VarianceDecomposition {
  double total_variance = 0.0;
  double between_variance = 0.0;
  double reduction = 0.0;
  double pct_reduction = 0.0;
  /// Between-group variance above total variance; pct_reduction is then negative.
  bool between_exceeds_total = false;
  std::vector<std::pair<std::string, double>> group_means;  // lexicographic by group
};

/// Total variance: sample variance of all rows pooled. Between-group variance:
/// sample variance (k - 1) of the k unweighted group means.
inline VarianceDecomposition variance_decomposition(OptionalValues values, std::span<const std::string> groups,
                                                    MissingDispersion dispersion = MissingDispersion::drop) {
  if (values.size() != groups.size())
    throw Error(ErrorCode::InsufficientGroups, "values and group labels differ in length");
  std::map<std::string, std::vector<double>> by_group;
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto& bucket = by_group[groups[i]];
    if (values[i]) bucket.push_back(*values[i]);
  }
  if (by_group.size() < 2) throw Error(ErrorCode::InsufficientGroups, "need at least two groups");

  VarianceDecomposition out;
  std::vector<double> means;
  for (const auto& [label, bucket] : by_group) {
    if (bucket.empty()) throw Error(ErrorCode::EmptyGroup, "group '" + label + "' has no present values");
    means.push_back(mean(bucket));
    out.group_means.emplace_back(label, means.back());
  }

  const auto pooled = dispersion == MissingDispersion::zero_fill ? zero_filled(values) : present(values);
  if (pooled.size() < 2) throw Error(ErrorCode::InsufficientData, "need at least two present values");
  out.total_variance = sample_variance(pooled);
  if (out.total_variance == 0.0) throw Error(ErrorCode::ZeroVariance, "all values are identical");
  out.between_variance = sample_variance(means);
  out.reduction = out.total_variance - out.between_variance;
  out.pct_reduction = 100.0 * out.reduction / out.total_variance;
  out.between_exceeds_total = out.between_variance > out.total_variance;
  return out;
}

}  // namespace citepotential::stats

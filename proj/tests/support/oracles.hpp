#pragma once

// Reference computations written independently of the library: plain loops,
// long double accumulation, numeric integration. Tests compare against these.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace oracle {

inline long double mean(const std::vector<double>& v) {
  long double s = 0;
  for (double x : v) s += x;
  return s / static_cast<long double>(v.size());
}

inline long double sample_variance(const std::vector<double>& v) {
  const long double m = mean(v);
  long double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<long double>(v.size() - 1);
}

inline long double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const long double mx = mean(x), my = mean(y);
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// Average rank by counting: rank = #smaller + (#equal + 1) / 2.
inline std::vector<double> count_ranks(const std::vector<double>& v) {
  std::vector<double> out;
  for (double a : v) {
    double less = 0, equal = 0;
    for (double b : v) {
      if (b < a) ++less;
      if (b == a) ++equal;
    }
    out.push_back(less + (equal + 1.0) / 2.0);
  }
  return out;
}

inline long double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto rx = count_ranks(x), ry = count_ranks(y);
  return pearson(rx, ry);
}

// Two-tailed Student-t p value by composite Simpson integration of the density
// over [0, |t|]: p = 1 - 2 * integral.
inline double student_t_two_tailed(double t, double df, int panels = 200000) {
  const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * std::numbers::pi);
  auto f = [&](double x) { return c * std::pow(1 + x * x / df, -(df + 1) / 2); };
  const double a = std::abs(t);
  const double h = a / panels;
  double s = f(0) + f(a);
  for (int i = 1; i < panels; ++i) s += f(i * h) * (i % 2 ? 4 : 2);
  return 1.0 - 2.0 * s * h / 3.0;
}

inline double median(std::vector<double> v) {
  // insertion sort, no <algorithm>
  for (std::size_t i = 1; i < v.size(); ++i)
    for (std::size_t j = i; j > 0 && v[j - 1] > v[j]; --j) std::swap(v[j - 1], v[j]);
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace oracle

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace citepotential::format {

/// Fixed-point text rounded half-up at `digits` decimals. A relative nudge of
/// 1e-9 absorbs binary representation error, so 2.0005 renders as 2.001.
inline std::string round_half_up(double value, int digits) {
  if (!std::isfinite(value)) return "--";
  const double scale = std::pow(10.0, digits);
  const double magnitude = std::abs(value) * scale;
  const double rounded = std::floor(magnitude + 0.5 + 1e-9 * std::max(1.0, magnitude));
  const double signed_value = (value < 0.0 && rounded != 0.0 ? -rounded : rounded) / scale;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, signed_value);
  return buf;
}

/// The rounded value as a double, for JSON output that must agree with the text.
inline double rounded_number(double value, int digits) { return std::stod(round_half_up(value, digits)); }

/// 64-bit FNV-1a.
class Fnv1a {
 public:
  void update(std::string_view bytes) {
    for (unsigned char c : bytes) {
      hash_ ^= c;
      hash_ *= 0x100000001b3ULL;
    }
    // length separator so ("ab","c") and ("a","bc") differ
    const auto n = bytes.size();
    for (int i = 0; i < 8; ++i) {
      hash_ ^= static_cast<unsigned char>(n >> (8 * i));
      hash_ *= 0x100000001b3ULL;
    }
  }

  std::uint64_t value() const noexcept { return hash_; }

  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
    return buf;
  }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace citepotential::format

#pragma once

// Minimal line-oriented CSV dialect: comma separator, double-quote quoting
// with "" as an escaped quote, LF or CRLF endings, optional UTF-8 BOM.
// Quoted fields may not span lines.

#include <charconv>
#include <cstdint>
#include <istream>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace citepotential::csv {

struct Line {
  std::size_t number = 0;  // 1-based physical line number
  std::string text;
};

/// Splits text into lines, dropping a leading BOM and trailing CRs. Blank lines
/// are kept so line numbers stay aligned with the file.
inline std::vector<Line> split_lines(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<Line> lines;
  std::size_t number = 1;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    if (line.ends_with('\r')) line.remove_suffix(1);
    lines.push_back({number++, std::string(line)});
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

inline std::string read_all(std::istream& in) {
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

/// Returns nullopt on unbalanced or stray quotes.
inline std::optional<std::vector<std::string>> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t i = 0;
  while (true) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::string field;
    if (i < line.size() && line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field.push_back('"');
            i += 2;
            continue;
          }
          closed = true;
          ++i;
          break;
        }
        field.push_back(line[i++]);
      }
      if (!closed) return std::nullopt;
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i < line.size() && line[i] != ',') return std::nullopt;
    } else {
      auto end = line.find(',', i);
      auto raw = line.substr(i, end == std::string_view::npos ? std::string_view::npos : end - i);
      if (raw.find('"') != std::string_view::npos) return std::nullopt;
      field = std::string(trim(raw));
      i = end == std::string_view::npos ? line.size() : end;
    }
    fields.push_back(std::move(field));
    if (i >= line.size()) break;
    ++i;  // comma
    if (i == line.size()) {
      fields.emplace_back();
      break;
    }
  }
  return fields;
}

inline std::string quote(std::string_view field) {
  bool needs = field.find_first_of(",\"") != std::string_view::npos ||
               (!field.empty() && (field.front() == ' ' || field.back() == ' '));
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += quote(fields[i]);
  }
  return out;
}

enum class NumberStatus { ok, malformed, negative };

template <typename T>
struct NumberParse {
  NumberStatus status = NumberStatus::malformed;
  T value{};
};

/// Base-10 integer, optional leading minus.
inline NumberParse<std::int64_t> parse_integer(std::string_view s) {
  NumberParse<std::int64_t> out;
  if (s.empty()) return out;
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return out;
  out.value = v;
  out.status = v < 0 ? NumberStatus::negative : NumberStatus::ok;
  return out;
}

/// Plain decimal notation only: [-]digits[.digits] or [-].digits.
inline NumberParse<double> parse_decimal(std::string_view s) {
  NumberParse<double> out;
  std::string_view body = s;
  if (body.starts_with('-')) body.remove_prefix(1);
  if (body.empty()) return out;
  std::size_t digits = 0, dots = 0;
  for (char c : body) {
    if (c >= '0' && c <= '9') {
      ++digits;
    } else if (c == '.') {
      ++dots;
    } else {
      return out;
    }
  }
  if (digits == 0 || dots > 1) return out;
  double v = 0.0;
  auto [ptr, ec] =
      std::from_chars(s.data(), s.data() + s.size(), v, std::chars_format::fixed);
  if (ec != std::errc() || ptr != s.data() + s.size()) return out;
  if (v == 0.0) v = 0.0;  // normalise -0
  out.value = v;
  out.status = v < 0.0 ? NumberStatus::negative : NumberStatus::ok;
  return out;
}

}  // namespace citepotential::csv

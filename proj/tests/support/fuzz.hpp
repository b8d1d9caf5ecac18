#pragma once

// Mutation fuzzing of the CSV parsers and round-trip checks on the shipped
// data files.

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "citepotential/ingest.hpp"
#include "support/fixtures.hpp"
#include "support/properties.hpp"

namespace testing_support {

// Data rows as the parsers should see them: physical lines after the first
// non-blank one, minus blank lines.
inline std::size_t count_data_rows(std::string text) {
  if (text.rfind("\xEF\xBB\xBF", 0) == 0) text.erase(0, 3);
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  std::size_t rows = 0;
  bool header_seen = false;
  for (auto line : lines) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (!header_seen) header_seen = true;
    else ++rows;
  }
  return rows;
}

inline std::string mutate(std::string text, std::mt19937_64& rng) {
  static const std::vector<std::string> kInserts = {",", "\"", "-", "\n", "\r\n", "x", "9", ".", " ", "--",
                                                    std::string(1, '\0'), "\xFF", "99999999999999999999999",
                                                    "1e5", "nan", "inf", "-0", "\"\"", ",,,"};
  std::uniform_int_distribution<int> op(0, 6), times(1, 6);
  const int n = times(rng);
  for (int m = 0; m < n && !text.empty(); ++m) {
    std::uniform_int_distribution<std::size_t> pos(0, text.size() - 1);
    switch (op(rng)) {
      case 0: text.erase(pos(rng), 1); break;
      case 1: {
        std::uniform_int_distribution<std::size_t> pick(0, kInserts.size() - 1);
        text.insert(pos(rng), kInserts[pick(rng)]);
        break;
      }
      case 2: text[pos(rng)] = static_cast<char>(std::uniform_int_distribution<int>(0, 255)(rng)); break;
      case 3: text.resize(pos(rng)); break;
      case 4: {  // duplicate a line
        const auto at = text.rfind('\n', pos(rng));
        const auto start = at == std::string::npos ? 0 : at + 1;
        const auto end = text.find('\n', start);
        const auto line = text.substr(start, end == std::string::npos ? std::string::npos : end - start + 1);
        text.insert(start, line);
        break;
      }
      case 5: {  // clobber a field
        const auto at = text.find(',', pos(rng));
        if (at != std::string::npos) text.insert(at + 1, "-12");
        break;
      }
      case 6: text.insert(0, "\xEF\xBB\xBF"); break;
    }
  }
  return text;
}

struct FuzzResult : PropertyResult {
  std::size_t rejected_rows = 0;
  std::size_t header_errors = 0;
};

inline FuzzResult fuzz_parsers(std::size_t cases, std::uint64_t seed) {
  using namespace citepotential;
  using Parser = std::function<ingest::ParseReport(const std::string&)>;
  struct Target {
    std::string name;
    std::string text;
    Parser parse;
  };
  const std::vector<Target> targets = {
      {"fixture", slurp("fixture_table2.csv"), [](const std::string& t) { return ingest::parse_fixture(t).report; }},
      {"groups", slurp("groups.csv"), [](const std::string& t) { return ingest::parse_groups(t).report; }},
      {"citations", slurp("figure1_toy/citations.csv"),
       [](const std::string& t) { return ingest::parse_citations(t).report; }},
      {"publications", slurp("figure1_toy/publications.csv"),
       [](const std::string& t) { return ingest::parse_publications(t, {ingest::DuplicatePolicy::lenient}).report; }},
  };

  FuzzResult res;
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < cases; ++c, ++res.cases) {
    const auto& target = targets[c % targets.size()];
    const auto text = mutate(target.text, rng);
    try {
      const auto report = target.parse(text);
      const auto expected = count_data_rows(text);
      if (report.total_rows() != expected)
        res.fail(target.name + " case " + std::to_string(c) + ": " + std::to_string(report.accepted_rows) + " + " +
                 std::to_string(report.rejected_rows.size()) + " != " + std::to_string(expected));
      res.rejected_rows += report.rejected_rows.size();
      for (const auto& r : report.rejected_rows)
        if (r.line < 2 || r.reason.empty()) res.fail(target.name + ": rejected row without line or reason");
    } catch (const Error& e) {
      ++res.header_errors;
      if (e.code() != ErrorCode::MalformedHeader)
        res.fail(target.name + ": unexpected fatal " + std::string(to_string(e.code())));
    } catch (const std::exception& e) {
      res.fail(target.name + ": non-library exception " + e.what());
    }
  }
  return res;
}

inline PropertyResult round_trip_shipped_files() {
  using namespace citepotential;
  PropertyResult res;
  auto check = [&](const std::string& name, bool same, bool clean) {
    ++res.cases;
    if (!clean) res.fail(name + ": reparse reported problems");
    if (!same) res.fail(name + ": data changed across serialize");
  };
  {
    auto a = ingest::parse_fixture(slurp("fixture_table2.csv"));
    auto b = ingest::parse_fixture(ingest::serialize(a.value));
    check("fixture", a.value == b.value && b.value.size() == 224, a.report.clean() && b.report.clean());
  }
  {
    auto a = ingest::parse_groups(slurp("groups.csv"));
    auto b = ingest::parse_groups(ingest::serialize(a.value));
    check("groups", a.value == b.value, a.report.clean() && b.report.clean());
  }
  {
    auto a = ingest::parse_citations(slurp("figure1_toy/citations.csv"));
    auto b = ingest::parse_citations(ingest::serialize(a.value));
    check("citations", a.value == b.value, a.report.clean() && b.report.clean());
  }
  {
    auto a = ingest::parse_publications(slurp("figure1_toy/publications.csv"));
    auto b = ingest::parse_publications(ingest::serialize(a.value));
    check("publications", a.value == b.value, a.report.clean() && b.report.clean());
  }
  return res;
}

}  // namespace testing_support

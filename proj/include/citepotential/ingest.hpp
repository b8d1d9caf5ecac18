#pragma once

// Parsers and serializers for the four input files:
//
//   citations.csv     census_year,citing,cited,cited_year,count
//   publications.csv  journal,year,citable_items
//   groups.csv        journal,category
//   fixture.csv       journal,category,jif2,jif5,es,fcif,cp_selfcite,cp,tnif_selfcite,tnif
//
// Header row is mandatory; columns may appear in any order. Row-level problems
// are collected in the ParseReport and the row is skipped; only a missing or
// malformed header aborts the parse (as an Error with MalformedHeader).

#include <algorithm>
#include <array>
#include <cstdio>
#include <functional>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "citepotential/core_model.hpp"
#include "citepotential/csv.hpp"
#include "citepotential/error.hpp"

namespace citepotential::ingest {

struct RejectedRow {
  std::size_t line = 0;
  ErrorCode code = ErrorCode::MalformedRow;
  std::string reason;
};

struct ParseReport {
  std::size_t accepted_rows = 0;
  std::vector<RejectedRow> rejected_rows;
  std::vector<std::string> warnings;

  std::size_t total_rows() const { return accepted_rows + rejected_rows.size(); }
  bool clean() const { return rejected_rows.empty(); }

  std::string describe(std::string_view source) const {
    std::ostringstream out;
    out << source << ": " << accepted_rows << " accepted, " << rejected_rows.size()
        << " rejected\n";
    for (const auto& r : rejected_rows)
      out << "  line " << r.line << ": " << to_string(r.code) << ": " << r.reason << "\n";
    for (const auto& w : warnings) out << "  warning: " << w << "\n";
    return out.str();
  }
};

template <typename T>
struct Parsed {
  T value;
  ParseReport report;
};

enum class DuplicatePolicy {
  strict,   // second occurrence of a key is rejected
  lenient,  // counts for repeated keys are summed, with a warning
};

struct ParseOptions {
  DuplicatePolicy duplicates = DuplicatePolicy::strict;
};

inline constexpr std::string_view kMissingMarker = "--";

namespace detail {

struct RowError {
  ErrorCode code;
  std::string reason;
};

using Fields = std::vector<std::string>;
using RowHandler = std::function<std::optional<RowError>(const Fields&, std::size_t line)>;

/// Drives one table: resolves the header to the expected column order and
/// feeds each data row (reordered) to `handle`.
template <std::size_t N>
ParseReport parse_table(std::string_view text, const std::array<std::string_view, N>& columns,
                        const RowHandler& handle) {
  ParseReport report;
  auto lines = csv::split_lines(text);
  auto first = std::ranges::find_if(lines, [](const csv::Line& l) { return !csv::trim(l.text).empty(); });
  if (first == lines.end()) throw Error(ErrorCode::MalformedHeader, "missing header row");

  auto header = csv::split_fields(first->text);
  if (!header || header->size() != N)
    throw Error(ErrorCode::MalformedHeader, "expected " + std::to_string(N) + " header columns");
  std::array<std::size_t, N> position{};
  for (std::size_t c = 0; c < N; ++c) {
    auto it = std::ranges::find(*header, columns[c]);
    if (it == header->end())
      throw Error(ErrorCode::MalformedHeader, "missing column '" + std::string(columns[c]) + "'");
    if (std::count(header->begin(), header->end(), *it) > 1)
      throw Error(ErrorCode::MalformedHeader, "duplicate column '" + std::string(columns[c]) + "'");
    position[c] = static_cast<std::size_t>(it - header->begin());
  }

  for (auto it = std::next(first); it != lines.end(); ++it) {
    if (csv::trim(it->text).empty()) continue;
    auto fields = csv::split_fields(it->text);
    if (!fields) {
      report.rejected_rows.push_back({it->number, ErrorCode::MalformedRow, "unbalanced quoting"});
      continue;
    }
    if (fields->size() != N) {
      report.rejected_rows.push_back(
          {it->number, ErrorCode::MalformedRow,
           "expected " + std::to_string(N) + " fields, got " + std::to_string(fields->size())});
      continue;
    }
    Fields ordered(N);
    for (std::size_t c = 0; c < N; ++c) ordered[c] = std::move((*fields)[position[c]]);
    if (auto err = handle(ordered, it->number)) {
      report.rejected_rows.push_back({it->number, err->code, std::move(err->reason)});
    } else {
      ++report.accepted_rows;
    }
  }
  return report;
}

inline std::optional<RowError> read_count(std::string_view field, std::string_view what,
                                          std::uint64_t& out) {
  auto n = csv::parse_integer(field);
  if (n.status == csv::NumberStatus::malformed)
    return RowError{ErrorCode::MalformedRow, std::string(what) + " is not an integer: '" +
                                                 std::string(field) + "'"};
  if (n.status == csv::NumberStatus::negative)
    return RowError{ErrorCode::NegativeCount, std::string(what) + " is negative"};
  out = static_cast<std::uint64_t>(n.value);
  return std::nullopt;
}

inline std::optional<RowError> read_year(std::string_view field, std::string_view what, int& out) {
  auto n = csv::parse_integer(field);
  if (n.status != csv::NumberStatus::ok || n.value > 100000)
    return RowError{ErrorCode::MalformedRow, std::string(what) + " is not a valid year: '" +
                                                 std::string(field) + "'"};
  out = static_cast<int>(n.value);
  return std::nullopt;
}

inline std::optional<RowError> read_journal(std::string_view field, std::optional<JournalId>& out) {
  if (field.empty()) return RowError{ErrorCode::InvalidJournalId, "empty journal id"};
  out.emplace(std::string(field));
  return std::nullopt;
}

inline std::string format_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace detail

inline Parsed<CitationLedger> parse_citations(std::string_view text, ParseOptions options = {}) {
  static constexpr std::array<std::string_view, 5> kColumns = {"census_year", "citing", "cited",
                                                               "cited_year", "count"};
  CitationLedger ledger;
  std::vector<std::string> warnings;
  auto report = detail::parse_table(text, kColumns, [&](const detail::Fields& f, std::size_t line)
                                                        -> std::optional<detail::RowError> {
    CitationKey key;
    std::optional<JournalId> citing, cited;
    std::uint64_t count = 0;
    if (auto e = detail::read_year(f[0], "census_year", key.census_year)) return e;
    if (auto e = detail::read_journal(f[1], citing)) return e;
    if (auto e = detail::read_journal(f[2], cited)) return e;
    if (auto e = detail::read_year(f[3], "cited_year", key.cited_year)) return e;
    if (auto e = detail::read_count(f[4], "count", count)) return e;
    if (key.cited_year >= key.census_year)
      return detail::RowError{ErrorCode::MalformedRow, "cited_year must be before census_year"};
    key.citing = *citing;
    key.cited = *cited;
    if (ledger.contains(key)) {
      if (options.duplicates == DuplicatePolicy::strict)
        return detail::RowError{ErrorCode::DuplicateKey, "duplicate key " + CitationLedger::describe(key)};
      warnings.push_back("line " + std::to_string(line) + ": summed duplicate key " +
                         CitationLedger::describe(key));
      ledger.accumulate(key, count);
      return std::nullopt;
    }
    ledger.insert(key, count);
    return std::nullopt;
  });
  report.warnings = std::move(warnings);
  return {std::move(ledger), std::move(report)};
}

inline Parsed<PublicationCounts> parse_publications(std::string_view text, ParseOptions options = {}) {
  static constexpr std::array<std::string_view, 3> kColumns = {"journal", "year", "citable_items"};
  PublicationCounts pubs;
  std::vector<std::string> warnings;
  auto report = detail::parse_table(text, kColumns, [&](const detail::Fields& f, std::size_t line)
                                                        -> std::optional<detail::RowError> {
    std::optional<JournalId> journal;
    int year = 0;
    std::uint64_t items = 0;
    if (auto e = detail::read_journal(f[0], journal)) return e;
    if (auto e = detail::read_year(f[1], "year", year)) return e;
    if (auto e = detail::read_count(f[2], "citable_items", items)) return e;
    if (pubs.contains(*journal, year)) {
      if (options.duplicates == DuplicatePolicy::strict)
        return detail::RowError{ErrorCode::DuplicateKey,
                                "duplicate key " + journal->str() + "," + std::to_string(year)};
      warnings.push_back("line " + std::to_string(line) + ": summed duplicate key " +
                         journal->str() + "," + std::to_string(year));
      pubs.accumulate(*journal, year, items);
      return std::nullopt;
    }
    pubs.insert(*journal, year, items);
    return std::nullopt;
  });
  report.warnings = std::move(warnings);
  return {std::move(pubs), std::move(report)};
}

inline Parsed<GroupPartition> parse_groups(std::string_view text) {
  static constexpr std::array<std::string_view, 2> kColumns = {"journal", "category"};
  GroupPartition groups;
  auto report = detail::parse_table(text, kColumns, [&](const detail::Fields& f, std::size_t)
                                                        -> std::optional<detail::RowError> {
    std::optional<JournalId> journal;
    if (auto e = detail::read_journal(f[0], journal)) return e;
    if (f[1].empty()) return detail::RowError{ErrorCode::MalformedRow, "empty category"};
    if (groups.contains(*journal, f[1]))
      return detail::RowError{ErrorCode::DuplicatePair, journal->str() + " / " + f[1]};
    groups.add(std::move(*journal), f[1]);
    return std::nullopt;
  });
  return {std::move(groups), std::move(report)};
}

inline Parsed<FixtureTable> parse_fixture(std::string_view text) {
  static constexpr std::array<std::string_view, 10> kColumns = {
      "journal", "category", "jif2", "jif5", "es", "fcif", "cp_selfcite", "cp", "tnif_selfcite", "tnif"};
  FixtureTable table;
  auto report = detail::parse_table(text, kColumns, [&](const detail::Fields& f, std::size_t)
                                                        -> std::optional<detail::RowError> {
    std::optional<JournalId> journal;
    if (auto e = detail::read_journal(f[0], journal)) return e;
    if (f[1].empty()) return detail::RowError{ErrorCode::MalformedRow, "empty category"};
    FixtureRow row{*journal, f[1], {}};
    for (std::size_t c = 0; c < kFixtureColumnCount; ++c) {
      const auto& cell = f[c + 2];
      if (cell.empty() || cell == kMissingMarker) continue;
      auto v = csv::parse_decimal(cell);
      if (v.status == csv::NumberStatus::malformed)
        return detail::RowError{ErrorCode::MalformedRow, std::string(kFixtureColumnNames[c]) +
                                                             " is not a decimal: '" + cell + "'"};
      if (v.status == csv::NumberStatus::negative)
        return detail::RowError{ErrorCode::NegativeValue,
                                std::string(kFixtureColumnNames[c]) + " is negative"};
      row.values[c] = v.value;
    }
    if (table.find(row.journal, row.category))
      return detail::RowError{ErrorCode::DuplicateKey, row.journal.str() + " / " + row.category};
    table.add(std::move(row));
    return std::nullopt;
  });
  return {std::move(table), std::move(report)};
}

inline Parsed<CitationLedger> parse_citations(std::istream& in, ParseOptions options = {}) {
  return parse_citations(csv::read_all(in), options);
}
inline Parsed<PublicationCounts> parse_publications(std::istream& in, ParseOptions options = {}) {
  return parse_publications(csv::read_all(in), options);
}
inline Parsed<GroupPartition> parse_groups(std::istream& in) { return parse_groups(csv::read_all(in)); }
inline Parsed<FixtureTable> parse_fixture(std::istream& in) { return parse_fixture(csv::read_all(in)); }

inline std::string serialize(const CitationLedger& ledger) {
  std::string out = "census_year,citing,cited,cited_year,count\n";
  for (const auto& [k, count] : ledger.entries()) {
    out += csv::join({std::to_string(k.census_year), k.citing.str(), k.cited.str(),
                      std::to_string(k.cited_year), std::to_string(count)});
    out += '\n';
  }
  return out;
}

inline std::string serialize(const PublicationCounts& pubs) {
  std::string out = "journal,year,citable_items\n";
  for (const auto& [k, items] : pubs.entries()) {
    out += csv::join({k.first.str(), std::to_string(k.second), std::to_string(items)});
    out += '\n';
  }
  return out;
}

inline std::string serialize(const GroupPartition& groups) {
  std::string out = "journal,category\n";
  for (const auto& r : groups.rows()) {
    out += csv::join({r.journal.str(), r.category});
    out += '\n';
  }
  return out;
}

/// Five decimals per value; missing cells as "--".
inline std::string serialize(const FixtureTable& table) {
  std::string out = "journal,category,jif2,jif5,es,fcif,cp_selfcite,cp,tnif_selfcite,tnif\n";
  for (const auto& r : table.rows()) {
    std::vector<std::string> fields{r.journal.str(), r.category};
    for (const auto& v : r.values)
      fields.push_back(v ? detail::format_fixed(*v, 5) : std::string(kMissingMarker));
    out += csv::join(fields);
    out += '\n';
  }
  return out;
}

}  // namespace citepotential::ingest

#pragma once

// Domain types shared by every stage: journal identity, the target window,
// the raw count tables and the validated, immutable Snapshot that all
// metric computation reads from.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "citepotential/error.hpp"

namespace citepotential {

/// Exact, case-sensitive journal token (usually the abbreviated title).
class JournalId {
 public:
  JournalId() = default;
  explicit JournalId(std::string value) : value_(std::move(value)) {
    if (value_.empty()) throw Error(ErrorCode::InvalidJournalId, "journal id must be non-empty");
  }

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend auto operator<=>(const JournalId&, const JournalId&) = default;
  friend bool operator==(const JournalId&, const JournalId&) = default;

 private:
  std::string value_;
};

/// Census year y plus the offsets t whose volumes y - t form the target window.
class YearWindow {
 public:
  YearWindow(int census_year, std::vector<int> target_offsets = {1, 2})
      : census_year_(census_year), offsets_(std::move(target_offsets)) {
    if (offsets_.empty()) throw Error(ErrorCode::InvalidWindow, "window needs at least one offset");
    for (std::size_t i = 0; i < offsets_.size(); ++i) {
      if (offsets_[i] <= 0) throw Error(ErrorCode::InvalidWindow, "window offsets must be positive");
      if (i > 0 && offsets_[i] <= offsets_[i - 1])
        throw Error(ErrorCode::InvalidWindow, "window offsets must be strictly increasing");
    }
  }

  int census_year() const noexcept { return census_year_; }
  const std::vector<int>& offsets() const noexcept { return offsets_; }

  std::vector<int> target_years() const {
    std::vector<int> years;
    years.reserve(offsets_.size());
    for (int t : offsets_) years.push_back(census_year_ - t);
    return years;
  }

  bool contains_year(int year) const {
    return std::ranges::find(offsets_, census_year_ - year) != offsets_.end();
  }

  /// True for the classic two-year window {1, 2}.
  bool is_two_year() const { return offsets_ == std::vector<int>{1, 2}; }

  friend bool operator==(const YearWindow&, const YearWindow&) = default;

 private:
  int census_year_;
  std::vector<int> offsets_;
};

/// Citable items per (journal, year).
class PublicationCounts {
 public:
  using Key = std::pair<JournalId, int>;

  /// Inserts a new entry; a second entry for the same key is a DuplicateKey error.
  void insert(const JournalId& journal, int year, std::uint64_t items) {
    auto [it, fresh] = entries_.try_emplace({journal, year}, items);
    if (!fresh)
      throw Error(ErrorCode::DuplicateKey,
                  "publication count for " + journal.str() + "/" + std::to_string(year));
  }

  /// Adds to an existing entry (lenient merge of duplicates).
  void accumulate(const JournalId& journal, int year, std::uint64_t items) {
    entries_[{journal, year}] += items;
  }

  bool contains(const JournalId& journal, int year) const {
    return entries_.contains({journal, year});
  }

  std::optional<std::uint64_t> get(const JournalId& journal, int year) const {
    auto it = entries_.find({journal, year});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<Key, std::uint64_t>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  friend bool operator==(const PublicationCounts&, const PublicationCounts&) = default;

 private:
  std::map<Key, std::uint64_t> entries_;
};

struct CitationKey {
  int census_year = 0;
  JournalId citing;
  JournalId cited;
  int cited_year = 0;

  friend auto operator<=>(const CitationKey&, const CitationKey&) = default;
  friend bool operator==(const CitationKey&, const CitationKey&) = default;
};

/// Counts of citations made in a census year by one journal to another
/// journal's volumes of an earlier year. Self-citations are ordinary entries.
class CitationLedger {
 public:
  void insert(const CitationKey& key, std::uint64_t count) {
    check_key(key);
    auto [it, fresh] = entries_.try_emplace(key, count);
    if (!fresh) throw Error(ErrorCode::DuplicateKey, describe(key));
  }

  void accumulate(const CitationKey& key, std::uint64_t count) {
    check_key(key);
    entries_[key] += count;
  }

  bool contains(const CitationKey& key) const { return entries_.contains(key); }

  std::optional<std::uint64_t> get(const CitationKey& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<CitationKey, std::uint64_t>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  static std::string describe(const CitationKey& key) {
    return std::to_string(key.census_year) + "," + key.citing.str() + "->" + key.cited.str() + "," +
           std::to_string(key.cited_year);
  }

  friend bool operator==(const CitationLedger&, const CitationLedger&) = default;

 private:
  static void check_key(const CitationKey& key) {
    if (key.citing.empty() || key.cited.empty())
      throw Error(ErrorCode::InvalidJournalId, "citation key with empty journal");
    if (key.cited_year >= key.census_year)
      throw Error(ErrorCode::WindowMismatch,
                  "cited year must precede census year: " + describe(key));
  }

  std::map<CitationKey, std::uint64_t> entries_;
};

struct BuildOptions {
  /// Strict: every registered journal needs a count for every target year and
  /// every ledger entry must fall inside the window.
  bool strict = false;
};

/// Validated join of registry, window, publication counts and citation ledger.
/// Immutable once built; all accessors are const.
class Snapshot {
 public:
  static Snapshot build(std::set<JournalId> registry, YearWindow window, PublicationCounts pubs,
                        CitationLedger ledger, BuildOptions options = {}) {
    for (const auto& [key, items] : pubs.entries()) {
      if (!registry.contains(key.first))
        throw Error(ErrorCode::UnknownJournal,
                    "publication count references unregistered journal " + key.first.str());
    }
    for (const auto& [key, count] : ledger.entries()) {
      if (!registry.contains(key.citing))
        throw Error(ErrorCode::UnknownJournal,
                    "ledger references unregistered citing journal " + key.citing.str());
      if (!registry.contains(key.cited))
        throw Error(ErrorCode::UnknownJournal,
                    "ledger references unregistered cited journal " + key.cited.str());
      if (options.strict && !in_window(window, key))
        throw Error(ErrorCode::WindowMismatch,
                    "ledger entry outside target window: " + CitationLedger::describe(key));
    }

    const auto years = window.target_years();
    for (const auto& journal : registry) {
      for (int year : years) {
        if (pubs.contains(journal, year)) continue;
        if (options.strict)
          throw Error(ErrorCode::MissingPublicationCount,
                      journal.str() + " has no citable-item count for " + std::to_string(year));
        pubs.insert(journal, year, 0);
      }
    }

    Snapshot snap(std::move(registry), std::move(window), std::move(pubs), std::move(ledger));
    snap.index();
    return snap;
  }

  const std::set<JournalId>& registry() const noexcept { return registry_; }
  const YearWindow& window() const noexcept { return window_; }
  const PublicationCounts& publications() const noexcept { return pubs_; }
  const CitationLedger& ledger() const noexcept { return ledger_; }

  bool is_registered(const JournalId& journal) const { return registry_.contains(journal); }

  /// Sum of citable items over the target years.
  std::uint64_t window_publications(const JournalId& journal) const {
    auto it = window_pubs_.find(journal);
    return it == window_pubs_.end() ? 0 : it->second;
  }

  /// Citations in the census year to the journal's target-window volumes, from
  /// every citing journal including itself.
  std::uint64_t window_citations_received(const JournalId& journal) const {
    auto it = received_.find(journal);
    return it == received_.end() ? 0 : it->second;
  }

  /// Window-scoped citation counts into `cited`, keyed by citing journal.
  /// Citing journals with a zero window count are absent.
  const std::map<JournalId, std::uint64_t>& window_citers(const JournalId& cited) const {
    static const std::map<JournalId, std::uint64_t> kNone;
    auto it = citers_.find(cited);
    return it == citers_.end() ? kNone : it->second;
  }

  std::uint64_t total_window_publications() const noexcept { return total_pubs_; }
  std::uint64_t total_window_citations() const noexcept { return total_cites_; }

  friend bool operator==(const Snapshot& a, const Snapshot& b) {
    return a.registry_ == b.registry_ && a.window_ == b.window_ && a.pubs_ == b.pubs_ &&
           a.ledger_ == b.ledger_;
  }

 private:
  Snapshot(std::set<JournalId> registry, YearWindow window, PublicationCounts pubs,
           CitationLedger ledger)
      : registry_(std::move(registry)),
        window_(std::move(window)),
        pubs_(std::move(pubs)),
        ledger_(std::move(ledger)) {}

  static bool in_window(const YearWindow& window, const CitationKey& key) {
    return key.census_year == window.census_year() && window.contains_year(key.cited_year);
  }

  void index() {
    const auto years = window_.target_years();
    for (const auto& journal : registry_) {
      std::uint64_t sum = 0;
      for (int year : years) sum += pubs_.get(journal, year).value_or(0);
      window_pubs_[journal] = sum;
      total_pubs_ += sum;
    }
    for (const auto& [key, count] : ledger_.entries()) {
      if (count == 0 || !in_window(window_, key)) continue;
      citers_[key.cited][key.citing] += count;
      received_[key.cited] += count;
      total_cites_ += count;
    }
  }

  std::set<JournalId> registry_;
  YearWindow window_;
  PublicationCounts pubs_;
  CitationLedger ledger_;

  std::map<JournalId, std::uint64_t> window_pubs_;
  std::map<JournalId, std::uint64_t> received_;
  std::map<JournalId, std::map<JournalId, std::uint64_t>> citers_;
  std::uint64_t total_pubs_ = 0;
  std::uint64_t total_cites_ = 0;
};

struct GroupRow {
  JournalId journal;
  std::string category;

  friend bool operator==(const GroupRow&, const GroupRow&) = default;
};

/// Journal-to-category assignment. A journal may sit in several categories,
/// but each (journal, category) pair appears once.
class GroupPartition {
 public:
  void add(JournalId journal, std::string category) {
    if (contains(journal, category))
      throw Error(ErrorCode::DuplicatePair, journal.str() + " already in " + category);
    rows_.push_back({std::move(journal), std::move(category)});
  }

  bool contains(const JournalId& journal, std::string_view category) const {
    return std::ranges::any_of(rows_, [&](const GroupRow& r) {
      return r.journal == journal && r.category == category;
    });
  }

  /// Distinct categories in lexicographic order.
  std::vector<std::string> categories() const {
    std::set<std::string> seen;
    for (const auto& r : rows_) seen.insert(r.category);
    return {seen.begin(), seen.end()};
  }

  std::size_t count(std::string_view category) const {
    return static_cast<std::size_t>(
        std::ranges::count_if(rows_, [&](const GroupRow& r) { return r.category == category; }));
  }

  const std::vector<GroupRow>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }

  friend bool operator==(const GroupPartition&, const GroupPartition&) = default;

 private:
  std::vector<GroupRow> rows_;
};

/// Numeric columns of the published indicator table, in file order.
enum class FixtureColumn : std::size_t {
  jif2 = 0,
  jif5,
  es,
  fcif,
  cp_selfcite,
  cp,
  tnif_selfcite,
  tnif,
};

inline constexpr std::size_t kFixtureColumnCount = 8;

inline constexpr std::array<std::string_view, kFixtureColumnCount> kFixtureColumnNames = {
    "jif2", "jif5", "es", "fcif", "cp_selfcite", "cp", "tnif_selfcite", "tnif"};

struct FixtureRow {
  JournalId journal;
  std::string category;
  std::array<std::optional<double>, kFixtureColumnCount> values{};

  std::optional<double> get(FixtureColumn c) const { return values[static_cast<std::size_t>(c)]; }
  void set(FixtureColumn c, std::optional<double> v) { values[static_cast<std::size_t>(c)] = v; }

  friend bool operator==(const FixtureRow&, const FixtureRow&) = default;
};

class FixtureTable {
 public:
  void add(FixtureRow row) {
    if (find(row.journal, row.category))
      throw Error(ErrorCode::DuplicateKey, row.journal.str() + " / " + row.category);
    for (const auto& v : row.values) {
      if (v && (!std::isfinite(*v) || *v < 0.0))
        throw Error(ErrorCode::NegativeValue, "fixture values must be finite and >= 0");
    }
    rows_.push_back(std::move(row));
  }

  const FixtureRow* find(const JournalId& journal, std::string_view category) const {
    auto it = std::ranges::find_if(rows_, [&](const FixtureRow& r) {
      return r.journal == journal && r.category == category;
    });
    return it == rows_.end() ? nullptr : &*it;
  }

  const std::vector<FixtureRow>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }

  /// Same rows regardless of order.
  friend bool operator==(const FixtureTable& a, const FixtureTable& b) {
    if (a.size() != b.size()) return false;
    return std::ranges::all_of(a.rows_, [&](const FixtureRow& r) {
      const auto* other = b.find(r.journal, r.category);
      return other && *other == r;
    });
  }

 private:
  std::vector<FixtureRow> rows_;
};

/// Per-journal metrics for both self-citation variants.
struct MetricResult {
  JournalId journal;
  double jif = 0.0;
  double cp_topic_excl_self = 0.0;
  double cp_topic_incl_self = 0.0;
  double score_excl_self = 0.0;
  double score_incl_self = 0.0;
  double tnif_excl_self = 0.0;
  double tnif_incl_self = 0.0;
};

}  // namespace citepotential

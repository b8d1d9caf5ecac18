#pragma once

// Impact factor, citation potential and the topic-normalized impact factor.
//
// For a journal j in census year y with target offsets t:
//
//   JIF(j)        = sum_t cites(y, y-t -> j) / sum_t items(j, y-t)
//   CP(database)  = all window citations / all window items
//                 = sum_j v(j) * JIF(j),  v(j) = items(j) / items(database)
//   w(i -> j)     = window citations from i to j / all window citations to j
//   CP(topic j)   = sum_i w(i -> j) * JIF(i)
//   TNIF(j)       = CP(database) / CP(topic j) * JIF(j),  0 when CP(topic j) = 0
//
// The topic of j excludes j's self-citations unless asked otherwise; the
// exclusion happens before normalisation.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "citepotential/core_model.hpp"
#include "citepotential/error.hpp"

namespace citepotential::metrics {

/// Aggregate impact factor of a set of journals. Finite and non-negative.
class CitationPotential {
 public:
  constexpr CitationPotential() = default;
  explicit CitationPotential(double value) : value_(value) {
    if (!std::isfinite(value) || value < 0.0)
      throw Error(ErrorCode::NonPositiveDatabasePotential, "citation potential must be finite and >= 0");
  }
  constexpr double value() const noexcept { return value_; }

 private:
  double value_ = 0.0;
};

struct TopicProfile {
  JournalId subject;
  bool include_self_citations = false;
  std::map<JournalId, double> weights;  // citing journal -> share of window citations

  bool empty() const noexcept { return weights.empty(); }
};

struct WeightedImpact {
  double weight = 0.0;
  double impact = 0.0;
};

/// sum(weight * impact). Shared by the database and topic weighted-average forms.
inline double weighted_average(std::span<const WeightedImpact> terms) {
  double sum = 0.0;
  for (const auto& t : terms) sum += t.weight * t.impact;
  return sum;
}

inline void require_registered(const Snapshot& snap, const JournalId& journal) {
  if (!snap.is_registered(journal))
    throw Error(ErrorCode::UnknownJournal, journal.str() + " is not in the registry");
}

/// Throws ZeroDenominator when the journal has no citable items in the window;
/// a journal with items but no citations returns 0.
inline double jif(const Snapshot& snap, const JournalId& journal) {
  require_registered(snap, journal);
  const auto items = snap.window_publications(journal);
  if (items == 0)
    throw Error(ErrorCode::ZeroDenominator, journal.str() + " has no citable items in the target window");
  return static_cast<double>(snap.window_citations_received(journal)) / static_cast<double>(items);
}

inline std::optional<double> try_jif(const Snapshot& snap, const JournalId& journal) {
  require_registered(snap, journal);
  if (snap.window_publications(journal) == 0) return std::nullopt;
  return jif(snap, journal);
}

/// Share of the database's window citable items published by `journal`.
inline double database_weight(const Snapshot& snap, const JournalId& journal) {
  require_registered(snap, journal);
  const auto total = snap.total_window_publications();
  if (total == 0) throw Error(ErrorCode::EmptyDatabase, "database has no citable items in the target window");
  return static_cast<double>(snap.window_publications(journal)) / static_cast<double>(total);
}

/// Raw-count form: all window citations over all window citable items.
inline CitationPotential database_citation_potential(const Snapshot& snap) {
  const auto total = snap.total_window_publications();
  if (total == 0) throw Error(ErrorCode::EmptyDatabase, "database has no citable items in the target window");
  return CitationPotential(static_cast<double>(snap.total_window_citations()) / static_cast<double>(total));
}

/// Weighted-average form over journals with a defined impact factor. Agrees
/// with the raw-count form whenever no cited journal has a zero denominator.
inline CitationPotential database_citation_potential_weighted(const Snapshot& snap) {
  std::vector<WeightedImpact> terms;
  terms.reserve(snap.registry().size());
  for (const auto& j : snap.registry()) {
    if (auto impact = try_jif(snap, j)) terms.push_back({database_weight(snap, j), *impact});
  }
  return CitationPotential(weighted_average(terms));
}

inline TopicProfile topic_weights(const Snapshot& snap, const JournalId& journal, bool include_self_citations) {
  require_registered(snap, journal);
  TopicProfile profile{journal, include_self_citations, {}};
  std::uint64_t total = 0;
  for (const auto& [citing, count] : snap.window_citers(journal)) {
    if (!include_self_citations && citing == journal) continue;
    total += count;
  }
  if (total == 0) return profile;
  for (const auto& [citing, count] : snap.window_citers(journal)) {
    if (!include_self_citations && citing == journal) continue;
    profile.weights.emplace(citing, static_cast<double>(count) / static_cast<double>(total));
  }
  return profile;
}

/// Citing journals whose own impact factor is undefined keep their weight but
/// contribute an impact of 0; each one is reported through `warnings`.
inline CitationPotential topic_citation_potential(const Snapshot& snap, const TopicProfile& profile,
                                                  std::vector<std::string>* warnings = nullptr) {
  std::vector<WeightedImpact> terms;
  terms.reserve(profile.weights.size());
  for (const auto& [citing, weight] : profile.weights) {
    auto impact = try_jif(snap, citing);
    if (!impact && warnings)
      warnings->push_back("topic of " + profile.subject.str() + ": citing journal " + citing.str() +
                          " has no citable items in the window; its impact factor counts as 0");
    terms.push_back({weight, impact.value_or(0.0)});
  }
  return CitationPotential(weighted_average(terms));
}

/// cp_db / cp_topic, or 0 when the topic potential is 0.
inline double normalized_score(double cp_db, double cp_topic) {
  if (!(cp_db > 0.0) || !std::isfinite(cp_db))
    throw Error(ErrorCode::NonPositiveDatabasePotential, "database citation potential must be > 0");
  if (cp_topic < 0.0 || !std::isfinite(cp_topic))
    throw Error(ErrorCode::NonPositiveDatabasePotential, "topic citation potential must be finite and >= 0");
  if (cp_topic == 0.0) return 0.0;
  return cp_db / cp_topic;
}

/// TNIF from its three ingredients.
inline double tnif_value(double cp_db, double cp_topic, double impact) {
  const double score = normalized_score(cp_db, cp_topic);
  return cp_topic == 0.0 ? 0.0 : score * impact;
}

struct TnifResult {
  double jif = 0.0;
  double cp_db = 0.0;
  double cp_topic = 0.0;
  double score = 0.0;
  double tnif = 0.0;
  std::vector<std::string> warnings;
};

inline TnifResult tnif(const Snapshot& snap, const JournalId& journal, bool include_self_citations,
                       std::optional<double> cp_db_override = std::nullopt) {
  TnifResult out;
  out.jif = jif(snap, journal);
  out.cp_db = cp_db_override ? *cp_db_override : database_citation_potential(snap).value();
  auto profile = topic_weights(snap, journal, include_self_citations);
  out.cp_topic = topic_citation_potential(snap, profile, &out.warnings).value();
  if (out.cp_topic == 0.0) return out;  // zero-topic rule: score and TNIF stay 0
  out.score = normalized_score(out.cp_db, out.cp_topic);
  out.tnif = out.score * out.jif;
  return out;
}

struct MetricRow {
  JournalId journal;
  std::optional<MetricResult> result;
  std::optional<ErrorCode> error;
  std::string message;
};

struct MetricTable {
  double cp_db = 0.0;
  bool cp_db_overridden = false;
  /// Offsets other than {1, 2}: TNIF is then a non-standard variant.
  bool extended_window = false;
  std::vector<MetricRow> rows;  // sorted by journal id
  std::vector<std::string> warnings;

  std::size_t error_count() const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.error.has_value();
    return n;
  }
};

/// One row per registered journal. Per-journal failures (an undefined impact
/// factor) are recorded on the row; database-level failures throw.
inline MetricTable compute_metric_table(const Snapshot& snap, std::optional<double> cp_db_override = std::nullopt) {
  MetricTable table;
  table.extended_window = !snap.window().is_two_year();
  if (snap.registry().empty()) return table;

  table.cp_db_overridden = cp_db_override.has_value();
  table.cp_db = cp_db_override ? *cp_db_override : database_citation_potential(snap).value();

  for (const auto& journal : snap.registry()) {
    MetricRow row{journal, std::nullopt, std::nullopt, {}};
    try {
      auto excl = tnif(snap, journal, false, table.cp_db);
      auto incl = tnif(snap, journal, true, table.cp_db);
      row.result = MetricResult{journal,   excl.jif,   excl.cp_topic, incl.cp_topic,
                                excl.score, incl.score, excl.tnif,     incl.tnif};
      for (auto& w : excl.warnings) table.warnings.push_back(std::move(w));
      for (auto& w : incl.warnings) table.warnings.push_back(std::move(w));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ZeroDenominator) throw;
      row.error = e.code();
      row.message = e.what();
    }
    table.rows.push_back(std::move(row));
  }
  std::ranges::sort(table.warnings);
  auto dup = std::ranges::unique(table.warnings);
  table.warnings.erase(dup.begin(), dup.end());
  return table;
}

}  // namespace citepotential::metrics

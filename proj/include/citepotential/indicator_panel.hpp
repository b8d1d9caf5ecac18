#pragma once

// Category-level comparison of indicators: the fixture table joined with a
// group partition, and the correlation / summary / variance tables built on
// top of it.

#include <algorithm>
#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citepotential/core_model.hpp"
#include "citepotential/error.hpp"
#include "citepotential/stats.hpp"

namespace citepotential::stats {

enum class Indicator : std::size_t { jif2 = 0, jif5, es, fcif, self_cite, tnif };

inline constexpr std::size_t kIndicatorCount = 6;

inline constexpr std::array<Indicator, kIndicatorCount> kIndicators = {
    Indicator::jif2, Indicator::jif5, Indicator::es, Indicator::fcif, Indicator::self_cite, Indicator::tnif};

inline constexpr std::array<std::string_view, kIndicatorCount> kIndicatorLabels = {
    "2-JIF", "5-JIF", "ES", "FCIF", "Self-cite", "TNIF"};

/// Eigenfactor and FCIF are printed with five decimals, the rest with three.
inline constexpr std::array<int, kIndicatorCount> kIndicatorDigits = {3, 3, 5, 5, 3, 3};

constexpr std::size_t index(Indicator i) { return static_cast<std::size_t>(i); }
constexpr std::string_view label(Indicator i) { return kIndicatorLabels[index(i)]; }

constexpr FixtureColumn fixture_column(Indicator i) {
  switch (i) {
    case Indicator::jif2: return FixtureColumn::jif2;
    case Indicator::jif5: return FixtureColumn::jif5;
    case Indicator::es: return FixtureColumn::es;
    case Indicator::fcif: return FixtureColumn::fcif;
    case Indicator::self_cite: return FixtureColumn::tnif_selfcite;
    case Indicator::tnif: return FixtureColumn::tnif;
  }
  return FixtureColumn::jif2;
}

inline std::optional<Indicator> parse_indicator(std::string_view s) {
  for (auto i : kIndicators)
    if (label(i) == s) return i;
  return std::nullopt;
}

/// Per-indicator treatment of missing cells in dispersion measures.
struct DispersionPolicy {
  std::array<MissingDispersion, kIndicatorCount> per_indicator{};

  MissingDispersion operator[](Indicator i) const { return per_indicator[index(i)]; }

  static DispersionPolicy drop_missing() { return {}; }

  /// Convention matching the reference category tables: the 5-JIF standard
  /// deviations and total variance read its missing cells as 0, every other
  /// column drops them.
  static DispersionPolicy published() {
    DispersionPolicy p;
    p.per_indicator[index(Indicator::jif5)] = MissingDispersion::zero_fill;
    return p;
  }
};

inline constexpr std::string_view kTotalLabel = "Total";

/// One row per partition entry, with the six indicator values from the
/// matching (journal, category) fixture row.
class IndicatorPanel {
 public:
  static IndicatorPanel build(const FixtureTable& fixture, const GroupPartition& partition) {
    IndicatorPanel panel;
    for (const auto& g : partition.rows()) {
      const auto* row = fixture.find(g.journal, g.category);
      if (!row)
        throw Error(ErrorCode::UnknownJournal,
                    "no fixture row for " + g.journal.str() + " in '" + g.category + "'");
      panel.journals_.push_back(g.journal);
      panel.categories_.push_back(g.category);
      for (auto i : kIndicators) panel.columns_[index(i)].push_back(row->get(fixture_column(i)));
    }
    panel.category_names_ = partition.categories();
    return panel;
  }

  std::size_t size() const noexcept { return journals_.size(); }
  const std::vector<std::string>& categories() const noexcept { return category_names_; }
  const std::vector<std::string>& row_categories() const noexcept { return categories_; }
  const std::vector<JournalId>& journals() const noexcept { return journals_; }

  std::span<const std::optional<double>> column(Indicator i) const { return columns_[index(i)]; }

  /// Column restricted to one category, or all rows for "Total".
  std::vector<std::optional<double>> column(Indicator i, std::string_view category) const {
    std::vector<std::optional<double>> out;
    const auto& col = columns_[index(i)];
    for (std::size_t r = 0; r < col.size(); ++r)
      if (category == kTotalLabel || categories_[r] == category) out.push_back(col[r]);
    return out;
  }

  std::size_t rows_in(std::string_view category) const {
    if (category == kTotalLabel) return size();
    return static_cast<std::size_t>(std::ranges::count(categories_, category));
  }

 private:
  std::vector<JournalId> journals_;
  std::vector<std::string> categories_;
  std::vector<std::string> category_names_;
  std::array<std::vector<std::optional<double>>, kIndicatorCount> columns_;
};

enum class CorrelationMethod { pearson, spearman };

inline std::string_view to_string(CorrelationMethod m) {
  return m == CorrelationMethod::pearson ? "pearson" : "spearman";
}

struct MatrixCell {
  Indicator row;
  Indicator col;
  std::size_t n = 0;  // pairwise-complete rows
  std::optional<CorrelationCell> value;
  std::optional<ErrorCode> error;
};

struct CategoryMatrix {
  std::string category;
  std::size_t journals = 0;
  std::vector<MatrixCell> cells;  // upper triangle, row-major: 15 cells

  const MatrixCell& at(Indicator a, Indicator b) const {
    for (const auto& c : cells)
      if ((c.row == a && c.col == b) || (c.row == b && c.col == a)) return c;
    throw Error(ErrorCode::InsufficientData, "no such cell");
  }
};

struct CorrelationReport {
  CorrelationMethod method = CorrelationMethod::pearson;
  std::vector<CategoryMatrix> matrices;  // categories in order, then Total

  const CategoryMatrix& matrix(std::string_view category) const {
    for (const auto& m : matrices)
      if (m.category == category) return m;
    throw Error(ErrorCode::EmptyGroup, "no matrix for '" + std::string(category) + "'");
  }
};

inline CategoryMatrix correlate_category(const IndicatorPanel& panel, std::string_view category,
                                         CorrelationMethod method) {
  CategoryMatrix m{std::string(category), panel.rows_in(category), {}};
  for (std::size_t a = 0; a < kIndicatorCount; ++a) {
    const auto x = panel.column(kIndicators[a], category);
    for (std::size_t b = a + 1; b < kIndicatorCount; ++b) {
      const auto y = panel.column(kIndicators[b], category);
      auto series = PairedSeries::from_columns(x, y);
      MatrixCell cell{kIndicators[a], kIndicators[b], series.effective_size(), std::nullopt, std::nullopt};
      try {
        cell.value = method == CorrelationMethod::pearson ? pearson(series) : spearman(series);
      } catch (const Error& e) {
        cell.error = e.code();
      }
      m.cells.push_back(cell);
    }
  }
  return m;
}

/// Upper-triangle matrices per category plus the pooled Total.
inline CorrelationReport correlation_matrix(const IndicatorPanel& panel, CorrelationMethod method) {
  CorrelationReport report{method, {}};
  for (const auto& c : panel.categories()) report.matrices.push_back(correlate_category(panel, c, method));
  report.matrices.push_back(correlate_category(panel, kTotalLabel, method));
  return report;
}

struct SummaryCell {
  Indicator indicator;
  std::optional<SummaryStats> stats;  // absent when the column is empty
};

struct CategorySummary {
  std::string category;
  std::size_t journals = 0;
  std::array<SummaryCell, kIndicatorCount> cells{};
};

inline std::vector<CategorySummary> summarize_categories(const IndicatorPanel& panel,
                                                         const DispersionPolicy& policy = DispersionPolicy::published()) {
  std::vector<CategorySummary> out;
  for (const auto& c : panel.categories()) {
    CategorySummary s{c, panel.rows_in(c), {}};
    for (auto i : kIndicators) {
      s.cells[index(i)].indicator = i;
      const auto col = panel.column(i, c);
      if (!present(col).empty()) s.cells[index(i)].stats = summarize(col, policy[i]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

struct AggregateRow {
  Indicator indicator;
  std::optional<SummaryStats> summary;
  std::optional<VarianceDecomposition> decomposition;
  std::optional<ErrorCode> error;
};

/// Aggregate centre measures and the total / between-group variance split per indicator.
inline std::vector<AggregateRow> aggregate_variance(const IndicatorPanel& panel,
                                                    const DispersionPolicy& policy = DispersionPolicy::published()) {
  std::vector<AggregateRow> out;
  for (auto i : kIndicators) {
    AggregateRow row{i, std::nullopt, std::nullopt, std::nullopt};
    try {
      row.summary = summarize(panel.column(i), policy[i]);
      row.decomposition = variance_decomposition(panel.column(i), panel.row_categories(), policy[i]);
    } catch (const Error& e) {
      row.error = e.code();
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace citepotential::stats

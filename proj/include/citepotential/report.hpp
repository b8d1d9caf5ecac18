#pragma once

// Command orchestration behind the `citepotential` tool: load inputs, run the
// metric and statistics stages, render CSV / JSON / markdown.
//
// Exit codes: 0 success, 1 validation failure, 2 input error, 3 computation error.

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "citepotential/core_model.hpp"
#include "citepotential/error.hpp"
#include "citepotential/format.hpp"
#include "citepotential/indicator_panel.hpp"
#include "citepotential/ingest.hpp"
#include "citepotential/metrics.hpp"
#include "citepotential/stats.hpp"

namespace citepotential::report {

/// Database citation potential of the 2011 JCR.
inline constexpr double kJcr2011DatabasePotential = 2.822;

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitComputationError = 3;

enum class Command { metrics, validate_fixture, correlate, summarize, variance };
enum class OutputFormat { csv, json, md };

inline std::optional<OutputFormat> parse_format(std::string_view s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  if (s == "md") return OutputFormat::md;
  return std::nullopt;
}

struct RunConfig {
  std::optional<std::string> citations;
  std::optional<std::string> publications;
  std::optional<std::string> groups;
  std::optional<std::string> fixture;
  std::optional<int> census_year;
  std::vector<int> window{1, 2};
  std::optional<double> cp_db;
  OutputFormat output = OutputFormat::csv;
  int round = 3;
  bool strict = false;
  std::optional<std::string> cache_dir;
  stats::DispersionPolicy dispersion = stats::DispersionPolicy::published();
};

/// Input-side failures map to exit 2, everything else to exit 3.
inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownJournal:
    case ErrorCode::MissingPublicationCount:
    case ErrorCode::WindowMismatch:
    case ErrorCode::InvalidWindow:
    case ErrorCode::InvalidJournalId:
    case ErrorCode::MalformedHeader:
    case ErrorCode::MalformedRow:
    case ErrorCode::NegativeCount:
    case ErrorCode::NegativeValue:
    case ErrorCode::DuplicateKey:
    case ErrorCode::DuplicatePair:
    case ErrorCode::InvalidConfig:
    case ErrorCode::IoError:
      return kExitInputError;
    default:
      return kExitComputationError;
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// ---------------------------------------------------------------------------
// Fixture validation

struct ValidationCheck {
  JournalId journal;
  std::string category;
  bool self_cite = false;
  double jif = 0.0;
  double cp = 0.0;
  double published = 0.0;
  double recomputed = 0.0;
  double delta = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ValidationReport {
  double cp_db = 0.0;
  std::vector<ValidationCheck> checks;
  std::size_t skipped = 0;  // rows lacking jif2, cp or tnif

  std::size_t failed() const {
    return static_cast<std::size_t>(std::ranges::count_if(checks, [](const auto& c) { return !c.pass; }));
  }
  std::size_t passed() const { return checks.size() - failed(); }
  int exit_code() const { return failed() == 0 ? kExitOk : kExitValidationFailed; }
};

/// |recomputed - published| <= max(0.01, 3% of published); a zero topic
/// potential must come with a published TNIF of exactly 0.
inline double validation_tolerance(double published) { return std::max(0.01, 0.03 * published); }

inline ValidationReport validate_fixture(const FixtureTable& fixture, double cp_db) {
  ValidationReport report;
  report.cp_db = cp_db;
  for (const auto& row : fixture.rows()) {
    for (bool self : {true, false}) {
      auto jif = row.get(FixtureColumn::jif2);
      auto cp = row.get(self ? FixtureColumn::cp_selfcite : FixtureColumn::cp);
      auto published = row.get(self ? FixtureColumn::tnif_selfcite : FixtureColumn::tnif);
      if (!jif || !cp || !published) {
        ++report.skipped;
        continue;
      }
      ValidationCheck c{row.journal, row.category, self, *jif, *cp, *published};
      c.recomputed = metrics::tnif_value(cp_db, *cp, *jif);
      c.delta = c.recomputed - c.published;
      if (*cp == 0.0) {
        c.tolerance = 0.0;
        c.pass = c.published == 0.0 && c.recomputed == 0.0;
      } else {
        c.tolerance = validation_tolerance(c.published);
        c.pass = std::abs(c.delta) <= c.tolerance;
      }
      report.checks.push_back(std::move(c));
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Rendering helpers

namespace detail {

using nlohmann::ordered_json;

inline std::string num(double v, int digits) { return format::round_half_up(v, digits); }

inline ordered_json jnum(double v, int digits) { return format::rounded_number(v, digits); }

inline std::string md_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

inline void md_row(std::ostream& out, const std::vector<std::string>& cells) {
  out << '|';
  for (const auto& c : cells) out << ' ' << md_escape(c) << " |";
  out << '\n';
}

inline void md_header(std::ostream& out, const std::vector<std::string>& cells) {
  md_row(out, cells);
  out << '|';
  for (std::size_t i = 0; i < cells.size(); ++i) out << " --- |";
  out << '\n';
}

inline std::string window_text(const std::vector<int>& offsets) {
  std::string s;
  for (std::size_t i = 0; i < offsets.size(); ++i) s += (i ? "," : "") + std::to_string(offsets[i]);
  return s;
}

inline constexpr std::string_view kExtendedWindowNote = "extended-window TNIF (non-standard variant)";

inline int indicator_digits(stats::Indicator i, int round) {
  return std::max(round, stats::kIndicatorDigits[stats::index(i)]);
}

}  // namespace detail

inline void render_metrics(std::ostream& out, const metrics::MetricTable& table, const YearWindow& window,
                           OutputFormat format, int digits) {
  using detail::num;
  static const std::vector<std::string> kHeader = {"journal",   "jif",   "cp_topic_self", "cp_topic", "score_self",
                                                   "score",     "tnif_self", "tnif",        "status"};
  auto values = [&](const MetricResult& r) {
    return std::vector<double>{r.jif, r.cp_topic_incl_self, r.cp_topic_excl_self, r.score_incl_self,
                               r.score_excl_self, r.tnif_incl_self, r.tnif_excl_self};
  };
  auto status = [](const metrics::MetricRow& row) {
    return row.error ? std::string(to_string(*row.error)) : std::string("ok");
  };

  if (format == OutputFormat::json) {
    detail::ordered_json doc;
    doc["metadata"] = {{"census_year", window.census_year()},
                       {"window", window.offsets()},
                       {"cp_db", detail::jnum(table.cp_db, digits)},
                       {"cp_db_source", table.cp_db_overridden ? "override" : "computed"},
                       {"extended_window", table.extended_window}};
    if (table.extended_window) doc["metadata"]["note"] = detail::kExtendedWindowNote;
    doc["rows"] = detail::ordered_json::array();
    for (const auto& row : table.rows) {
      detail::ordered_json j;
      j["journal"] = row.journal.str();
      if (row.result) {
        auto v = values(*row.result);
        for (std::size_t i = 0; i < v.size(); ++i) j[kHeader[i + 1]] = detail::jnum(v[i], digits);
      } else {
        for (std::size_t i = 1; i + 1 < kHeader.size(); ++i) j[kHeader[i]] = nullptr;
      }
      j["status"] = status(row);
      doc["rows"].push_back(std::move(j));
    }
    out << doc.dump(2) << '\n';
    return;
  }

  auto cells = [&](const metrics::MetricRow& row) {
    std::vector<std::string> c{row.journal.str()};
    if (row.result) {
      for (double v : values(*row.result)) c.push_back(num(v, digits));
    } else {
      for (int i = 0; i < 7; ++i) c.emplace_back("--");
    }
    c.push_back(status(row));
    return c;
  };

  if (format == OutputFormat::csv) {
    out << "# census_year=" << window.census_year() << " window=" << detail::window_text(window.offsets())
        << " cp_db=" << num(table.cp_db, digits) << (table.cp_db_overridden ? " (override)" : " (computed)")
        << '\n';
    if (table.extended_window) out << "# " << detail::kExtendedWindowNote << '\n';
    out << csv::join(kHeader) << '\n';
    for (const auto& row : table.rows) out << csv::join(cells(row)) << '\n';
    return;
  }

  out << "Census year " << window.census_year() << ", window offsets " << detail::window_text(window.offsets())
      << ", database citation potential " << num(table.cp_db, digits)
      << (table.cp_db_overridden ? " (override)" : " (computed)") << ".\n";
  if (table.extended_window) out << "\n*" << detail::kExtendedWindowNote << "*\n";
  out << '\n';
  detail::md_header(out, kHeader);
  for (const auto& row : table.rows) detail::md_row(out, cells(row));
}

inline void render_validation(std::ostream& out, const ValidationReport& report, OutputFormat format) {
  using detail::num;
  auto variant = [](const ValidationCheck& c) { return c.self_cite ? "self_cite" : "excl_self"; };

  if (format == OutputFormat::json) {
    detail::ordered_json doc;
    doc["cp_db"] = report.cp_db;
    doc["checks"] = report.checks.size();
    doc["passed"] = report.passed();
    doc["failed"] = report.failed();
    doc["skipped"] = report.skipped;
    doc["rows"] = detail::ordered_json::array();
    for (const auto& c : report.checks) {
      doc["rows"].push_back({{"journal", c.journal.str()},
                             {"category", c.category},
                             {"variant", variant(c)},
                             {"jif2", detail::jnum(c.jif, 3)},
                             {"cp", detail::jnum(c.cp, 3)},
                             {"published", detail::jnum(c.published, 3)},
                             {"recomputed", detail::jnum(c.recomputed, 5)},
                             {"delta", detail::jnum(c.delta, 5)},
                             {"tolerance", detail::jnum(c.tolerance, 5)},
                             {"pass", c.pass}});
    }
    out << doc.dump(2) << '\n';
    return;
  }

  auto cells = [&](const ValidationCheck& c) {
    return std::vector<std::string>{c.journal.str(),          c.category,          variant(c),
                                    num(c.jif, 3),            num(c.cp, 3),        num(c.published, 3),
                                    num(c.recomputed, 5),     num(c.delta, 5),     num(c.tolerance, 5),
                                    c.pass ? "pass" : "FAIL"};
  };
  static const std::vector<std::string> kHeader = {"journal", "category", "variant", "jif2", "cp",
                                                   "published", "recomputed", "delta", "tolerance", "result"};
  if (format == OutputFormat::csv) {
    out << "# cp_db=" << num(report.cp_db, 3) << " checks=" << report.checks.size() << " passed=" << report.passed()
        << " failed=" << report.failed() << " skipped=" << report.skipped << '\n';
    out << csv::join(kHeader) << '\n';
    for (const auto& c : report.checks) out << csv::join(cells(c)) << '\n';
    return;
  }
  out << "TNIF consistency with database citation potential " << num(report.cp_db, 3) << ": " << report.passed()
      << " of " << report.checks.size() << " checks pass, " << report.failed() << " fail, " << report.skipped
      << " skipped.\n\n";
  if (report.failed() == 0) return;
  detail::md_header(out, kHeader);
  for (const auto& c : report.checks)
    if (!c.pass) detail::md_row(out, cells(c));
}

inline void render_correlations(std::ostream& out, const std::vector<stats::CorrelationReport>& reports,
                                OutputFormat format) {
  using stats::kIndicatorCount;
  using stats::kIndicators;
  auto r_text = [](const stats::MatrixCell& c) { return c.value ? detail::num(c.value->r, 2) : std::string("--"); };

  if (format == OutputFormat::json) {
    detail::ordered_json doc = detail::ordered_json::object();
    for (const auto& rep : reports) {
      auto& arr = doc[std::string(stats::to_string(rep.method))] = detail::ordered_json::array();
      for (const auto& m : rep.matrices) {
        detail::ordered_json jm{{"category", m.category}, {"journals", m.journals}, {"cells", detail::ordered_json::array()}};
        for (const auto& c : m.cells) {
          detail::ordered_json jc{{"row", stats::label(c.row)}, {"col", stats::label(c.col)}, {"n", c.n}};
          if (c.value) {
            jc["r"] = detail::jnum(c.value->r, 2);
            jc["tier"] = stats::to_string(c.value->tier);
            jc["effect"] = stats::to_string(c.value->effect);
          } else {
            jc["r"] = nullptr;
            jc["error"] = to_string(*c.error);
          }
          jm["cells"].push_back(std::move(jc));
        }
        arr.push_back(std::move(jm));
      }
    }
    out << doc.dump(2) << '\n';
    return;
  }

  if (format == OutputFormat::csv) {
    out << csv::join({"method", "category", "journals", "row", "col", "r", "n", "tier", "effect"}) << '\n';
    for (const auto& rep : reports)
      for (const auto& m : rep.matrices)
        for (const auto& c : m.cells) {
          out << csv::join({std::string(stats::to_string(rep.method)), m.category, std::to_string(m.journals),
                            std::string(stats::label(c.row)), std::string(stats::label(c.col)), r_text(c),
                            std::to_string(c.n),
                            c.value ? std::string(stats::marker(c.value->tier)) : std::string(),
                            c.value ? std::string(stats::to_string(c.value->effect)) : std::string("--")})
              << '\n';
        }
    return;
  }

  for (const auto& rep : reports) {
    out << "### " << (rep.method == stats::CorrelationMethod::pearson ? "Pearson correlation coefficients"
                                                                      : "Spearman rank correlation coefficients")
        << "\n\n";
    std::vector<std::string> header{"Category", "# Journals", ""};
    for (std::size_t b = 1; b < kIndicatorCount; ++b) header.emplace_back(stats::label(kIndicators[b]));
    detail::md_header(out, header);
    for (const auto& m : rep.matrices) {
      for (std::size_t a = 0; a + 1 < kIndicatorCount; ++a) {
        std::vector<std::string> row{a == 0 ? m.category : "", a == 0 ? std::to_string(m.journals) : "",
                                     std::string(stats::label(kIndicators[a]))};
        for (std::size_t b = 1; b < kIndicatorCount; ++b) {
          if (b <= a) {
            row.emplace_back("");
            continue;
          }
          const auto& c = m.at(kIndicators[a], kIndicators[b]);
          row.push_back(r_text(c) + (c.value ? std::string(stats::marker(c.value->tier)) : ""));
        }
        detail::md_row(out, row);
      }
    }
    out << "\n*** = 99% confidence level; ** = 95%; * = 90% (two-tailed t-test on r, pairwise-complete n).\n\n";
  }
}

inline void render_summary(std::ostream& out, const std::vector<stats::CategorySummary>& summaries,
                           OutputFormat format, int round) {
  using stats::kIndicators;
  auto value_text = [&](const std::optional<double>& v, stats::Indicator i) {
    return v ? detail::num(*v, detail::indicator_digits(i, round)) : std::string("--");
  };

  if (format == OutputFormat::json) {
    detail::ordered_json doc = detail::ordered_json::array();
    for (const auto& s : summaries) {
      detail::ordered_json js{{"category", s.category}, {"journals", s.journals}, {"indicators", detail::ordered_json::object()}};
      for (auto i : kIndicators) {
        const auto& cell = s.cells[stats::index(i)];
        const int d = detail::indicator_digits(i, round);
        detail::ordered_json jc;
        if (cell.stats) {
          jc = {{"n", cell.stats->n}, {"median", detail::jnum(cell.stats->median, d)}, {"mean", detail::jnum(cell.stats->mean, d)}};
          jc["sd"] = cell.stats->sd ? detail::ordered_json(detail::jnum(*cell.stats->sd, d)) : detail::ordered_json(nullptr);
        } else {
          jc = {{"n", 0}, {"median", nullptr}, {"mean", nullptr}, {"sd", nullptr}};
        }
        js["indicators"][std::string(stats::label(i))] = std::move(jc);
      }
      doc.push_back(std::move(js));
    }
    out << doc.dump(2) << '\n';
    return;
  }

  if (format == OutputFormat::csv) {
    out << csv::join({"category", "indicator", "n", "median", "mean", "sd"}) << '\n';
    for (const auto& s : summaries)
      for (auto i : kIndicators) {
        const auto& st = s.cells[stats::index(i)].stats;
        out << csv::join({s.category, std::string(stats::label(i)), std::to_string(st ? st->n : 0),
                          value_text(st ? std::optional(st->median) : std::nullopt, i),
                          value_text(st ? std::optional(st->mean) : std::nullopt, i),
                          value_text(st ? st->sd : std::nullopt, i)})
            << '\n';
      }
    return;
  }

  std::vector<std::string> header{"Category", "Measure"};
  for (auto i : kIndicators) header.emplace_back(stats::label(i));
  detail::md_header(out, header);
  for (const auto& s : summaries) {
    for (int m = 0; m < 3; ++m) {
      std::vector<std::string> row{m == 0 ? s.category : "", m == 0 ? "Median" : m == 1 ? "Mean" : "Sd"};
      for (auto i : kIndicators) {
        const auto& st = s.cells[stats::index(i)].stats;
        std::optional<double> v;
        if (st) v = m == 0 ? std::optional(st->median) : m == 1 ? std::optional(st->mean) : st->sd;
        row.push_back(value_text(v, i));
      }
      detail::md_row(out, row);
    }
  }
}

inline void render_variance(std::ostream& out, const std::vector<stats::AggregateRow>& rows, OutputFormat format,
                            int round) {
  using detail::num;
  static constexpr int kPctDigits = 1;

  if (format == OutputFormat::json) {
    detail::ordered_json doc = detail::ordered_json::array();
    for (const auto& r : rows) {
      const int d = detail::indicator_digits(r.indicator, round);
      detail::ordered_json j{{"indicator", stats::label(r.indicator)}};
      if (r.summary && r.decomposition) {
        j["median"] = detail::jnum(r.summary->median, d);
        j["mean"] = detail::jnum(r.summary->mean, d);
        j["total_variance"] = detail::jnum(r.decomposition->total_variance, d);
        j["between_variance"] = detail::jnum(r.decomposition->between_variance, d);
        j["reduction"] = detail::jnum(r.decomposition->reduction, d);
        j["pct_reduction"] = detail::jnum(r.decomposition->pct_reduction, kPctDigits);
        j["between_exceeds_total"] = r.decomposition->between_exceeds_total;
      } else {
        j["error"] = to_string(*r.error);
      }
      doc.push_back(std::move(j));
    }
    out << doc.dump(2) << '\n';
    return;
  }

  auto cells = [&](const stats::AggregateRow& r) {
    const int d = detail::indicator_digits(r.indicator, round);
    if (!r.summary || !r.decomposition) return std::vector<std::string>(6, "--");
    const auto& v = *r.decomposition;
    return std::vector<std::string>{num(r.summary->median, d), num(r.summary->mean, d),  num(v.total_variance, d),
                                    num(v.between_variance, d), num(v.reduction, d),
                                    num(v.pct_reduction, kPctDigits)};
  };

  if (format == OutputFormat::csv) {
    out << csv::join({"indicator", "median", "mean", "total_variance", "between_variance", "reduction",
                      "pct_reduction", "flag"})
        << '\n';
    for (const auto& r : rows) {
      auto c = cells(r);
      c.insert(c.begin(), std::string(stats::label(r.indicator)));
      c.push_back(r.decomposition && r.decomposition->between_exceeds_total ? "between>total"
                  : r.error                                                  ? std::string(to_string(*r.error))
                                                                             : "");
      out << csv::join(c) << '\n';
    }
    return;
  }

  std::vector<std::string> header{"Measure"};
  for (const auto& r : rows) header.emplace_back(stats::label(r.indicator));
  detail::md_header(out, header);
  static const std::array<std::string, 6> kMeasures = {"Median",
                                                       "Mean",
                                                       "Within-group variance (Sd²)",
                                                       "Between-group variance (Sd²)",
                                                       "Total reduction of the variance",
                                                       "Percentage reduction of the variance"};
  for (std::size_t m = 0; m < kMeasures.size(); ++m) {
    std::vector<std::string> row{kMeasures[m]};
    for (const auto& r : rows) {
      auto c = cells(r)[m];
      if (m == 5 && c != "--") c += "%";
      row.push_back(std::move(c));
    }
    detail::md_row(out, row);
  }
  for (const auto& r : rows)
    if (r.decomposition && r.decomposition->between_exceeds_total)
      out << "\nNote: " << stats::label(r.indicator) << " between-group variance exceeds total variance.\n";
}

// ---------------------------------------------------------------------------
// Command runner

namespace detail {

struct LoadedSnapshot {
  Snapshot snapshot;
  std::string fingerprint;
};

inline ingest::ParseOptions parse_options(const RunConfig& config) {
  return {config.strict ? ingest::DuplicatePolicy::strict : ingest::DuplicatePolicy::lenient};
}

/// Returns false (after reporting) if any row was rejected.
inline bool check_report(const ingest::ParseReport& report, std::string_view source, std::ostream& err) {
  if (!report.clean() || !report.warnings.empty()) err << report.describe(source);
  return report.clean();
}

inline std::string require_path(const std::optional<std::string>& path, std::string_view flag) {
  if (!path) throw Error(ErrorCode::InvalidConfig, "missing required --" + std::string(flag));
  return *path;
}

inline int infer_census_year(const CitationLedger& ledger) {
  std::set<int> years;
  for (const auto& [key, count] : ledger.entries()) years.insert(key.census_year);
  if (years.size() != 1)
    throw Error(ErrorCode::InvalidConfig, "cannot infer census year from ledger; pass --census-year");
  return *years.begin();
}

struct FixtureInputs {
  FixtureTable fixture;
  GroupPartition groups;
};

inline std::optional<FixtureInputs> load_fixture_inputs(const RunConfig& config, bool need_groups,
                                                        std::ostream& err) {
  const auto fixture_path = require_path(config.fixture, "fixture");
  auto fixture = ingest::parse_fixture(read_file(fixture_path));
  bool ok = check_report(fixture.report, fixture_path, err);
  FixtureInputs in{std::move(fixture.value), {}};
  if (need_groups) {
    const auto groups_path = require_path(config.groups, "groups");
    auto groups = ingest::parse_groups(read_file(groups_path));
    ok = check_report(groups.report, groups_path, err) && ok;
    in.groups = std::move(groups.value);
  }
  if (!ok) return std::nullopt;
  return in;
}

inline int run_metrics(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto cit_path = require_path(config.citations, "citations");
  const auto pub_path = require_path(config.publications, "publications");
  const auto cit_text = read_file(cit_path);
  const auto pub_text = read_file(pub_path);
  const auto groups_text = config.groups ? read_file(*config.groups) : std::string();

  std::optional<std::filesystem::path> cache_file;
  if (config.cache_dir) {
    format::Fnv1a h;
    h.update("citepotential-metrics-v1");
    h.update(cit_text);
    h.update(pub_text);
    h.update(groups_text);
    std::ostringstream key;
    key << (config.census_year ? std::to_string(*config.census_year) : "auto") << '|' << window_text(config.window)
        << '|' << (config.cp_db ? format::round_half_up(*config.cp_db, 12) : "computed") << '|'
        << static_cast<int>(config.output) << '|' << config.round << '|' << config.strict;
    h.update(key.str());
    cache_file = std::filesystem::path(*config.cache_dir) / ("metrics-" + h.hex() + ".out");
    std::error_code ec;
    if (std::filesystem::is_regular_file(*cache_file, ec)) {
      out << read_file(cache_file->string());
      return kExitOk;
    }
  }

  const auto opts = parse_options(config);
  auto ledger = ingest::parse_citations(cit_text, opts);
  auto pubs = ingest::parse_publications(pub_text, opts);
  bool ok = check_report(ledger.report, cit_path, err);
  ok = check_report(pubs.report, pub_path, err) && ok;

  std::set<JournalId> registry;
  for (const auto& [key, items] : pubs.value.entries()) registry.insert(key.first);
  if (config.groups) {
    auto groups = ingest::parse_groups(groups_text);
    ok = check_report(groups.report, *config.groups, err) && ok;
    for (const auto& g : groups.value.rows()) registry.insert(g.journal);
  }
  if (!ok) return kExitInputError;

  const int census = config.census_year ? *config.census_year : infer_census_year(ledger.value);
  YearWindow window(census, config.window);
  auto snap = Snapshot::build(std::move(registry), window, std::move(pubs.value), std::move(ledger.value),
                              BuildOptions{config.strict});
  auto table = metrics::compute_metric_table(snap, config.cp_db);
  for (const auto& w : table.warnings) err << "warning: " << w << '\n';
  for (const auto& row : table.rows)
    if (row.error) err << "warning: " << row.message << '\n';

  std::ostringstream rendered;
  render_metrics(rendered, table, window, config.output, config.round);
  out << rendered.str();

  if (cache_file) {
    std::error_code ec;
    std::filesystem::create_directories(cache_file->parent_path(), ec);
    std::ofstream cache(*cache_file, std::ios::binary);
    if (cache) cache << rendered.str();
  }
  return kExitOk;
}

}  // namespace detail

/// Runs one subcommand. Library errors are translated to exit codes with the
/// message on `err`; nothing propagates.
inline int run(Command command, const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.round < 0 || config.round > 9) throw Error(ErrorCode::InvalidConfig, "--round must be in [0, 9]");
    if (config.cp_db && !(*config.cp_db > 0.0))
      throw Error(ErrorCode::InvalidConfig, "--cp-db must be positive");

    switch (command) {
      case Command::metrics:
        return detail::run_metrics(config, out, err);

      case Command::validate_fixture: {
        auto in = detail::load_fixture_inputs(config, false, err);
        if (!in) return kExitInputError;
        auto report = validate_fixture(in->fixture, config.cp_db.value_or(kJcr2011DatabasePotential));
        render_validation(out, report, config.output);
        if (report.failed() > 0)
          err << report.failed() << " of " << report.checks.size() << " TNIF checks failed\n";
        return report.exit_code();
      }

      case Command::correlate: {
        auto in = detail::load_fixture_inputs(config, true, err);
        if (!in) return kExitInputError;
        auto panel = stats::IndicatorPanel::build(in->fixture, in->groups);
        std::vector<stats::CorrelationReport> reports{
            stats::correlation_matrix(panel, stats::CorrelationMethod::pearson),
            stats::correlation_matrix(panel, stats::CorrelationMethod::spearman)};
        render_correlations(out, reports, config.output);
        return kExitOk;
      }

      case Command::summarize: {
        auto in = detail::load_fixture_inputs(config, true, err);
        if (!in) return kExitInputError;
        auto panel = stats::IndicatorPanel::build(in->fixture, in->groups);
        render_summary(out, stats::summarize_categories(panel, config.dispersion), config.output, config.round);
        return kExitOk;
      }

      case Command::variance: {
        auto in = detail::load_fixture_inputs(config, true, err);
        if (!in) return kExitInputError;
        auto panel = stats::IndicatorPanel::build(in->fixture, in->groups);
        render_variance(out, stats::aggregate_variance(panel, config.dispersion), config.output, config.round);
        return kExitOk;
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitComputationError;
  }
  return kExitComputationError;
}

}  // namespace citepotential::report

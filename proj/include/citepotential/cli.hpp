#pragma once

// Command-line front end. All flags live on the root command so that a flat
// `key = value` config file (via --config or $CITEPOTENTIAL_CONFIG) can set
// any of them; flags given on the command line win over the file.

#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "citepotential/report.hpp"

namespace citepotential::cli {

inline constexpr const char* kConfigEnv = "CITEPOTENTIAL_CONFIG";

inline std::vector<int> parse_window(const std::string& text) {
  std::vector<int> offsets;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    auto n = csv::parse_integer(csv::trim(token));
    if (n.status != csv::NumberStatus::ok || n.value > 1000)
      throw Error(ErrorCode::InvalidWindow, "bad window offset '" + token + "'");
    offsets.push_back(static_cast<int>(n.value));
  }
  static_cast<void>(YearWindow(0, offsets));  // throws InvalidWindow on bad offsets
  return offsets;
}

struct Invocation {
  report::Command command = report::Command::metrics;
  report::RunConfig config;
};

/// Parses argv. On --help or a usage error returns the exit code to use
/// instead of an Invocation (0 for help, 2 for errors).
inline std::variant<Invocation, int> parse(int argc, const char* const* argv, std::ostream& out,
                                           std::ostream& err) {
  CLI::App app{"Topic-normalized impact factor and indicator comparison tables", "citepotential"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Flat key = value file mirroring the flags")->envname(kConfigEnv);

  std::optional<std::string> citations, publications, groups, fixture, cache_dir;
  std::optional<int> census_year;
  std::optional<double> cp_db;
  std::string window = "1,2", output = "csv", dispersion = "published";
  int round = 3;
  bool strict = false;

  app.add_option("--citations", citations, "citations.csv: census_year,citing,cited,cited_year,count");
  app.add_option("--publications", publications, "publications.csv: journal,year,citable_items");
  app.add_option("--groups", groups, "groups.csv: journal,category");
  app.add_option("--fixture", fixture, "indicator table: journal,category,jif2,...,tnif");
  app.add_option("--census-year", census_year, "Census year (default: the ledger's only census year)");
  app.add_option("--window", window, "Comma-separated target offsets")->capture_default_str();
  app.add_option("--cp-db", cp_db,
                 "Database citation potential override (validate-fixture default: 2.822, the 2011 JCR value)");
  app.add_option("--output", output, "Output format")->check(CLI::IsMember({"csv", "json", "md"}))->capture_default_str();
  app.add_option("--round", round, "Decimal places for reported values")->check(CLI::Range(0, 9))->capture_default_str();
  app.add_flag("--strict", strict, "Reject duplicate keys, missing counts and out-of-window citations");
  app.add_option("--cache-dir", cache_dir, "Cache computed metric tables keyed by input content");
  app.add_option("--dispersion", dispersion,
                 "Missing-cell handling for sd / total variance: published (5-JIF zero-filled) or drop")
      ->check(CLI::IsMember({"published", "drop"}))
      ->capture_default_str();

  auto* metrics = app.add_subcommand("metrics", "Per-journal JIF, topic citation potential, score and TNIF");
  auto* validate = app.add_subcommand("validate-fixture", "Recompute fixture TNIF values from CP and 2-JIF");
  auto* correlate = app.add_subcommand("correlate", "Pearson and Spearman matrices per category and in total");
  auto* summarize = app.add_subcommand("summarize", "Median, mean and sd per category and indicator");
  auto* variance = app.add_subcommand("variance", "Total versus between-group variance per indicator");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : report::kExitInputError;
  }

  Invocation inv;
  if (metrics->parsed()) inv.command = report::Command::metrics;
  else if (validate->parsed()) inv.command = report::Command::validate_fixture;
  else if (correlate->parsed()) inv.command = report::Command::correlate;
  else if (summarize->parsed()) inv.command = report::Command::summarize;
  else if (variance->parsed()) inv.command = report::Command::variance;

  auto& c = inv.config;
  c.citations = citations;
  c.publications = publications;
  c.groups = groups;
  c.fixture = fixture;
  c.census_year = census_year;
  c.cp_db = cp_db;
  c.output = *report::parse_format(output);
  c.round = round;
  c.strict = strict;
  c.cache_dir = cache_dir;
  c.dispersion = dispersion == "drop" ? stats::DispersionPolicy::drop_missing() : stats::DispersionPolicy::published();
  try {
    c.window = parse_window(window);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return report::kExitInputError;
  }
  return inv;
}

inline int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  auto parsed = parse(argc, argv, out, err);
  if (auto* code = std::get_if<int>(&parsed)) return *code;
  const auto& inv = std::get<Invocation>(parsed);
  return report::run(inv.command, inv.config, out, err);
}

}  // namespace citepotential::cli

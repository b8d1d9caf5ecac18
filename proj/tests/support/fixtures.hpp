#pragma once

#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "citepotential/core_model.hpp"
#include "citepotential/ingest.hpp"

namespace testing_support {

inline std::string data_path(const std::string& rel) { return std::string(CITEPOTENTIAL_DATA_DIR) + "/" + rel; }

inline std::string slurp(const std::string& rel) {
  std::ifstream in(data_path(rel), std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline citepotential::FixtureTable load_fixture() {
  return citepotential::ingest::parse_fixture(slurp("fixture_table2.csv")).value;
}

inline citepotential::GroupPartition load_groups() {
  return citepotential::ingest::parse_groups(slurp("groups.csv")).value;
}

inline citepotential::Snapshot toy_snapshot() {
  using namespace citepotential;
  auto ledger = ingest::parse_citations(slurp("figure1_toy/citations.csv")).value;
  auto pubs = ingest::parse_publications(slurp("figure1_toy/publications.csv")).value;
  std::set<JournalId> registry;
  for (const auto& [k, n] : pubs.entries()) registry.insert(k.first);
  return Snapshot::build(registry, YearWindow(2011), pubs, ledger);
}

struct RandomWorld {
  std::set<citepotential::JournalId> registry;
  citepotential::PublicationCounts pubs;
  citepotential::CitationLedger ledger;
  citepotential::YearWindow window{2011};

  citepotential::Snapshot snapshot() const { return citepotential::Snapshot::build(registry, window, pubs, ledger); }

  RandomWorld scaled(std::uint64_t k) const {
    RandomWorld w{registry, pubs, {}, window};
    for (const auto& [key, n] : ledger.entries()) w.ledger.insert(key, n * k);
    return w;
  }
};

// 2..8 journals, positive publication counts in both window years, sparse
// random citation counts including self-citations and some out-of-window years.
inline RandomWorld random_world(std::mt19937_64& rng) {
  using namespace citepotential;
  RandomWorld w;
  std::uniform_int_distribution<int> journals(2, 8), items(1, 60), cites(0, 40), coin(0, 3);
  const int n = journals(rng);
  std::vector<JournalId> ids;
  for (int i = 0; i < n; ++i) ids.emplace_back("J" + std::to_string(i));
  for (const auto& id : ids) {
    w.registry.insert(id);
    for (int year : {2009, 2010}) w.pubs.insert(id, year, static_cast<std::uint64_t>(items(rng)));
  }
  for (const auto& citing : ids)
    for (const auto& cited : ids)
      for (int year : {2007, 2008, 2009, 2010}) {
        if (coin(rng) == 0) continue;
        w.ledger.insert({2011, citing, cited, year}, static_cast<std::uint64_t>(cites(rng)));
      }
  return w;
}

}  // namespace testing_support

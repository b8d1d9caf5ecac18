#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "citepotential/core_model.hpp"
#include "support/fixtures.hpp"

using namespace citepotential;

namespace {

JournalId id(const char* s) { return JournalId(s); }

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected citepotential::Error");
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("journal ids reject the empty string") {
  CHECK(code_of([] { JournalId x(""); }) == ErrorCode::InvalidJournalId);
  CHECK(JournalId("A") < JournalId("B"));
}

TEST_CASE("year window validation") {
  YearWindow w(2011);
  CHECK(w.target_years() == std::vector<int>{2010, 2009});
  CHECK(w.is_two_year());
  CHECK(w.contains_year(2009));
  CHECK_FALSE(w.contains_year(2008));

  YearWindow five(2011, {1, 2, 3, 4, 5});
  CHECK_FALSE(five.is_two_year());
  CHECK(five.target_years().back() == 2006);

  CHECK(code_of([] { YearWindow(2011, {}); }) == ErrorCode::InvalidWindow);
  CHECK(code_of([] { YearWindow(2011, {0, 1}); }) == ErrorCode::InvalidWindow);
  CHECK(code_of([] { YearWindow(2011, {2, 1}); }) == ErrorCode::InvalidWindow);
  CHECK(code_of([] { YearWindow(2011, {1, 1}); }) == ErrorCode::InvalidWindow);
}

TEST_CASE("ledger keys must cite an earlier year") {
  CitationLedger ledger;
  CHECK(code_of([&] { ledger.insert({2011, id("A"), id("J"), 2011}, 3); }) == ErrorCode::WindowMismatch);
  ledger.insert({2011, id("A"), id("J"), 2010}, 3);
  CHECK(code_of([&] { ledger.insert({2011, id("A"), id("J"), 2010}, 1); }) == ErrorCode::DuplicateKey);
  ledger.accumulate({2011, id("A"), id("J"), 2010}, 4);
  CHECK(ledger.get({2011, id("A"), id("J"), 2010}) == 7u);
}

TEST_CASE("empty registry and data give a valid empty snapshot") {
  auto snap = Snapshot::build({}, YearWindow(2011), {}, {});
  CHECK(snap.registry().empty());
  CHECK(snap.total_window_publications() == 0);
  CHECK(snap.total_window_citations() == 0);
}

TEST_CASE("unregistered journals are rejected") {
  CitationLedger ledger;
  ledger.insert({2011, id("X"), id("J"), 2010}, 1);
  PublicationCounts pubs;
  pubs.insert(id("J"), 2010, 5);
  CHECK(code_of([&] { Snapshot::build({id("J")}, YearWindow(2011), pubs, ledger); }) ==
        ErrorCode::UnknownJournal);

  PublicationCounts stray;
  stray.insert(id("Y"), 2010, 5);
  CHECK(code_of([&] { Snapshot::build({id("J")}, YearWindow(2011), stray, {}); }) == ErrorCode::UnknownJournal);
}

TEST_CASE("toy snapshot registers five journals") {
  auto snap = testing_support::toy_snapshot();
  CHECK(snap.registry().size() == 5);
  CHECK(snap.window_publications(id("J")) == 50);
  CHECK(snap.window_citations_received(id("J")) == 100);
  const auto& citers = snap.window_citers(id("J"));
  REQUIRE(citers.size() == 4);
  CHECK(citers.at(id("A")) == 50);
  CHECK(citers.at(id("B")) == 30);
  CHECK(citers.at(id("C")) == 15);
  CHECK(citers.at(id("D")) == 5);
}

TEST_CASE("strict build requires complete counts and in-window citations") {
  PublicationCounts pubs;
  pubs.insert(id("J"), 2010, 5);
  CHECK(code_of([&] { Snapshot::build({id("J")}, YearWindow(2011), pubs, {}, {.strict = true}); }) ==
        ErrorCode::MissingPublicationCount);

  pubs.insert(id("J"), 2009, 5);
  CitationLedger ledger;
  ledger.insert({2011, id("J"), id("J"), 2005}, 2);
  CHECK(code_of([&] { Snapshot::build({id("J")}, YearWindow(2011), pubs, ledger, {.strict = true}); }) ==
        ErrorCode::WindowMismatch);

  // lenient: the old citation is ignored and the missing year reads as 0
  PublicationCounts partial;
  partial.insert(id("J"), 2010, 5);
  auto snap = Snapshot::build({id("J")}, YearWindow(2011), partial, ledger);
  CHECK(snap.window_publications(id("J")) == 5);
  CHECK(snap.window_citations_received(id("J")) == 0);
  CHECK(snap.publications().get(id("J"), 2009) == 0u);
}

TEST_CASE("snapshot does not depend on insertion order") {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 50; ++round) {
    auto world = testing_support::random_world(rng);
    std::vector<std::pair<CitationKey, std::uint64_t>> entries(world.ledger.entries().begin(),
                                                               world.ledger.entries().end());
    std::ranges::shuffle(entries, rng);
    CitationLedger shuffled;
    for (const auto& [k, n] : entries) shuffled.insert(k, n);
    auto a = world.snapshot();
    auto b = Snapshot::build(world.registry, world.window, world.pubs, shuffled);
    CHECK(a == b);
    for (const auto& j : a.registry()) {
      CHECK(a.window_citations_received(j) == b.window_citations_received(j));
      CHECK(a.window_citers(j) == b.window_citers(j));
    }
  }
}

TEST_CASE("group partition allows a journal in two categories but not the same pair twice") {
  GroupPartition g;
  g.add(id("ASTROBIOLOGY"), "Astronomy & Astrophysics");
  g.add(id("ASTROBIOLOGY"), "Biology");
  CHECK(g.size() == 2);
  CHECK(code_of([&] { g.add(id("ASTROBIOLOGY"), "Biology"); }) == ErrorCode::DuplicatePair);
  CHECK(g.categories() == std::vector<std::string>{"Astronomy & Astrophysics", "Biology"});
}

TEST_CASE("fixture table rejects negative values and duplicate rows") {
  FixtureTable t;
  FixtureRow row{id("X"), "Biology", {}};
  row.set(FixtureColumn::jif2, 1.0);
  t.add(row);
  CHECK(code_of([&] { t.add(row); }) == ErrorCode::DuplicateKey);
  FixtureRow bad{id("Y"), "Biology", {}};
  bad.set(FixtureColumn::cp, -1.0);
  CHECK(code_of([&] { t.add(bad); }) == ErrorCode::NegativeValue);
  REQUIRE(t.find(id("X"), "Biology"));
  CHECK(t.find(id("X"), "Biology")->get(FixtureColumn::jif2) == 1.0);
  CHECK_FALSE(t.find(id("X"), "Astronomy & Astrophysics"));
}

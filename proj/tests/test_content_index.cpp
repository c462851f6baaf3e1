#include <doctest.h>

#include <sstream>

#include "cdbroker/content_index.hpp"
#include "cdbroker/selection.hpp"
#include "helpers.hpp"

using namespace cdbroker;
using testutil::code_of;
using testutil::table_of;

TEST_CASE("content keys are frozen SHA-256 digests of the name") {
  CHECK(content_key("content-A") ==
        "f69f2c2353f91e70f6076e282185cdea553ec501da6600cc0714ab5587ac6bc1");
  CHECK(content_key("alpha") ==
        "8ed3f6ad685b959ead7022518e1af76cd816f8e8ec7ccdda1ed4018e8f2223f8");
  CHECK(content_key("alpha") == content_key("alpha"));
  CHECK(content_key("alpha") != content_key("alphb"));
  CHECK(content_key("x").size() == 64);
  for (char c : content_key("x")) {
    CHECK(((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')));
  }
  CHECK(code_of([] { content_key(""); }) == Errc::empty_name);
}

TEST_CASE("index upserts resolve by key and replace on re-insert") {
  const std::set<std::string> roster = {"P1", "P2", "P3"};
  ContentIndex idx;
  const std::string key = idx.upsert("movie", false, {"P2"}, roster);
  CHECK(key == content_key("movie"));
  CHECK(idx.size() == 1);

  const ContentEntry* e = idx.lookup(key);
  REQUIRE(e != nullptr);
  CHECK(e->name == "movie");
  CHECK(!e->internal);
  CHECK(e->excluded_providers == std::set<std::string>{"P2"});

  // Last writer wins.
  idx.upsert("movie", true, {"P1", "P3"}, roster);
  CHECK(idx.size() == 1);
  CHECK(idx.require(key).internal);
  CHECK(idx.require(key).excluded_providers ==
        std::set<std::string>{"P1", "P3"});

  CHECK(idx.lookup("no-such-key") == nullptr);
  CHECK(code_of([&] { idx.require("no-such-key"); }) == Errc::not_found);
  CHECK(code_of([&] { idx.upsert("clip", false, {"P9"}, roster); }) ==
        Errc::unknown_excluded_provider);
}

TEST_CASE("index files round-trip through CSV") {
  const std::set<std::string> roster = {"P1", "P2", "P3"};
  ContentIndex idx;
  idx.upsert("zebra", false, {"P1", "P3"}, roster);
  idx.upsert("apple", true, {}, roster);
  idx.upsert("name,with,commas", false, {"P2"}, roster);

  std::ostringstream os;
  idx.write_csv(os);

  std::istringstream is(os.str());
  const ContentIndex back = ContentIndex::read_csv(is, roster);
  REQUIRE(back.size() == 3);
  CHECK(back.require(content_key("apple")).internal);
  CHECK(back.require(content_key("zebra")).excluded_providers ==
        std::set<std::string>{"P1", "P3"});
  CHECK(back.require(content_key("name,with,commas")).name ==
        "name,with,commas");

  // Rows come out ordered by key; both serializations agree byte for byte.
  std::ostringstream os2;
  back.write_csv(os2);
  CHECK(os.str() == os2.str());
}

TEST_CASE("index CSV rejects rows it cannot trust") {
  const std::set<std::string> roster = {"P1"};

  std::istringstream bad_flag(
      "key,name,internal,excluded_providers\n" +
      content_key("a") + ",a,yes,\n");
  CHECK(code_of([&] { ContentIndex::read_csv(bad_flag, roster); }) ==
        Errc::malformed_dataset);

  std::istringstream short_row("key,name,internal,excluded_providers\nabc,a\n");
  CHECK(code_of([&] { ContentIndex::read_csv(short_row, roster); }) ==
        Errc::malformed_dataset);

  std::istringstream bad_exclusion(
      "key,name,internal,excluded_providers\n" +
      content_key("a") + ",a,0,P9\n");
  CHECK(code_of([&] { ContentIndex::read_csv(bad_exclusion, roster); }) ==
        Errc::unknown_excluded_provider);
}

TEST_CASE("exclusions fence providers off from matching requests") {
  const std::set<std::string> roster = {"P1", "P2", "P3", "P4", "P5"};
  ContentIndex idx;
  const std::string key = idx.upsert("geo-locked", false, {"P2", "P4"}, roster);

  const RankTable t = table_of(
      {{"P1", 0.9}, {"P2", 0.8}, {"P3", 0.7}, {"P4", 0.6}, {"P5", 0.5}});
  const auto cands =
      qualified_candidates(t, 0.0, idx.require(key).excluded_providers);
  REQUIRE(cands.size() == 3);
  CHECK(cands[0].id == "P1");
  CHECK(cands[1].id == "P3");
  CHECK(cands[2].id == "P5");
}

#include <doctest.h>

#include "claimlab/errors.hpp"
#include "claimlab/ingest.hpp"
#include "helpers.hpp"

using namespace claimlab;
using nlohmann::json;
using testutil::TempDir;

namespace {

json sample_record() {
  return json{{"tweets", testutil::kSampleTweet},
              {"id", 1075020507186126853ULL},
              {"len", 101},
              {"date", 1545139836000LL},
              {"source", "AgoraPulse Manager"},
              {"likes", 4},
              {"retweets", 2},
              {"time", 1545139836000LL},
              {"geo", nullptr},
              {"sentiment", -1}};
}

}  // namespace

TEST_CASE("tokenize reproduces the collected token list") {
  const std::vector<std::string> expected{"Was",  "Bill", "O",      "Reilly", "found",
                                          "dead", "Long", "Island", "home"};
  CHECK(tokenize(testutil::kSampleTweet) == expected);
}

TEST_CASE("tokenize edge cases") {
  CHECK(tokenize("").empty());
  CHECK(tokenize("the and of").empty());
  CHECK(tokenize("https://t.co/abc").empty());
  // Stopword matching is case-sensitive, like the collector's list.
  CHECK(tokenize("The cat") == std::vector<std::string>{"The", "cat"});
  CHECK(tokenize("caf\xC3\xA9 \xE2\x80\x9Cquoted\xE2\x80\x9D") ==
        std::vector<std::string>{"caf\xC3\xA9", "quoted"});
  CHECK(tokenize("snake_case 3.14") == std::vector<std::string>{"snake", "case", "3", "14"});
  // Scheme-less matches are not URLs to strip.
  CHECK(tokenize("tips at snopes.com/tips") ==
        std::vector<std::string>{"tips", "snopes", "com", "tips"});
}

TEST_CASE("stopwords") {
  CHECK(is_stopword("the"));
  CHECK(is_stopword("not"));
  CHECK(is_stopword("his"));
  CHECK_FALSE(is_stopword("The"));
  CHECK_FALSE(is_stopword("dead"));
}

TEST_CASE("record_from_json validates the schema") {
  const FeedRecord r = record_from_json(sample_record(), "sample");
  CHECK(r.id == 1075020507186126853ULL);
  CHECK(r.length == 101);
  CHECK(r.source == "AgoraPulse Manager");
  CHECK_FALSE(r.geo.has_value());
  CHECK(r.sentiment_hint == -1);
  CHECK(r.token_list.size() == 9);

  auto bad = sample_record();
  bad["len"] = 100;
  CHECK_THROWS_AS(record_from_json(bad, "x"), SchemaError);
  bad = sample_record();
  bad.erase("id");
  CHECK_THROWS_AS(record_from_json(bad, "x"), SchemaError);
  bad = sample_record();
  bad["id"] = "1075020507186126853";
  CHECK_THROWS_AS(record_from_json(bad, "x"), SchemaError);
  bad = sample_record();
  bad["sentiment"] = 2;
  CHECK_THROWS_AS(record_from_json(bad, "x"), SchemaError);
  bad = sample_record();
  bad["token_list"] = json::array({"ok", "not ok"});
  CHECK_THROWS_AS(record_from_json(bad, "x"), SchemaError);
  bad = sample_record();
  bad["token_list"] = "Was";
  CHECK_THROWS_AS(record_from_json(bad, "x"), SchemaError);
}

TEST_CASE("len counts code points, not bytes") {
  auto j = sample_record();
  j["tweets"] = "caf\xC3\xA9";
  j["len"] = 4;
  CHECK_NOTHROW(record_from_json(j, "x"));
  j["len"] = 5;
  CHECK_THROWS_AS(record_from_json(j, "x"), SchemaError);
}

TEST_CASE("record JSON round trip") {
  auto j = sample_record();
  j["geo"] = "40.7,-73.9";
  const FeedRecord r = record_from_json(j, "x");
  CHECK(record_from_json(record_to_json(r), "y") == r);
}

TEST_CASE("load_page orders records by numeric key") {
  TempDir dir;
  json page = json::object();
  for (int k : {10, 2, 0}) {
    auto r = sample_record();
    r["id"] = 100 + k;
    page[std::to_string(k)] = r;
  }
  testutil::spit(dir / "p.json", page.dump());
  const FeedPage p = load_page(dir / "p.json", 3);
  CHECK(p.page_index == 3);
  REQUIRE(p.records.size() == 3);
  CHECK(p.records[0].id == 100);
  CHECK(p.records[1].id == 102);
  CHECK(p.records[2].id == 110);
  CHECK(p.collected_at > 0);
}

TEST_CASE("load_page error paths") {
  TempDir dir;
  CHECK_THROWS_AS(load_page(dir / "missing.json", 1), FileError);

  testutil::spit(dir / "trunc.json", "{\"0\": {\"tweets\": ");
  try {
    load_page(dir / "trunc.json", 1);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.file().find("trunc.json") != std::string::npos);
    CHECK(e.offset() > 0);
  }

  testutil::spit(dir / "arr.json", "[]");
  CHECK_THROWS_AS(load_page(dir / "arr.json", 1), SchemaError);

  json bad_key = {{"first", sample_record()}};
  testutil::spit(dir / "key.json", bad_key.dump());
  CHECK_THROWS_AS(load_page(dir / "key.json", 1), SchemaError);

  json big = json::object();
  for (std::size_t i = 0; i <= kMaxRecordsPerPage; ++i) {
    auto r = sample_record();
    r["id"] = i + 1;
    big[std::to_string(i)] = r;
  }
  testutil::spit(dir / "big.json", big.dump());
  CHECK_THROWS_AS(load_page(dir / "big.json", 1), SchemaError);
}

TEST_CASE("load_pages keeps argument order and reports the first failing file") {
  TempDir dir;
  std::vector<std::filesystem::path> paths;
  for (int p = 0; p < 8; ++p) {
    json page = json::object();
    auto r = sample_record();
    r["id"] = 1000 + p;
    page["0"] = r;
    paths.push_back(dir / ("page_" + std::to_string(p) + ".json"));
    testutil::spit(paths.back(), page.dump());
  }
  const auto pages = load_pages(paths);
  REQUIRE(pages.size() == 8);
  for (int p = 0; p < 8; ++p) {
    CHECK(pages[p].page_index == p + 1);
    CHECK(pages[p].records.at(0).id == 1000u + p);
  }
  testutil::spit(paths[5], "{");
  testutil::spit(paths[6], "{");
  try {
    load_pages(paths);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.file().find("page_5") != std::string::npos);
  }
}

TEST_CASE("flatten and dedup keep the first occurrence") {
  FeedPage a, b;
  FeedRecord r1 = record_from_json(sample_record(), "x");
  FeedRecord r2 = r1;
  r2.id = 7;
  FeedRecord r3 = r1;
  r3.likes = 99;  // same id as r1, later copy
  a.records = {r1, r2};
  b.records = {r3};
  const auto all = flatten({a, b});
  CHECK(all.size() == 3);
  const auto unique = dedup(all);
  REQUIRE(unique.size() == 2);
  CHECK(unique[0].likes == 4);
  CHECK(unique[1].id == 7);
}

TEST_CASE("records.json round trip") {
  TempDir dir;
  const auto pages = load_pages(expand_glob((testutil::corpus_dir() / "pages" / "*.json").string()));
  const auto records = dedup(flatten(pages));
  write_records(records, dir / "records.json");
  CHECK(read_records(dir / "records.json") == records);
  testutil::spit(dir / "bad.json", "{}");
  CHECK_THROWS_AS(read_records(dir / "bad.json"), SchemaError);
}

TEST_CASE("expand_glob is sorted and empty on no match") {
  const auto paths = expand_glob((testutil::corpus_dir() / "pages" / "page_*.json").string());
  REQUIRE(paths.size() == 2);
  CHECK(paths[0].filename() == "page_01.json");
  CHECK(expand_glob("/nonexistent/dir/*.json").empty());
}

TEST_CASE("fixture page 1 record 8 is the collected sample") {
  const FeedPage p = load_page(testutil::corpus_dir() / "pages" / "page_01.json", 1);
  const FeedRecord& r = p.records.at(8);
  CHECK(r.id == 1075020507186126853ULL);
  CHECK(r.text == testutil::kSampleTweet);
  CHECK(r.token_list == tokenize(r.text));
}

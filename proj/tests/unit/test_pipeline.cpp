#include <doctest.h>

#include <map>

#include "claimlab/errors.hpp"
#include "claimlab/pipeline.hpp"
#include "fixture_server.hpp"
#include "helpers.hpp"

using namespace claimlab;
namespace fs = std::filesystem;

namespace {

PipelineConfig corpus_config(const fs::path& out) {
  PipelineConfig c = default_config();
  apply_config_file(c, testutil::corpus_dir() / "claimlab.conf");
  c.output_dir = out;
  return c;
}

}  // namespace

TEST_CASE("config file parsing and precedence") {
  PipelineConfig c = default_config();
  apply_config_text(c,
                    "# comment\n"
                    "pages_glob = data/*.json\n"
                    "offline = yes\n"
                    "cache_dir = /tmp/cache\n"
                    "rate_ms = 250\n"
                    "lo = -0.5\n"
                    "resolve = t.co=127.0.0.1:8080\n"
                    "resolve = www.snopes.com=127.0.0.1:8080\n",
                    "inline");
  CHECK(c.pages_glob == "data/*.json");
  CHECK(c.offline);
  CHECK(c.rate_ms == 250);
  CHECK(c.lo == -0.5);
  REQUIRE(c.host_overrides.size() == 2);
  CHECK(c.host_overrides[1].host == "www.snopes.com");
  CHECK(c.host_overrides[1].port == 8080);
  CHECK_NOTHROW(c.validate());

  std::map<std::string, std::string> env{{"CLAIMLAB_RATE_MS", "5"},
                                         {"CLAIMLAB_PARALLEL", "2"},
                                         {"CLAIMLAB_OFFLINE", "false"}};
  apply_env(c, [&](const char* name) -> const char* {
    auto it = env.find(name);
    return it == env.end() ? nullptr : it->second.c_str();
  });
  CHECK(c.rate_ms == 5);
  CHECK(c.parallel == 2);
  CHECK_FALSE(c.offline);
}

TEST_CASE("config errors") {
  PipelineConfig c = default_config();
  CHECK_THROWS_AS(apply_config_text(c, "colour = blue\n", "x"), ConfigError);
  CHECK_THROWS_AS(apply_config_text(c, "rate_ms = fast\n", "x"), ConfigError);
  CHECK_THROWS_AS(apply_config_text(c, "offline = maybe\n", "x"), ConfigError);
  CHECK_THROWS_AS(apply_config_text(c, "just words\n", "x"), ConfigError);
  CHECK_THROWS_AS(apply_config_file(c, "/nonexistent.conf"), ConfigError);
  CHECK_THROWS_AS(parse_host_override("t.co"), ConfigError);
  CHECK_THROWS_AS(parse_host_override("t.co=1.2.3.4:0"), ConfigError);
  try {
    apply_config_text(c, "\n\nparallel = x\n", "file.conf");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("file.conf:3") != std::string::npos);
  }
  PipelineConfig bad = default_config();
  bad.lo = 0.6;
  bad.hi = -0.6;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = default_config();
  bad.parallel = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = default_config();
  bad.offline = true;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(Stage::Ingest) == 4);
  CHECK(exit_code_for(Stage::Crawl) == 6);
  CHECK(exit_code_for(Stage::Analyze) == 10);
  CHECK(to_string(Stage::Assemble) == "assemble");
}

TEST_CASE("offline run over the fixture corpus") {
  testutil::TempDir dir;
  const PipelineReport r = run(corpus_config(dir.path()));
  CHECK(r.exit_code == 0);
  CHECK(r.pages_loaded == 2);
  CHECK(r.duplicate_records == 1);
  CHECK(r.rows_emitted >= 20);
  CHECK(r.urls_crawlable == 59);
  CHECK(r.pages_cached == 59);
  CHECK(r.fetch_errors == 1);
  CHECK(r.pages_fetched == 0);
  for (const char* a : {artifacts::kRecords, artifacts::kUrls, artifacts::kCrawl, artifacts::kParsed,
                        artifacts::kScored, artifacts::kDatasetCsv, artifacts::kDatasetJson,
                        artifacts::kStats, artifacts::kViolin, artifacts::kSvg, artifacts::kReport}) {
    INFO(a);
    CHECK(fs::exists(dir.path() / a));
  }
  const auto rows = read_csv(dir.path() / artifacts::kDatasetCsv);
  REQUIRE_FALSE(rows.empty());
  CHECK(rows[0].claim == "Former Fox News host Bill O'Reilly was found dead on Long Island.");
  CHECK(rows[0].rating == Rating::False);
  CHECK(rows[0].sentiment == -0.083333333333333);
  REQUIRE(r.sources.size() == 1);
  CHECK(r.sources[0]["credible"] == true);
}

TEST_CASE("stage artifacts are consumable by the next stage") {
  testutil::TempDir dir;
  run(corpus_config(dir.path()));
  const auto records = read_records(dir.path() / artifacts::kRecords);
  const auto urls = read_urls((dir.path() / artifacts::kUrls).string());
  const auto again = extract_stage(records);
  REQUIRE(urls.size() == again.size());
  for (std::size_t i = 0; i < urls.size(); ++i) {
    CHECK(urls[i].raw == again[i].raw);
    CHECK(urls[i].offset == again[i].offset);
    CHECK(urls[i].source_record_id == again[i].source_record_id);
  }
  const auto parsed = read_parsed(dir.path() / artifacts::kParsed);
  CHECK(parse_stage(read_crawl(dir.path() / artifacts::kCrawl)) == parsed);
  const auto scored = read_scored(dir.path() / artifacts::kScored);
  const auto assembled = assemble_stage(parsed, scored);
  CHECK(to_csv(assembled.rows) == testutil::slurp(dir.path() / artifacts::kDatasetCsv));
  const auto analysis = analyze_stage(read_csv(dir.path() / artifacts::kDatasetCsv), -0.6, 0.6, 256);
  CHECK(analysis.stats.dump(2) + "\n" == testutil::slurp(dir.path() / artifacts::kStats));
}

TEST_CASE("assemble_stage rejects scores from a different parse") {
  testutil::TempDir dir;
  run(corpus_config(dir.path()));
  const auto parsed = read_parsed(dir.path() / artifacts::kParsed);
  auto scored = read_scored(dir.path() / artifacts::kScored);
  std::swap(scored[0], scored[1]);
  CHECK_THROWS_AS(assemble_stage(parsed, scored), AlignmentError);
}

TEST_CASE("empty page glob gives an empty successful run") {
  testutil::TempDir dir;
  PipelineConfig c = default_config();
  c.pages_glob = (dir.path() / "none-*.json").string();
  c.cache_dir = dir.path() / "cache";
  c.offline = true;
  c.output_dir = dir.path() / "out";
  const auto r = run(c);
  CHECK(r.exit_code == 0);
  CHECK(r.records_loaded == 0);
  CHECK(r.urls_found == 0);
  CHECK(r.rows_emitted == 0);
  CHECK(read_csv(dir.path() / "out" / artifacts::kDatasetCsv).empty());
}

TEST_CASE("a missing cache entry fails the crawl stage and keeps earlier outputs") {
  testutil::TempDir dir;
  fs::copy(testutil::corpus_dir() / "cache", dir.path() / "cache", fs::copy_options::recursive);
  ResponseCache cache(dir.path() / "cache");
  REQUIRE(cache.erase("https://www.snopes.com/fact-check/bill-oreilly-found-dead/"));
  PipelineConfig c = corpus_config(dir.path() / "out");
  c.cache_dir = dir.path() / "cache";
  const auto r = run(c);
  CHECK(r.exit_code == exit_code_for(Stage::Crawl));
  REQUIRE(r.failed_stage);
  CHECK(*r.failed_stage == Stage::Crawl);
  CHECK(fs::exists(dir.path() / "out" / artifacts::kRecords));
  CHECK(fs::exists(dir.path() / "out" / artifacts::kUrls));
  CHECK_FALSE(fs::exists(dir.path() / "out" / artifacts::kDatasetCsv));
  CHECK(testutil::load_json(dir.path() / "out" / artifacts::kReport)["failed_stage"] == "crawl");
}

TEST_CASE("bad inputs map to their stage's exit code") {
  testutil::TempDir dir;
  testutil::spit(dir.path() / "page.json", "{\"0\": ");
  PipelineConfig c = default_config();
  c.pages_glob = (dir.path() / "page.json").string();
  c.output_dir = dir.path() / "out";
  c.offline = true;
  c.cache_dir = dir.path() / "cache";
  CHECK(run(c).exit_code == exit_code_for(Stage::Ingest));

  PipelineConfig s = corpus_config(dir.path() / "out2");
  s.lexicon_path = dir.path() / "missing.tsv";
  CHECK(run(s).exit_code == exit_code_for(Stage::Score));

  PipelineConfig bad = default_config();
  bad.lo = 1;
  bad.hi = 0;
  CHECK(run(bad).exit_code == kExitConfig);
}

TEST_CASE("online run through the fixture server fills an empty cache") {
  testutil::TempDir dir;
  fixture::Server server;
  server.load_routes(testutil::corpus_dir() / "site" / "routes.json");
  server.start();
  PipelineConfig c = corpus_config(dir.path() / "out");
  c.offline = false;
  c.cache_dir = dir.path() / "cache";
  c.rate_ms = 5;
  for (const auto& o : server.overrides()) c.host_overrides.push_back(parse_host_override(o));
  const auto online = run(c);
  REQUIRE(online.exit_code == 0);
  CHECK(online.pages_fetched > 0);

  PipelineConfig off = corpus_config(dir.path() / "replay");
  off.cache_dir = dir.path() / "cache";
  const auto replay = run(off);
  CHECK(replay.exit_code == 0);
  CHECK(testutil::slurp(dir.path() / "out" / artifacts::kDatasetCsv) ==
        testutil::slurp(dir.path() / "replay" / artifacts::kDatasetCsv));
}

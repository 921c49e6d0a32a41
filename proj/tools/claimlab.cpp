#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

#include "claimlab/kernels.hpp"
#include "claimlab/log.hpp"
#include "claimlab/pipeline.hpp"

namespace fs = std::filesystem;
using namespace claimlab;

namespace {

struct Flags {
  std::optional<std::string> config_file;
  std::optional<std::string> output_dir;
  bool verbose = false;

  std::optional<std::string> pages_glob;
  std::optional<std::string> cache_dir;
  bool offline = false;
  std::optional<std::int64_t> rate_ms;
  std::optional<int> parallel;
  std::optional<int> max_retries;
  std::optional<int> max_hops;
  std::optional<std::string> user_agent;
  std::optional<std::string> lexicon;
  std::optional<std::string> sources;
  std::optional<double> lo;
  std::optional<double> hi;
  std::optional<int> grid;
  std::vector<std::string> resolve;

  // Stage inputs; default to the artifact in output_dir.
  std::optional<std::string> in_records;
  std::optional<std::string> in_urls;
  std::optional<std::string> in_crawl;
  std::optional<std::string> in_parsed;
  std::optional<std::string> in_scored;
  std::optional<std::string> in_dataset;
  bool resolve_redirects = false;
};

PipelineConfig build_config(const Flags& f) {
  PipelineConfig c = default_config();
  if (f.config_file) apply_config_file(c, *f.config_file);
  apply_env(c);
  if (f.output_dir) c.output_dir = *f.output_dir;
  if (f.pages_glob) c.pages_glob = *f.pages_glob;
  if (f.cache_dir) c.cache_dir = *f.cache_dir;
  if (f.offline) c.offline = true;
  if (f.rate_ms) c.rate_ms = *f.rate_ms;
  if (f.parallel) c.parallel = *f.parallel;
  if (f.max_retries) c.max_retries = *f.max_retries;
  if (f.max_hops) c.max_hops = *f.max_hops;
  if (f.user_agent) c.user_agent = *f.user_agent;
  if (f.lexicon) c.lexicon_path = *f.lexicon;
  if (f.sources) c.sources_path = *f.sources;
  if (f.lo) c.lo = *f.lo;
  if (f.hi) c.hi = *f.hi;
  if (f.grid) c.grid = *f.grid;
  for (const auto& r : f.resolve) c.host_overrides.push_back(parse_host_override(r));
  c.validate();
  return c;
}

fs::path input_or(const std::optional<std::string>& flag, const PipelineConfig& c,
                  const char* artifact) {
  return flag ? fs::path(*flag) : c.output_dir / artifact;
}

std::unique_ptr<Crawler> make_crawler(const PipelineConfig& c) {
  std::shared_ptr<HttpTransport> transport;
  if (!c.offline) {
    auto t = std::make_shared<HttplibTransport>();
    for (const auto& o : c.host_overrides) t->add_host_override(o.host, o.address, o.port);
    transport = t;
  }
  return std::make_unique<Crawler>(c.crawl_policy(), transport);
}

int run_stage(Stage stage, const Flags& f) {
  PipelineConfig c;
  try {
    c = build_config(f);
  } catch (const Error& e) {
    log::error("config", e.what());
    return kExitConfig;
  }
  try {
    fs::create_directories(c.output_dir);
    const fs::path out = c.output_dir;
    switch (stage) {
      case Stage::Ingest: {
        const auto paths = c.pages_glob.empty() ? std::vector<fs::path>{} : expand_glob(c.pages_glob);
        const auto r = ingest_stage(paths);
        write_records(r.records, out / artifacts::kRecords);
        log::info("ingest", std::to_string(r.loaded) + " records from " + std::to_string(r.pages) +
                                " pages, " + std::to_string(r.duplicates) + " duplicates");
        break;
      }
      case Stage::Extract: {
        const auto records = read_records(input_or(f.in_records, c, artifacts::kRecords));
        std::unique_ptr<Crawler> crawler;
        if (f.resolve_redirects) crawler = make_crawler(c);
        const auto urls = extract_stage(records, crawler.get(), c.max_hops);
        write_urls(urls, (out / artifacts::kUrls).string());
        log::info("extract", std::to_string(urls.size()) + " URLs");
        break;
      }
      case Stage::Crawl: {
        const auto urls = read_urls(input_or(f.in_urls, c, artifacts::kUrls).string());
        auto crawler = make_crawler(c);
        const auto entries = crawl_stage(urls, *crawler, c.max_hops);
        write_crawl(entries, out / artifacts::kCrawl);
        std::size_t failed = 0;
        for (const auto& e : entries) {
          if (!e.ok()) {
            ++failed;
            log::warn("crawl", e.url + ": " + e.error);
          }
        }
        log::info("crawl", std::to_string(entries.size()) + " URLs, " +
                               std::to_string(crawler->network_requests()) + " network requests, " +
                               std::to_string(crawler->cache_hits()) + " cache hits, " +
                               std::to_string(failed) + " failed");
        break;
      }
      case Stage::Parse: {
        const auto entries = read_crawl(input_or(f.in_crawl, c, artifacts::kCrawl));
        const auto parsed = parse_stage(entries);
        write_parsed(parsed, out / artifacts::kParsed);
        log::info("parse", std::to_string(parsed.size()) + " pages");
        break;
      }
      case Stage::Score: {
        const auto parsed = read_parsed(input_or(f.in_parsed, c, artifacts::kParsed));
        const auto scored = score_stage(parsed, load_lexicon(c.lexicon_path));
        write_scored(scored, out / artifacts::kScored);
        log::info("score", std::to_string(scored.size()) + " claims scored");
        break;
      }
      case Stage::Assemble: {
        const auto parsed = read_parsed(input_or(f.in_parsed, c, artifacts::kParsed));
        const auto scored = read_scored(input_or(f.in_scored, c, artifacts::kScored));
        const auto r = assemble_stage(parsed, scored);
        write_csv(r.rows, out / artifacts::kDatasetCsv);
        write_dataset_json(r.rows, out / artifacts::kDatasetJson);
        log::info("assemble", std::to_string(r.rows.size()) + " rows, " +
                                  std::to_string(r.dropped()) + " dropped");
        break;
      }
      case Stage::Analyze: {
        const auto rows = read_csv(input_or(f.in_dataset, c, artifacts::kDatasetCsv));
        const auto a = analyze_stage(rows, c.lo, c.hi, c.grid);
        write_text_file(out / artifacts::kStats, a.stats.dump(2) + "\n");
        write_text_file(out / artifacts::kViolin, a.violin.dump(2) + "\n");
        write_text_file(out / artifacts::kSvg, a.svg);
        std::cout << a.stats.dump(2) << "\n";
        break;
      }
    }
  } catch (const std::exception& e) {
    log::error(to_string(stage), e.what());
    return exit_code_for(stage);
  }
  return kExitOk;
}

int run_all(const Flags& f) {
  PipelineConfig c;
  try {
    c = build_config(f);
  } catch (const Error& e) {
    log::error("config", e.what());
    return kExitConfig;
  }
  const PipelineReport report = run(c);
  std::cout << report.to_json().dump(2) << "\n";
  return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"claimlab: build and analyze a sentiment-annotated fact-check dataset"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config_file, "key = value configuration file");
  app.add_option("--output-dir", f.output_dir, "directory for artifacts");
  app.add_flag("-v,--verbose", f.verbose, "debug logging");

  auto crawl_opts = [&](CLI::App* s) {
    s->add_option("--cache-dir", f.cache_dir, "response cache directory");
    s->add_flag("--offline", f.offline, "serve from the cache only");
    s->add_option("--rate-ms", f.rate_ms, "minimum gap between requests to one host");
    s->add_option("--parallel", f.parallel, "concurrent fetches");
    s->add_option("--max-retries", f.max_retries, "retries on 5xx and transport errors");
    s->add_option("--max-hops", f.max_hops, "redirect budget");
    s->add_option("--user-agent", f.user_agent, "User-Agent header");
    s->add_option("--resolve", f.resolve, "route host to address:port (host=addr:port)");
  };
  auto analyze_opts = [&](CLI::App* s) {
    s->add_option("--lo", f.lo, "lower tail threshold");
    s->add_option("--hi", f.hi, "upper tail threshold");
    s->add_option("--grid", f.grid, "density grid points");
  };

  std::optional<Stage> stage;
  auto* ingest = app.add_subcommand("ingest", "load feed pages into records.json");
  ingest->add_option("--pages", f.pages_glob, "glob of feed page JSON files");
  ingest->callback([&] { stage = Stage::Ingest; });

  auto* extract = app.add_subcommand("extract", "extract URLs into urls.json");
  extract->add_option("--records", f.in_records, "records.json to read");
  extract->add_flag("--resolve-redirects", f.resolve_redirects, "follow redirects of each URL");
  crawl_opts(extract);
  extract->callback([&] { stage = Stage::Extract; });

  auto* crawl = app.add_subcommand("crawl", "fetch fact-check pages into crawl.json");
  crawl->add_option("--urls", f.in_urls, "urls.json to read");
  crawl_opts(crawl);
  crawl->callback([&] { stage = Stage::Crawl; });

  auto* parse = app.add_subcommand("parse", "extract claim, rating and origin into parsed.json");
  parse->add_option("--crawl", f.in_crawl, "crawl.json to read");
  parse->callback([&] { stage = Stage::Parse; });

  auto* score = app.add_subcommand("score", "score claim sentiment into scored.json");
  score->add_option("--parsed", f.in_parsed, "parsed.json to read");
  score->add_option("--lexicon", f.lexicon, "polarity lexicon (TSV)");
  score->callback([&] { stage = Stage::Score; });

  auto* assemble = app.add_subcommand("assemble", "join parsed and scored into dataset.csv");
  assemble->add_option("--parsed", f.in_parsed, "parsed.json to read");
  assemble->add_option("--scored", f.in_scored, "scored.json to read");
  assemble->callback([&] { stage = Stage::Assemble; });

  auto* analyze = app.add_subcommand("analyze", "statistics and violin data from dataset.csv");
  analyze->add_option("--dataset", f.in_dataset, "dataset.csv to read");
  analyze_opts(analyze);
  analyze->callback([&] { stage = Stage::Analyze; });

  bool run_cmd = false;
  auto* run_sub = app.add_subcommand("run", "run every stage in order");
  run_sub->add_option("--pages", f.pages_glob, "glob of feed page JSON files");
  run_sub->add_option("--lexicon", f.lexicon, "polarity lexicon (TSV)");
  run_sub->add_option("--sources", f.sources, "fact-source registry (INI)");
  crawl_opts(run_sub);
  analyze_opts(run_sub);
  run_sub->callback([&] { run_cmd = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }
  log::set_verbose(f.verbose);
  if (run_cmd) return run_all(f);
  return run_stage(*stage, f);
}

#include "claimlab/pipeline.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "claimlab/kernels.hpp"
#include "claimlab/log.hpp"
#include "claimlab/ratings.hpp"
#include "claimlab/text.hpp"

#ifndef CLAIMLAB_DATA_DIR
#define CLAIMLAB_DATA_DIR "data"
#endif

namespace claimlab {
namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const std::string v = text::trim(value);
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError("config key '" + std::string(key) + "': bad number '" + v + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  const std::string v = text::to_lower_ascii(text::trim(value));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + std::string(key) + "': bad boolean '" + v + "'");
}

constexpr std::string_view kConfigKeys[] = {
    "pages_glob", "cache_dir", "offline", "rate_ms", "parallel", "max_retries",
    "retry_backoff_ms", "max_hops", "user_agent", "lexicon_path", "sources_path", "lo", "hi",
    "grid", "output_dir", "resolve"};

const FactSource* find_source(const SourceRegistry& reg, std::string host) {
  for (;;) {
    if (auto it = reg.find(host); it != reg.end()) return &it->second;
    const auto dot = host.find('.');
    if (dot == std::string::npos) return nullptr;
    host = host.substr(dot + 1);
  }
}

}  // namespace

HostOverride parse_host_override(std::string_view spec) {
  const auto eq = spec.find('=');
  const auto colon = spec.rfind(':');
  if (eq == std::string_view::npos || colon == std::string_view::npos || colon < eq) {
    throw ConfigError("bad host override '" + std::string(spec) + "' (want host=address:port)");
  }
  HostOverride o;
  o.host = text::to_lower_ascii(text::trim(spec.substr(0, eq)));
  o.address = text::trim(spec.substr(eq + 1, colon - eq - 1));
  o.port = parse_number<int>("resolve", spec.substr(colon + 1));
  if (o.host.empty() || o.address.empty() || o.port <= 0 || o.port > 65535) {
    throw ConfigError("bad host override '" + std::string(spec) + "'");
  }
  return o;
}

void PipelineConfig::validate() const {
  if (!(lo < hi)) throw ConfigError("thresholds require lo < hi");
  if (parallel < 1) throw ConfigError("parallel must be >= 1");
  if (rate_ms < 0) throw ConfigError("rate_ms must be >= 0");
  if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (max_hops < 1) throw ConfigError("max_hops must be >= 1");
  if (grid < 2) throw ConfigError("grid must be >= 2");
  if (offline && cache_dir.empty()) throw ConfigError("offline mode requires cache_dir");
  if (output_dir.empty()) throw ConfigError("output_dir must be set");
}

CrawlPolicy PipelineConfig::crawl_policy() const {
  CrawlPolicy p;
  p.min_interval_ms_per_host = rate_ms;
  p.max_retries = max_retries;
  p.retry_backoff_ms = retry_backoff_ms;
  p.max_parallel = parallel;
  p.cache_dir = cache_dir;
  p.offline_only = offline;
  p.user_agent = user_agent;
  return p;
}

fs::path default_lexicon_path() { return fs::path(CLAIMLAB_DATA_DIR) / "lexicon.tsv"; }
fs::path default_sources_path() { return fs::path(CLAIMLAB_DATA_DIR) / "sources.ini"; }

PipelineConfig default_config() {
  PipelineConfig c;
  c.lexicon_path = default_lexicon_path();
  c.sources_path = default_sources_path();
  return c;
}

void set_config_value(PipelineConfig& c, std::string_view key, std::string_view raw) {
  const std::string value = text::trim(raw);
  if (key == "pages_glob") c.pages_glob = value;
  else if (key == "cache_dir") c.cache_dir = value;
  else if (key == "offline") c.offline = parse_bool(key, value);
  else if (key == "rate_ms") c.rate_ms = parse_number<std::int64_t>(key, value);
  else if (key == "parallel") c.parallel = parse_number<int>(key, value);
  else if (key == "max_retries") c.max_retries = parse_number<int>(key, value);
  else if (key == "retry_backoff_ms") c.retry_backoff_ms = parse_number<std::int64_t>(key, value);
  else if (key == "max_hops") c.max_hops = parse_number<int>(key, value);
  else if (key == "user_agent") c.user_agent = value;
  else if (key == "lexicon_path") c.lexicon_path = value;
  else if (key == "sources_path") c.sources_path = value;
  else if (key == "lo") c.lo = parse_number<double>(key, value);
  else if (key == "hi") c.hi = parse_number<double>(key, value);
  else if (key == "grid") c.grid = parse_number<int>(key, value);
  else if (key == "output_dir") c.output_dir = value;
  else if (key == "resolve") c.host_overrides.push_back(parse_host_override(value));
  else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void apply_config_text(PipelineConfig& c, std::string_view doc, const std::string& origin) {
  std::istringstream in{std::string(doc)};
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const std::string t = text::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key = value");
    }
    try {
      set_config_value(c, text::trim(std::string_view(t).substr(0, eq)),
                       std::string_view(t).substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void apply_config_file(PipelineConfig& c, const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  // Relative paths in the file are relative to the file's directory.
  PipelineConfig before = c;
  apply_config_text(c, ss.str(), path.string());
  const fs::path base = path.parent_path();
  auto rebase = [&](fs::path& p, const fs::path& old) {
    if (p != old && !p.empty() && p.is_relative()) p = base / p;
  };
  rebase(c.cache_dir, before.cache_dir);
  rebase(c.lexicon_path, before.lexicon_path);
  rebase(c.sources_path, before.sources_path);
  rebase(c.output_dir, before.output_dir);
  if (c.pages_glob != before.pages_glob && !c.pages_glob.empty() &&
      fs::path(c.pages_glob).is_relative()) {
    c.pages_glob = (base / c.pages_glob).string();
  }
}

void apply_env(PipelineConfig& c, const std::function<const char*(const char*)>& lookup) {
  auto get = lookup ? lookup : [](const char* name) { return static_cast<const char*>(std::getenv(name)); };
  for (std::string_view key : kConfigKeys) {
    std::string name(kEnvPrefix);
    for (char ch : key) name.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
    if (const char* v = get(name.c_str())) {
      if (key == "resolve") {
        // Comma-separated list in the environment.
        std::string_view rest(v);
        while (!rest.empty()) {
          const auto comma = rest.find(',');
          const auto item = text::trim(rest.substr(0, comma));
          if (!item.empty()) set_config_value(c, key, item);
          rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
      } else {
        set_config_value(c, key, v);
      }
    }
  }
}

std::string_view to_string(Stage s) {
  switch (s) {
    case Stage::Ingest: return "ingest";
    case Stage::Extract: return "extract";
    case Stage::Crawl: return "crawl";
    case Stage::Parse: return "parse";
    case Stage::Score: return "score";
    case Stage::Assemble: return "assemble";
    case Stage::Analyze: return "analyze";
  }
  return "unknown";
}

void write_text_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw FileError("write failed: " + path.string());
}

// --- stages ----------------------------------------------------------------

IngestResult ingest_stage(const std::vector<fs::path>& paths) {
  IngestResult r;
  const auto pages = load_pages(paths);
  r.pages = pages.size();
  const auto all = flatten(pages);
  r.loaded = all.size();
  r.records = dedup(all);
  r.duplicates = r.loaded - r.records.size();
  return r;
}

std::vector<ExtractedUrl> extract_stage(const std::vector<FeedRecord>& records, Crawler* resolver,
                                        int max_hops) {
  auto urls = extract_from_records(records);
  if (!resolver) return urls;
  for (auto& u : urls) {
    if (!u.crawlable()) continue;
    try {
      u.resolved = resolve_redirects(u.raw, max_hops, *resolver);
    } catch (const Error& e) {
      log::warn("extract", "could not resolve " + u.raw + ": " + e.what());
    }
  }
  return urls;
}

std::vector<CrawlEntry> crawl_stage(const std::vector<ExtractedUrl>& urls, Crawler& crawler,
                                    int max_hops) {
  std::vector<std::string> targets;
  std::vector<std::uint64_t> record_ids;
  for (const auto& u : urls) {
    if (!u.crawlable()) continue;
    targets.push_back(u.resolved.value_or(u.raw));
    record_ids.push_back(u.source_record_id);
  }
  auto entries = crawler.fetch_all(targets, max_hops);
  for (std::size_t i = 0; i < entries.size(); ++i) entries[i].record_id = record_ids[i];
  return entries;
}

std::vector<ParseOutcome> parse_stage(const std::vector<CrawlEntry>& entries) {
  return parse_all(entries);
}

std::vector<ScoredEntry> score_stage(const std::vector<ParseOutcome>& parsed,
                                     const Lexicon& lexicon) {
  std::vector<std::string> claims;
  claims.reserve(parsed.size());
  for (const auto& p : parsed) claims.push_back(p.page.claim_text);
  const auto scores = score_all(claims, lexicon);
  std::vector<ScoredEntry> out;
  out.reserve(parsed.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    out.push_back(ScoredEntry{parsed[i].record_id, parsed[i].url, scores[i]});
  }
  return out;
}

void write_scored(const std::vector<ScoredEntry>& scored, const fs::path& path) {
  json arr = json::array();
  for (const auto& s : scored) {
    arr.push_back({{"record_id", s.record_id},
                   {"url", s.url},
                   {"value", s.score.value},
                   {"polarity", to_string(s.score.polarity)}});
  }
  write_text_file(path, arr.dump(2) + "\n");
}

std::vector<ScoredEntry> read_scored(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": malformed JSON at byte " + std::to_string(e.byte),
                     path.string(), e.byte);
  }
  if (!doc.is_array()) throw SchemaError(path.string() + ": expected an array");
  std::vector<ScoredEntry> out;
  for (const auto& j : doc) {
    try {
      ScoredEntry s;
      s.record_id = j.at("record_id").get<std::uint64_t>();
      s.url = j.at("url").get<std::string>();
      s.score.value = j.at("value").get<double>();
      s.score.polarity = classify(s.score.value);
      out.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw SchemaError(path.string() + ": malformed scored entry: " + e.what());
    }
  }
  return out;
}

AssemblyResult assemble_stage(const std::vector<ParseOutcome>& parsed,
                              const std::vector<ScoredEntry>& scored) {
  const std::size_t n = std::min(parsed.size(), scored.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (parsed[i].record_id != scored[i].record_id || parsed[i].url != scored[i].url) {
      throw AlignmentError("parsed and scored entries disagree at index " + std::to_string(i), i);
    }
  }
  std::vector<SentimentScore> scores;
  scores.reserve(scored.size());
  for (const auto& s : scored) scores.push_back(s.score);
  const auto ratings = ratings_for(parsed);
  return assemble(parsed, scores, ratings);
}

AnalysisOutputs analyze_stage(const std::vector<DatasetRow>& rows, double lo, double hi, int grid) {
  AnalysisOutputs out;
  out.stats = stats_json(rows, lo, hi);
  const auto by_rating = violin(rows, GroupBy::Rating, grid);
  const auto by_cluster = violin(rows, GroupBy::Cluster, grid);
  out.violin = violin_json(by_rating, by_cluster);
  out.svg = render_svg(by_rating, "Sentiment by rating");
  return out;
}

// --- run -------------------------------------------------------------------

ordered_json PipelineReport::to_json() const {
  ordered_json j;
  j["pages_loaded"] = pages_loaded;
  j["records_loaded"] = records_loaded;
  j["duplicate_records"] = duplicate_records;
  j["urls_found"] = urls_found;
  j["urls_crawlable"] = urls_crawlable;
  j["pages_fetched"] = pages_fetched;
  j["pages_cached"] = pages_cached;
  j["fetch_errors"] = fetch_errors;
  j["pages_parsed"] = pages_parsed;
  j["pages_unrated"] = pages_unrated;
  j["unknown_ratings"] = unknown_ratings;
  j["rows_emitted"] = rows_emitted;
  j["rows_dropped"] = rows_dropped;
  j["sources"] = sources;
  j["exit_code"] = exit_code;
  j["failed_stage"] = failed_stage ? ordered_json(to_string(*failed_stage)) : ordered_json(nullptr);
  j["error"] = error;
  return j;
}

PipelineReport run(const PipelineConfig& config, std::shared_ptr<HttpTransport> transport) {
  PipelineReport report;
  try {
    config.validate();
  } catch (const ConfigError& e) {
    report.exit_code = kExitConfig;
    report.error = e.what();
    log::error("config", e.what());
    return report;
  }
  const fs::path out = config.output_dir;

  Stage current = Stage::Ingest;
  try {
    fs::create_directories(out);

    // 1. ingest
    const auto paths =
        config.pages_glob.empty() ? std::vector<fs::path>{} : expand_glob(config.pages_glob);
    const IngestResult ingested = ingest_stage(paths);
    report.pages_loaded = ingested.pages;
    report.records_loaded = ingested.loaded;
    report.duplicate_records = ingested.duplicates;
    write_records(ingested.records, out / artifacts::kRecords);
    log::info("ingest", std::to_string(ingested.loaded) + " records from " +
                            std::to_string(ingested.pages) + " pages, " +
                            std::to_string(ingested.duplicates) + " duplicates");

    // 2. extract (redirects are resolved while crawling)
    current = Stage::Extract;
    const auto urls = extract_stage(ingested.records);
    report.urls_found = urls.size();
    for (const auto& u : urls) report.urls_crawlable += u.crawlable() ? 1 : 0;
    write_urls(urls, (out / artifacts::kUrls).string());
    log::info("extract", std::to_string(urls.size()) + " URLs, " +
                             std::to_string(report.urls_crawlable) + " crawlable");

    // 3. crawl
    current = Stage::Crawl;
    if (!transport && !config.offline) {
      auto t = std::make_shared<HttplibTransport>();
      for (const auto& o : config.host_overrides) t->add_host_override(o.host, o.address, o.port);
      transport = t;
    }
    Crawler crawler(config.crawl_policy(), transport);
    const auto entries = crawl_stage(urls, crawler, config.max_hops);
    write_crawl(entries, out / artifacts::kCrawl);
    std::size_t misses = 0;
    for (const auto& e : entries) {
      if (!e.ok()) {
        ++report.fetch_errors;
        if (e.error_kind == "cache-miss") ++misses;
        log::warn("crawl", e.url + ": " + e.error);
      }
      if (e.result) ++(e.result->from_cache ? report.pages_cached : report.pages_fetched);
    }
    log::info("crawl", std::to_string(entries.size()) + " URLs, " +
                           std::to_string(crawler.network_requests()) + " network requests, " +
                           std::to_string(crawler.cache_hits()) + " cache hits");
    if (misses > 0) {
      throw StageError(Stage::Crawl, std::to_string(misses) + " URL(s) missing from the offline cache");
    }

    // 4. parse
    current = Stage::Parse;
    const auto parsed = parse_stage(entries);
    write_parsed(parsed, out / artifacts::kParsed);
    for (const auto& p : parsed) {
      switch (p.status) {
        case ParseOutcome::Status::Rated: ++report.pages_parsed; break;
        case ParseOutcome::Status::UnknownRating: ++report.unknown_ratings; break;
        default: ++report.pages_unrated; break;
      }
      for (const auto& w : p.page.warnings) log::debug("parse", p.url + ": " + w);
    }
    log::info("parse", std::to_string(report.pages_parsed) + " rated, " +
                           std::to_string(report.unknown_ratings) + " unknown rating, " +
                           std::to_string(report.pages_unrated) + " unrated");

    // 5. score
    current = Stage::Score;
    const Lexicon lexicon = load_lexicon(config.lexicon_path);
    const auto scored = score_stage(parsed, lexicon);
    write_scored(scored, out / artifacts::kScored);
    log::info("score", std::to_string(scored.size()) + " claims scored with " +
                           std::to_string(lexicon.entries.size()) + " lexicon entries");

    // 6. assemble
    current = Stage::Assemble;
    const AssemblyResult assembled = assemble_stage(parsed, scored);
    report.rows_emitted = assembled.rows.size();
    report.rows_dropped = assembled.dropped();
    write_csv(assembled.rows, out / artifacts::kDatasetCsv);
    write_dataset_json(assembled.rows, out / artifacts::kDatasetJson);
    log::info("assemble", std::to_string(report.rows_emitted) + " rows, " +
                              std::to_string(report.rows_dropped) + " dropped");

    if (!config.sources_path.empty()) {
      const SourceRegistry registry = load_registry(config.sources_path);
      std::set<std::string> hosts;
      for (const auto& row : assembled.rows) {
        if (auto u = parse_url(row.source_url)) hosts.insert(u->host);
      }
      for (const auto& host : hosts) {
        ordered_json s{{"host", host}};
        if (const FactSource* src = find_source(registry, host)) {
          const auto verdict = check_source(*src, registry);
          s["source"] = src->name;
          s["credible"] = verdict.credible;
          s["chain"] = verdict.chain;
        } else {
          s["source"] = nullptr;
          s["credible"] = false;
          s["chain"] = json::array();
        }
        if (!s["credible"].get<bool>()) log::warn("assemble", "rows from unverified source " + host);
        report.sources.push_back(std::move(s));
      }
    }

    // 7. analyze
    current = Stage::Analyze;
    const AnalysisOutputs analysis = analyze_stage(assembled.rows, config.lo, config.hi, config.grid);
    write_text_file(out / artifacts::kStats, analysis.stats.dump(2) + "\n");
    write_text_file(out / artifacts::kViolin, analysis.violin.dump(2) + "\n");
    write_text_file(out / artifacts::kSvg, analysis.svg);
    log::info("analyze", "statistics written");
  } catch (const std::exception& e) {
    report.failed_stage = current;
    report.exit_code = exit_code_for(current);
    report.error = e.what();
    log::error(to_string(current), e.what());
  }
  try {
    write_text_file(out / artifacts::kReport, report.to_json().dump(2) + "\n");
  } catch (const std::exception& e) {
    log::error("run", std::string("cannot write report: ") + e.what());
  }
  return report;
}

}  // namespace claimlab

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "claimlab/analysis.hpp"
#include "claimlab/crawler.hpp"
#include "claimlab/dataset.hpp"
#include "claimlab/errors.hpp"
#include "claimlab/extract.hpp"
#include "claimlab/ingest.hpp"
#include "claimlab/page_parse.hpp"
#include "claimlab/sentiment.hpp"

namespace claimlab {

struct HostOverride {
  std::string host;
  std::string address;
  int port = 0;
};

// Parses "host=address:port".
HostOverride parse_host_override(std::string_view spec);

struct PipelineConfig {
  std::string pages_glob;
  std::filesystem::path cache_dir;
  bool offline = false;
  std::int64_t rate_ms = 1000;
  int parallel = 4;
  int max_retries = 3;
  std::int64_t retry_backoff_ms = 250;
  int max_hops = kDefaultMaxHops;
  std::string user_agent = CrawlPolicy{}.user_agent;
  std::filesystem::path lexicon_path;
  std::filesystem::path sources_path;
  double lo = -0.6;
  double hi = 0.6;
  int grid = 256;
  std::filesystem::path output_dir = "out";
  std::vector<HostOverride> host_overrides;

  // Throws ConfigError.
  void validate() const;
  CrawlPolicy crawl_policy() const;
};

// Lexicon and source registry shipped with the build.
std::filesystem::path default_lexicon_path();
std::filesystem::path default_sources_path();
PipelineConfig default_config();

// Keys mirror the field names ("pages_glob", "rate_ms", "offline", ...);
// "resolve" may repeat. Throws ConfigError on unknown keys or bad values.
void set_config_value(PipelineConfig& config, std::string_view key, std::string_view value);

// Flat "key = value" lines, '#' comments.
void apply_config_text(PipelineConfig& config, std::string_view text, const std::string& origin);
void apply_config_file(PipelineConfig& config, const std::filesystem::path& path);

inline constexpr std::string_view kEnvPrefix = "CLAIMLAB_";
// CLAIMLAB_<KEY in upper case> for every config key.
void apply_env(PipelineConfig& config,
               const std::function<const char*(const char*)>& lookup = nullptr);

enum class Stage { Ingest = 1, Extract, Crawl, Parse, Score, Assemble, Analyze };

std::string_view to_string(Stage s);
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
constexpr int exit_code_for(Stage s) { return 3 + static_cast<int>(s); }

class StageError : public Error {
 public:
  StageError(Stage stage, const std::string& what) : Error(what), stage_(stage) {}
  Stage stage() const { return stage_; }

 private:
  Stage stage_;
};

// --- stages (each CLI subcommand wraps one) ------------------------------

struct IngestResult {
  std::vector<FeedRecord> records;
  std::size_t pages = 0;
  std::size_t loaded = 0;
  std::size_t duplicates = 0;
};
IngestResult ingest_stage(const std::vector<std::filesystem::path>& pages);

// With a crawler, crawlable URLs are resolved through it; failures leave
// `resolved` empty and are logged.
std::vector<ExtractedUrl> extract_stage(const std::vector<FeedRecord>& records,
                                        Crawler* resolver = nullptr,
                                        int max_hops = kDefaultMaxHops);

// Fetches each crawlable URL (from its resolved form when known), following
// redirects. Index-aligned with the crawlable subset of `urls`.
std::vector<CrawlEntry> crawl_stage(const std::vector<ExtractedUrl>& urls, Crawler& crawler,
                                    int max_hops = kDefaultMaxHops);

std::vector<ParseOutcome> parse_stage(const std::vector<CrawlEntry>& entries);

struct ScoredEntry {
  std::uint64_t record_id = 0;
  std::string url;
  SentimentScore score;
};
std::vector<ScoredEntry> score_stage(const std::vector<ParseOutcome>& parsed,
                                     const Lexicon& lexicon);
void write_scored(const std::vector<ScoredEntry>& scored, const std::filesystem::path& path);
std::vector<ScoredEntry> read_scored(const std::filesystem::path& path);

// Throws AlignmentError when `scored` does not line up with `parsed`.
AssemblyResult assemble_stage(const std::vector<ParseOutcome>& parsed,
                              const std::vector<ScoredEntry>& scored);

struct AnalysisOutputs {
  nlohmann::ordered_json stats;
  nlohmann::ordered_json violin;
  std::string svg;
};
AnalysisOutputs analyze_stage(const std::vector<DatasetRow>& rows, double lo, double hi, int grid);

// --- end to end -----------------------------------------------------------

struct PipelineReport {
  std::size_t pages_loaded = 0;
  std::size_t records_loaded = 0;
  std::size_t duplicate_records = 0;
  std::size_t urls_found = 0;
  std::size_t urls_crawlable = 0;
  std::size_t pages_fetched = 0;  // over the network
  std::size_t pages_cached = 0;
  std::size_t fetch_errors = 0;
  std::size_t pages_parsed = 0;  // rated pages
  std::size_t pages_unrated = 0;
  std::size_t unknown_ratings = 0;
  std::size_t rows_emitted = 0;
  std::size_t rows_dropped = 0;
  nlohmann::ordered_json sources = nlohmann::ordered_json::array();
  int exit_code = kExitOk;
  std::optional<Stage> failed_stage;
  std::string error;

  nlohmann::ordered_json to_json() const;
};

// ingest -> extract -> crawl -> parse -> score -> assemble -> analyze, with
// every intermediate artifact written to config.output_dir. Stage failures
// are reported (exit code 3 + stage), not thrown.
PipelineReport run(const PipelineConfig& config, std::shared_ptr<HttpTransport> transport = nullptr);

// Artifact file names inside output_dir.
namespace artifacts {
inline constexpr const char* kRecords = "records.json";
inline constexpr const char* kUrls = "urls.json";
inline constexpr const char* kCrawl = "crawl.json";
inline constexpr const char* kParsed = "parsed.json";
inline constexpr const char* kScored = "scored.json";
inline constexpr const char* kDatasetCsv = "dataset.csv";
inline constexpr const char* kDatasetJson = "dataset.json";
inline constexpr const char* kStats = "stats.json";
inline constexpr const char* kViolin = "violin.json";
inline constexpr const char* kSvg = "violin.svg";
inline constexpr const char* kReport = "report.json";
}  // namespace artifacts

void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace claimlab

#include "claimlab/dataset.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "claimlab/errors.hpp"

namespace claimlab {
namespace {

constexpr std::string_view kHeader = "claim,rating,sentiment,origin,source_url,record_id";
constexpr std::size_t kColumns = 6;

void append_quoted(std::string& out, std::string_view field) {
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

}  // namespace

std::vector<std::optional<Rating>> ratings_for(std::span<const ParseOutcome> parsed) {
  std::vector<std::optional<Rating>> out;
  out.reserve(parsed.size());
  for (const auto& p : parsed) {
    if (p.status == ParseOutcome::Status::Rated || p.status == ParseOutcome::Status::UnknownRating) {
      out.push_back(try_parse_rating(p.page.rating_label));
    } else {
      out.push_back(std::nullopt);
    }
  }
  return out;
}

AssemblyResult assemble(std::span<const ParseOutcome> parsed,
                        std::span<const SentimentScore> scores,
                        std::span<const std::optional<Rating>> ratings) {
  if (parsed.size() != scores.size() || parsed.size() != ratings.size()) {
    const std::size_t bad = std::min({parsed.size(), scores.size(), ratings.size()});
    throw AlignmentError("misaligned assembly inputs at index " + std::to_string(bad) + " (" +
                             std::to_string(parsed.size()) + " parsed, " +
                             std::to_string(scores.size()) + " scores, " +
                             std::to_string(ratings.size()) + " ratings)",
                         bad);
  }
  AssemblyResult result;
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    const ParseOutcome& p = parsed[i];
    const bool has_page = p.status == ParseOutcome::Status::Rated ||
                          p.status == ParseOutcome::Status::UnknownRating;
    if (!has_page || p.page.claim_text.empty()) {
      ++result.dropped_unrated;
      continue;
    }
    if (!ratings[i]) {
      ++result.dropped_unknown_rating;
      continue;
    }
    if (!seen.emplace(p.page.claim_text, p.page.source_url).second) {
      ++result.collapsed_duplicates;
      continue;
    }
    result.rows.push_back(DatasetRow{p.page.claim_text, *ratings[i], scores[i].value,
                                     p.page.origin_text, p.page.source_url, p.record_id});
  }
  return result;
}

std::string format_sentiment(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed,
                                 kSentimentDecimals);
  std::string s(buf, end);
  if (s.find('.') != std::string::npos) {
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  if (s == "-0") s = "0";
  return s;
}

double quantize_sentiment(double value) {
  const std::string s = format_sentiment(value);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

std::string to_csv(const std::vector<DatasetRow>& rows) {
  std::string out(kHeader);
  out.push_back('\n');
  for (const auto& r : rows) {
    append_quoted(out, r.claim);
    out.push_back(',');
    out += display_label(r.rating);
    out.push_back(',');
    out += format_sentiment(r.sentiment);
    out.push_back(',');
    append_quoted(out, r.origin);
    out.push_back(',');
    append_quoted(out, r.source_url);
    out.push_back(',');
    out += std::to_string(r.record_id);
    out.push_back('\n');
  }
  return out;
}

void write_csv(const std::vector<DatasetRow>& rows, const std::filesystem::path& path) {
  const std::string doc = to_csv(rows);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileError("cannot write " + path.string());
  out.write(doc.data(), static_cast<std::streamsize>(doc.size()));
  if (!out) throw FileError("write failed: " + path.string());
}

std::vector<DatasetRow> parse_csv(std::string_view doc, const std::string& name) {
  // Split into records of raw fields first.
  std::vector<std::pair<std::size_t, std::vector<std::string>>> records;
  std::vector<std::string> fields;
  std::string field;
  std::size_t line = 1;
  std::size_t record_line = 1;
  bool in_quotes = false;
  bool was_quoted = false;
  bool record_open = false;
  auto end_field = [&] {
    fields.push_back(std::move(field));
    field.clear();
    was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    records.emplace_back(record_line, std::move(fields));
    fields.clear();
    record_open = false;
  };
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const char c = doc[i];
    if (!record_open) {
      record_open = true;
      record_line = line;
    }
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < doc.size() && doc[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      if (!field.empty() || was_quoted) {
        throw ParseError(name + ": line " + std::to_string(line) + ": stray quote", name, line);
      }
      in_quotes = true;
      was_quoted = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r' && i + 1 < doc.size() && doc[i + 1] == '\n') {
      // CRLF: handled by the '\n'.
    } else if (c == '\n') {
      end_record();
      ++line;
    } else {
      if (was_quoted) {
        throw ParseError(name + ": line " + std::to_string(line) +
                             ": text after closing quote",
                         name, line);
      }
      field.push_back(c);
    }
  }
  if (in_quotes) {
    throw ParseError(name + ": line " + std::to_string(record_line) + ": unterminated quote", name,
                     record_line);
  }
  if (record_open) end_record();

  if (records.empty() || records.front().second.size() != kColumns) {
    throw ParseError(name + ": line 1: missing header", name, 1);
  }
  {
    std::string header;
    for (std::size_t i = 0; i < records.front().second.size(); ++i) {
      if (i) header.push_back(',');
      header += records.front().second[i];
    }
    if (header != kHeader) throw ParseError(name + ": line 1: unexpected header", name, 1);
  }

  std::vector<DatasetRow> rows;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& [at, f] = records[r];
    auto fail = [&, at = at](const std::string& what) {
      return ParseError(name + ": line " + std::to_string(at) + ": " + what, name, at);
    };
    if (f.size() != kColumns) {
      throw fail("expected " + std::to_string(kColumns) + " fields, got " +
                 std::to_string(f.size()));
    }
    DatasetRow row;
    row.claim = f[0];
    try {
      row.rating = rating_from_label(f[1]);
    } catch (const UnknownRatingError&) {
      throw fail("unknown rating \"" + f[1] + "\"");
    }
    {
      const std::string& s = f[2];
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), row.sentiment);
      if (s.empty() || ec != std::errc() || p != s.data() + s.size()) {
        throw fail("bad sentiment \"" + s + "\"");
      }
      if (!(row.sentiment >= -1.0 && row.sentiment <= 1.0)) throw fail("sentiment outside [-1, 1]");
    }
    row.origin = f[3];
    row.source_url = f[4];
    {
      const std::string& s = f[5];
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), row.record_id);
      if (s.empty() || ec != std::errc() || p != s.data() + s.size()) {
        throw fail("bad record_id \"" + s + "\"");
      }
    }
    if (row.claim.empty()) throw fail("empty claim");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<DatasetRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str(), path.string());
}

void write_dataset_json(const std::vector<DatasetRow>& rows, const std::filesystem::path& path) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"claim", r.claim},
                   {"rating", display_label(r.rating)},
                   {"sentiment", r.sentiment},
                   {"origin", r.origin},
                   {"source_url", r.source_url},
                   {"record_id", r.record_id}});
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write " + path.string());
  out << arr.dump(2) << '\n';
}

}  // namespace claimlab

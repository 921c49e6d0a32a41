#pragma once

#include <string_view>

namespace claimlab::log {

// Single-line structured events on standard error:
//   2026-10-18T12:00:00.123 level=info stage=crawl msg="fetched 12 pages"
void set_verbose(bool verbose);
// Drops every event.
void set_quiet();
void info(std::string_view stage, std::string_view message);
void warn(std::string_view stage, std::string_view message);
void error(std::string_view stage, std::string_view message);
void debug(std::string_view stage, std::string_view message);

}  // namespace claimlab::log

#include "claimlab/log.hpp"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <string>

namespace claimlab::log {
namespace {

std::shared_ptr<spdlog::logger> logger() {
  static std::shared_ptr<spdlog::logger> instance = [] {
    auto l = spdlog::stderr_logger_mt("claimlab");
    l->set_pattern("%Y-%m-%dT%H:%M:%S.%e level=%l %v");
    l->set_level(spdlog::level::info);
    return l;
  }();
  return instance;
}

std::string quoted(std::string_view message) {
  std::string out = "\"";
  for (char c : message) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void emit(spdlog::level::level_enum level, std::string_view stage, std::string_view message) {
  logger()->log(level, "stage={} msg={}", stage, quoted(message));
}

}  // namespace

void set_verbose(bool verbose) {
  logger()->set_level(verbose ? spdlog::level::debug : spdlog::level::info);
}

void set_quiet() { logger()->set_level(spdlog::level::off); }

void info(std::string_view stage, std::string_view message) { emit(spdlog::level::info, stage, message); }
void warn(std::string_view stage, std::string_view message) { emit(spdlog::level::warn, stage, message); }
void error(std::string_view stage, std::string_view message) { emit(spdlog::level::err, stage, message); }
void debug(std::string_view stage, std::string_view message) { emit(spdlog::level::debug, stage, message); }

}  // namespace claimlab::log

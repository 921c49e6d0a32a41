#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

namespace testutil {

inline std::filesystem::path source_dir() { return CLAIMLAB_SOURCE_DIR; }
inline std::filesystem::path corpus_dir() { return source_dir() / "fixtures" / "corpus"; }
inline std::filesystem::path data_dir() { return source_dir() / "tests" / "data"; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline nlohmann::json load_json(const std::filesystem::path& p) {
  return nlohmann::json::parse(slurp(p));
}

class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng{std::random_device{}()};
    path_ = std::filesystem::temp_directory_path() /
            ("claimlab-test-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline const std::string kSampleTweet =
    "Was Bill O'Reilly found dead at his Long Island home? https://t.co/SGwagACMbW "
    "https://t.co/Ppx1FhJeMm";

}  // namespace testutil

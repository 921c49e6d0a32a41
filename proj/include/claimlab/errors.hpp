#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace claimlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document (JSON, CSV, config). `offset` is a byte offset or
// a 1-based line number depending on the format; see what().
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::string file, std::size_t offset)
      : Error(what), file_(std::move(file)), offset_(offset) {}
  const std::string& file() const { return file_; }
  std::size_t offset() const { return offset_; }

 private:
  std::string file_;
  std::size_t offset_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

class FileError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  TransportError(const std::string& what, bool retryable)
      : Error(what), retryable_(retryable) {}
  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

class UpstreamError : public Error {
 public:
  UpstreamError(const std::string& what, int status) : Error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

class CacheMissError : public Error {
 public:
  explicit CacheMissError(const std::string& url)
      : Error("cache miss in offline mode: " + url), url_(url) {}
  const std::string& url() const { return url_; }

 private:
  std::string url_;
};

// Redirect loop or exhausted hop budget.
class ResolutionError : public Error {
 public:
  ResolutionError(const std::string& what, std::vector<std::string> chain)
      : Error(what), chain_(std::move(chain)) {}
  const std::vector<std::string>& chain() const { return chain_; }

 private:
  std::vector<std::string> chain_;
};

class UnratedPageError : public Error {
 public:
  using Error::Error;
};

class UnknownRatingError : public Error {
 public:
  explicit UnknownRatingError(const std::string& slug)
      : Error("unknown rating: '" + slug + "'"), slug_(slug) {}
  const std::string& slug() const { return slug_; }

 private:
  std::string slug_;
};

class RegistryError : public Error {
 public:
  using Error::Error;
};

class AlignmentError : public Error {
 public:
  AlignmentError(const std::string& what, std::size_t index) : Error(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace claimlab

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cfgrank {

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(std::string path, int line, const std::string& message)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + message),
        path_(std::move(path)),
        line_(line) {}

  const std::string& path() const { return path_; }
  int line() const { return line_; }

 private:
  std::string path_;
  int line_;
};

class ManifestError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised by the JSON tree reader; `pointer()` is the RFC 6901 path of the
/// offending value.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string pointer, const std::string& message)
      : std::runtime_error(pointer + ": " + message), pointer_(std::move(pointer)) {}

  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

class BlowupLimit : public std::runtime_error {
 public:
  explicit BlowupLimit(std::size_t limit)
      : std::runtime_error("CNF conversion exceeds clause limit " + std::to_string(limit)),
        limit_(limit) {}
  std::size_t limit() const { return limit_; }

 private:
  std::size_t limit_;
};

class BetaTooLarge : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class UnknownFeature : public std::runtime_error {
 public:
  explicit UnknownFeature(const std::string& name)
      : std::runtime_error("feature '" + name + "' is not in the centrality vector"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class FatalConfig : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class TimeoutError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cfgrank

#pragma once

#include <stdexcept>
#include <string>

namespace genbound {

// Exact enumeration refused or an index space overflows its representation.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Relative entropy requested between measures that are not absolutely
// continuous (q(w) = 0 while p(w) > 0).
class SupportError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Experiment configuration failed to parse or validate. `path` is the
// JSON field path of the offending value, e.g. "problem.mu[2]".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path.empty() ? what : path + ": " + what),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace genbound

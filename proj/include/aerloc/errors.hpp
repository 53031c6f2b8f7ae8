#ifndef AERLOC_ERRORS_HPP_
#define AERLOC_ERRORS_HPP_

#include <stdexcept>

namespace aerloc {

/// Unreadable or malformed input file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent run configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aerloc

#endif  // AERLOC_ERRORS_HPP_

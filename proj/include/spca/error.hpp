#pragma once

#include <stdexcept>
#include <string>

namespace spca {

enum class ErrorKind {
  invalid_argument,
  dimension_mismatch,
  rank_deficient,
  whitening_failed,
  combinatorial_guard,
  invalid_config,
  io,
};

// Single exception type for the library; callers that need to branch
// (the CLI exit codes, the grid runner's status column) switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace spca

#pragma once

#include <stdexcept>
#include <string>

namespace civd {

enum class Errc {
  invalid_argument,
  dimension_mismatch,
  duplicate_points,
  singular_query,
  too_large,
  no_solution,
  missing_observer,
  unsupported_dimension,
  empty_input,
  io_error,
  bad_artifact,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace civd

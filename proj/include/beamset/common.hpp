#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace beamset {

// Thrown when a computation fails a numeric validity check (loss of
// positive definiteness, non-convergent series, unmet precondition on data).
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a request would exceed a hard resource cap (grid size, matrix
// dimension) rather than produce a wrong answer slowly.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown for invalid experiment configurations (bad flag combinations,
// out-of-range parameters supplied by the user).
class usage_error : public std::runtime_error {
 public:
  explicit usage_error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// Shortest round-trip decimal form of a double.
inline std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

}  // namespace beamset

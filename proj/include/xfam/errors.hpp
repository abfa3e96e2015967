#pragma once

#include <stdexcept>
#include <string>

namespace xfam {

// Theorem/operation hypothesis not satisfied; message names the failed inequality.
struct hypothesis_error : std::runtime_error {
  explicit hypothesis_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Exhaustive-search resource guard tripped.
struct guard_error : std::runtime_error {
  explicit guard_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A runtime postcondition of a reduction step failed.  Carries the diagnostic;
// never repaired silently.
struct reduction_error : std::runtime_error {
  explicit reduction_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace xfam

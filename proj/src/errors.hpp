#pragma once

#include <stdexcept>
#include <string>

namespace coflow {

// Invalid domain data: broken invariants, bad configuration values.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input files (trace text, JSON payloads).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// An internal iteration cap was exceeded; carries diagnostics.
struct LimitError : std::runtime_error {
  explicit LimitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace coflow

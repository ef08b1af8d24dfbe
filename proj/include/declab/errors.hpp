#pragma once

#include <stdexcept>
#include <string>

namespace declab {

enum class Err {
  NON_PRIME,
  CHAR_TWO_POLY,
  PRECISION_OVERFLOW,
  RING_MISMATCH,
  INDEX_RANGE,
  LEVEL_RANGE,
  BETA_NOT_REPRESENTABLE,
  RADIUS_NOT_IN_RANGE,
  SPECTRUM_LEAK,
  ALPHA_NONPOSITIVE,
  N_TOO_SMALL,
  NOT_NORMALIZED,
  ZERO_FUNCTION,
  EMPTY_SET,
  UNKNOWN_CHECK,
  PARAM_MISSING,
  BUDGET_ZERO,
  MODEL_TOO_LARGE,
};

inline const char* err_name(Err e) {
  switch (e) {
    case Err::NON_PRIME: return "NON_PRIME";
    case Err::CHAR_TWO_POLY: return "CHAR_TWO_POLY";
    case Err::PRECISION_OVERFLOW: return "PRECISION_OVERFLOW";
    case Err::RING_MISMATCH: return "RING_MISMATCH";
    case Err::INDEX_RANGE: return "INDEX_RANGE";
    case Err::LEVEL_RANGE: return "LEVEL_RANGE";
    case Err::BETA_NOT_REPRESENTABLE: return "BETA_NOT_REPRESENTABLE";
    case Err::RADIUS_NOT_IN_RANGE: return "RADIUS_NOT_IN_RANGE";
    case Err::SPECTRUM_LEAK: return "SPECTRUM_LEAK";
    case Err::ALPHA_NONPOSITIVE: return "ALPHA_NONPOSITIVE";
    case Err::N_TOO_SMALL: return "N_TOO_SMALL";
    case Err::NOT_NORMALIZED: return "NOT_NORMALIZED";
    case Err::ZERO_FUNCTION: return "ZERO_FUNCTION";
    case Err::EMPTY_SET: return "EMPTY_SET";
    case Err::UNKNOWN_CHECK: return "UNKNOWN_CHECK";
    case Err::PARAM_MISSING: return "PARAM_MISSING";
    case Err::BUDGET_ZERO: return "BUDGET_ZERO";
    case Err::MODEL_TOO_LARGE: return "MODEL_TOO_LARGE";
  }
  return "UNKNOWN";
}

class LabError : public std::runtime_error {
 public:
  LabError(Err code, const std::string& detail)
      : std::runtime_error(std::string(err_name(code)) + ": " + detail), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& detail) {
  throw LabError(code, detail);
}

inline void require(bool cond, Err code, const std::string& detail) {
  if (!cond) fail(code, detail);
}

}  // namespace declab

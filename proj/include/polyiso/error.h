#ifndef POLYISO_ERROR_H
#define POLYISO_ERROR_H

#include <stdexcept>
#include <string>
#include <string_view>

namespace polyiso {

enum class ErrorCode {
  kDegenerateInput,
  kTopologyError,
  kInvalidSphericalTriangle,
  kNoSymmetry,
  kConvexityRequired,
  kParseError,
  kRadiusTooSmall,
  kCannotSatisfyVoronoiCondition,
  kCannotRaiseApex,
  kInvalidSpec,
  kConstructionInvalid,
  kHexagonNotFound,
  kNotIsosceles,
  kWrongVertexType,
  kDominationFailed,
  kPreconditionFailed,
  kSamplerExhausted,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (and the CLI exit-code mapping) can dispatch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the OFF reader; line is 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string &message, int line)
      : Error(ErrorCode::kParseError,
              message + " (line " + std::to_string(line) + ")"),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace polyiso

#endif  // POLYISO_ERROR_H

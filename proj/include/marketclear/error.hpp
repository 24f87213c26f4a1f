#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace marketclear {

enum class ErrorCode {
  kStructure,         // malformed nest partition, dimension mismatch
  kDomain,            // argument outside the operation's domain
  kMalformedDocument, // unreadable / unparsable market spec or trace
  kNestsNotDisjoint,
  kNestsNotCovering,
  kMuOutOfRange,
  kNonPositiveGamma,
  kBoundsInverted,
  kNotProductive,
  kDiverged,
  kStepTooLarge,
  kInsufficientData,
  kIo,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace marketclear

#pragma once

#include <stdexcept>
#include <string>

namespace makerbid {

enum class ErrorCode {
  InvalidArgument,
  Parse,
  DataIntegrity,
  MissingData,
  UndefinedStatistic,
  SingularFit,
  IllPosed,
  RejectedBid,
  AuctionClosed,
  NotSettleable,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

// Single exception type for the library; the code drives CLI exit codes and
// the C API status values.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace makerbid

#include "makerbid/error.hpp"

namespace makerbid {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Parse: return "parse_error";
    case ErrorCode::DataIntegrity: return "data_integrity";
    case ErrorCode::MissingData: return "missing_data";
    case ErrorCode::UndefinedStatistic: return "undefined_statistic";
    case ErrorCode::SingularFit: return "singular_fit";
    case ErrorCode::IllPosed: return "ill_posed";
    case ErrorCode::RejectedBid: return "rejected_bid";
    case ErrorCode::AuctionClosed: return "auction_closed";
    case ErrorCode::NotSettleable: return "not_settleable";
    case ErrorCode::Io: return "io_error";
  }
  return "unknown";
}

}  // namespace makerbid

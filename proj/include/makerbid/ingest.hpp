#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace makerbid {

enum class EventKind { Kick, Tend, Dent, Deal };
enum class PoolVersion { V1, V2 };
enum class FileFormat { Csv, Ndjson };

const char* to_string(EventKind kind) noexcept;
const char* to_string(PoolVersion version) noexcept;

struct AuctionEvent {
  std::uint64_t auction_id = 0;
  EventKind kind = EventKind::Kick;
  double bid_dai = 0.0;
  double lot_weth = 0.0;
  std::int64_t timestamp = 0;  // UTC seconds
  double gas_price_gwei = 0.0;
  std::int64_t gas_used = 0;
  std::string bidder_address;

  bool is_bid() const noexcept { return kind == EventKind::Tend || kind == EventKind::Dent; }
};

struct ReserveSnapshot {
  std::int64_t timestamp = 0;
  PoolVersion version = PoolVersion::V2;
  double dai_reserve = 0.0;
  double weth_reserve = 0.0;
};

struct GasSample {
  std::int64_t token_count = 0;
  std::int64_t gas_used = 0;
};

/// Half-open interval [start, end) of UTC seconds.
struct TimeWindow {
  std::int64_t start = 0;
  std::int64_t end = 0;

  bool contains(std::int64_t t) const noexcept { return t >= start && t < end; }
  double days() const noexcept { return static_cast<double>(end - start) / 86400.0; }
};

/// "2020-03-23,2020-07-28" covers both dates in full (128 days);
/// "1584921600,1595980800" is taken as [start, end) in seconds.
TimeWindow parse_window(std::string_view text);

// Parsers accept CSV with the header row or NDJSON with the same field
// names; the format is detected from the first non-blank character. Errors
// are Error(Parse) and name the offending line.

/// Events sorted by (auction_id, timestamp), file order kept for ties.
/// Error(DataIntegrity) if an auction has two deals or two kicks, or its
/// deal is not the last event.
std::vector<AuctionEvent> parse_events(std::string_view text);
std::vector<ReserveSnapshot> parse_reserves(std::string_view text);
std::vector<GasSample> parse_gas_samples(std::string_view text);

std::string serialize_events(std::span<const AuctionEvent> events, FileFormat format = FileFormat::Csv);
std::string serialize_reserves(std::span<const ReserveSnapshot> snapshots,
                               FileFormat format = FileFormat::Csv);

struct WinningBid {
  std::uint64_t auction_id = 0;
  double bid_dai = 0.0;
  double lot_weth = 0.0;
  std::int64_t timestamp = 0;  // of the final bid
  double gas_price_gwei = 0.0;
  std::int64_t deal_timestamp = 0;

  /// DAI paid per WETH received.
  double price() const noexcept { return bid_dai / lot_weth; }
};

/// Final tend/dent bid of every auction whose deal falls in `window`.
/// Expects events as returned by parse_events. Error(DataIntegrity) for a
/// deal without a preceding bid.
std::vector<WinningBid> winning_bids(std::span<const AuctionEvent> events, const TimeWindow& window);

/// All events belonging to auctions dealt inside `window`, including bids
/// placed before the window opened.
std::vector<AuctionEvent> events_in_window(std::span<const AuctionEvent> events,
                                           const TimeWindow& window);

/// Deals divided by tend+dent bids. Error(UndefinedStatistic) with no bids.
double win_probability(std::span<const AuctionEvent> events);

/// Latest snapshot at or before `at` for each version, keeping the version
/// with the larger DAI reserve (V2 on ties). Error(MissingData) if none.
ReserveSnapshot select_reserves(std::span<const ReserveSnapshot> snapshots, std::int64_t at);

struct GasRegression {
  double slope = 0.0;
  double intercept = 0.0;

  double predict(double token_count) const noexcept { return slope * token_count + intercept; }
};

/// Ordinary least squares of gas_used on token_count. Error(SingularFit)
/// unless at least two distinct token counts are present.
GasRegression fit_gas_regression(std::span<const GasSample> samples);

/// Most frequent value, ties broken toward the larger value.
/// Error(UndefinedStatistic) when empty.
std::int64_t gas_mode(std::span<const std::int64_t> gas_used);

/// Auctions per day rounded to a whole number, times 365. Zero means the
/// dataset cannot support a per-bid capital allocation.
std::int64_t bids_per_year(double window_days, std::size_t auction_count);

/// Drop winning bids priced above `max_multiple` times the AMM spot price of
/// the reserves selected at the bid time. Bids without reserve data are kept.
std::vector<WinningBid> filter_price_outliers(std::span<const WinningBid> bids,
                                              std::span<const ReserveSnapshot> snapshots,
                                              double max_multiple);

}  // namespace makerbid

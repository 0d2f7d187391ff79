#pragma once

#include <optional>
#include <string>
#include <vector>

namespace makerbid {

enum class Phase { Kicked, Tend, Dent, Done };

const char* to_string(Phase phase) noexcept;

struct AuctionConfig {
  /// Minimum relative raise of the effective collateral price per bid.
  double increment = 0.03;
  /// Seconds from kick until the auction ends regardless of bidding.
  double duration = 6.0 * 3600.0;
  /// Seconds a standing bid must survive unchallenged before it can be dealt.
  double bid_ttl = 6.0 * 3600.0;

  void validate() const;
};

/// Collateral auction state. Tend bids raise the DAI payment toward `tab`;
/// once the payment reaches `tab`, dent bids lower the WETH lot accepted.
struct AuctionState {
  std::string auction_id;
  Phase phase = Phase::Kicked;
  double tab = 0.0;          // DAI target proceeds
  double lot = 0.0;          // WETH offered
  double current_bid = 0.0;  // DAI payment standing
  double current_lot = 0.0;  // WETH the standing bidder would receive
  std::optional<std::string> highest_bidder;
  double kicked_at = 0.0;
  double end = 0.0;          // kicked_at + duration
  double bid_expiry = 0.0;   // last bid time + bid_ttl; meaningless without a bid
  double market_price = 0.0; // DAI per WETH
  AuctionConfig config;

  bool has_bid() const noexcept { return highest_bidder.has_value(); }
  /// Earliest time the auction may be dealt.
  double settle_time() const noexcept;
  /// DAI paid per WETH received by the standing bid; nullopt without a bid.
  std::optional<double> effective_price() const noexcept;
  /// Effective price relative to market, minus one.
  std::optional<double> discount() const noexcept;
};

AuctionState kick(std::string auction_id, double lot, double tab, double market_price,
                  const AuctionConfig& config, double now = 0.0);

/// Apply one bid. In Kicked/Tend `amount` is the DAI payment, in Dent it is
/// the WETH lot the bidder will accept. Jump bids are allowed.
///
/// Errors: Error(RejectedBid) for bids that move the price the wrong way or
/// by less than the increment; Error(AuctionClosed) once the auction has
/// expired or been dealt.
AuctionState submit_bid(const AuctionState& state, const std::string& bidder, double amount,
                        double now);

struct AuctionOutcome {
  std::optional<std::string> winner;
  double payment_dai = 0.0;
  double lot_awarded = 0.0;
  /// Collateral handed back to the liquidated vault owner.
  double excess_returned = 0.0;
  std::optional<double> effective_price;
  std::optional<double> final_discount;
  double settled_at = 0.0;
  AuctionState final_state;
};

/// Deal the auction. Error(NotSettleable) before settle_time(),
/// Error(AuctionClosed) if already dealt.
AuctionOutcome settle(const AuctionState& state, double now);

struct BidderProfile {
  std::string id;
  double cost_fraction = 0.0;  // participation cost as a share of collateral value
  double alt_value = 0.0;      // alternative-usage value in excess of market

  void validate() const;
  /// Highest price worth paying; never above market.
  double reservation_price(double market_price) const;
};

struct ThresholdScenario {
  std::vector<BidderProfile> bidders;
  double market_price = 0.0;
  double lot = 10.0;
  /// Tab as a share of the lot's market value.
  double tab_fraction = 0.9;
  /// First admissible price relative to market (negative = discount).
  double opening_discount = -0.25;
  double bid_interval = 60.0;
  AuctionConfig config;

  void validate() const;
};

struct BidRecord {
  double time = 0.0;
  std::string bidder;
  Phase phase = Phase::Kicked;
  double amount = 0.0;
  double effective_price = 0.0;
  /// The bidder could not have raised again after a minimum counter-bid.
  bool last_stand = false;
};

struct SimulationResult {
  AuctionOutcome outcome;
  std::vector<BidRecord> trace;
};

/// Ascending auction among threshold bidders, taking turns round-robin.
///
/// A bidder who is not winning raises by the minimum increment while its
/// reservation price allows. On its last possible bid it raises by up to two
/// increments (capped at the reservation), and a bidder facing such a last
/// stand answers with the minimum raise. The winning price then lies within
/// one increment of the runner-up's reservation.
SimulationResult simulate_threshold_auction(const ThresholdScenario& scenario);

}  // namespace makerbid

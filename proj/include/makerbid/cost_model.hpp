#pragma once

#include <cstdint>

#include "makerbid/amm.hpp"

namespace makerbid {

/// Gwei to ether.
inline constexpr double kGweiToEth = 1e-9;

/// Gas units per transaction type. Defaults are the most frequent single-event
/// usages observed on mainnet in June 2020.
struct GasSchedule {
  std::int64_t dent = 116'914;
  std::int64_t deal = 44'154;
  std::int64_t exit = 80'145;
  std::int64_t trade = 125'700;
  std::int64_t join = 80'380;

  std::int64_t per_rebalance() const noexcept { return exit + trade + join; }
  void validate() const;
};

/// Everything about one auction that the bidder does not control.
struct AuctionContext {
  double bid_value = 0.0;       // DAI
  double gas_price_gwei = 0.0;  // gwei per gas
  AmmPool pool;
  double win_prob = 0.15;
  double bids_per_year = 365.0;
  double capital_rate = 0.40;  // annual

  void validate() const;
};

/// Bidding capital plan: DAI held in the Vat and the depletion allowed before
/// won collateral is converted back.
struct Portfolio {
  double v_max = 0.0;
  double rebalance_margin = 0.0;

  double v_min() const noexcept { return v_max - rebalance_margin; }
  void validate() const;
  /// Whether the Vat floor still covers a bid of `bid_value`.
  bool covers(double bid_value) const noexcept;
};

/// Share of one rebalance attributed to a bid (`y`) and the trade size used
/// for slippage (`z`, DAI).
struct RebalanceAllocation {
  double y = 1.0;
  double z = 0.0;
};

struct CostBreakdown {
  double bid_fee_eth = 0.0;
  double rebalance_fee_eth = 0.0;
  double gas_fee_dai = 0.0;
  double slippage_cost_dai = 0.0;
  double capital_cost_annual_dai = 0.0;
  double capital_cost_bid_dai = 0.0;
  double total_dai = 0.0;

  /// Same breakdown with both capital items zeroed and dropped from the total.
  CostBreakdown without_capital() const noexcept;
};

struct CapitalCost {
  double annual = 0.0;
  double per_bid = 0.0;
};

double bid_fee(const AuctionContext& ctx, const GasSchedule& gas);

RebalanceAllocation rebalance_allocation(double bid_value, double rebalance_margin);

double rebalance_fee(const AuctionContext& ctx, const GasSchedule& gas,
                     const RebalanceAllocation& alloc);

/// Bid plus rebalance fees converted to DAI at the pool's exchange rate.
double total_gas_fee(const AuctionContext& ctx, const GasSchedule& gas,
                     const RebalanceAllocation& alloc);

double slippage_cost(const AuctionContext& ctx, const Portfolio& portfolio);

CapitalCost capital_cost(const AuctionContext& ctx, const Portfolio& portfolio);

/// Itemised participation cost of one bid. Does not enforce Portfolio::covers;
/// callers evaluating feasibility check that separately.
CostBreakdown total_cost(const AuctionContext& ctx, const Portfolio& portfolio,
                         const GasSchedule& gas);

/// Signed discount to market that exactly recovers `cost`; negative below
/// market.
double min_discount(const CostBreakdown& cost, double bid_value);

}  // namespace makerbid

#include "makerbid/cost_model.hpp"

#include <cmath>

#include "makerbid/error.hpp"

namespace makerbid {

namespace {

bool finite_non_negative(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

void GasSchedule::validate() const {
  if (dent <= 0 || deal <= 0 || exit <= 0 || trade <= 0 || join <= 0) {
    fail(ErrorCode::InvalidArgument, "gas amounts must be positive");
  }
}

void AuctionContext::validate() const {
  if (!std::isfinite(bid_value) || bid_value <= 0.0) {
    fail(ErrorCode::InvalidArgument, "bid value must be positive");
  }
  if (!finite_non_negative(gas_price_gwei)) {
    fail(ErrorCode::InvalidArgument, "gas price must be non-negative");
  }
  if (!std::isfinite(win_prob) || win_prob < 0.0 || win_prob > 1.0) {
    fail(ErrorCode::InvalidArgument, "win probability must lie in [0, 1]");
  }
  if (!std::isfinite(bids_per_year) || bids_per_year < 1.0) {
    fail(ErrorCode::InvalidArgument, "bids per year must be at least 1");
  }
  if (!finite_non_negative(capital_rate)) {
    fail(ErrorCode::InvalidArgument, "capital rate must be non-negative");
  }
}

void Portfolio::validate() const {
  if (!std::isfinite(v_max) || v_max <= 0.0) {
    fail(ErrorCode::InvalidArgument, "V_max must be positive");
  }
  if (!finite_non_negative(rebalance_margin)) {
    fail(ErrorCode::InvalidArgument, "rebalance margin must be non-negative");
  }
  if (v_min() < 0.0) {
    fail(ErrorCode::InvalidArgument, "rebalance margin exceeds V_max");
  }
}

bool Portfolio::covers(double bid_value) const noexcept { return v_min() >= bid_value; }

CostBreakdown CostBreakdown::without_capital() const noexcept {
  CostBreakdown out = *this;
  out.capital_cost_annual_dai = 0.0;
  out.capital_cost_bid_dai = 0.0;
  out.total_dai = gas_fee_dai + slippage_cost_dai;
  return out;
}

double bid_fee(const AuctionContext& ctx, const GasSchedule& gas) {
  const double gas_units = static_cast<double>(gas.dent) + static_cast<double>(gas.deal) * ctx.win_prob;
  return gas_units * ctx.gas_price_gwei * kGweiToEth;
}

RebalanceAllocation rebalance_allocation(double bid_value, double rebalance_margin) {
  if (!std::isfinite(bid_value) || bid_value <= 0.0) {
    fail(ErrorCode::InvalidArgument, "bid value must be positive");
  }
  if (!finite_non_negative(rebalance_margin)) {
    fail(ErrorCode::InvalidArgument, "rebalance margin must be non-negative");
  }
  // R == 0 falls into the first branch: rebalance after every win.
  if (bid_value >= rebalance_margin) {
    return {1.0, bid_value};
  }
  return {bid_value / rebalance_margin, rebalance_margin};
}

double rebalance_fee(const AuctionContext& ctx, const GasSchedule& gas,
                     const RebalanceAllocation& alloc) {
  return static_cast<double>(gas.per_rebalance()) * ctx.gas_price_gwei * kGweiToEth *
         ctx.win_prob * alloc.y;
}

double total_gas_fee(const AuctionContext& ctx, const GasSchedule& gas,
                     const RebalanceAllocation& alloc) {
  return (bid_fee(ctx, gas) + rebalance_fee(ctx, gas, alloc)) * exchange_rate(ctx.pool);
}

double slippage_cost(const AuctionContext& ctx, const Portfolio& portfolio) {
  const auto alloc = rebalance_allocation(ctx.bid_value, portfolio.rebalance_margin);
  return slippage_fraction(ctx.pool, alloc.z) * ctx.win_prob * alloc.y * ctx.bid_value;
}

CapitalCost capital_cost(const AuctionContext& ctx, const Portfolio& portfolio) {
  const double annual = ctx.capital_rate * portfolio.v_max;
  return {annual, annual / ctx.bids_per_year};
}

CostBreakdown total_cost(const AuctionContext& ctx, const Portfolio& portfolio,
                         const GasSchedule& gas) {
  const auto alloc = rebalance_allocation(ctx.bid_value, portfolio.rebalance_margin);
  const auto capital = capital_cost(ctx, portfolio);

  CostBreakdown out;
  out.bid_fee_eth = bid_fee(ctx, gas);
  out.rebalance_fee_eth = rebalance_fee(ctx, gas, alloc);
  out.gas_fee_dai = (out.bid_fee_eth + out.rebalance_fee_eth) * exchange_rate(ctx.pool);
  out.slippage_cost_dai = slippage_fraction(ctx.pool, alloc.z) * ctx.win_prob * alloc.y * ctx.bid_value;
  out.capital_cost_annual_dai = capital.annual;
  out.capital_cost_bid_dai = capital.per_bid;
  out.total_dai = out.gas_fee_dai + out.slippage_cost_dai + out.capital_cost_bid_dai;
  return out;
}

double min_discount(const CostBreakdown& cost, double bid_value) {
  if (!std::isfinite(bid_value) || bid_value <= 0.0) {
    fail(ErrorCode::InvalidArgument, "bid value must be positive");
  }
  return -(cost.total_dai / bid_value);
}

}  // namespace makerbid

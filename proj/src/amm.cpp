#include "makerbid/amm.hpp"

#include <cmath>
#include <string>

#include "makerbid/error.hpp"

namespace makerbid {

namespace {

void require_trade_input(double input) {
  if (!std::isfinite(input) || input < 0.0) {
    fail(ErrorCode::InvalidArgument,
         "trade input must be finite and non-negative, got " + std::to_string(input));
  }
}

}  // namespace

AmmPool::AmmPool(double dai_reserve, double weth_reserve, double fee)
    : dai_reserve_(dai_reserve), weth_reserve_(weth_reserve), fee_(fee) {
  if (!std::isfinite(dai_reserve) || dai_reserve <= 0.0 || !std::isfinite(weth_reserve) ||
      weth_reserve <= 0.0) {
    fail(ErrorCode::InvalidArgument, "pool reserves must be finite and positive");
  }
  if (!std::isfinite(fee) || fee < 0.0 || fee >= 1.0) {
    fail(ErrorCode::InvalidArgument, "pool fee must lie in [0, 1)");
  }
}

AmmPool AmmPool::scaled(double factor) const {
  return AmmPool(dai_reserve_ * factor, weth_reserve_ * factor, fee_);
}

double output_amount(const AmmPool& pool, double input_dai) {
  require_trade_input(input_dai);
  // T1 - k / (T0 + (1-fee) in), rearranged so small trades do not cancel.
  const double effective_in = (1.0 - pool.fee()) * input_dai;
  return pool.weth_reserve() * effective_in / (pool.dai_reserve() + effective_in);
}

double spot_price(const AmmPool& pool) noexcept {
  return pool.weth_reserve() / pool.dai_reserve();
}

double exchange_rate(const AmmPool& pool) noexcept {
  return pool.dai_reserve() / pool.weth_reserve();
}

double slippage_fraction(const AmmPool& pool, double input_dai) {
  require_trade_input(input_dai);
  const double fee = pool.fee();
  const double t0 = pool.dai_reserve();
  const double effective_in = (1.0 - fee) * input_dai;
  return (fee * t0 + effective_in) / (t0 + effective_in);
}

TradeQuote quote(const AmmPool& pool, double input_dai) {
  TradeQuote q;
  q.input_amount = input_dai;
  q.output_amount = output_amount(pool, input_dai);
  q.pre_trade_price = spot_price(pool);
  // Limit of out/in; well defined at zero input.
  const double effective_in = (1.0 - pool.fee()) * input_dai;
  q.trade_price = pool.weth_reserve() * (1.0 - pool.fee()) / (pool.dai_reserve() + effective_in);
  q.slippage = slippage_fraction(pool, input_dai);
  return q;
}

}  // namespace makerbid

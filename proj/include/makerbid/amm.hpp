#pragma once

namespace makerbid {

/// Constant-product pool snapshot for the DAI/WETH pair.
///
/// Token 0 is DAI and token 1 is WETH throughout the library. The pool is an
/// immutable value; quoting a trade never mutates it.
class AmmPool {
public:
  /// Throws Error(InvalidArgument) unless both reserves are finite and
  /// positive and 0 <= fee < 1.
  AmmPool(double dai_reserve, double weth_reserve, double fee = 0.0);

  double dai_reserve() const noexcept { return dai_reserve_; }
  double weth_reserve() const noexcept { return weth_reserve_; }
  double fee() const noexcept { return fee_; }
  double invariant() const noexcept { return dai_reserve_ * weth_reserve_; }

  /// Same pool viewed from the other side: WETH becomes the input token.
  AmmPool flipped() const { return AmmPool(weth_reserve_, dai_reserve_, fee_); }

  /// Same pool with both reserves multiplied by `factor` (price unchanged).
  AmmPool scaled(double factor) const;

private:
  double dai_reserve_;
  double weth_reserve_;
  double fee_;
};

struct TradeQuote {
  double input_amount = 0.0;     // DAI in
  double output_amount = 0.0;    // WETH out
  double pre_trade_price = 0.0;  // WETH per DAI before the trade
  double trade_price = 0.0;      // WETH per DAI realised by the trade
  double slippage = 0.0;
};

/// WETH received for `input_dai` DAI. The fee is withheld from the input, so
/// (T1 - out) * (T0 + (1 - fee) * in) == T0 * T1.
double output_amount(const AmmPool& pool, double input_dai);

/// Pre-trade implicit price, WETH per DAI.
double spot_price(const AmmPool& pool) noexcept;

/// DAI per WETH; the reciprocal of spot_price.
double exchange_rate(const AmmPool& pool) noexcept;

/// Relative loss between the spot price and the realised trade price, in the
/// factored closed form. Equals `fee` at zero trade size.
double slippage_fraction(const AmmPool& pool, double input_dai);

TradeQuote quote(const AmmPool& pool, double input_dai);

}  // namespace makerbid

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "makerbid/cost_model.hpp"

namespace makerbid {

/// Dataset-level model parameters shared by every auction.
struct ModelParams {
  GasSchedule gas;
  double gamma = 0.003;          // pool trading fee
  double capital_rate = 0.40;    // r
  double bids_per_year = 365.0;  // B_year
  double win_prob = 0.15;        // x

  void validate() const;
  /// Context for one auction; `dai_reserve`/`weth_reserve` describe the pool.
  AuctionContext context(double bid_value, double gas_price_gwei, double dai_reserve,
                         double weth_reserve) const;
};

/// "15%" and "0.15" both parse to 0.15.
double parse_rate(std::string_view text);

/// Parse `key = value` lines. Keys: g_dent g_deal g_exit g_trade g_join gamma
/// r b_year x. Blank lines and `#` comments are ignored; anything else is
/// Error(Parse). Keys not present keep their defaults.
ModelParams parse_params(std::string_view text);
ModelParams load_params(const std::filesystem::path& path);
std::string format_params(const ModelParams& params);

/// Set one parameter by key; Error(InvalidArgument) on unknown keys.
void set_param(ModelParams& params, std::string_view key, double value);
double get_param(const ModelParams& params, std::string_view key);

}  // namespace makerbid

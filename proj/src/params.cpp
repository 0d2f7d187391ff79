#include "makerbid/params.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "makerbid/error.hpp"
#include "text_util.hpp"

namespace makerbid {

void ModelParams::validate() const {
  gas.validate();
  if (!std::isfinite(gamma) || gamma < 0.0 || gamma >= 1.0) {
    fail(ErrorCode::InvalidArgument, "gamma must lie in [0, 1)");
  }
  if (!std::isfinite(capital_rate) || capital_rate < 0.0) {
    fail(ErrorCode::InvalidArgument, "r must be non-negative");
  }
  if (!std::isfinite(bids_per_year) || bids_per_year < 1.0) {
    fail(ErrorCode::InvalidArgument, "b_year must be at least 1");
  }
  if (!std::isfinite(win_prob) || win_prob < 0.0 || win_prob > 1.0) {
    fail(ErrorCode::InvalidArgument, "x must lie in [0, 1]");
  }
}

AuctionContext ModelParams::context(double bid_value, double gas_price_gwei, double dai_reserve,
                                    double weth_reserve) const {
  AuctionContext ctx{
      .bid_value = bid_value,
      .gas_price_gwei = gas_price_gwei,
      .pool = AmmPool(dai_reserve, weth_reserve, gamma),
      .win_prob = win_prob,
      .bids_per_year = bids_per_year,
      .capital_rate = capital_rate,
  };
  ctx.validate();
  return ctx;
}

double parse_rate(std::string_view text) {
  text = detail::trim(text);
  bool percent = false;
  if (!text.empty() && text.back() == '%') {
    percent = true;
    text.remove_suffix(1);
    text = detail::trim(text);
  }
  const auto value = detail::parse_double(text);
  if (!value) {
    fail(ErrorCode::Parse, fmt::format("'{}' is not a rate", text));
  }
  return percent ? *value / 100.0 : *value;
}

namespace {

template <class P>
auto gas_field(P& p, std::string_view key) -> decltype(&p.gas.dent) {
  if (key == "g_dent") return &p.gas.dent;
  if (key == "g_deal") return &p.gas.deal;
  if (key == "g_exit") return &p.gas.exit;
  if (key == "g_trade") return &p.gas.trade;
  if (key == "g_join") return &p.gas.join;
  return nullptr;
}

template <class P>
auto real_field(P& p, std::string_view key) -> decltype(&p.gamma) {
  if (key == "gamma") return &p.gamma;
  if (key == "r") return &p.capital_rate;
  if (key == "b_year") return &p.bids_per_year;
  if (key == "x") return &p.win_prob;
  return nullptr;
}

}  // namespace

void set_param(ModelParams& params, std::string_view key, double value) {
  if (auto* gas = gas_field(params, key)) {
    if (!std::isfinite(value) || value != std::floor(value)) {
      fail(ErrorCode::InvalidArgument, fmt::format("{} must be an integral gas amount", key));
    }
    *gas = static_cast<std::int64_t>(value);
    return;
  }
  if (auto* real = real_field(params, key)) {
    *real = value;
    return;
  }
  fail(ErrorCode::InvalidArgument, fmt::format("unknown parameter '{}'", key));
}

double get_param(const ModelParams& params, std::string_view key) {
  if (const auto* gas = gas_field(params, key)) return static_cast<double>(*gas);
  if (const auto* real = real_field(params, key)) return *real;
  fail(ErrorCode::InvalidArgument, fmt::format("unknown parameter '{}'", key));
}

ModelParams parse_params(std::string_view text) {
  ModelParams params;
  std::size_t line_no = 0;
  for (auto line : detail::split_lines(text)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorCode::Parse, fmt::format("params line {}: expected 'key = value'", line_no));
    }
    const auto key = detail::trim(line.substr(0, eq));
    const auto raw = detail::trim(line.substr(eq + 1));
    if (!gas_field(params, key) && !real_field(params, key)) {
      fail(ErrorCode::Parse, fmt::format("params line {}: unknown key '{}'", line_no, key));
    }
    double value = 0.0;
    try {
      value = gas_field(params, key) ? detail::parse_double(raw).value_or(NAN) : parse_rate(raw);
    } catch (const Error&) {
      value = NAN;
    }
    if (!std::isfinite(value)) {
      fail(ErrorCode::Parse, fmt::format("params line {}: bad value '{}' for {}", line_no, raw, key));
    }
    try {
      set_param(params, key, value);
    } catch (const Error& e) {
      fail(ErrorCode::Parse, fmt::format("params line {}: {}", line_no, e.what()));
    }
  }
  try {
    params.validate();
  } catch (const Error& e) {
    fail(ErrorCode::Parse, fmt::format("params: {}", e.what()));
  }
  return params;
}

ModelParams load_params(const std::filesystem::path& path) {
  return parse_params(detail::read_file(path));
}

std::string format_params(const ModelParams& p) {
  return fmt::format(
      "g_dent = {}\ng_deal = {}\ng_exit = {}\ng_trade = {}\ng_join = {}\n"
      "gamma = {}\nr = {}\nb_year = {}\nx = {}\n",
      p.gas.dent, p.gas.deal, p.gas.exit, p.gas.trade, p.gas.join, p.gamma, p.capital_rate,
      p.bids_per_year, p.win_prob);
}

}  // namespace makerbid

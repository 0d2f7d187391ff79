// Reference implementations used only by the tests. They restate the model
// formulas in the most literal way, in long double, without sharing code
// with the library.
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace oracle {

using real = long double;

struct Gas {
  real dent = 116914, deal = 44154, exit = 80145, trade = 125700, join = 80380;
};

struct Inputs {
  real bid;     // B
  real mu;      // gwei
  real dai;     // T0
  real weth;    // T1
  real gamma = 0.003L;
  real x = 0.15L;
  real r = 0.40L;
  real b_year = 365;
  Gas gas{};
};

// Output via the textbook form T1 - k / (T0 + (1 - g) d).
inline real amm_output(real t0, real t1, real gamma, real d) {
  const real k = t0 * t1;
  return t1 - k / (t0 + (1 - gamma) * d);
}

// (P0 - P1) / P0 with P0 = T1/T0 and P1 = out/in.
inline real slippage_by_prices(real t0, real t1, real gamma, real d) {
  const real p0 = t1 / t0;
  const real p1 = amm_output(t0, t1, gamma, d) / d;
  return (p0 - p1) / p0;
}

inline real slippage_factored(real t0, real gamma, real d) {
  return (gamma * t0 + (1 - gamma) * d) / (t0 + (1 - gamma) * d);
}

struct Breakdown {
  real bid_fee_eth, rebalance_fee_eth, gas_dai, slippage_dai, capital_annual, capital_bid, total;
};

inline Breakdown cost(const Inputs& in, real v_max, real r_margin) {
  const real g = 1e-9L;
  real y = 1, z = in.bid;
  if (in.bid < r_margin) {
    y = in.bid / r_margin;
    z = r_margin;
  }
  Breakdown b{};
  b.bid_fee_eth = (in.gas.dent + in.gas.deal * in.x) * in.mu * g;
  b.rebalance_fee_eth = (in.gas.exit + in.gas.trade + in.gas.join) * in.mu * g * in.x * y;
  b.gas_dai = (b.bid_fee_eth + b.rebalance_fee_eth) * (in.dai / in.weth);
  b.slippage_dai = slippage_factored(in.dai, in.gamma, z) * in.x * y * in.bid;
  b.capital_annual = in.r * v_max;
  b.capital_bid = b.capital_annual / in.b_year;
  b.total = b.gas_dai + b.slippage_dai + b.capital_bid;
  return b;
}

struct Argmin {
  real v_max = 0, r_margin = 0, total = std::numeric_limits<real>::infinity();
};

inline std::vector<real> log_space(real lo, real hi, std::size_t n) {
  std::vector<real> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const real t = n == 1 ? 0 : static_cast<real>(i) / static_cast<real>(n - 1);
    out[i] = lo * std::pow(hi / lo, t);
  }
  return out;
}

// Exhaustive 2-D search over V_max in [B, v_hi*B] and R in {0} + [r_lo*B, r_hi*B].
inline Argmin grid(const Inputs& in, std::size_t nv, std::size_t nr, real v_hi = 1e4L, real r_lo = 1e-4L,
                   real r_hi = 1e4L) {
  const auto vs = log_space(in.bid, v_hi * in.bid, nv);
  auto rs = log_space(r_lo * in.bid, r_hi * in.bid, nr);
  rs.insert(rs.begin(), 0);
  Argmin best;
  for (real r : rs) {
    for (real v : vs) {
      if (v - r < in.bid) continue;
      const real c = cost(in, v, r).total;
      if (c < best.total) best = {v, r, c};
      break;  // cost rises with V_max, so the first feasible V_max is the best for this R
    }
  }
  return best;
}

// Uniform scan of cost along V_max = B + R for R in [lo, hi].
inline Argmin dense_scan(const Inputs& in, real lo, real hi, std::size_t n) {
  Argmin best;
  for (std::size_t i = 0; i < n; ++i) {
    const real r = lo + (hi - lo) * static_cast<real>(i) / static_cast<real>(n - 1);
    const real c = cost(in, in.bid + r, r).total;
    if (c < best.total) best = {in.bid + r, r, c};
  }
  return best;
}

inline real ols_slope(const std::vector<real>& t, const std::vector<real>& g) {
  real st = 0, sg = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sg += g[i];
  }
  const real mt = st / t.size(), mg = sg / g.size();
  real num = 0, den = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    num += (t[i] - mt) * (g[i] - mg);
    den += (t[i] - mt) * (t[i] - mt);
  }
  return num / den;
}

}  // namespace oracle

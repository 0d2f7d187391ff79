#include <doctest.h>

#include <cmath>
#include <random>

#include "makerbid/cost_model.hpp"
#include "makerbid/error.hpp"
#include "oracles.hpp"

using namespace makerbid;
using doctest::Approx;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

AuctionContext ctx(double bid, double mu, double dai = 1e6, double weth = 4000.0, double gamma = 0.003,
                   double x = 0.15, double r = 0.40, double b_year = 365.0) {
  return AuctionContext{.bid_value = bid,
                        .gas_price_gwei = mu,
                        .pool = AmmPool(dai, weth, gamma),
                        .win_prob = x,
                        .bids_per_year = b_year,
                        .capital_rate = r};
}

}  // namespace

TEST_CASE("gas schedule defaults") {
  const GasSchedule g;
  CHECK(g.dent == 116914);
  CHECK(g.deal == 44154);
  CHECK(g.exit == 80145);
  CHECK(g.trade == 125700);
  CHECK(g.join == 80380);
  CHECK(g.per_rebalance() == 286225);
  CHECK(kGweiToEth == 1e-9);
  GasSchedule bad;
  bad.trade = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("context and portfolio validation") {
  CHECK_NOTHROW(ctx(1000, 30).validate());
  CHECK_THROWS_AS(ctx(0, 30).validate(), Error);
  CHECK_THROWS_AS(ctx(1000, -1).validate(), Error);
  CHECK_THROWS_AS(ctx(1000, 30, 1e6, 4000, 0.003, 1.5).validate(), Error);
  CHECK_THROWS_AS(ctx(1000, 30, 1e6, 4000, 0.003, 0.15, -0.1).validate(), Error);
  CHECK_THROWS_AS(ctx(1000, 30, 1e6, 4000, 0.003, 0.15, 0.4, 0.5).validate(), Error);

  CHECK_NOTHROW(Portfolio{100, 0}.validate());
  CHECK_THROWS_AS((Portfolio{0, 0}.validate()), Error);
  CHECK_THROWS_AS((Portfolio{100, -1}.validate()), Error);
  CHECK_THROWS_AS((Portfolio{100, 101}.validate()), Error);
  CHECK((Portfolio{3500, 2500}.covers(1000)));
  CHECK_FALSE((Portfolio{3400, 2500}.covers(1000)));
}

TEST_CASE("bid fee") {
  const GasSchedule gas;
  CHECK(bid_fee(ctx(1000, 0), gas) == 0.0);
  CHECK(bid_fee(ctx(1000, 50, 1e6, 4000, 0.003, 0.0), gas) == Approx(5.8457e-3).epsilon(1e-12));
  CHECK(bid_fee(ctx(1000, 50), gas) == Approx((116914 + 6623.1) * 50 * 1e-9).epsilon(1e-12));
}

TEST_CASE("rebalance allocation") {
  auto a = rebalance_allocation(1000, 2500);
  CHECK(a.y == Approx(0.4).epsilon(1e-15));
  CHECK(a.z == 2500);
  a = rebalance_allocation(5000, 2500);
  CHECK(a.y == 1.0);
  CHECK(a.z == 5000);
  a = rebalance_allocation(777, 777);
  CHECK(a.y == 1.0);
  CHECK(a.z == 777);
  a = rebalance_allocation(1000, 0);
  CHECK(a.y == 1.0);
  CHECK(a.z == 1000);
  CHECK_THROWS_AS(rebalance_allocation(0, 10), Error);
  CHECK_THROWS_AS(rebalance_allocation(10, -1), Error);
}

TEST_CASE("rebalance fee") {
  const GasSchedule gas;
  CHECK(rebalance_fee(ctx(1000, 50, 1e6, 4000, 0.003, 0.0), gas, {1.0, 1000}) == 0.0);
  CHECK(rebalance_fee(ctx(1000, 50), gas, {1.0, 1000}) ==
        Approx((80145 + 125700 + 80380) * 50 * 1e-9 * 0.15).epsilon(1e-12));

  // One rebalance costing 0.2 DAI, shared by a 1,000 DAI bid against R = 2,500.
  // x = 1 and an exchange rate of 1 make the fee in ETH equal to DAI.
  GasSchedule unit{.dent = 1, .deal = 1, .exit = 1, .trade = 1, .join = 1};
  const double mu = 0.2 / (3 * 1e-9);
  auto c = ctx(1000, mu, 1e6, 1e6, 0.003, 1.0);
  const auto alloc = rebalance_allocation(1000, 2500);
  CHECK(rebalance_fee(c, unit, alloc) == Approx(0.08).epsilon(1e-12));
}

TEST_CASE("total gas fee") {
  const GasSchedule gas;
  CHECK(total_gas_fee(ctx(1000, 0), gas, {1.0, 1000}) == 0.0);
  const auto c = ctx(1000, 50);
  const double eth = bid_fee(c, gas) + rebalance_fee(c, gas, {1.0, 1000});
  CHECK(total_gas_fee(c, gas, {1.0, 1000}) == Approx(eth * 250.0).epsilon(1e-14));
  CHECK(total_gas_fee(c, gas, {1.0, 1000}) == Approx(2.080885625).epsilon(1e-12));
}

TEST_CASE("slippage cost") {
  CHECK(slippage_cost(ctx(1000, 30, 1e6, 4000, 0.003, 0.0), {3500, 2500}) == 0.0);
  const auto c = ctx(5000, 30);
  CHECK(slippage_cost(c, {7500, 2500}) ==
        Approx(slippage_fraction(c.pool, 5000) * 0.15 * 5000).epsilon(1e-14));
  CHECK(slippage_cost(ctx(1000, 30), {3500, 2500}) == Approx(0.32873063888258516).epsilon(1e-12));
}

TEST_CASE("capital cost") {
  CHECK(capital_cost(ctx(1000, 30, 1e6, 4000, 0.003, 0.15, 0.0), {10000, 0}).annual == 0.0);
  const auto k = capital_cost(ctx(1000, 30), {10000, 0});
  CHECK(k.annual == Approx(4000.0).epsilon(1e-15));
  CHECK(k.per_bid == Approx(4000.0 / 365.0).epsilon(1e-15));
  const auto k2 = capital_cost(ctx(1000, 30), {20000, 0});
  CHECK(k2.annual == Approx(2 * k.annual));
  CHECK(k2.per_bid == Approx(2 * k.per_bid));
  // independent of bid value and win probability
  CHECK(capital_cost(ctx(50, 30, 1e6, 4000, 0.003, 0.9), {10000, 0}).per_bid == k.per_bid);
}

TEST_CASE("total cost") {
  const GasSchedule gas;
  SUBCASE("everything free") {
    const auto b = total_cost(ctx(1000, 0, 1e6, 4000, 0.003, 0.0, 0.0), {3500, 2500}, gas);
    CHECK(b.total_dai == 0.0);
  }
  SUBCASE("full worked example") {
    const auto c = ctx(1000, 30, 5e6, 20000);
    const auto b = total_cost(c, {3500, 2500}, gas);
    CHECK(b.bid_fee_eth == Approx(0.003706113).epsilon(1e-12));
    CHECK(b.rebalance_fee_eth == Approx(0.000515205).epsilon(1e-12));
    CHECK(b.gas_fee_dai == Approx(1.0553295).epsilon(1e-12));
    CHECK(b.slippage_cost_dai == Approx(0.20980541200211694).epsilon(1e-12));
    CHECK(b.capital_cost_annual_dai == Approx(1400.0).epsilon(1e-15));
    CHECK(b.capital_cost_bid_dai == Approx(3.8356164383561644).epsilon(1e-14));
    CHECK(b.total_dai == Approx(5.1007513503582813).epsilon(1e-12));
    CHECK(min_discount(b, 1000) == Approx(-0.0051007513503582813).epsilon(1e-12));
    CHECK(rel(b.total_dai, b.gas_fee_dai + b.slippage_cost_dai + b.capital_cost_bid_dai) < 1e-15);

    const auto nc = b.without_capital();
    CHECK(nc.capital_cost_bid_dai == 0.0);
    CHECK(nc.total_dai == Approx(b.total_dai - b.capital_cost_bid_dai));
  }
}

TEST_CASE("min discount") {
  CostBreakdown b;
  b.total_dai = 20;
  CHECK(min_discount(b, 1000) == Approx(-0.02));
  b.total_dai = 0;
  CHECK(min_discount(b, 1000) == 0.0);
  CHECK_THROWS_AS(min_discount(b, 0), Error);
}

TEST_CASE("cost agrees with the literal oracle on random inputs") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const GasSchedule gas;
  for (int i = 0; i < 2000; ++i) {
    oracle::Inputs in{std::pow(10.0, 1 + 5 * u(rng)), 1 + 200 * u(rng), std::pow(10.0, 5 + 3 * u(rng)), 0};
    in.weth = in.dai / (100 + 400 * u(rng));
    in.gamma = 0.01 * u(rng);
    in.x = u(rng);
    in.r = u(rng);
    const double r_margin = u(rng) < 0.2 ? 0.0 : static_cast<double>(in.bid) * std::pow(10.0, 4 * u(rng) - 2);
    const double v_max = static_cast<double>(in.bid) + r_margin + 100 * u(rng);
    const auto c = ctx(in.bid, in.mu, in.dai, in.weth, in.gamma, in.x, in.r);
    const auto got = total_cost(c, {v_max, r_margin}, gas);
    const auto want = oracle::cost(in, v_max, r_margin);
    REQUIRE(rel(got.total_dai, want.total) < 1e-12);
    REQUIRE(got.gas_fee_dai >= 0);
    REQUIRE(got.slippage_cost_dai >= 0);
  }
}

TEST_CASE("continuity at R = B") {
  const GasSchedule gas;
  const auto c = ctx(1000, 30, 5e6, 20000);
  const double at = total_cost(c, {3000, 1000}, gas).total_dai;
  const double above = total_cost(c, {3000, std::nextafter(1000.0, 2000.0)}, gas).total_dai;
  CHECK(rel(above, at) < 1e-12);
}

TEST_CASE("slippage cost is homogeneous in B, R and pool depth") {
  const double s1 = slippage_cost(ctx(1000, 30, 5e6, 20000), {4000, 2500});
  const double s3 = slippage_cost(ctx(3000, 30, 1.5e7, 60000), {12000, 7500});
  CHECK(rel(s3, 3 * s1) < 1e-12);
  CHECK(rel(slippage_fraction(AmmPool(1.5e7, 60000, 0.003), 7500), slippage_fraction(AmmPool(5e6, 20000, 0.003), 2500)) <
        1e-14);
}

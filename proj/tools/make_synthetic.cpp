// Builds the 20-auction synthetic comparison dataset.
//
// Each winning price is planted 1% above or below the optimal price that the
// library computes for that auction, so the expected verdicts are known by
// construction. Rows planted above optimal whose per-bid capital charge
// exceeds the 1% gap are expected to flip once capital is excluded.
//
// usage: make_synthetic <params file> <output dir>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "makerbid/makerbid.h"

namespace {

constexpr std::int64_t kStart = 1584921600;  // 2020-03-23T00:00:00Z
constexpr std::int64_t kDay = 86400;
constexpr std::int64_t kV2Launch = kStart + 56 * kDay;

struct Plan {
  double bid;
  double gas_gwei;
  int sign;  // +1: actual above optimal, -1: below
};

// Ten bids up to 1k DAI, five up to 10k, five above.
const Plan kPlans[] = {
    {8, 150, +1},     {10, 150, +1},   {12, 250, +1},    {15, 30, +1},      {40, 80, -1},
    {90, 30, +1},     {150, 80, -1},   {250, 45, +1},    {600, 60, -1},     {950, 25, +1},
    {1500, 35, -1},   {2800, 50, +1},  {4200, 22, -1},   {6500, 90, +1},    {9500, 40, -1},
    {15000, 30, +1},  {40000, 70, -1}, {90000, 28, +1},  {250000, 55, -1},  {800000, 35, +1},
};

struct Snapshot {
  std::int64_t t;
  const char* version;
  double dai;
  double weth;
};

// Daily snapshots: only V1 before the V2 launch, after which V2 overtakes.
std::vector<Snapshot> reserve_history() {
  std::vector<Snapshot> out;
  for (int d = 0; d < 130; ++d) {
    const std::int64_t t = kStart + d * kDay;
    const double price = 130.0 + 1.0 * d;  // DAI per WETH drifting up
    const double v1_dai = 2.0e6 - 5.0e3 * d;
    out.push_back({t, "v1", v1_dai, v1_dai / price});
    if (t >= kV2Launch) {
      const double v2_dai = 5.0e5 + 1.5e5 * (d - 56);
      out.push_back({t, "v2", v2_dai, v2_dai / (price * 1.001)});
    }
  }
  return out;
}

const Snapshot& select(const std::vector<Snapshot>& all, std::int64_t at) {
  const Snapshot* v1 = nullptr;
  const Snapshot* v2 = nullptr;
  for (const auto& s : all) {
    if (s.t > at) continue;
    (std::string(s.version) == "v1" ? v1 : v2) = &s;
  }
  if (v2 != nullptr && v2->dai >= v1->dai) return *v2;
  return *v1;
}

void check(mb_status s) {
  if (s != MB_OK) {
    fmt::print(stderr, "error: {}\n", mb_last_error());
    std::exit(2);
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    fmt::print(stderr, "usage: make_synthetic <params file> <output dir>\n");
    return 1;
  }
  mb_params* params = nullptr;
  check(mb_params_load(argv[1], &params));
  const std::filesystem::path dir = argv[2];
  std::filesystem::create_directories(dir);

  const auto history = reserve_history();
  std::ofstream reserves(dir / "reserves.csv");
  reserves << "timestamp,version,dai_reserve,weth_reserve\n";
  for (const auto& s : history) reserves << fmt::format("{},{},{},{}\n", s.t, s.version, s.dai, s.weth);

  std::ofstream events(dir / "events.csv");
  events << "auction_id,kind,bid_dai,lot_weth,timestamp,gas_price_gwei,gas_used,bidder_address\n";
  std::ofstream expected(dir / "expected.csv");
  expected << "auction_id,bid_dai,planted,optimal_discount,capital_share,full_cost,no_capital\n";

  std::size_t id = 100;
  int counts[2][3][2] = {};
  for (std::size_t i = 0; i < std::size(kPlans); ++i, ++id) {
    const auto& p = kPlans[i];
    const std::int64_t kick_at = kStart + static_cast<std::int64_t>(i) * 6 * kDay + 3 * 3600;
    const std::int64_t win_at = kick_at + 2 * 3600;
    const auto& snap = select(history, win_at);
    const double market = snap.dai / snap.weth;

    const mb_auction_input in{p.bid, p.gas_gwei, snap.dai, snap.weth};
    mb_optimization opt{};
    check(mb_optimize(params, &in, 0.0, &opt));
    const double optimal_price = market * (1.0 + opt.min_discount);
    const double actual_price = optimal_price * (1.0 + 0.01 * p.sign);
    const double lot = p.bid / actual_price;

    const double actual_discount = actual_price / market - 1.0;
    const double capital_share = opt.cost.capital_cost_bid_dai / p.bid;
    const double nc_discount = opt.min_discount + capital_share;
    const bool above_full = actual_discount > opt.min_discount;
    const bool above_nc = actual_discount > nc_discount;
    if (std::abs(actual_discount - nc_discount) < 1e-3) {
      fmt::print(stderr, "auction {} sits too close to its no-capital optimum\n", id);
      return 2;
    }
    const int bucket = p.bid <= 1000 ? 0 : (p.bid <= 10000 ? 1 : 2);
    ++counts[0][bucket][above_full ? 0 : 1];
    ++counts[1][bucket][above_nc ? 0 : 1];

    const double kick_lot = lot * 1.2;
    events << fmt::format("{},kick,0,{},{},{},150000,0xflipper\n", id, kick_lot, kick_at, p.gas_gwei * 0.8);
    events << fmt::format("{},tend,{},{},{},{},98000,0xaaa{}\n", id, 0.6 * p.bid, kick_lot, kick_at + 600,
                          p.gas_gwei * 0.9, i % 4);
    events << fmt::format("{},tend,{},{},{},{},98000,0xbbb{}\n", id, p.bid, kick_lot, kick_at + 1800, p.gas_gwei,
                          i % 3);
    events << fmt::format("{},dent,{},{},{},{},116914,0xaaa{}\n", id, p.bid, lot * 1.1, kick_at + 3600, p.gas_gwei,
                          i % 4);
    events << fmt::format("{},dent,{},{},{},{},116914,0xbbb{}\n", id, p.bid, lot, win_at, p.gas_gwei, i % 3);
    events << fmt::format("{},deal,0,0,{},{},44154,0xbbb{}\n", id, win_at + 6 * 3600, p.gas_gwei * 0.7, i % 3);

    expected << fmt::format("{},{},{},{:.8f},{:.6f},{},{}\n", id, p.bid, p.sign > 0 ? "above" : "below",
                            opt.min_discount, capital_share, above_full ? "above" : "below",
                            above_nc ? "above" : "below");
  }
  mb_params_destroy(params);

  for (int mode = 0; mode < 2; ++mode) {
    fmt::print("{}:", mode == 0 ? "full_cost " : "no_capital");
    for (int b = 0; b < 3; ++b) fmt::print(" [{} above, {} below]", counts[mode][b][0], counts[mode][b][1]);
    fmt::print("\n");
  }
  return 0;
}

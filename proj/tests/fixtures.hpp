// Event fixtures shared by the ingest tests and the acceptance binary.
#pragma once

#include <cstdint>
#include <string>

#include <fmt/format.h>

namespace fixture {

inline const char* kHeader = "auction_id,kind,bid_dai,lot_weth,timestamp,gas_price_gwei,gas_used,bidder_address\n";

constexpr std::int64_t kMar23 = 1584921600;  // 2020-03-23T00:00:00Z
constexpr std::int64_t kJul29 = 1595980800;  // 2020-07-29T00:00:00Z
constexpr std::int64_t kDay = 86400;

// 155 auctions dealt between March 23 and July 28 inclusive carrying 1,011
// bids, two of them kicked the day before, plus auctions dealt just outside.
inline std::string window_fixture() {
  std::string csv = kHeader;
  auto auction = [&](std::uint64_t id, std::int64_t kick_at, std::int64_t deal_at, int bids) {
    csv += fmt::format("{},kick,0,10,{},40,150000,0xkeeper\n", id, kick_at);
    for (int b = 0; b < bids; ++b) {
      const bool dent = b + 1 == bids;
      csv += fmt::format("{},{},{},{},{},{},{},0xb{}\n", id, dent ? "dent" : "tend", 1000 + 100 * b, dent ? 9.5 : 10,
                         kick_at + 60 * (b + 1), 30 + b, 116914, b % 3);
    }
    csv += fmt::format("{},deal,0,0,{},25,44154,0xb0\n", id, deal_at);
  };
  std::uint64_t id = 1;
  for (int i = 0; i < 3; ++i, ++id) auction(id, kMar23 - 5 * kDay, kMar23 - 2 * kDay, 4);
  // started on March 22, concluded on March 23
  for (int i = 0; i < 2; ++i, ++id) auction(id, kMar23 - 3600, kMar23 + 3600 * (i + 1), 7);
  for (int i = 0; i < 153; ++i, ++id) {
    const std::int64_t kick_at = kMar23 + kDay + i * (126 * kDay / 153);
    auction(id, kick_at, kick_at + 7 * 3600, i < 79 ? 7 : 6);
  }
  for (int i = 0; i < 4; ++i, ++id) auction(id, kJul29 + kDay, kJul29 + kDay + 3600, 5);
  return csv;
}

}  // namespace fixture

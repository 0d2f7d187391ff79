#include <doctest.h>

#include <fmt/format.h>

#include <random>
#include <set>
#include <string>

#include "makerbid/error.hpp"
#include "makerbid/ingest.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace makerbid;
using doctest::Approx;
using namespace fixture;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("parse events") {
  SUBCASE("empty input") {
    CHECK(parse_events("").empty());
    CHECK(parse_events(kHeader).empty());
  }
  SUBCASE("kick then deal, sorted") {
    const std::string csv = std::string(kHeader) + "7,deal,0,0,200,20,44154,0xa\n7,kick,0,10,100,20,1,0xb\n";
    const auto ev = parse_events(csv);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0].kind == EventKind::Kick);
    CHECK(ev[1].kind == EventKind::Deal);
    CHECK(ev[0].auction_id == 7);
  }
  SUBCASE("negative bid") {
    const std::string csv = std::string(kHeader) + "1,tend,-5,10,100,20,1,0xa\n";
    CHECK(code_of([&] { parse_events(csv); }) == ErrorCode::Parse);
    CHECK_THROWS_WITH(parse_events(csv), doctest::Contains("line 2"));
  }
  SUBCASE("unknown kind and malformed rows") {
    CHECK(code_of([] { parse_events(std::string(kHeader) + "1,bite,5,10,100,20,1,0xa\n"); }) == ErrorCode::Parse);
    CHECK(code_of([] { parse_events(std::string(kHeader) + "1,tend,5,10\n"); }) == ErrorCode::Parse);
    CHECK(code_of([] { parse_events(std::string(kHeader) + "1,tend,abc,10,100,20,1,0xa\n"); }) == ErrorCode::Parse);
    CHECK(code_of([] { parse_events("auction_id,kind\n1,tend\n"); }) == ErrorCode::Parse);
    CHECK(code_of([] { parse_events("{\"auction_id\": 1,\n"); }) == ErrorCode::Parse);
  }
  SUBCASE("integrity") {
    const std::string two_deals = std::string(kHeader) + "1,tend,5,10,100,20,1,a\n1,deal,0,0,200,20,1,a\n1,deal,0,0,300,20,1,a\n";
    CHECK(code_of([&] { parse_events(two_deals); }) == ErrorCode::DataIntegrity);
    const std::string after = std::string(kHeader) + "1,deal,0,0,200,20,1,a\n1,tend,5,10,300,20,1,a\n";
    CHECK(code_of([&] { parse_events(after); }) == ErrorCode::DataIntegrity);
  }
  SUBCASE("NDJSON matches CSV") {
    const std::string nd =
        "{\"auction_id\":3,\"kind\":\"tend\",\"bid_dai\":100,\"lot_weth\":1,\"timestamp\":10,\"gas_price_gwei\":20,"
        "\"gas_used\":1,\"bidder_address\":\"0xa\"}\n\n"
        "{\"auction_id\":3,\"kind\":\"deal\",\"bid_dai\":0,\"lot_weth\":0,\"timestamp\":20,\"gas_price_gwei\":20,"
        "\"gas_used\":1,\"bidder_address\":\"0xa\"}\n";
    const auto a = parse_events(nd);
    const auto b = parse_events(serialize_events(a, FileFormat::Csv));
    REQUIRE(a.size() == 2);
    CHECK(serialize_events(a) == serialize_events(b));
  }
}

TEST_CASE("round trip is idempotent") {
  const auto events = parse_events(window_fixture());
  const auto canonical = serialize_events(events);
  CHECK(serialize_events(parse_events(canonical)) == canonical);
  const auto nd = serialize_events(events, FileFormat::Ndjson);
  CHECK(serialize_events(parse_events(nd), FileFormat::Ndjson) == nd);
  CHECK(serialize_events(parse_events(nd)) == canonical);

  const std::vector<ReserveSnapshot> snaps = {{10, PoolVersion::V1, 5e6, 2e4}, {20, PoolVersion::V2, 6.5e6, 2.51e4}};
  const auto rc = serialize_reserves(snaps);
  CHECK(serialize_reserves(parse_reserves(rc)) == rc);
  CHECK(serialize_reserves(parse_reserves(serialize_reserves(snaps, FileFormat::Ndjson))) == rc);
}

TEST_CASE("window parsing") {
  const auto w = parse_window("2020-03-23,2020-07-28");
  CHECK(w.start == kMar23);
  CHECK(w.end == kJul29);
  CHECK(w.days() == 128.0);
  CHECK(w.contains(kMar23));
  CHECK_FALSE(w.contains(kJul29));
  const auto s = parse_window("100, 200");
  CHECK(s.start == 100);
  CHECK(s.end == 200);
  CHECK(code_of([] { parse_window("200,100"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { parse_window("2020-02-30,2020-03-01"); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { parse_window("yesterday"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("winning bids") {
  SUBCASE("last bid wins") {
    const std::string csv = std::string(kHeader) + "1,kick,0,10,1,20,1,a\n1,tend,100,10,2,21,1,a\n1,tend,150,10,3,22,1,b\n"
                                                   "1,deal,0,0,4,23,1,b\n";
    const auto w = winning_bids(parse_events(csv), {0, 10});
    REQUIRE(w.size() == 1);
    CHECK(w[0].bid_dai == 150);
    CHECK(w[0].timestamp == 3);
    CHECK(w[0].gas_price_gwei == 22);
    CHECK(w[0].price() == 15);
    CHECK(winning_bids(parse_events(csv), {5, 10}).empty());
  }
  SUBCASE("deal without a bid") {
    const std::string csv = std::string(kHeader) + "1,kick,0,10,1,20,1,a\n1,deal,0,0,4,23,1,b\n";
    CHECK(code_of([&] { winning_bids(parse_events(csv), {0, 10}); }) == ErrorCode::DataIntegrity);
  }
  SUBCASE("128-day window") {
    const auto events = parse_events(window_fixture());
    const auto window = parse_window("2020-03-23,2020-07-28");
    const auto w = winning_bids(events, window);
    CHECK(w.size() == 155);
    std::set<std::uint64_t> ids;
    for (const auto& e : events) ids.insert(e.auction_id);
    CHECK(w.size() <= ids.size());
    CHECK(w.front().auction_id == 4);  // kicked the day before the window

    const auto scoped = events_in_window(events, window);
    CHECK(win_probability(scoped) == Approx(155.0 / 1011.0).epsilon(1e-12));
    CHECK(win_probability(scoped) == Approx(0.1533).epsilon(0.0001 / 0.1533));
    CHECK(std::round(win_probability(scoped) * 100) == 15);
    CHECK(bids_per_year(window.days(), w.size()) == 365);
  }
}

TEST_CASE("win probability") {
  std::vector<AuctionEvent> ev(2);
  ev[0].kind = EventKind::Dent;
  ev[1].kind = EventKind::Deal;
  CHECK(win_probability(ev) == 1.0);
  std::vector<AuctionEvent> ten(10);
  for (auto& e : ten) e.kind = EventKind::Tend;
  CHECK(win_probability(ten) == 0.0);
  CHECK(code_of([] { win_probability(std::vector<AuctionEvent>{}); }) == ErrorCode::UndefinedStatistic);
}

TEST_CASE("reserve selection") {
  const std::vector<ReserveSnapshot> only_v1 = {{10, PoolVersion::V1, 5e6, 2e4}};
  CHECK(select_reserves(only_v1, 10).version == PoolVersion::V1);
  CHECK(code_of([&] { select_reserves(only_v1, 5); }) == ErrorCode::MissingData);

  const std::vector<ReserveSnapshot> both = {
      {10, PoolVersion::V1, 5e6, 2e4}, {12, PoolVersion::V2, 6e6, 2.4e4}, {20, PoolVersion::V2, 4e6, 1.6e4}};
  CHECK(select_reserves(both, 15).version == PoolVersion::V2);
  CHECK(select_reserves(both, 25).version == PoolVersion::V1);  // latest V2 is now smaller

  const std::vector<ReserveSnapshot> tie = {{10, PoolVersion::V2, 5e6, 2e4}, {10, PoolVersion::V1, 5e6, 2.2e4}};
  CHECK(select_reserves(tie, 10).version == PoolVersion::V2);
}

TEST_CASE("gas regression") {
  SUBCASE("exact line") {
    std::vector<GasSample> s;
    for (int t = 2; t <= 6; ++t) s.push_back({t, 47912 * t + 29876});
    const auto fit = fit_gas_regression(s);
    CHECK(fit.slope == Approx(47912).epsilon(1e-6));
    CHECK(fit.intercept == Approx(29876).epsilon(1e-6));
    CHECK(fit.predict(2) == Approx(125700).epsilon(1e-9));
    CHECK(GasRegression{47912, 29876}.predict(2) == 125700);
  }
  SUBCASE("two points interpolate") {
    const auto fit = fit_gas_regression(std::vector<GasSample>{{2, 100}, {4, 300}});
    CHECK(fit.slope == Approx(100));
    CHECK(fit.intercept == Approx(-100));
  }
  SUBCASE("degenerate") {
    CHECK(code_of([] { fit_gas_regression(std::vector<GasSample>{{2, 100}, {2, 300}}); }) == ErrorCode::SingularFit);
    CHECK(code_of([] { fit_gas_regression(std::vector<GasSample>{{2, 100}}); }) == ErrorCode::SingularFit);
  }
  SUBCASE("noisy samples agree with the reference OLS and shift equivariantly") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> tok(2, 8), noise(-4000, 4000);
    std::vector<GasSample> s;
    std::vector<oracle::real> ts, gs;
    for (int i = 0; i < 300; ++i) {
      const int t = tok(rng);
      s.push_back({t, 47912 * t + 29876 + noise(rng)});
      ts.push_back(t);
      gs.push_back(static_cast<oracle::real>(s.back().gas_used));
    }
    const auto fit = fit_gas_regression(s);
    CHECK(fit.slope == Approx(static_cast<double>(oracle::ols_slope(ts, gs))).epsilon(1e-9));
    auto shifted = s;
    for (auto& g : shifted) g.gas_used += 1234;
    const auto fit2 = fit_gas_regression(shifted);
    CHECK(fit2.slope == Approx(fit.slope).epsilon(1e-9));
    CHECK(fit2.intercept == Approx(fit.intercept + 1234).epsilon(1e-9));
  }
  SUBCASE("file parsing") {
    const auto s = parse_gas_samples("token_count,gas_used\n2,125700\n3,173612\n");
    CHECK(s.size() == 2);
    CHECK(code_of([] { parse_gas_samples("token_count,gas_used\n1,100\n"); }) == ErrorCode::Parse);
  }
}

TEST_CASE("gas mode") {
  CHECK(gas_mode(std::vector<std::int64_t>{5, 7, 7, 5, 3}) == 7);
  CHECK(gas_mode(std::vector<std::int64_t>{125700, 125700, 9}) == 125700);
  CHECK(code_of([] { gas_mode(std::vector<std::int64_t>{}); }) == ErrorCode::UndefinedStatistic);
}

TEST_CASE("bids per year") {
  CHECK(bids_per_year(128, 155) == 365);
  CHECK(bids_per_year(365, 730) == 730);
  CHECK(bids_per_year(128, 0) == 0);
  CHECK(code_of([] { bids_per_year(0, 10); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("price outlier filter") {
  const std::vector<ReserveSnapshot> snaps = {{0, PoolVersion::V2, 2e6, 1e4}};  // 200 DAI/WETH
  const std::vector<WinningBid> bids = {{1, 1900, 10, 5, 30, 6}, {2, 5000, 10, 5, 30, 6}, {3, 100, 1, -5, 30, 6}};
  const auto kept = filter_price_outliers(bids, snaps, 2.0);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].auction_id == 1);
  CHECK(kept[1].auction_id == 3);  // no reserves yet: kept
  CHECK(code_of([&] { filter_price_outliers(bids, snaps, 0.0); }) == ErrorCode::InvalidArgument);
}

#include "makerbid/auction_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "makerbid/error.hpp"

namespace makerbid {

namespace {

// Slack for comparing prices that were produced by multiplying by the
// increment factor.
constexpr double kRelTol = 1e-12;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

const char* to_string(Phase phase) noexcept {
  switch (phase) {
    case Phase::Kicked: return "kicked";
    case Phase::Tend: return "tend";
    case Phase::Dent: return "dent";
    case Phase::Done: return "done";
  }
  return "unknown";
}

void AuctionConfig::validate() const {
  if (!std::isfinite(increment) || increment <= 0.0) {
    fail(ErrorCode::InvalidArgument, "bid increment must be positive");
  }
  if (!positive_finite(duration) || !positive_finite(bid_ttl)) {
    fail(ErrorCode::InvalidArgument, "auction duration and bid ttl must be positive");
  }
}

double AuctionState::settle_time() const noexcept {
  return has_bid() ? std::min(end, bid_expiry) : end;
}

std::optional<double> AuctionState::effective_price() const noexcept {
  if (!has_bid()) return std::nullopt;
  if (phase == Phase::Tend) return current_bid / lot;
  return current_bid / current_lot;
}

std::optional<double> AuctionState::discount() const noexcept {
  const auto price = effective_price();
  if (!price) return std::nullopt;
  return *price / market_price - 1.0;
}

AuctionState kick(std::string auction_id, double lot, double tab, double market_price,
                  const AuctionConfig& config, double now) {
  config.validate();
  if (!positive_finite(lot) || !positive_finite(tab) || !positive_finite(market_price)) {
    fail(ErrorCode::InvalidArgument, "lot, tab and market price must be positive");
  }
  AuctionState s;
  s.auction_id = std::move(auction_id);
  s.tab = tab;
  s.lot = lot;
  s.current_lot = lot;
  s.kicked_at = now;
  s.end = now + config.duration;
  s.bid_expiry = s.end;
  s.market_price = market_price;
  s.config = config;
  return s;
}

AuctionState submit_bid(const AuctionState& state, const std::string& bidder, double amount,
                        double now) {
  if (state.phase == Phase::Done) {
    fail(ErrorCode::AuctionClosed, "auction " + state.auction_id + " has been dealt");
  }
  if (now >= state.settle_time()) {
    fail(ErrorCode::AuctionClosed, "auction " + state.auction_id + " has expired");
  }
  if (now < state.kicked_at) {
    fail(ErrorCode::InvalidArgument, "bid timestamp precedes the kick");
  }
  if (!positive_finite(amount)) {
    fail(ErrorCode::RejectedBid, "bid amount must be positive");
  }
  const double step = 1.0 + state.config.increment;

  AuctionState next = state;
  if (state.phase == Phase::Kicked || state.phase == Phase::Tend) {
    if (amount > state.tab * (1.0 + kRelTol)) {
      fail(ErrorCode::RejectedBid,
           fmt::format("payment {} exceeds tab {}; bid on the lot instead", amount, state.tab));
    }
    const bool reaches_tab = amount >= state.tab * (1.0 - kRelTol);
    if (state.phase == Phase::Tend) {
      if (amount <= state.current_bid) {
        fail(ErrorCode::RejectedBid, "tend bid must raise the payment");
      }
      if (!reaches_tab && amount < state.current_bid * step * (1.0 - kRelTol)) {
        fail(ErrorCode::RejectedBid,
             fmt::format("tend bid {} is below the minimum increment over {}", amount, state.current_bid));
      }
    }
    if (reaches_tab) {
      next.current_bid = state.tab;
      next.phase = Phase::Dent;
    } else {
      next.current_bid = amount;
      next.phase = Phase::Tend;
    }
    next.current_lot = state.lot;
  } else {
    if (amount >= state.current_lot) {
      fail(ErrorCode::RejectedBid, "dent bid must lower the lot");
    }
    if (amount * step > state.current_lot * (1.0 + kRelTol)) {
      fail(ErrorCode::RejectedBid,
           fmt::format("dent bid {} is above the minimum decrement from {}", amount, state.current_lot));
    }
    next.current_lot = amount;
  }
  next.highest_bidder = bidder;
  next.bid_expiry = now + state.config.bid_ttl;
  return next;
}

AuctionOutcome settle(const AuctionState& state, double now) {
  if (state.phase == Phase::Done) {
    fail(ErrorCode::AuctionClosed, "auction " + state.auction_id + " has already been dealt");
  }
  if (now < state.settle_time()) {
    fail(ErrorCode::NotSettleable,
         fmt::format("auction {} cannot be dealt before t={}", state.auction_id, state.settle_time()));
  }
  AuctionOutcome out;
  out.settled_at = now;
  out.winner = state.highest_bidder;
  if (state.has_bid()) {
    out.payment_dai = state.current_bid;
    out.lot_awarded = state.current_lot;
    out.excess_returned = state.lot - state.current_lot;
    out.effective_price = state.effective_price();
    out.final_discount = state.discount();
  }
  out.final_state = state;
  out.final_state.phase = Phase::Done;
  return out;
}

void BidderProfile::validate() const {
  if (!std::isfinite(cost_fraction) || cost_fraction < 0.0 || !std::isfinite(alt_value) ||
      alt_value < 0.0) {
    fail(ErrorCode::InvalidArgument, "bidder " + id + ": cost and alternative value must be non-negative");
  }
}

double BidderProfile::reservation_price(double market_price) const {
  return market_price * std::min(1.0, 1.0 + alt_value - cost_fraction);
}

void ThresholdScenario::validate() const {
  if (bidders.empty()) {
    fail(ErrorCode::InvalidArgument, "scenario needs at least one bidder");
  }
  for (const auto& b : bidders) b.validate();
  config.validate();
  if (!positive_finite(market_price) || !positive_finite(lot) || !positive_finite(tab_fraction) ||
      !positive_finite(bid_interval)) {
    fail(ErrorCode::InvalidArgument, "market price, lot, tab fraction and bid interval must be positive");
  }
  if (!std::isfinite(opening_discount) || opening_discount <= -1.0) {
    fail(ErrorCode::InvalidArgument, "opening discount must exceed -100%");
  }
}

namespace {

struct PlannedBid {
  double amount = 0.0;
  bool last_stand = false;
};

struct NextBid {
  double amount;
  double price;
};

NextBid minimum_next_bid(const AuctionState& s, double opening_price) {
  const double step = 1.0 + s.config.increment;
  switch (s.phase) {
    case Phase::Kicked: {
      const double amount = std::min(opening_price * s.lot, s.tab);
      return {amount, amount / s.lot};
    }
    case Phase::Tend: {
      const double amount = std::min(s.current_bid * step, s.tab);
      return {amount, amount / s.lot};
    }
    case Phase::Dent:
    case Phase::Done: break;
  }
  const double amount = s.current_lot / step;
  return {amount, s.tab / amount};
}

std::optional<PlannedBid> plan_bid(const AuctionState& s, double reservation, double opening_price,
                                   bool facing_last_stand) {
  const double step = 1.0 + s.config.increment;
  const auto next = minimum_next_bid(s, opening_price);
  if (next.price > reservation * (1.0 + kRelTol)) return std::nullopt;

  // After this bid and a minimum counter-raise we could not bid again.
  const bool last_stand = reservation < next.price * step * step;
  if (!last_stand || facing_last_stand) return PlannedBid{next.amount, last_stand};

  // Raise by up to one extra increment, never past the reservation.
  const double target = std::min(reservation, next.price * step);
  if (s.phase == Phase::Dent) return PlannedBid{s.tab / target, true};
  return PlannedBid{std::min(target * s.lot, s.tab), true};
}

}  // namespace

SimulationResult simulate_threshold_auction(const ThresholdScenario& scenario) {
  scenario.validate();
  const double market = scenario.market_price;
  const double opening_price = market * (1.0 + scenario.opening_discount);
  AuctionState state = kick("sim", scenario.lot, scenario.tab_fraction * scenario.lot * market, market,
                            scenario.config, 0.0);

  std::vector<double> reservations;
  reservations.reserve(scenario.bidders.size());
  for (const auto& b : scenario.bidders) reservations.push_back(b.reservation_price(market));

  SimulationResult result;
  const std::size_t n = scenario.bidders.size();
  std::size_t turn = 0;
  std::size_t idle = 0;
  bool facing_last_stand = false;
  double now = 0.0;
  while (idle < n && now < state.settle_time()) {
    const auto& bidder = scenario.bidders[turn];
    const double reservation = reservations[turn];
    turn = (turn + 1) % n;
    if (state.highest_bidder == bidder.id) {
      ++idle;
      continue;
    }
    const auto plan = plan_bid(state, reservation, opening_price, facing_last_stand);
    if (!plan) {
      ++idle;
      continue;
    }
    state = submit_bid(state, bidder.id, plan->amount, now);
    result.trace.push_back({now, bidder.id, state.phase, plan->amount, *state.effective_price(), plan->last_stand});
    facing_last_stand = plan->last_stand;
    idle = 0;
    now += scenario.bid_interval;
  }
  result.outcome = settle(state, std::max(now, state.settle_time()));
  return result;
}

}  // namespace makerbid

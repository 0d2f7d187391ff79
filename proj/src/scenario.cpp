#include "makerbid/scenario.hpp"

#include <json.hpp>

#include "makerbid/error.hpp"
#include "makerbid/params.hpp"

namespace makerbid {

namespace {

using nlohmann::json;

double fraction(const json& j, const char* key, double fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (it->is_number()) return it->get<double>();
  if (it->is_string()) return parse_rate(it->get<std::string>());
  fail(ErrorCode::Parse, std::string("scenario field '") + key + "' must be a number or percentage");
}

double number(const json& j, const char* key, double fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number()) {
    fail(ErrorCode::Parse, std::string("scenario field '") + key + "' must be a number");
  }
  return it->get<double>();
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

ThresholdScenario parse_scenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Parse, std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::Parse, "scenario must be a JSON object");
  if (!doc.contains("market_price")) fail(ErrorCode::Parse, "scenario needs market_price");
  const auto bidders = doc.find("bidders");
  if (bidders == doc.end() || !bidders->is_array()) {
    fail(ErrorCode::Parse, "scenario needs a bidders array");
  }

  ThresholdScenario s;
  s.market_price = number(doc, "market_price", 0.0);
  s.lot = number(doc, "lot", s.lot);
  s.tab_fraction = fraction(doc, "tab_fraction", s.tab_fraction);
  s.opening_discount = fraction(doc, "opening_discount", s.opening_discount);
  s.bid_interval = number(doc, "bid_interval_seconds", s.bid_interval);
  s.config.increment = fraction(doc, "increment", s.config.increment);
  s.config.duration = number(doc, "duration_hours", s.config.duration / 3600.0) * 3600.0;
  s.config.bid_ttl = number(doc, "bid_ttl_hours", s.config.duration / 3600.0) * 3600.0;

  for (const auto& b : *bidders) {
    if (!b.is_object() || !b.contains("id") || !b["id"].is_string()) {
      fail(ErrorCode::Parse, "each bidder needs a string id");
    }
    s.bidders.push_back({b["id"].get<std::string>(), fraction(b, "cost_fraction", 0.0),
                         fraction(b, "alt_value", 0.0)});
  }
  s.validate();
  return s;
}

std::string simulation_to_json(const SimulationResult& result, bool include_trace) {
  const auto& o = result.outcome;
  json doc = {
      {"winner", o.winner ? json(*o.winner) : json(nullptr)},
      {"final_discount", optional_number(o.final_discount)},
      {"effective_price", optional_number(o.effective_price)},
      {"payment_dai", o.payment_dai},
      {"lot_awarded", o.lot_awarded},
      {"excess_returned", o.excess_returned},
      {"settled_at", o.settled_at},
      {"bid_count", result.trace.size()},
  };
  if (include_trace) {
    json trace = json::array();
    for (const auto& b : result.trace) {
      trace.push_back({{"time", b.time},
                       {"bidder", b.bidder},
                       {"phase", to_string(b.phase)},
                       {"amount", b.amount},
                       {"effective_price", b.effective_price},
                       {"last_stand", b.last_stand}});
    }
    doc["trace"] = std::move(trace);
  }
  return doc.dump(2);
}

}  // namespace makerbid

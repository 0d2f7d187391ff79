#pragma once

#include <string>
#include <string_view>

#include "makerbid/auction_engine.hpp"

namespace makerbid {

/// Threshold-auction scenario from JSON:
///
///   {
///     "market_price": 200,            // DAI per WETH, required
///     "bidders": [ {"id": "alpha", "cost_fraction": 0.02, "alt_value": 0} ],
///     "increment": 0.005,             // optional, default 3%
///     "duration_hours": 6,            // optional
///     "bid_ttl_hours": 6,             // optional
///     "lot": 10, "tab_fraction": 0.9, // optional
///     "opening_discount": -0.25,      // optional
///     "bid_interval_seconds": 60      // optional
///   }
///
/// Fractions may also be written as strings such as "3.5%".
ThresholdScenario parse_scenario(std::string_view json_text);

/// Outcome as a JSON document; `include_trace` adds the bid-by-bid trajectory.
std::string simulation_to_json(const SimulationResult& result, bool include_trace);

}  // namespace makerbid

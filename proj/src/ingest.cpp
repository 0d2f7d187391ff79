#include "makerbid/ingest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <unordered_map>

#include <fmt/format.h>
#include <json.hpp>

#include "makerbid/amm.hpp"
#include "makerbid/error.hpp"
#include "text_util.hpp"

namespace makerbid {

const char* to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::Kick: return "kick";
    case EventKind::Tend: return "tend";
    case EventKind::Dent: return "dent";
    case EventKind::Deal: return "deal";
  }
  return "unknown";
}

const char* to_string(PoolVersion version) noexcept {
  return version == PoolVersion::V1 ? "v1" : "v2";
}

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::string_view kEventColumns[] = {"auction_id", "kind", "bid_dai", "lot_weth", "timestamp",
                                             "gas_price_gwei", "gas_used", "bidder_address"};
constexpr std::string_view kReserveColumns[] = {"timestamp", "version", "dai_reserve", "weth_reserve"};
constexpr std::string_view kGasColumns[] = {"token_count", "gas_used"};

// One input record with its fields as text, whichever format it came from.
class Record {
public:
  Record(std::size_t line, std::unordered_map<std::string, std::string> fields)
      : line_(line), fields_(std::move(fields)) {}

  std::size_t line() const noexcept { return line_; }

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::Parse, fmt::format("line {}: {}", line_, what));
  }

  const std::string& text(std::string_view name) const {
    const auto it = fields_.find(std::string(name));
    if (it == fields_.end()) error(fmt::format("missing field '{}'", name));
    return it->second;
  }

  double non_negative(std::string_view name) const {
    const auto v = detail::parse_double(text(name));
    if (!v || !std::isfinite(*v)) error(fmt::format("field '{}' is not a number", name));
    if (*v < 0.0) error(fmt::format("field '{}' must be non-negative, got {}", name, *v));
    return *v;
  }

  double positive(std::string_view name) const {
    const double v = non_negative(name);
    if (v <= 0.0) error(fmt::format("field '{}' must be positive", name));
    return v;
  }

  std::int64_t integer(std::string_view name) const {
    const auto v = detail::parse_int(text(name));
    if (!v) error(fmt::format("field '{}' is not an integer", name));
    if (*v < 0) error(fmt::format("field '{}' must be non-negative, got {}", name, *v));
    return *v;
  }

private:
  std::size_t line_;
  std::unordered_map<std::string, std::string> fields_;
};

std::string json_field_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return {};
  return v.dump();
}

template <std::size_t N>
std::vector<Record> read_records(std::string_view text, const std::string_view (&columns)[N]) {
  const auto lines = detail::split_lines(text);
  std::vector<Record> records;
  std::size_t first = 0;
  while (first < lines.size() && detail::trim(lines[first]).empty()) ++first;
  if (first == lines.size()) return records;

  if (detail::trim(lines[first]).front() == '{') {
    for (std::size_t i = first; i < lines.size(); ++i) {
      const auto line = detail::trim(lines[i]);
      if (line.empty()) continue;
      json obj;
      try {
        obj = json::parse(line);
      } catch (const json::parse_error&) {
        fail(ErrorCode::Parse, fmt::format("line {}: malformed JSON record", i + 1));
      }
      if (!obj.is_object()) fail(ErrorCode::Parse, fmt::format("line {}: record is not an object", i + 1));
      std::unordered_map<std::string, std::string> fields;
      for (const auto& [key, value] : obj.items()) fields.emplace(key, json_field_text(value));
      records.emplace_back(i + 1, std::move(fields));
    }
    return records;
  }

  const auto header = detail::split(detail::trim(lines[first]), ',');
  std::vector<std::string> names;
  for (const auto h : header) names.emplace_back(detail::trim(h));
  for (const auto col : columns) {
    if (std::find(names.begin(), names.end(), col) == names.end()) {
      fail(ErrorCode::Parse, fmt::format("line {}: header lacks column '{}'", first + 1, col));
    }
  }
  for (std::size_t i = first + 1; i < lines.size(); ++i) {
    const auto line = detail::trim(lines[i]);
    if (line.empty()) continue;
    const auto cells = detail::split(line, ',');
    if (cells.size() != names.size()) {
      fail(ErrorCode::Parse,
           fmt::format("line {}: expected {} fields, found {}", i + 1, names.size(), cells.size()));
    }
    std::unordered_map<std::string, std::string> fields;
    for (std::size_t c = 0; c < cells.size(); ++c) fields.emplace(names[c], detail::trim(cells[c]));
    records.emplace_back(i + 1, std::move(fields));
  }
  return records;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

EventKind parse_kind(const Record& r) {
  const auto k = lower(detail::trim(r.text("kind")));
  if (k == "kick") return EventKind::Kick;
  if (k == "tend") return EventKind::Tend;
  if (k == "dent") return EventKind::Dent;
  if (k == "deal") return EventKind::Deal;
  r.error(fmt::format("unknown event kind '{}'", r.text("kind")));
}

PoolVersion parse_version(const Record& r) {
  const auto v = lower(detail::trim(r.text("version")));
  if (v == "v1" || v == "1") return PoolVersion::V1;
  if (v == "v2" || v == "2") return PoolVersion::V2;
  r.error(fmt::format("unknown pool version '{}'", r.text("version")));
}

void check_auction_sequences(const std::vector<AuctionEvent>& events) {
  std::size_t i = 0;
  while (i < events.size()) {
    std::size_t j = i;
    int deals = 0;
    int kicks = 0;
    while (j < events.size() && events[j].auction_id == events[i].auction_id) {
      const auto& e = events[j];
      if (e.kind == EventKind::Deal) {
        if (++deals > 1) {
          fail(ErrorCode::DataIntegrity, fmt::format("auction {} has more than one deal", e.auction_id));
        }
      } else if (deals > 0) {
        fail(ErrorCode::DataIntegrity, fmt::format("auction {} has events after its deal", e.auction_id));
      }
      if (e.kind == EventKind::Kick && ++kicks > 1) {
        fail(ErrorCode::DataIntegrity, fmt::format("auction {} was kicked twice", e.auction_id));
      }
      ++j;
    }
    i = j;
  }
}

}  // namespace

TimeWindow parse_window(std::string_view text) {
  const auto parts = detail::split(detail::trim(text), ',');
  if (parts.size() != 2) fail(ErrorCode::InvalidArgument, "window must be 'start,end'");
  const auto a = detail::trim(parts[0]);
  const auto b = detail::trim(parts[1]);

  const auto as_date = [](std::string_view s) -> std::optional<std::int64_t> {
    const auto fields = detail::split(s, '-');
    if (fields.size() != 3) return std::nullopt;
    const auto y = detail::parse_int(fields[0]);
    const auto m = detail::parse_int(fields[1]);
    const auto d = detail::parse_int(fields[2]);
    if (!y || !m || !d) return std::nullopt;
    using namespace std::chrono;
    const year_month_day ymd{year(static_cast<int>(*y)), month(static_cast<unsigned>(*m)),
                             day(static_cast<unsigned>(*d))};
    if (!ymd.ok()) return std::nullopt;
    return sys_seconds(sys_days(ymd)).time_since_epoch().count();
  };

  TimeWindow w;
  if (const auto da = as_date(a), db = as_date(b); da && db) {
    w = {*da, *db + 86400};
  } else {
    const auto sa = detail::parse_int(a);
    const auto sb = detail::parse_int(b);
    if (!sa || !sb) {
      fail(ErrorCode::InvalidArgument, fmt::format("cannot parse window '{}'", text));
    }
    w = {*sa, *sb};
  }
  if (w.end <= w.start) fail(ErrorCode::InvalidArgument, "window end must follow its start");
  return w;
}

std::vector<AuctionEvent> parse_events(std::string_view text) {
  std::vector<AuctionEvent> events;
  for (const auto& r : read_records(text, kEventColumns)) {
    AuctionEvent e;
    e.auction_id = static_cast<std::uint64_t>(r.integer("auction_id"));
    e.kind = parse_kind(r);
    e.bid_dai = r.non_negative("bid_dai");
    e.lot_weth = r.non_negative("lot_weth");
    e.timestamp = r.integer("timestamp");
    e.gas_price_gwei = r.non_negative("gas_price_gwei");
    e.gas_used = r.integer("gas_used");
    e.bidder_address = std::string(detail::trim(r.text("bidder_address")));
    if (e.bidder_address.find(',') != std::string::npos) r.error("bidder_address may not contain commas");
    events.push_back(std::move(e));
  }
  std::stable_sort(events.begin(), events.end(), [](const AuctionEvent& x, const AuctionEvent& y) {
    return std::tie(x.auction_id, x.timestamp) < std::tie(y.auction_id, y.timestamp);
  });
  check_auction_sequences(events);
  return events;
}

std::vector<ReserveSnapshot> parse_reserves(std::string_view text) {
  std::vector<ReserveSnapshot> out;
  for (const auto& r : read_records(text, kReserveColumns)) {
    out.push_back({r.integer("timestamp"), parse_version(r), r.positive("dai_reserve"),
                   r.positive("weth_reserve")});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ReserveSnapshot& x, const ReserveSnapshot& y) { return x.timestamp < y.timestamp; });
  return out;
}

std::vector<GasSample> parse_gas_samples(std::string_view text) {
  std::vector<GasSample> out;
  for (const auto& r : read_records(text, kGasColumns)) {
    GasSample s{r.integer("token_count"), r.integer("gas_used")};
    if (s.token_count < 2) r.error("token_count must be at least 2");
    if (s.gas_used <= 0) r.error("gas_used must be positive");
    out.push_back(s);
  }
  return out;
}

std::string serialize_events(std::span<const AuctionEvent> events, FileFormat format) {
  std::string out;
  if (format == FileFormat::Csv) {
    out = "auction_id,kind,bid_dai,lot_weth,timestamp,gas_price_gwei,gas_used,bidder_address\n";
    for (const auto& e : events) {
      out += fmt::format("{},{},{},{},{},{},{},{}\n", e.auction_id, to_string(e.kind), e.bid_dai, e.lot_weth,
                         e.timestamp, e.gas_price_gwei, e.gas_used, e.bidder_address);
    }
    return out;
  }
  for (const auto& e : events) {
    ordered_json j = {{"auction_id", e.auction_id},         {"kind", to_string(e.kind)},
                      {"bid_dai", e.bid_dai},               {"lot_weth", e.lot_weth},
                      {"timestamp", e.timestamp},           {"gas_price_gwei", e.gas_price_gwei},
                      {"gas_used", e.gas_used},             {"bidder_address", e.bidder_address}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string serialize_reserves(std::span<const ReserveSnapshot> snapshots, FileFormat format) {
  std::string out;
  if (format == FileFormat::Csv) {
    out = "timestamp,version,dai_reserve,weth_reserve\n";
    for (const auto& s : snapshots) {
      out += fmt::format("{},{},{},{}\n", s.timestamp, to_string(s.version), s.dai_reserve, s.weth_reserve);
    }
    return out;
  }
  for (const auto& s : snapshots) {
    ordered_json j = {{"timestamp", s.timestamp},
                      {"version", to_string(s.version)},
                      {"dai_reserve", s.dai_reserve},
                      {"weth_reserve", s.weth_reserve}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<WinningBid> winning_bids(std::span<const AuctionEvent> events, const TimeWindow& window) {
  std::vector<WinningBid> out;
  const AuctionEvent* last_bid = nullptr;
  std::optional<std::uint64_t> current;
  for (const auto& e : events) {
    if (current != e.auction_id) {
      current = e.auction_id;
      last_bid = nullptr;
    }
    if (e.is_bid()) {
      last_bid = &e;
    } else if (e.kind == EventKind::Deal && window.contains(e.timestamp)) {
      if (last_bid == nullptr) {
        fail(ErrorCode::DataIntegrity, fmt::format("auction {} was dealt without any bid", e.auction_id));
      }
      if (last_bid->lot_weth <= 0.0 || last_bid->bid_dai <= 0.0) {
        fail(ErrorCode::DataIntegrity,
             fmt::format("auction {}: winning bid has a zero payment or lot", e.auction_id));
      }
      out.push_back({e.auction_id, last_bid->bid_dai, last_bid->lot_weth, last_bid->timestamp,
                     last_bid->gas_price_gwei, e.timestamp});
    }
  }
  return out;
}

std::vector<AuctionEvent> events_in_window(std::span<const AuctionEvent> events, const TimeWindow& window) {
  std::vector<std::uint64_t> dealt;
  for (const auto& e : events) {
    if (e.kind == EventKind::Deal && window.contains(e.timestamp)) dealt.push_back(e.auction_id);
  }
  std::sort(dealt.begin(), dealt.end());
  std::vector<AuctionEvent> out;
  for (const auto& e : events) {
    if (std::binary_search(dealt.begin(), dealt.end(), e.auction_id)) out.push_back(e);
  }
  return out;
}

double win_probability(std::span<const AuctionEvent> events) {
  std::size_t bids = 0;
  std::size_t wins = 0;
  for (const auto& e : events) {
    if (e.is_bid()) ++bids;
    if (e.kind == EventKind::Deal) ++wins;
  }
  if (bids == 0) fail(ErrorCode::UndefinedStatistic, "win probability needs at least one bid");
  return static_cast<double>(wins) / static_cast<double>(bids);
}

ReserveSnapshot select_reserves(std::span<const ReserveSnapshot> snapshots, std::int64_t at) {
  const ReserveSnapshot* latest[2] = {nullptr, nullptr};
  for (const auto& s : snapshots) {
    if (s.timestamp > at) continue;
    auto& slot = latest[s.version == PoolVersion::V1 ? 0 : 1];
    if (slot == nullptr || s.timestamp >= slot->timestamp) slot = &s;
  }
  const auto* v1 = latest[0];
  const auto* v2 = latest[1];
  if (!v1 && !v2) {
    fail(ErrorCode::MissingData, fmt::format("no reserve snapshot at or before t={}", at));
  }
  if (!v1) return *v2;
  if (!v2) return *v1;
  return v1->dai_reserve > v2->dai_reserve ? *v1 : *v2;
}

GasRegression fit_gas_regression(std::span<const GasSample> samples) {
  if (samples.size() < 2) fail(ErrorCode::SingularFit, "regression needs at least two samples");
  const double n = static_cast<double>(samples.size());
  double mean_t = 0.0;
  double mean_g = 0.0;
  for (const auto& s : samples) {
    mean_t += static_cast<double>(s.token_count);
    mean_g += static_cast<double>(s.gas_used);
  }
  mean_t /= n;
  mean_g /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& s : samples) {
    const double dt = static_cast<double>(s.token_count) - mean_t;
    sxx += dt * dt;
    sxy += dt * (static_cast<double>(s.gas_used) - mean_g);
  }
  if (sxx == 0.0) fail(ErrorCode::SingularFit, "all samples share one token count");
  const double slope = sxy / sxx;
  return {slope, mean_g - slope * mean_t};
}

std::int64_t gas_mode(std::span<const std::int64_t> gas_used) {
  if (gas_used.empty()) fail(ErrorCode::UndefinedStatistic, "mode of an empty sample");
  std::map<std::int64_t, std::size_t> counts;
  for (const auto g : gas_used) ++counts[g];
  std::int64_t best = 0;
  std::size_t best_count = 0;
  for (const auto& [value, count] : counts) {
    if (count >= best_count) {  // ascending keys: ties go to the larger value
      best = value;
      best_count = count;
    }
  }
  return best;
}

std::int64_t bids_per_year(double window_days, std::size_t auction_count) {
  if (!std::isfinite(window_days) || window_days <= 0.0) {
    fail(ErrorCode::InvalidArgument, "window length must be positive");
  }
  const double per_day = std::round(static_cast<double>(auction_count) / window_days);
  return static_cast<std::int64_t>(per_day) * 365;
}

std::vector<WinningBid> filter_price_outliers(std::span<const WinningBid> bids,
                                              std::span<const ReserveSnapshot> snapshots,
                                              double max_multiple) {
  if (!(max_multiple > 0.0)) fail(ErrorCode::InvalidArgument, "price multiple must be positive");
  std::vector<WinningBid> out;
  for (const auto& b : bids) {
    try {
      const auto snap = select_reserves(snapshots, b.timestamp);
      const double market = snap.dai_reserve / snap.weth_reserve;
      if (b.price() > max_multiple * market) continue;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MissingData) throw;
    }
    out.push_back(b);
  }
  return out;
}

}  // namespace makerbid

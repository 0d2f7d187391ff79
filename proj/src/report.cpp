#include "makerbid/report.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include <fmt/format.h>

#include "makerbid/error.hpp"
#include "text_util.hpp"

namespace makerbid {

const char* to_string(CostMode mode) noexcept {
  return mode == CostMode::FullCost ? "full_cost" : "no_capital";
}

const char* to_string(Verdict verdict) noexcept {
  return verdict == Verdict::ActualAboveOptimal ? "actual_above_optimal" : "actual_below_optimal";
}

const char* to_string(Bucket bucket) noexcept {
  switch (bucket) {
    case Bucket::UpTo1k: return "up_to_1k";
    case Bucket::To10k: return "1k_to_10k";
    case Bucket::Above10k: return "above_10k";
  }
  return "unknown";
}

Bucket bucket_for(double bid_value) noexcept {
  if (bid_value <= 1000.0) return Bucket::UpTo1k;
  if (bid_value <= 10000.0) return Bucket::To10k;
  return Bucket::Above10k;
}

Verdict verdict_for(double actual_discount, double optimal_discount) noexcept {
  return actual_discount > optimal_discount ? Verdict::ActualAboveOptimal : Verdict::ActualBelowOptimal;
}

std::size_t BucketSummary::bucket_total(Bucket b) const noexcept {
  const auto& row = counts[static_cast<std::size_t>(b)];
  return row[0] + row[1];
}

std::size_t BucketSummary::verdict_total(Verdict v) const noexcept {
  std::size_t n = 0;
  for (const auto& row : counts) n += row[static_cast<std::size_t>(v)];
  return n;
}

std::size_t BucketSummary::total() const noexcept {
  return verdict_total(Verdict::ActualAboveOptimal) + verdict_total(Verdict::ActualBelowOptimal);
}

BucketSummary summarize(std::span<const ComparisonRow> rows) {
  BucketSummary s;
  for (const auto& r : rows) {
    ++s.counts[static_cast<std::size_t>(r.bucket)][static_cast<std::size_t>(r.verdict)];
  }
  return s;
}

ComparisonRow compare_bid(const WinningBid& bid, const ReserveSnapshot& reserves, const ModelParams& params,
                          const CompareOptions& options) {
  const auto ctx = params.context(bid.bid_dai, bid.gas_price_gwei, reserves.dai_reserve, reserves.weth_reserve);
  ComparisonRow row;
  row.auction_id = bid.auction_id;
  row.bid_value = bid.bid_dai;
  row.timestamp = bid.timestamp;
  row.pool_version = reserves.version;
  row.market_price = exchange_rate(ctx.pool);
  row.actual_price = bid.price();
  row.actual_discount = row.actual_price / row.market_price - 1.0;

  // The optimum is always found with the capital charge in place; no-capital
  // mode only drops it from the total afterwards.
  row.optimum = optimize(ctx, params.gas, options.bounds);
  row.cost = options.mode == CostMode::NoCapital ? row.optimum.cost.without_capital() : row.optimum.cost;
  row.optimal_discount = min_discount(row.cost, bid.bid_dai);
  row.optimal_price = row.market_price * (1.0 + row.optimal_discount);
  row.verdict = verdict_for(row.actual_discount, row.optimal_discount);
  row.bucket = bucket_for(bid.bid_dai);

  if (options.verify_grid) {
    const auto grid = GridSpec::log_spaced(bid.bid_dai, options.grid_points, options.grid_points);
    row.grid_cost = grid_oracle(ctx, params.gas, grid).cost.total_dai;
  }
  return row;
}

namespace {

struct RowResult {
  std::optional<ComparisonRow> row;
  std::optional<RowError> error;
};

RowResult compare_guarded(const WinningBid& bid, std::span<const ReserveSnapshot> reserves,
                          const ModelParams& params, const CompareOptions& options) {
  ReserveSnapshot snap;
  try {
    snap = select_reserves(reserves, bid.timestamp);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::MissingData) throw;
    return {std::nullopt, RowError{bid.auction_id, e.what()}};
  }
  return {compare_bid(bid, snap, params, options), std::nullopt};
}

}  // namespace

Comparison compare(std::span<const WinningBid> bids, std::span<const ReserveSnapshot> reserves,
                   const ModelParams& params, const CompareOptions& options) {
  params.validate();
  std::vector<WinningBid> ordered(bids.begin(), bids.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const WinningBid& a, const WinningBid& b) { return a.auction_id < b.auction_id; });

  std::vector<RowResult> results(ordered.size());
  unsigned workers = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(ordered.size(), 1)));

  // Each worker fills a strided slice of `results`; order is fixed by index.
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < ordered.size(); i += workers) {
        results[i] = compare_guarded(ordered[i], reserves, params, options);
      }
    }));
  }
  for (auto& j : jobs) j.get();

  Comparison out;
  out.mode = options.mode;
  for (auto& r : results) {
    if (r.error) {
      out.errors.push_back(std::move(*r.error));
      continue;
    }
    auto& row = *r.row;
    if (row.grid_cost &&
        row.optimum.cost.total_dai > *row.grid_cost * (1.0 + options.grid_tolerance)) {
      ++out.grid_mismatches;
    }
    out.rows.push_back(std::move(row));
  }
  out.summary = summarize(out.rows);
  return out;
}

std::string comparison_csv(const Comparison& c) {
  std::string out =
      "auction_id,bid_value,timestamp,pool_version,market_price,actual_price,optimal_price,"
      "actual_discount,optimal_discount,verdict,bucket,v_max,rebalance_margin,branch,"
      "gas_fee_dai,slippage_cost_dai,capital_cost_bid_dai,total_cost_dai\n";
  for (const auto& r : c.rows) {
    const auto& cost = r.cost;
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.auction_id, r.bid_value,
                       r.timestamp, to_string(r.pool_version), r.market_price, r.actual_price, r.optimal_price,
                       r.actual_discount, r.optimal_discount, to_string(r.verdict), to_string(r.bucket),
                       r.optimum.v_max, r.optimum.rebalance_margin, to_string(r.optimum.branch),
                       cost.gas_fee_dai, cost.slippage_cost_dai, cost.capital_cost_bid_dai, cost.total_dai);
  }
  return out;
}

namespace {

constexpr Bucket kBuckets[] = {Bucket::UpTo1k, Bucket::To10k, Bucket::Above10k};

const char* bucket_label(Bucket b) {
  switch (b) {
    case Bucket::UpTo1k: return "$1 - $1,000";
    case Bucket::To10k: return "$1,001 - $10,000";
    case Bucket::Above10k: return "> $10,000";
  }
  return "?";
}

long percent(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0 : std::lround(100.0 * static_cast<double>(part) / static_cast<double>(whole));
}

}  // namespace

std::string summary_csv(const Comparison& c) {
  const auto& s = c.summary;
  std::string out = "bucket,actual_above_optimal,actual_below_optimal,total\n";
  for (const auto b : kBuckets) {
    out += fmt::format("{},{},{},{}\n", to_string(b), s.count(b, Verdict::ActualAboveOptimal),
                       s.count(b, Verdict::ActualBelowOptimal), s.bucket_total(b));
  }
  out += fmt::format("all,{},{},{}\n", s.verdict_total(Verdict::ActualAboveOptimal),
                     s.verdict_total(Verdict::ActualBelowOptimal), s.total());
  return out;
}

std::string comparison_text(const Comparison& c) {
  const auto& s = c.summary;
  std::string out;
  out += fmt::format("# mode: {}\n", to_string(c.mode));
  out += fmt::format("# market price: {}\n", kMarketPriceSource);
  out += fmt::format("# auctions analysed: {}\n\n", s.total());
  out += fmt::format("{:<18}{:>10}{:>6}{:>10}{:>6}{:>8}\n", "Bid value", "Act>Opt", "%", "Act<=Opt", "%", "Total");
  const auto line = [&](const char* label, std::size_t above, std::size_t below) {
    const std::size_t total = above + below;
    out += fmt::format("{:<18}{:>10}{:>6}{:>10}{:>6}{:>8}\n", label, above, percent(above, total), below,
                       percent(below, total), total);
  };
  for (const auto b : kBuckets) {
    line(bucket_label(b), s.count(b, Verdict::ActualAboveOptimal), s.count(b, Verdict::ActualBelowOptimal));
  }
  line("All", s.verdict_total(Verdict::ActualAboveOptimal), s.verdict_total(Verdict::ActualBelowOptimal));
  if (!c.errors.empty()) {
    out += fmt::format("\nwarning: {} auction(s) excluded for missing data\n", c.errors.size());
    for (const auto& e : c.errors) out += fmt::format("  auction {}: {}\n", e.auction_id, e.message);
  }
  if (c.grid_mismatches != 0) {
    out += fmt::format("\nwarning: {} auction(s) disagree with the grid oracle\n", c.grid_mismatches);
  }
  return out;
}

std::vector<CurvePoint> cost_curve(const ModelParams& params, double gas_price_gwei, double dai_reserve,
                                   double weth_reserve, double b_from, double b_to, std::size_t per_decade,
                                   const SearchBounds& bounds) {
  if (!(b_from > 0.0) || !(b_to >= b_from) || per_decade == 0 || !std::isfinite(b_to)) {
    fail(ErrorCode::InvalidArgument, "curve needs 0 < from <= to and at least one sample per decade");
  }
  const double decades = std::log10(b_to / b_from);
  const auto steps = static_cast<std::size_t>(std::llround(decades * static_cast<double>(per_decade)));
  std::vector<CurvePoint> out;
  out.reserve(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    double b = steps == 0 ? b_from
                          : b_from * std::pow(10.0, decades * static_cast<double>(i) / static_cast<double>(steps));
    if (i == steps) b = b_to;
    const auto ctx = params.context(b, gas_price_gwei, dai_reserve, weth_reserve);
    out.push_back({b, optimize(ctx, params.gas, bounds)});
  }
  return out;
}

std::string curve_csv(std::span<const CurvePoint> points) {
  std::string out =
      "bid_value,min_discount,total_cost_dai,gas_fee_dai,slippage_cost_dai,capital_cost_bid_dai,v_max,"
      "rebalance_margin,branch\n";
  for (const auto& p : points) {
    const auto& o = p.optimum;
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", p.bid_value, o.min_discount, o.cost.total_dai,
                       o.cost.gas_fee_dai, o.cost.slippage_cost_dai, o.cost.capital_cost_bid_dai, o.v_max,
                       o.rebalance_margin, to_string(o.branch));
  }
  return out;
}

std::string scatter_csv(std::span<const ComparisonRow> rows) {
  std::string out = "auction_id,bid_value,optimal_discount,actual_discount\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{}\n", r.auction_id, r.bid_value, r.optimal_discount, r.actual_discount);
  }
  return out;
}

PlotFiles emit_plots(const Comparison* comparison, std::span<const CurvePoint> curve,
                     const std::filesystem::path& dir) {
  if (comparison == nullptr && curve.empty()) {
    fail(ErrorCode::InvalidArgument, "nothing to plot");
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());

  PlotFiles files;
  const auto write = [&](const char* name, const std::string& content) {
    const auto path = dir / name;
    detail::write_file(path, content);
    files.written.push_back(path);
  };
  if (!curve.empty()) write("min_discount_curve.csv", curve_csv(curve));
  if (comparison != nullptr) {
    std::vector<ComparisonRow> small;
    std::vector<ComparisonRow> large;
    for (const auto& r : comparison->rows) (r.bid_value <= 1000.0 ? small : large).push_back(r);
    write("scatter_upto_1k.csv", scatter_csv(small));
    write("scatter_above_1k.csv", scatter_csv(large));
  }
  return files;
}

}  // namespace makerbid

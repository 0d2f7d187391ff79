// makerbid command-line front end. Talks to the library only through the C API.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "makerbid/makerbid.h"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kIllPosed = 3 };

struct Failure : std::runtime_error {
  mb_status status;
  Failure(mb_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(mb_status status) {
  if (status != MB_OK) throw Failure(status, mb_last_error());
}

int exit_code_for(mb_status status) {
  switch (status) {
    case MB_OK: return kOk;
    case MB_ERR_INVALID_ARGUMENT: return kUsage;
    case MB_ERR_ILL_POSED: return kIllPosed;
    default: return kData;
  }
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const noexcept { Destroy(p); }
};
using ParamsPtr = std::unique_ptr<mb_params, Deleter<mb_params, mb_params_destroy>>;
using DatasetPtr = std::unique_ptr<mb_dataset, Deleter<mb_dataset, mb_dataset_destroy>>;
using ComparisonPtr = std::unique_ptr<mb_comparison, Deleter<mb_comparison, mb_comparison_destroy>>;

struct OwnedString {
  char* text = nullptr;
  ~OwnedString() { mb_string_free(text); }
};

struct Globals {
  std::string params_path;
  std::string window;
  bool no_capital = false;
  bool verify_grid = false;
};

ParamsPtr load_params(const Globals& g) {
  mb_params* raw = nullptr;
  check(g.params_path.empty() ? mb_params_create(&raw) : mb_params_load(g.params_path.c_str(), &raw));
  return ParamsPtr(raw);
}

DatasetPtr load_dataset(const Globals& g, const std::string& events, const std::string& reserves,
                        double price_filter) {
  mb_dataset* raw = nullptr;
  check(mb_dataset_create(&raw));
  DatasetPtr ds(raw);
  if (!g.window.empty()) {
    mb_window w{};
    check(mb_parse_window(g.window.c_str(), &w));
    check(mb_dataset_set_window(ds.get(), &w));
  }
  check(mb_dataset_load_events(ds.get(), events.c_str()));
  if (!reserves.empty()) check(mb_dataset_load_reserves(ds.get(), reserves.c_str()));
  if (price_filter > 0.0) check(mb_dataset_set_price_filter(ds.get(), price_filter));
  return ds;
}

void print_cost(const char* label, const mb_cost_breakdown& c) {
  fmt::print("{}\n", label);
  fmt::print("  bid fee (ETH)            {:.9f}\n", c.bid_fee_eth);
  fmt::print("  rebalance fee (ETH)      {:.9f}\n", c.rebalance_fee_eth);
  fmt::print("  gas fee (DAI)            {:.6f}\n", c.gas_fee_dai);
  fmt::print("  slippage (DAI)           {:.6f}\n", c.slippage_cost_dai);
  fmt::print("  capital, annual (DAI)    {:.6f}\n", c.capital_cost_annual_dai);
  fmt::print("  capital, per bid (DAI)   {:.6f}\n", c.capital_cost_bid_dai);
  fmt::print("  total (DAI)              {:.6f}\n", c.total_dai);
}

// ---- ingest -----------------------------------------------------------------

struct IngestArgs {
  std::string events;
  std::string reserves;
  std::string gas_samples;
  std::string write_path;
  std::string format = "csv";
  double price_filter = 0.0;
  bool list = false;
};

int run_ingest(const Globals& g, const IngestArgs& a) {
  auto ds = load_dataset(g, a.events, a.reserves, a.price_filter);
  mb_dataset_stats s{};
  check(mb_dataset_stats_get(ds.get(), &s));

  fmt::print("events              {}\n", s.event_count);
  fmt::print("auctions            {}\n", s.auction_count);
  fmt::print("window days         {:.4f}\n", s.window_days);
  fmt::print("deals in window     {}\n", s.deals_in_window);
  fmt::print("bids in window      {}\n", s.bids_in_window);
  if (std::isnan(s.win_probability)) {
    fmt::print("win probability     undefined (no bids)\n");
  } else {
    fmt::print("win probability     {:.4f} ({:.0f}%)\n", s.win_probability, s.win_probability * 100.0);
  }
  fmt::print("bids per year       {}\n", s.bids_per_year);
  fmt::print("reserve snapshots   {}\n", s.reserve_snapshots);
  if (s.bids_per_year == 0) fmt::print("warning: fewer than one auction per day; b_year would be zero\n");

  if (!a.gas_samples.empty()) {
    mb_gas_fit fit{};
    check(mb_fit_gas_samples(a.gas_samples.c_str(), &fit));
    fmt::print("gas samples         {}\n", fit.sample_count);
    fmt::print("gas slope           {:.3f}\n", fit.slope);
    fmt::print("gas intercept       {:.3f}\n", fit.intercept);
    fmt::print("gas predict(2)      {:.3f}\n", fit.predicted_two_tokens);
    if (fit.mode_gas_used != 0) fmt::print("gas mode (2 tokens) {}\n", fit.mode_gas_used);
  }

  if (a.list) {
    size_t n = 0;
    check(mb_dataset_winning_bid_count(ds.get(), &n));
    fmt::print("\nauction_id,bid_dai,lot_weth,price,timestamp,gas_price_gwei\n");
    for (size_t i = 0; i < n; ++i) {
      mb_winning_bid w{};
      check(mb_dataset_winning_bid(ds.get(), i, &w));
      fmt::print("{},{:.6f},{:.9f},{:.6f},{},{:.3f}\n", w.auction_id, w.bid_dai, w.lot_weth,
                 w.bid_dai / w.lot_weth, w.timestamp, w.gas_price_gwei);
    }
  }

  if (!a.write_path.empty()) {
    check(mb_dataset_write_events(ds.get(), a.format == "ndjson" ? 1 : 0, a.write_path.c_str()));
    fmt::print("wrote {}\n", a.write_path);
  }
  return kOk;
}

// ---- optimize ---------------------------------------------------------------

struct OptimizeArgs {
  mb_auction_input input{};
  double r_ceiling_factor = 0.0;
  size_t grid_points = 2000;
};

int run_optimize(const Globals& g, const OptimizeArgs& a) {
  auto params = load_params(g);
  mb_optimization opt{};
  check(mb_optimize(params.get(), &a.input, a.r_ceiling_factor, &opt));

  fmt::print("bid value (DAI)          {:.6f}\n", a.input.bid_value);
  fmt::print("branch                   {}\n", opt.branch == MB_BRANCH_BID_GEQ_R ? "B>=R" : "B<R");
  fmt::print("V_max (DAI)              {:.6f}\n", opt.v_max);
  fmt::print("R (DAI)                  {:.6f}\n", opt.rebalance_margin);
  print_cost("cost at optimum", opt.cost);
  fmt::print("min discount             {:.6f}%\n", opt.min_discount * 100.0);
  if (g.no_capital) {
    const double c = opt.cost.total_dai - opt.cost.capital_cost_bid_dai;
    fmt::print("total without capital    {:.6f}\n", c);
    fmt::print("min discount w/o capital {:.6f}%\n", -c / a.input.bid_value * 100.0);
  }
  if (g.verify_grid) {
    mb_optimization grid{};
    check(mb_grid_oracle(params.get(), &a.input, a.grid_points, a.grid_points, &grid));
    const double gap = (opt.cost.total_dai - grid.cost.total_dai) / grid.cost.total_dai;
    fmt::print("grid oracle total (DAI)  {:.6f} (V_max {:.3f}, R {:.3f})\n", grid.cost.total_dai, grid.v_max,
               grid.rebalance_margin);
    fmt::print("relative gap             {:+.3e} {}\n", gap, gap <= 1e-3 ? "ok" : "MISMATCH");
    if (gap > 1e-3) return kData;
  }
  return kOk;
}

// ---- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string scenario;
  bool trace = false;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure(MB_ERR_IO, "cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

int run_simulate(const SimulateArgs& a) {
  const auto json = slurp(a.scenario);
  OwnedString out;
  check(mb_simulate_json(json.c_str(), a.trace ? 1 : 0, &out.text));
  fmt::print("{}\n", out.text);
  return kOk;
}

// ---- compare ----------------------------------------------------------------

struct CompareArgs {
  std::string events;
  std::string reserves;
  std::string out_dir;
  double r_ceiling_factor = 0.0;
  double price_filter = 0.0;
  unsigned threads = 0;
};

int run_compare(const Globals& g, const CompareArgs& a) {
  auto params = load_params(g);
  auto ds = load_dataset(g, a.events, a.reserves, a.price_filter);

  mb_compare_options opts{};
  opts.mode = g.no_capital ? MB_MODE_NO_CAPITAL : MB_MODE_FULL_COST;
  opts.r_ceiling_factor = a.r_ceiling_factor;
  opts.verify_grid = g.verify_grid ? 1 : 0;
  opts.threads = a.threads;

  mb_comparison* raw = nullptr;
  check(mb_compare(params.get(), ds.get(), &opts, &raw));
  ComparisonPtr cmp(raw);

  OwnedString text;
  check(mb_comparison_render_text(cmp.get(), &text.text));
  fmt::print("{}", text.text);

  if (!a.out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(a.out_dir, ec);
    if (ec) throw Failure(MB_ERR_IO, "cannot create " + a.out_dir + ": " + ec.message());
    const auto dir = std::filesystem::path(a.out_dir);
    check(mb_comparison_write_csv(cmp.get(), (dir / "comparison.csv").c_str()));
    check(mb_comparison_write_summary_csv(cmp.get(), (dir / "summary.csv").c_str()));
    check(mb_comparison_write_scatter(cmp.get(), dir.c_str()));
    fmt::print("wrote comparison.csv, summary.csv and scatter files to {}\n", a.out_dir);
  }

  mb_comparison_summary s{};
  check(mb_comparison_summary_get(cmp.get(), &s));
  if (g.verify_grid && s.grid_mismatches > 0) return kData;
  return kOk;
}

// ---- curve ------------------------------------------------------------------

struct CurveArgs {
  double gas_price = 0.0;
  double dai_reserve = 0.0;
  double weth_reserve = 0.0;
  double from = 10.0;
  double to = 1e6;
  size_t per_decade = 10;
  std::string out = "min_discount_curve.csv";
};

int run_curve(const Globals& g, const CurveArgs& a) {
  auto params = load_params(g);
  check(mb_write_curve(params.get(), a.gas_price, a.dai_reserve, a.weth_reserve, a.from, a.to, a.per_decade,
                       a.out.c_str()));
  fmt::print("wrote {}\n", a.out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Participation cost, optimal capital and minimum discount for Maker collateral auctions"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--params", g.params_path, "key = value parameter file")->check(CLI::ExistingFile);
  app.add_option("--window", g.window, "start,end as dates (inclusive days) or UTC seconds");
  app.add_flag("--no-capital", g.no_capital, "drop the per-bid capital charge from the totals");
  app.add_flag("--verify-grid", g.verify_grid, "cross-check every optimum against the exhaustive grid");

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "load auction events and print dataset statistics");
  ingest_cmd->add_option("--events", ingest.events, "events file (CSV or NDJSON)")->required();
  ingest_cmd->add_option("--reserves", ingest.reserves, "reserve snapshots file");
  ingest_cmd->add_option("--gas-samples", ingest.gas_samples, "token_count,gas_used samples for the gas fit");
  ingest_cmd->add_option("--price-filter", ingest.price_filter, "drop winners priced above this multiple of market");
  ingest_cmd->add_option("--write", ingest.write_path, "write the events back in canonical form");
  ingest_cmd->add_option("--format", ingest.format, "canonical output format")
      ->check(CLI::IsMember({"csv", "ndjson"}));
  ingest_cmd->add_flag("--list", ingest.list, "list winning bids");

  OptimizeArgs optimize;
  auto* optimize_cmd = app.add_subcommand("optimize", "minimise participation cost for one bid");
  optimize_cmd->add_option("--bid", optimize.input.bid_value, "bid value B in DAI")->required();
  optimize_cmd->add_option("--gas-price", optimize.input.gas_price_gwei, "gas price in gwei")->required();
  optimize_cmd->add_option("--dai-reserve", optimize.input.dai_reserve, "pool DAI reserve")->required();
  optimize_cmd->add_option("--weth-reserve", optimize.input.weth_reserve, "pool WETH reserve")->required();
  optimize_cmd->add_option("--r-ceiling-factor", optimize.r_ceiling_factor, "upper search bound for R, in multiples of B");
  optimize_cmd->add_option("--grid-points", optimize.grid_points, "grid size per axis for --verify-grid");

  SimulateArgs simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "run a threshold-bidder auction scenario");
  simulate_cmd->add_option("--scenario", simulate.scenario, "scenario JSON")->required()->check(CLI::ExistingFile);
  simulate_cmd->add_flag("--trace", simulate.trace, "include every accepted bid");

  CompareArgs compare;
  auto* compare_cmd = app.add_subcommand("compare", "compare historical winning prices with optimal prices");
  compare_cmd->add_option("--events", compare.events, "events file")->required();
  compare_cmd->add_option("--reserves", compare.reserves, "reserve snapshots file")->required();
  compare_cmd->add_option("--out-dir", compare.out_dir, "directory for CSV tables and scatter data");
  compare_cmd->add_option("--r-ceiling-factor", compare.r_ceiling_factor, "upper search bound for R, in multiples of B");
  compare_cmd->add_option("--price-filter", compare.price_filter, "drop winners priced above this multiple of market");
  compare_cmd->add_option("--threads", compare.threads, "worker threads (0 = all cores)");

  CurveArgs curve;
  auto* curve_cmd = app.add_subcommand("curve", "minimum discount as a function of bid value");
  curve_cmd->add_option("--gas-price", curve.gas_price, "gas price in gwei")->required();
  curve_cmd->add_option("--dai-reserve", curve.dai_reserve, "pool DAI reserve")->required();
  curve_cmd->add_option("--weth-reserve", curve.weth_reserve, "pool WETH reserve")->required();
  curve_cmd->add_option("--from", curve.from, "smallest bid value")->capture_default_str();
  curve_cmd->add_option("--to", curve.to, "largest bid value")->capture_default_str();
  curve_cmd->add_option("--per-decade", curve.per_decade, "samples per decade")->capture_default_str();
  curve_cmd->add_option("--out", curve.out, "output CSV")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*ingest_cmd) return run_ingest(g, ingest);
    if (*optimize_cmd) return run_optimize(g, optimize);
    if (*simulate_cmd) return run_simulate(simulate);
    if (*compare_cmd) return run_compare(g, compare);
    if (*curve_cmd) return run_curve(g, curve);
  } catch (const Failure& f) {
    fmt::print(stderr, "error ({}): {}\n", mb_status_name(f.status), f.what());
    return exit_code_for(f.status);
  }
  return kUsage;
}

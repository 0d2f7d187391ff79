#include "makerbid/makerbid.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <set>
#include <string>

#include "makerbid/error.hpp"
#include "makerbid/ingest.hpp"
#include "makerbid/optimizer.hpp"
#include "makerbid/params.hpp"
#include "makerbid/report.hpp"
#include "makerbid/scenario.hpp"
#include "text_util.hpp"

struct mb_params {
  makerbid::ModelParams value;
};

struct mb_dataset {
  std::vector<makerbid::AuctionEvent> events;
  std::vector<makerbid::ReserveSnapshot> reserves;
  std::optional<makerbid::TimeWindow> window;
  double price_filter = 0.0;
  // Derived whenever the inputs change.
  std::vector<makerbid::WinningBid> winners;

  makerbid::TimeWindow effective_window() const {
    if (window) return *window;
    if (events.empty()) return {0, 1};
    std::int64_t lo = std::numeric_limits<std::int64_t>::max();
    std::int64_t hi = std::numeric_limits<std::int64_t>::min();
    for (const auto& e : events) {
      lo = std::min(lo, e.timestamp);
      hi = std::max(hi, e.timestamp);
    }
    return {lo, hi + 1};
  }

  void refresh() {
    winners = makerbid::winning_bids(events, effective_window());
    if (price_filter > 0.0) winners = makerbid::filter_price_outliers(winners, reserves, price_filter);
  }
};

struct mb_comparison {
  makerbid::Comparison value;
};

namespace {

using makerbid::Error;
using makerbid::ErrorCode;

thread_local std::string g_last_error;

mb_status status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return MB_ERR_INVALID_ARGUMENT;
    case ErrorCode::Parse: return MB_ERR_PARSE;
    case ErrorCode::DataIntegrity: return MB_ERR_DATA_INTEGRITY;
    case ErrorCode::MissingData: return MB_ERR_MISSING_DATA;
    case ErrorCode::UndefinedStatistic: return MB_ERR_UNDEFINED_STATISTIC;
    case ErrorCode::SingularFit: return MB_ERR_SINGULAR_FIT;
    case ErrorCode::IllPosed: return MB_ERR_ILL_POSED;
    case ErrorCode::RejectedBid: return MB_ERR_REJECTED_BID;
    case ErrorCode::AuctionClosed: return MB_ERR_AUCTION_CLOSED;
    case ErrorCode::NotSettleable: return MB_ERR_NOT_SETTLEABLE;
    case ErrorCode::Io: return MB_ERR_IO;
  }
  return MB_ERR_INTERNAL;
}

template <class F>
mb_status guarded(F&& body) noexcept {
  g_last_error.clear();
  try {
    body();
    return MB_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_for(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MB_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return MB_ERR_INTERNAL;
  }
}

template <class... Ptrs>
void require(const Ptrs*... ptrs) {
  if (((ptrs == nullptr) || ...)) makerbid::fail(ErrorCode::InvalidArgument, "null argument");
}

char* copy_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

makerbid::AuctionContext context_for(const mb_params* params, const mb_auction_input* in) {
  return params->value.context(in->bid_value, in->gas_price_gwei, in->dai_reserve, in->weth_reserve);
}

mb_cost_breakdown to_c(const makerbid::CostBreakdown& c) {
  return {c.bid_fee_eth,         c.rebalance_fee_eth,       c.gas_fee_dai, c.slippage_cost_dai,
          c.capital_cost_annual_dai, c.capital_cost_bid_dai, c.total_dai};
}

mb_optimization to_c(const makerbid::OptimizationResult& r) {
  return {r.v_max, r.rebalance_margin, to_c(r.cost), r.min_discount,
          r.branch == makerbid::Branch::BidGeqR ? MB_BRANCH_BID_GEQ_R : MB_BRANCH_BID_LT_R};
}

makerbid::SearchBounds bounds_for(double r_ceiling_factor) {
  makerbid::SearchBounds bounds;
  if (r_ceiling_factor > 0.0) bounds.r_ceiling_factor = r_ceiling_factor;
  return bounds;
}

}  // namespace

extern "C" {

const char* mb_last_error(void) { return g_last_error.c_str(); }

const char* mb_status_name(mb_status status) {
  switch (status) {
    case MB_OK: return "ok";
    case MB_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case MB_ERR_PARSE: return "parse_error";
    case MB_ERR_DATA_INTEGRITY: return "data_integrity";
    case MB_ERR_MISSING_DATA: return "missing_data";
    case MB_ERR_UNDEFINED_STATISTIC: return "undefined_statistic";
    case MB_ERR_SINGULAR_FIT: return "singular_fit";
    case MB_ERR_ILL_POSED: return "ill_posed";
    case MB_ERR_REJECTED_BID: return "rejected_bid";
    case MB_ERR_AUCTION_CLOSED: return "auction_closed";
    case MB_ERR_NOT_SETTLEABLE: return "not_settleable";
    case MB_ERR_IO: return "io_error";
    case MB_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

void mb_string_free(char* s) { std::free(s); }

mb_status mb_params_create(mb_params** out) {
  return guarded([&] {
    require(out);
    *out = new mb_params{};
  });
}

mb_status mb_params_parse(const char* text, mb_params** out) {
  return guarded([&] {
    require(text, out);
    *out = new mb_params{makerbid::parse_params(text)};
  });
}

mb_status mb_params_load(const char* path, mb_params** out) {
  return guarded([&] {
    require(path, out);
    *out = new mb_params{makerbid::load_params(path)};
  });
}

mb_status mb_params_get(const mb_params* params, const char* key, double* out) {
  return guarded([&] {
    require(params, key, out);
    *out = makerbid::get_param(params->value, key);
  });
}

mb_status mb_params_set(mb_params* params, const char* key, double value) {
  return guarded([&] {
    require(params, key);
    auto updated = params->value;
    makerbid::set_param(updated, key, value);
    updated.validate();
    params->value = updated;
  });
}

mb_status mb_parse_rate(const char* text, double* out) {
  return guarded([&] {
    require(text, out);
    *out = makerbid::parse_rate(text);
  });
}

void mb_params_destroy(mb_params* params) { delete params; }

mb_status mb_total_cost(const mb_params* params, const mb_auction_input* input, double v_max,
                        double rebalance_margin, mb_cost_breakdown* out) {
  return guarded([&] {
    require(params, input, out);
    const makerbid::Portfolio portfolio{v_max, rebalance_margin};
    portfolio.validate();
    *out = to_c(makerbid::total_cost(context_for(params, input), portfolio, params->value.gas));
  });
}

mb_status mb_optimize(const mb_params* params, const mb_auction_input* input, double r_ceiling_factor,
                      mb_optimization* out) {
  return guarded([&] {
    require(params, input, out);
    *out = to_c(makerbid::optimize(context_for(params, input), params->value.gas, bounds_for(r_ceiling_factor)));
  });
}

mb_status mb_grid_oracle(const mb_params* params, const mb_auction_input* input, size_t v_points,
                         size_t r_points, mb_optimization* out) {
  return guarded([&] {
    require(params, input, out);
    const auto grid = makerbid::GridSpec::log_spaced(input->bid_value, v_points, r_points);
    *out = to_c(makerbid::grid_oracle(context_for(params, input), params->value.gas, grid));
  });
}

mb_status mb_write_curve(const mb_params* params, double gas_price_gwei, double dai_reserve,
                         double weth_reserve, double b_from, double b_to, size_t per_decade, const char* path) {
  return guarded([&] {
    require(params, path);
    const auto curve =
        makerbid::cost_curve(params->value, gas_price_gwei, dai_reserve, weth_reserve, b_from, b_to, per_decade);
    makerbid::detail::write_file(path, makerbid::curve_csv(curve));
  });
}

mb_status mb_simulate_json(const char* scenario_json, int include_trace, char** out_json) {
  return guarded([&] {
    require(scenario_json, out_json);
    const auto scenario = makerbid::parse_scenario(scenario_json);
    const auto result = makerbid::simulate_threshold_auction(scenario);
    *out_json = copy_string(makerbid::simulation_to_json(result, include_trace != 0));
  });
}

mb_status mb_parse_window(const char* text, mb_window* out) {
  return guarded([&] {
    require(text, out);
    const auto w = makerbid::parse_window(text);
    *out = {w.start, w.end};
  });
}

mb_status mb_dataset_create(mb_dataset** out) {
  return guarded([&] {
    require(out);
    *out = new mb_dataset{};
  });
}

mb_status mb_dataset_load_events(mb_dataset* ds, const char* path) {
  return guarded([&] {
    require(ds, path);
    auto events = makerbid::parse_events(makerbid::detail::read_file(path));
    std::swap(ds->events, events);
    try {
      ds->refresh();
    } catch (...) {
      std::swap(ds->events, events);
      ds->refresh();
      throw;
    }
  });
}

mb_status mb_dataset_load_reserves(mb_dataset* ds, const char* path) {
  return guarded([&] {
    require(ds, path);
    ds->reserves = makerbid::parse_reserves(makerbid::detail::read_file(path));
    ds->refresh();
  });
}

mb_status mb_dataset_set_window(mb_dataset* ds, const mb_window* window) {
  return guarded([&] {
    require(ds);
    if (window != nullptr && window->end <= window->start) {
      makerbid::fail(ErrorCode::InvalidArgument, "window end must follow its start");
    }
    ds->window = window ? std::optional<makerbid::TimeWindow>({window->start, window->end}) : std::nullopt;
    ds->refresh();
  });
}

mb_status mb_dataset_set_price_filter(mb_dataset* ds, double multiple) {
  return guarded([&] {
    require(ds);
    if (!std::isfinite(multiple) || multiple < 0.0) {
      makerbid::fail(ErrorCode::InvalidArgument, "price filter multiple must be non-negative");
    }
    ds->price_filter = multiple;
    ds->refresh();
  });
}

mb_status mb_dataset_stats_get(const mb_dataset* ds, mb_dataset_stats* out) {
  return guarded([&] {
    require(ds, out);
    const auto window = ds->effective_window();
    const auto scoped = makerbid::events_in_window(ds->events, window);
    std::set<std::uint64_t> ids;
    for (const auto& e : ds->events) ids.insert(e.auction_id);

    mb_dataset_stats s{};
    s.event_count = ds->events.size();
    s.auction_count = ids.size();
    for (const auto& e : scoped) {
      if (e.is_bid()) ++s.bids_in_window;
      if (e.kind == makerbid::EventKind::Deal) ++s.deals_in_window;
    }
    s.win_probability = s.bids_in_window == 0 ? std::numeric_limits<double>::quiet_NaN()
                                              : makerbid::win_probability(scoped);
    s.window_days = window.days();
    s.bids_per_year = makerbid::bids_per_year(s.window_days, s.deals_in_window);
    s.reserve_snapshots = ds->reserves.size();
    *out = s;
  });
}

mb_status mb_dataset_winning_bid_count(const mb_dataset* ds, size_t* out) {
  return guarded([&] {
    require(ds, out);
    *out = ds->winners.size();
  });
}

mb_status mb_dataset_winning_bid(const mb_dataset* ds, size_t index, mb_winning_bid* out) {
  return guarded([&] {
    require(ds, out);
    if (index >= ds->winners.size()) makerbid::fail(ErrorCode::InvalidArgument, "winning bid index out of range");
    const auto& w = ds->winners[index];
    *out = {w.auction_id, w.bid_dai, w.lot_weth, w.timestamp, w.gas_price_gwei, w.deal_timestamp};
  });
}

mb_status mb_dataset_write_events(const mb_dataset* ds, int format, const char* path) {
  return guarded([&] {
    require(ds, path);
    const auto fmt = format == 1 ? makerbid::FileFormat::Ndjson : makerbid::FileFormat::Csv;
    makerbid::detail::write_file(path, makerbid::serialize_events(ds->events, fmt));
  });
}

void mb_dataset_destroy(mb_dataset* ds) { delete ds; }

mb_status mb_fit_gas_samples(const char* path, mb_gas_fit* out) {
  return guarded([&] {
    require(path, out);
    const auto samples = makerbid::parse_gas_samples(makerbid::detail::read_file(path));
    const auto fit = makerbid::fit_gas_regression(samples);
    std::vector<std::int64_t> two_token;
    for (const auto& s : samples) {
      if (s.token_count == 2) two_token.push_back(s.gas_used);
    }
    *out = {fit.slope, fit.intercept, fit.predict(2.0), two_token.empty() ? 0 : makerbid::gas_mode(two_token),
            samples.size()};
  });
}

mb_status mb_compare(const mb_params* params, const mb_dataset* ds, const mb_compare_options* options,
                     mb_comparison** out) {
  return guarded([&] {
    require(params, ds, out);
    makerbid::CompareOptions opts;
    if (options != nullptr) {
      opts.mode = options->mode == MB_MODE_NO_CAPITAL ? makerbid::CostMode::NoCapital : makerbid::CostMode::FullCost;
      opts.bounds = bounds_for(options->r_ceiling_factor);
      opts.verify_grid = options->verify_grid != 0;
      if (options->grid_points != 0) opts.grid_points = options->grid_points;
      opts.threads = options->threads;
    }
    auto result = std::make_unique<mb_comparison>();
    result->value = makerbid::compare(ds->winners, ds->reserves, params->value, opts);
    *out = result.release();
  });
}

mb_status mb_comparison_row_count(const mb_comparison* c, size_t* out) {
  return guarded([&] {
    require(c, out);
    *out = c->value.rows.size();
  });
}

mb_status mb_comparison_row_get(const mb_comparison* c, size_t index, mb_comparison_row* out) {
  return guarded([&] {
    require(c, out);
    if (index >= c->value.rows.size()) makerbid::fail(ErrorCode::InvalidArgument, "row index out of range");
    const auto& r = c->value.rows[index];
    *out = {r.auction_id,
            r.bid_value,
            r.market_price,
            r.actual_price,
            r.optimal_price,
            r.actual_discount,
            r.optimal_discount,
            r.verdict == makerbid::Verdict::ActualAboveOptimal ? 1 : 0,
            static_cast<int>(r.bucket),
            to_c(r.optimum)};
  });
}

mb_status mb_comparison_summary_get(const mb_comparison* c, mb_comparison_summary* out) {
  return guarded([&] {
    require(c, out);
    mb_comparison_summary s{};
    for (std::size_t b = 0; b < 3; ++b) {
      for (std::size_t v = 0; v < 2; ++v) s.counts[b][v] = c->value.summary.counts[b][v];
    }
    s.total = c->value.summary.total();
    s.excluded = c->value.errors.size();
    s.grid_mismatches = c->value.grid_mismatches;
    *out = s;
  });
}

mb_status mb_comparison_write_csv(const mb_comparison* c, const char* path) {
  return guarded([&] {
    require(c, path);
    makerbid::detail::write_file(path, makerbid::comparison_csv(c->value));
  });
}

mb_status mb_comparison_write_summary_csv(const mb_comparison* c, const char* path) {
  return guarded([&] {
    require(c, path);
    makerbid::detail::write_file(path, makerbid::summary_csv(c->value));
  });
}

mb_status mb_comparison_render_text(const mb_comparison* c, char** out_text) {
  return guarded([&] {
    require(c, out_text);
    *out_text = copy_string(makerbid::comparison_text(c->value));
  });
}

mb_status mb_comparison_write_scatter(const mb_comparison* c, const char* dir) {
  return guarded([&] {
    require(c, dir);
    makerbid::emit_plots(&c->value, {}, dir);
  });
}

void mb_comparison_destroy(mb_comparison* c) { delete c; }

}  // extern "C"

/*
 * makerbid C API.
 *
 * Every function returns an mb_status. On failure the calling thread's last
 * error message is available from mb_last_error() until the next call on
 * that thread. Handles are opaque; each create or load call has a matching
 * *_destroy. Strings returned through char** are owned by the caller and
 * released with mb_string_free().
 */
#ifndef MAKERBID_H
#define MAKERBID_H

#include <stddef.h>
#include <stdint.h>

#if defined(MAKERBID_BUILDING_LIBRARY)
#define MB_API __attribute__((visibility("default")))
#else
#define MB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mb_status {
  MB_OK = 0,
  MB_ERR_INVALID_ARGUMENT = 1,
  MB_ERR_PARSE = 2,
  MB_ERR_DATA_INTEGRITY = 3,
  MB_ERR_MISSING_DATA = 4,
  MB_ERR_UNDEFINED_STATISTIC = 5,
  MB_ERR_SINGULAR_FIT = 6,
  MB_ERR_ILL_POSED = 7,
  MB_ERR_REJECTED_BID = 8,
  MB_ERR_AUCTION_CLOSED = 9,
  MB_ERR_NOT_SETTLEABLE = 10,
  MB_ERR_IO = 11,
  MB_ERR_INTERNAL = 12
} mb_status;

MB_API const char* mb_last_error(void);
MB_API const char* mb_status_name(mb_status status);
MB_API void mb_string_free(char* s);

/* ---- model parameters --------------------------------------------------- */

typedef struct mb_params mb_params;

/* Defaults: standard gas amounts, gamma 0.003, r 0.40, b_year 365, x 0.15. */
MB_API mb_status mb_params_create(mb_params** out);
/* `key = value` text; keys g_dent g_deal g_exit g_trade g_join gamma r b_year x. */
MB_API mb_status mb_params_parse(const char* text, mb_params** out);
MB_API mb_status mb_params_load(const char* path, mb_params** out);
MB_API mb_status mb_params_get(const mb_params* params, const char* key, double* out);
MB_API mb_status mb_params_set(mb_params* params, const char* key, double value);
/* Rate text such as "15%" or "0.15". */
MB_API mb_status mb_parse_rate(const char* text, double* out);
MB_API void mb_params_destroy(mb_params* params);

/* ---- cost model and optimiser ------------------------------------------- */

typedef struct mb_auction_input {
  double bid_value;      /* DAI */
  double gas_price_gwei;
  double dai_reserve;    /* pool DAI reserve */
  double weth_reserve;   /* pool WETH reserve */
} mb_auction_input;

typedef struct mb_cost_breakdown {
  double bid_fee_eth;
  double rebalance_fee_eth;
  double gas_fee_dai;
  double slippage_cost_dai;
  double capital_cost_annual_dai;
  double capital_cost_bid_dai;
  double total_dai;
} mb_cost_breakdown;

typedef enum mb_branch { MB_BRANCH_BID_GEQ_R = 0, MB_BRANCH_BID_LT_R = 1 } mb_branch;

typedef struct mb_optimization {
  double v_max;
  double rebalance_margin;
  mb_cost_breakdown cost;
  double min_discount;
  mb_branch branch;
} mb_optimization;

MB_API mb_status mb_total_cost(const mb_params* params, const mb_auction_input* input, double v_max,
                               double rebalance_margin, mb_cost_breakdown* out);
/* r_ceiling_factor <= 0 selects the default ceiling of 1e4 * bid_value. */
MB_API mb_status mb_optimize(const mb_params* params, const mb_auction_input* input, double r_ceiling_factor,
                             mb_optimization* out);
/* Exhaustive log-spaced grid of v_points x r_points; verification only. */
MB_API mb_status mb_grid_oracle(const mb_params* params, const mb_auction_input* input, size_t v_points,
                                size_t r_points, mb_optimization* out);
/* min-discount curve over [b_from, b_to], written as CSV to `path`. */
MB_API mb_status mb_write_curve(const mb_params* params, double gas_price_gwei, double dai_reserve,
                                double weth_reserve, double b_from, double b_to, size_t per_decade,
                                const char* path);

/* ---- auction simulation ------------------------------------------------- */

/* Scenario JSON in, outcome JSON out (*out_json freed with mb_string_free). */
MB_API mb_status mb_simulate_json(const char* scenario_json, int include_trace, char** out_json);

/* ---- historical data ---------------------------------------------------- */

typedef struct mb_dataset mb_dataset;

typedef struct mb_window {
  int64_t start; /* UTC seconds, inclusive */
  int64_t end;   /* UTC seconds, exclusive */
} mb_window;

typedef struct mb_dataset_stats {
  size_t event_count;
  size_t auction_count;      /* distinct auctions in the file */
  size_t deals_in_window;    /* auctions dealt inside the window */
  size_t bids_in_window;     /* tend+dent bids of those auctions */
  double win_probability;    /* NaN when there are no bids */
  double window_days;
  int64_t bids_per_year;     /* 0 flags a degenerate dataset */
  size_t reserve_snapshots;
} mb_dataset_stats;

typedef struct mb_winning_bid {
  uint64_t auction_id;
  double bid_dai;
  double lot_weth;
  int64_t timestamp;
  double gas_price_gwei;
  int64_t deal_timestamp;
} mb_winning_bid;

/* "2020-03-23,2020-07-28" (whole days) or "start,end" in seconds. */
MB_API mb_status mb_parse_window(const char* text, mb_window* out);

MB_API mb_status mb_dataset_create(mb_dataset** out);
MB_API mb_status mb_dataset_load_events(mb_dataset* ds, const char* path);
MB_API mb_status mb_dataset_load_reserves(mb_dataset* ds, const char* path);
/* Without a window every deal counts. */
MB_API mb_status mb_dataset_set_window(mb_dataset* ds, const mb_window* window);
/* Drop winning bids priced above `multiple` times market; 0 disables. */
MB_API mb_status mb_dataset_set_price_filter(mb_dataset* ds, double multiple);
MB_API mb_status mb_dataset_stats_get(const mb_dataset* ds, mb_dataset_stats* out);
MB_API mb_status mb_dataset_winning_bid_count(const mb_dataset* ds, size_t* out);
MB_API mb_status mb_dataset_winning_bid(const mb_dataset* ds, size_t index, mb_winning_bid* out);
/* Canonical re-serialisation of the loaded events (format 0 = CSV, 1 = NDJSON). */
MB_API mb_status mb_dataset_write_events(const mb_dataset* ds, int format, const char* path);
MB_API void mb_dataset_destroy(mb_dataset* ds);

typedef struct mb_gas_fit {
  double slope;
  double intercept;
  double predicted_two_tokens;
  int64_t mode_gas_used;
  size_t sample_count;
} mb_gas_fit;

MB_API mb_status mb_fit_gas_samples(const char* path, mb_gas_fit* out);

/* ---- comparison report -------------------------------------------------- */

typedef struct mb_comparison mb_comparison;

typedef enum mb_cost_mode { MB_MODE_FULL_COST = 0, MB_MODE_NO_CAPITAL = 1 } mb_cost_mode;

typedef struct mb_compare_options {
  mb_cost_mode mode;
  double r_ceiling_factor; /* <= 0: default */
  int verify_grid;
  size_t grid_points;      /* 0: default 2000 */
  unsigned threads;        /* 0: hardware concurrency */
} mb_compare_options;

typedef struct mb_comparison_row {
  uint64_t auction_id;
  double bid_value;
  double market_price;
  double actual_price;
  double optimal_price;
  double actual_discount;
  double optimal_discount;
  int verdict_above; /* 1: actual above optimal */
  int bucket;        /* 0: <= 1k, 1: <= 10k, 2: above */
  mb_optimization optimum;
} mb_comparison_row;

typedef struct mb_comparison_summary {
  size_t counts[3][2]; /* [bucket][0 = above, 1 = below] */
  size_t total;
  size_t excluded;
  size_t grid_mismatches;
} mb_comparison_summary;

MB_API mb_status mb_compare(const mb_params* params, const mb_dataset* ds, const mb_compare_options* options,
                            mb_comparison** out);
MB_API mb_status mb_comparison_row_count(const mb_comparison* c, size_t* out);
MB_API mb_status mb_comparison_row_get(const mb_comparison* c, size_t index, mb_comparison_row* out);
MB_API mb_status mb_comparison_summary_get(const mb_comparison* c, mb_comparison_summary* out);
MB_API mb_status mb_comparison_write_csv(const mb_comparison* c, const char* path);
MB_API mb_status mb_comparison_write_summary_csv(const mb_comparison* c, const char* path);
MB_API mb_status mb_comparison_render_text(const mb_comparison* c, char** out_text);
/* Scatter files split at 1,000 DAI into `dir`. */
MB_API mb_status mb_comparison_write_scatter(const mb_comparison* c, const char* dir);
MB_API void mb_comparison_destroy(mb_comparison* c);

#ifdef __cplusplus
}
#endif

#endif /* MAKERBID_H */

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "makerbid/ingest.hpp"
#include "makerbid/optimizer.hpp"
#include "makerbid/params.hpp"

namespace makerbid {

enum class CostMode { FullCost, NoCapital };
enum class Verdict { ActualAboveOptimal, ActualBelowOptimal };
enum class Bucket { UpTo1k, To10k, Above10k };

const char* to_string(CostMode mode) noexcept;
const char* to_string(Verdict verdict) noexcept;
const char* to_string(Bucket bucket) noexcept;

/// (.., 1000] -> UpTo1k, (1000, 10000] -> To10k, above -> Above10k.
Bucket bucket_for(double bid_value) noexcept;

/// Actual == optimal counts as below: the bid still recovered its costs.
Verdict verdict_for(double actual_discount, double optimal_discount) noexcept;

/// Where market prices come from; printed in report headers.
inline constexpr const char* kMarketPriceSource =
    "AMM spot price (DAI reserve / WETH reserve) of the larger pool at the winning bid's timestamp";

struct ComparisonRow {
  std::uint64_t auction_id = 0;
  double bid_value = 0.0;
  std::int64_t timestamp = 0;
  PoolVersion pool_version = PoolVersion::V2;
  double market_price = 0.0;
  double actual_price = 0.0;
  double optimal_price = 0.0;
  double actual_discount = 0.0;
  double optimal_discount = 0.0;
  Verdict verdict = Verdict::ActualBelowOptimal;
  Bucket bucket = Bucket::UpTo1k;
  /// Optimiser result; always found with the capital charge in place.
  OptimizationResult optimum;
  /// Cost at the optimum as counted in this mode (no capital term in
  /// NoCapital mode).
  CostBreakdown cost;
  /// Grid-oracle cost when verification was requested.
  std::optional<double> grid_cost;
};

struct RowError {
  std::uint64_t auction_id = 0;
  std::string message;
};

struct BucketSummary {
  // counts[bucket][verdict]
  std::array<std::array<std::size_t, 2>, 3> counts{};

  std::size_t count(Bucket b, Verdict v) const noexcept {
    return counts[static_cast<std::size_t>(b)][static_cast<std::size_t>(v)];
  }
  std::size_t bucket_total(Bucket b) const noexcept;
  std::size_t verdict_total(Verdict v) const noexcept;
  std::size_t total() const noexcept;
};

struct Comparison {
  CostMode mode = CostMode::FullCost;
  std::vector<ComparisonRow> rows;  // ordered by auction_id
  std::vector<RowError> errors;     // rows excluded from the summary
  BucketSummary summary;
  /// Rows whose optimiser result differed from the grid oracle by more than
  /// the verification tolerance.
  std::size_t grid_mismatches = 0;
};

struct CompareOptions {
  CostMode mode = CostMode::FullCost;
  SearchBounds bounds;
  bool verify_grid = false;
  std::size_t grid_points = 2000;
  double grid_tolerance = 1e-3;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

ComparisonRow compare_bid(const WinningBid& bid, const ReserveSnapshot& reserves, const ModelParams& params,
                          const CompareOptions& options);

/// Optimise every winning bid and classify the actual price against the
/// optimal one. Bids without reserve data become RowErrors; Error(IllPosed)
/// propagates.
Comparison compare(std::span<const WinningBid> bids, std::span<const ReserveSnapshot> reserves,
                   const ModelParams& params, const CompareOptions& options = {});

BucketSummary summarize(std::span<const ComparisonRow> rows);

std::string comparison_csv(const Comparison& comparison);
std::string summary_csv(const Comparison& comparison);
/// Aligned text: header, per-bucket table, and warning counts.
std::string comparison_text(const Comparison& comparison);

struct CurvePoint {
  double bid_value = 0.0;
  OptimizationResult optimum;
};

/// Optimal cost over a log grid of bid values from `b_from` to `b_to`
/// inclusive, `per_decade` samples per decade.
std::vector<CurvePoint> cost_curve(const ModelParams& params, double gas_price_gwei, double dai_reserve,
                                   double weth_reserve, double b_from, double b_to, std::size_t per_decade,
                                   const SearchBounds& bounds = {});

std::string curve_csv(std::span<const CurvePoint> points);
/// auction_id,bid_value,optimal_discount,actual_discount for the given rows.
std::string scatter_csv(std::span<const ComparisonRow> rows);

struct PlotFiles {
  std::vector<std::filesystem::path> written;
};

/// Write plot data into `dir`: min_discount_curve.csv when `curve` is
/// non-empty, and scatter_upto_1k.csv / scatter_above_1k.csv when
/// `comparison` is given. Error(Io) if a file cannot be written.
PlotFiles emit_plots(const Comparison* comparison, std::span<const CurvePoint> curve,
                     const std::filesystem::path& dir);

}  // namespace makerbid

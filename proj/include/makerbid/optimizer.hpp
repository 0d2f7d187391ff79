#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "makerbid/cost_model.hpp"

namespace makerbid {

enum class Branch {
  BidGeqR,  // R <= B: every win triggers a full rebalance
  BidLtR,   // R > B: one rebalance is shared across several wins
};

const char* to_string(Branch branch) noexcept;

struct OptimizationResult {
  double v_max = 0.0;
  double rebalance_margin = 0.0;
  CostBreakdown cost;
  double min_discount = 0.0;
  Branch branch = Branch::BidGeqR;

  Portfolio portfolio() const { return {v_max, rebalance_margin}; }
};

struct SearchBounds {
  /// Upper limit on R as a multiple of the bid value.
  double r_ceiling_factor = 1e4;
  /// Absolute ceiling in DAI; overrides the factor when set.
  std::optional<double> r_ceiling;
  /// Relative tolerance on R for the golden-section refinement.
  double rel_tol = 1e-8;
  /// Log-spaced samples used to bracket the minimum before refinement.
  std::size_t bracket_samples = 256;

  double ceiling_for(double bid_value) const;
};

/// Costs within this many DAI are treated as equal when comparing branches.
inline constexpr double kBranchCostTolerance = 1e-10;

/// Minimise total participation cost over (V_max, R) subject to
/// V_max - R >= B, V_max > 0, R >= 0.
///
/// Throws Error(IllPosed) when the capital rate is zero while bids can win
/// (cost keeps falling as R grows) or when the optimum sits on the R ceiling.
OptimizationResult optimize(const AuctionContext& ctx, const GasSchedule& gas,
                            const SearchBounds& bounds = {});

/// Best candidate within a single branch. V_max is bound to B + R.
OptimizationResult optimize_branch(const AuctionContext& ctx, const GasSchedule& gas,
                                   Branch branch, const SearchBounds& bounds = {});

/// Total cost along the constraint V_max = B + R, as a function of R.
double cost_on_constraint(const AuctionContext& ctx, const GasSchedule& gas, double rebalance_margin);

/// Smallest V_max with V_max - R >= B holding exactly in floating point.
double binding_v_max(double bid_value, double rebalance_margin);

/// Golden-section minimisation of a unimodal function on [lo, hi]. Stops once
/// the bracket is narrower than rel_tol times its midpoint (or abs_tol).
double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double rel_tol, double abs_tol = 0.0, int max_iter = 500);

/// Explicit 2-D grid for the exhaustive oracle.
struct GridSpec {
  std::vector<double> v_max_values;
  std::vector<double> r_values;

  /// V_max log-spaced over [B, v_hi_factor*B]; R is 0 followed by log-spaced
  /// values over [r_lo_factor*B, r_hi_factor*B].
  static GridSpec log_spaced(double bid_value, std::size_t v_points, std::size_t r_points,
                             double v_hi_factor = 1e4, double r_hi_factor = 1e4,
                             double r_lo_factor = 1e-4);
};

/// Exhaustive argmin of total_cost over the feasible grid points. Test and
/// verification use only. Throws Error(InvalidArgument) if no grid point is
/// feasible.
OptimizationResult grid_oracle(const AuctionContext& ctx, const GasSchedule& gas,
                               const GridSpec& grid);

}  // namespace makerbid

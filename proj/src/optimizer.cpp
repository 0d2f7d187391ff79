#include "makerbid/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "makerbid/error.hpp"

namespace makerbid {

const char* to_string(Branch branch) noexcept {
  switch (branch) {
    case Branch::BidGeqR: return "bid_geq_r";
    case Branch::BidLtR: return "bid_lt_r";
  }
  return "unknown";
}

double SearchBounds::ceiling_for(double bid_value) const {
  const double ceiling = r_ceiling ? *r_ceiling : r_ceiling_factor * bid_value;
  if (!std::isfinite(ceiling) || ceiling < 0.0) {
    fail(ErrorCode::InvalidArgument, "R ceiling must be finite and non-negative");
  }
  if (!(rel_tol > 0.0) || bracket_samples < 3) {
    fail(ErrorCode::InvalidArgument, "search tolerance or bracket sample count out of range");
  }
  return ceiling;
}

double binding_v_max(double bid_value, double rebalance_margin) {
  double v_max = bid_value + rebalance_margin;
  while (v_max - rebalance_margin < bid_value) {
    v_max = std::nextafter(v_max, std::numeric_limits<double>::infinity());
  }
  return v_max;
}

double cost_on_constraint(const AuctionContext& ctx, const GasSchedule& gas, double rebalance_margin) {
  const Portfolio portfolio{binding_v_max(ctx.bid_value, rebalance_margin), rebalance_margin};
  return total_cost(ctx, portfolio, gas).total_dai;
}

double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                               double rel_tol, double abs_tol, int max_iter) {
  static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iter; ++i) {
    const double width = b - a;
    if (width <= rel_tol * std::abs(0.5 * (a + b)) || width <= abs_tol) break;
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

namespace {

OptimizationResult make_result(const AuctionContext& ctx, const GasSchedule& gas, double v_max,
                               double rebalance_margin, Branch branch) {
  OptimizationResult out;
  out.v_max = v_max;
  out.rebalance_margin = rebalance_margin;
  out.cost = total_cost(ctx, out.portfolio(), gas);
  out.min_discount = min_discount(out.cost, ctx.bid_value);
  out.branch = branch;
  return out;
}

void check_well_posed(const AuctionContext& ctx) {
  // With no capital charge the shared-rebalance branch decreases without
  // bound in R whenever bids can win.
  if (ctx.capital_rate == 0.0 && ctx.win_prob > 0.0) {
    fail(ErrorCode::IllPosed,
         "capital rate is zero with positive win probability: cost decreases without bound in R");
  }
}

OptimizationResult optimize_shared_rebalance(const AuctionContext& ctx, const GasSchedule& gas,
                                             const SearchBounds& bounds) {
  const double bid = ctx.bid_value;
  const double ceiling = bounds.ceiling_for(bid);
  if (ceiling <= bid) {
    fail(ErrorCode::InvalidArgument,
         fmt::format("R ceiling {} leaves the R > B branch empty for B = {}", ceiling, bid));
  }
  const auto f = [&](double r) { return cost_on_constraint(ctx, gas, r); };

  // Bracket on a log grid, then refine inside the neighbouring samples.
  const std::size_t n = bounds.bracket_samples;
  const double log_lo = std::log(bid);
  const double step = (std::log(ceiling) - log_lo) / static_cast<double>(n - 1);
  std::vector<double> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    samples[i] = i + 1 == n ? ceiling : std::exp(log_lo + step * static_cast<double>(i));
  }
  samples.front() = bid;

  std::size_t best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double c = f(samples[i]);
    if (c < best_cost) {
      best_cost = c;
      best = i;
    }
  }
  const double lo = samples[best == 0 ? 0 : best - 1];
  const double hi = samples[std::min(best + 1, n - 1)];
  double r = golden_section_minimize(f, lo, hi, bounds.rel_tol);
  if (r <= bid) r = std::nextafter(bid, std::numeric_limits<double>::infinity());

  if (r >= ceiling * (1.0 - 1e-6)) {
    fail(ErrorCode::IllPosed,
         fmt::format("optimal R sits on the search ceiling ({} DAI); raise the ceiling or the capital rate",
                     ceiling));
  }
  return make_result(ctx, gas, binding_v_max(bid, r), r, Branch::BidLtR);
}

}  // namespace

OptimizationResult optimize_branch(const AuctionContext& ctx, const GasSchedule& gas, Branch branch,
                                   const SearchBounds& bounds) {
  ctx.validate();
  gas.validate();
  bounds.ceiling_for(ctx.bid_value);
  check_well_posed(ctx);
  if (branch == Branch::BidGeqR) {
    // Cost does not depend on R on [0, B] apart from the capital charge,
    // which is smallest at R = 0.
    return make_result(ctx, gas, ctx.bid_value, 0.0, Branch::BidGeqR);
  }
  return optimize_shared_rebalance(ctx, gas, bounds);
}

OptimizationResult optimize(const AuctionContext& ctx, const GasSchedule& gas,
                            const SearchBounds& bounds) {
  auto best = optimize_branch(ctx, gas, Branch::BidGeqR, bounds);
  if (bounds.ceiling_for(ctx.bid_value) <= ctx.bid_value || ctx.win_prob == 0.0) {
    // R > B cannot help: either not searchable or every R-dependent term is zero.
    return best;
  }
  auto shared = optimize_branch(ctx, gas, Branch::BidLtR, bounds);
  const double diff = shared.cost.total_dai - best.cost.total_dai;
  if (diff < -kBranchCostTolerance) return shared;
  if (std::abs(diff) <= kBranchCostTolerance &&
      (shared.v_max < best.v_max ||
       (shared.v_max == best.v_max && shared.rebalance_margin < best.rebalance_margin))) {
    return shared;
  }
  return best;
}

GridSpec GridSpec::log_spaced(double bid_value, std::size_t v_points, std::size_t r_points,
                              double v_hi_factor, double r_hi_factor, double r_lo_factor) {
  if (v_points < 1 || r_points < 1) {
    fail(ErrorCode::InvalidArgument, "grid needs at least one point per axis");
  }
  const auto logspace = [](double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
      out[0] = lo;
      return out;
    }
    const double a = std::log(lo);
    const double step = (std::log(hi) - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(a + step * static_cast<double>(i));
    out.front() = lo;
    out.back() = hi;
    return out;
  };
  GridSpec grid;
  grid.v_max_values = logspace(bid_value, v_hi_factor * bid_value, v_points);
  grid.r_values.push_back(0.0);
  if (r_points > 1) {
    auto rest = logspace(r_lo_factor * bid_value, r_hi_factor * bid_value, r_points - 1);
    grid.r_values.insert(grid.r_values.end(), rest.begin(), rest.end());
  }
  return grid;
}

OptimizationResult grid_oracle(const AuctionContext& ctx, const GasSchedule& gas, const GridSpec& grid) {
  ctx.validate();
  gas.validate();
  bool found = false;
  double best_cost = std::numeric_limits<double>::infinity();
  Portfolio best_portfolio;
  for (const double r : grid.r_values) {
    for (const double v : grid.v_max_values) {
      const Portfolio p{v, r};
      if (!(v > 0.0) || r < 0.0 || !p.covers(ctx.bid_value)) continue;
      const double c = total_cost(ctx, p, gas).total_dai;
      if (!found || c < best_cost ||
          (c == best_cost && (v < best_portfolio.v_max ||
                              (v == best_portfolio.v_max && r < best_portfolio.rebalance_margin)))) {
        found = true;
        best_cost = c;
        best_portfolio = p;
      }
    }
  }
  if (!found) {
    fail(ErrorCode::InvalidArgument, "grid contains no feasible (V_max, R) point");
  }
  const Branch branch =
      ctx.bid_value >= best_portfolio.rebalance_margin ? Branch::BidGeqR : Branch::BidLtR;
  return make_result(ctx, gas, best_portfolio.v_max, best_portfolio.rebalance_margin, branch);
}

}  // namespace makerbid

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "flowauction/model.hpp"

namespace flowauction {

/// A buyer's answer to the tier oracle at given prices.
///
/// `strong` holds objects whose payoff beats the payoff of the last greedily
/// selected object, `marginal` the objects tied with it, and `zero` the
/// objects of payoff exactly 0. `strong_demand`, `marginal_demand` and
/// `zero_demand` are the amounts the buyer takes from each tier.
struct TierReport {
  std::vector<ObjectIndex> strong;
  std::vector<ObjectIndex> marginal;
  std::vector<ObjectIndex> zero;
  Quantity strong_demand = 0;
  Quantity marginal_demand = 0;
  Quantity zero_demand = 0;
  std::optional<ObjectIndex> last_item;

  friend bool operator==(const TierReport&, const TierReport&) = default;
};

/// Quantities one buyer takes, indexed by object.
using Bundle = std::vector<Quantity>;

struct PreferredBundle {
  Bundle quantity;
  std::optional<ObjectIndex> last_item;
};

/// Objects sorted by non-increasing payoff for `buyer`, ties in canonical order.
std::vector<ObjectIndex> payoff_order(const Instance& instance, BuyerIndex buyer,
                                      const PriceVector& prices);

/// Greedy minimal preferred bundle. `order` overrides the payoff order; it
/// must list every object with payoffs non-increasing.
PreferredBundle preferred_bundle(const Instance& instance, BuyerIndex buyer,
                                 const PriceVector& prices);
PreferredBundle preferred_bundle(const Instance& instance, BuyerIndex buyer,
                                 const PriceVector& prices,
                                 const std::vector<ObjectIndex>& order);

TierReport tier_report(const Instance& instance, BuyerIndex buyer, const PriceVector& prices);
TierReport tier_report(const Instance& instance, BuyerIndex buyer, const PriceVector& prices,
                       const std::vector<ObjectIndex>& order);

/// V_j(p): the best payoff buyer j can reach at `prices`.
Value indirect_utility(const Instance& instance, BuyerIndex buyer, const PriceVector& prices);

/// Total payoff sum_i (v_ij - p(i)) * bundle(i).
Value bundle_payoff(const Instance& instance, BuyerIndex buyer, const PriceVector& prices,
                    const Bundle& bundle);

/// Counts tier-oracle queries across an auction run.
class TierOracle {
 public:
  explicit TierOracle(const Instance& instance) : instance_(&instance) {}

  std::vector<TierReport> query_all(const PriceVector& prices);
  std::int64_t calls() const noexcept { return calls_; }

 private:
  const Instance* instance_;
  std::int64_t calls_ = 0;
};

}  // namespace flowauction

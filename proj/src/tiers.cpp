#include "flowauction/tiers.hpp"

#include <algorithm>
#include <numeric>

namespace flowauction {

namespace {

Value payoff(const Instance& instance, ObjectIndex i, BuyerIndex j, const PriceVector& prices) {
  return instance.valuation(i, j) - prices[i];
}

void check_order(const Instance& instance, BuyerIndex buyer, const PriceVector& prices,
                 const std::vector<ObjectIndex>& order) {
  if (order.size() != instance.num_objects()) {
    throw PreconditionError("object order must list every object exactly once");
  }
  std::vector<bool> seen(instance.num_objects(), false);
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (order[k] >= instance.num_objects() || seen[order[k]]) {
      throw PreconditionError("object order must list every object exactly once");
    }
    seen[order[k]] = true;
    if (k > 0 && payoff(instance, order[k - 1], buyer, prices) <
                     payoff(instance, order[k], buyer, prices)) {
      throw PreconditionError("object order must have non-increasing payoffs");
    }
  }
}

}  // namespace

std::vector<ObjectIndex> payoff_order(const Instance& instance, BuyerIndex buyer,
                                      const PriceVector& prices) {
  std::vector<ObjectIndex> order(instance.num_objects());
  std::iota(order.begin(), order.end(), ObjectIndex{0});
  std::stable_sort(order.begin(), order.end(), [&](ObjectIndex a, ObjectIndex b) {
    return payoff(instance, a, buyer, prices) > payoff(instance, b, buyer, prices);
  });
  return order;
}

PreferredBundle preferred_bundle(const Instance& instance, BuyerIndex buyer,
                                 const PriceVector& prices) {
  check_prices(instance, prices);
  return preferred_bundle(instance, buyer, prices, payoff_order(instance, buyer, prices));
}

PreferredBundle preferred_bundle(const Instance& instance, BuyerIndex buyer,
                                 const PriceVector& prices,
                                 const std::vector<ObjectIndex>& order) {
  check_prices(instance, prices);
  check_order(instance, buyer, prices, order);

  PreferredBundle out{Bundle(instance.num_objects(), 0), std::nullopt};
  Quantity residual = instance.demand(buyer);
  // The last visited object counts as k_j even if its supply is 0.
  for (ObjectIndex i : order) {
    if (residual <= 0 || payoff(instance, i, buyer, prices) <= 0) break;
    const Quantity take = std::min(instance.supply(i), residual);
    out.quantity[i] = take;
    residual -= take;
    out.last_item = i;
  }
  return out;
}

TierReport tier_report(const Instance& instance, BuyerIndex buyer, const PriceVector& prices) {
  check_prices(instance, prices);
  return tier_report(instance, buyer, prices, payoff_order(instance, buyer, prices));
}

TierReport tier_report(const Instance& instance, BuyerIndex buyer, const PriceVector& prices,
                       const std::vector<ObjectIndex>& order) {
  TierReport report;
  const Quantity demand = instance.demand(buyer);
  if (demand == 0) return report;

  report.last_item = preferred_bundle(instance, buyer, prices, order).last_item;

  Quantity strong_supply = 0;
  Quantity marginal_supply = 0;
  Quantity zero_supply = 0;
  for (ObjectIndex i = 0; i < instance.num_objects(); ++i) {
    const Value pi = payoff(instance, i, buyer, prices);
    if (report.last_item) {
      const Value threshold = payoff(instance, *report.last_item, buyer, prices);
      if (pi > threshold) {
        report.strong.push_back(i);
        strong_supply += instance.supply(i);
      } else if (pi == threshold) {
        report.marginal.push_back(i);
        marginal_supply += instance.supply(i);
      }
    }
    if (pi == 0) {
      report.zero.push_back(i);
      zero_supply += instance.supply(i);
    }
  }
  report.strong_demand = strong_supply;
  report.marginal_demand = std::min(marginal_supply, demand - report.strong_demand);
  report.zero_demand =
      std::min(zero_supply, demand - report.strong_demand - report.marginal_demand);
  return report;
}

Value bundle_payoff(const Instance& instance, BuyerIndex buyer, const PriceVector& prices,
                    const Bundle& bundle) {
  Value total = 0;
  for (ObjectIndex i = 0; i < instance.num_objects(); ++i) {
    total += payoff(instance, i, buyer, prices) * bundle.at(i);
  }
  return total;
}

Value indirect_utility(const Instance& instance, BuyerIndex buyer, const PriceVector& prices) {
  return bundle_payoff(instance, buyer, prices, preferred_bundle(instance, buyer, prices).quantity);
}

std::vector<TierReport> TierOracle::query_all(const PriceVector& prices) {
  check_prices(*instance_, prices);
  std::vector<TierReport> out;
  out.reserve(instance_->num_buyers());
  for (BuyerIndex j = 0; j < instance_->num_buyers(); ++j) {
    out.push_back(tier_report(*instance_, j, prices));
    ++calls_;
  }
  return out;
}

}  // namespace flowauction

#include "flowauction/auction.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace flowauction {

namespace {

struct Round {
  FlowNetwork network;
  IntegralFlow flow;
};

Round solve_round(const Instance& instance, TierOracle& oracle, const PriceVector& prices) {
  FlowNetwork network = build_demand_network(instance, prices, oracle.query_all(prices));
  IntegralFlow flow = max_flow(network);
  return {std::move(network), std::move(flow)};
}

bool competitive(const Round& round) {
  return round.flow.value == round.network.source_capacity();
}

struct Step {
  Price alpha;
  Round round;  // network and maximum flow at prices + alpha * chi_I
};

// Bisection for the largest alpha whose left-most cut still has objects I.
// Invariant: the cut at prices + lo * chi_I has objects I (lo = 0 is given),
// the cut at prices + hi * chi_I does not. Once every object of I is priced
// above the largest valuation nobody reaches it, which seeds hi. The cut
// objects change monotonically along chi_I, so bisection is sound.
//
// Resetting alpha_up unconditionally on every probe would not be a
// bisection; the bound only moves on the side the probe rules out.
Step search_step(const Instance& instance, TierOracle& oracle, const PriceVector& prices,
                 const std::vector<ObjectIndex>& raised) {
  Price min_raised = prices[raised.front()];
  for (ObjectIndex i : raised) min_raised = std::min(min_raised, prices[i]);
  Price lo = 0;
  Price hi = std::max<Price>(instance.max_valuation() + 1 - min_raised, 1);

  std::map<Price, Round> probes;
  while (hi - lo > 1) {
    const Price mid = lo + (hi - lo) / 2;
    Round round = solve_round(instance, oracle, prices.raised(raised, mid));
    const bool same =
        !competitive(round) && leftmost_min_cut(round.network, round.flow).objects == raised;
    probes.emplace(mid, std::move(round));
    (same ? lo : hi) = mid;
  }
  const Price alpha = std::max<Price>(lo, 1);
  auto it = probes.find(alpha);
  if (it == probes.end()) {
    return {alpha, solve_round(instance, oracle, prices.raised(raised, alpha))};
  }
  return {alpha, std::move(it->second)};
}

void guard_price_bound(const Instance& instance, const PriceVector& prices, Price start_max) {
  const Price bound = std::max(instance.max_valuation() + 1, start_max);
  for (ObjectIndex i = 0; i < prices.size(); ++i) {
    if (prices[i] > bound) {
      throw std::overflow_error("price of '" + instance.object_ids()[i] +
                                "' exceeded the valuation bound");
    }
  }
}

}  // namespace

PriceRaisingResult price_raising(const Instance& instance, const SolveOptions& options) {
  PriceVector prices = options.start_prices.value_or(PriceVector::zeros(instance));
  check_prices(instance, prices);
  const Price start_max =
      prices.size() == 0 ? 0 : *std::max_element(prices.values().begin(), prices.values().end());

  TierOracle oracle(instance);
  AuctionTrace trace;
  Round round = solve_round(instance, oracle, prices);
  std::optional<Quantity> carried;

  while (!competitive(round)) {
    const CutResult cut = leftmost_min_cut(round.network, round.flow);
    if (cut.objects.empty()) {
      throw std::logic_error("non-competitive prices without an overdemanded object set");
    }

    std::optional<Round> next;
    std::optional<Quantity> next_carried;
    Price step = 1;
    PriceVector next_prices;
    if (options.mode == StepMode::unit) {
      next_prices = prices.raised(cut.objects);
      FlowNetwork network =
          build_demand_network(instance, next_prices, oracle.query_all(next_prices));
      if (options.warm_start) {
        FlowUpdateResult update = flow_update(round.network, round.flow, next_prices, network);
        next_carried = update.flow.value;
        IntegralFlow flow = max_flow(network, update.flow);
        next.emplace(Round{std::move(network), std::move(flow)});
      } else {
        IntegralFlow flow = max_flow(network);
        next.emplace(Round{std::move(network), std::move(flow)});
      }
    } else {
      Step found = search_step(instance, oracle, prices, cut.objects);
      step = found.alpha;
      next_prices = prices.raised(cut.objects, step);
      if (options.warm_start) {
        next_carried = found.round.flow.value;
        next.emplace(std::move(found.round));
      } else {
        next.emplace(solve_round(instance, oracle, next_prices));
      }
    }
    guard_price_bound(instance, next_prices, start_max);

    if (options.trace) {
      trace.iterations.push_back({trace.raise_steps, prices, cut.objects, cut.node_set,
                                  round.flow.value, round.network.source_capacity(), step,
                                  carried});
    }
    ++trace.raise_steps;
    prices = std::move(next_prices);
    round = std::move(*next);
    carried = next_carried;
  }

  trace.final_prices = prices;
  trace.oracle_calls = oracle.calls();
  trace.final_flow_value = round.flow.value;
  trace.final_cap_s = round.network.source_capacity();
  trace.final_carried_flow_value = carried;
  return {std::move(prices), std::move(trace)};
}

Price adapted_step_length(const Instance& instance, const PriceVector& prices,
                          const CutResult& cut, const IntegralFlow& flow) {
  check_prices(instance, prices);
  TierOracle oracle(instance);
  const FlowNetwork network = build_demand_network(instance, prices, oracle.query_all(prices));
  if (!flow_violation(network, flow).empty()) {
    throw PreconditionError("flow is not a flow of G(prices)");
  }
  if (flow.value >= network.source_capacity()) {
    throw PreconditionError("prices are already competitive");
  }
  if (leftmost_min_cut(network, flow).objects != cut.objects || cut.objects.empty()) {
    throw PreconditionError("cut is not the left-most min cut of G(prices)");
  }
  return search_step(instance, oracle, prices, cut.objects).alpha;
}

Allocation allocate(const Instance& instance, const PriceVector& prices) {
  check_prices(instance, prices);
  const BalancedInstance balanced = balance_instance(instance);
  PriceVector balanced_prices = prices;
  if (balanced.dummy.kind == DummyKind::dummy_object) {
    std::vector<Price> values = prices.values();
    values.push_back(0);
    balanced_prices = PriceVector(std::move(values));
  }

  const FlowNetwork network = build_allocation_network(balanced.instance, balanced_prices);
  const IntegralFlow flow = max_flow(network);
  if (flow.value != network.source_capacity()) {
    throw std::logic_error("maximum flow of H(p) leaves source arcs unsaturated (" +
                           std::to_string(flow.value) + " of " +
                           std::to_string(network.source_capacity()) +
                           "); prices are not the minimum competitive prices");
  }

  Allocation out(instance.num_objects(), instance.num_buyers());
  for (ArcId a = 0; a < network.arcs().size(); ++a) {
    const Arc& arc = network.arcs()[a];
    if (!network.is_tier_node(arc.from) || flow.arc_flow[a] == 0) continue;
    const BuyerIndex j = network.buyer_of(arc.from);
    const ObjectIndex i = network.object_of(arc.to);
    if (j < instance.num_buyers() && i < instance.num_objects()) {
      out.at(i, j) += flow.arc_flow[a];
    }
  }
  return out;
}

Equilibrium solve(const Instance& instance, const SolveOptions& options) {
  PriceRaisingResult raised = price_raising(instance, options);
  Allocation allocation = allocate(instance, raised.prices);
  return {std::move(raised.prices), std::move(allocation), std::move(raised.trace)};
}

InitialRound initial_round(const Instance& instance, const PriceVector& prices) {
  check_prices(instance, prices);
  FlowNetwork network = build_demand_network(instance, prices);
  IntegralFlow flow = max_flow(network);
  return {std::move(network), std::move(flow)};
}

}  // namespace flowauction

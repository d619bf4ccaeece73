#include "flowauction/verify.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <functional>
#include <thread>

#include "flowauction/flow.hpp"
#include "flowauction/tiers.hpp"

namespace flowauction {

namespace {

using Mask = std::uint64_t;

std::vector<ObjectIndex> mask_objects(Mask mask, std::size_t m) {
  std::vector<ObjectIndex> out;
  for (ObjectIndex i = 0; i < m; ++i) {
    if (mask >> i & 1U) out.push_back(i);
  }
  return out;
}

// Smallest cardinality first, then lexicographic on the sorted index list.
bool canonical_less(Mask a, Mask b, std::size_t m) {
  const int ca = std::popcount(a);
  const int cb = std::popcount(b);
  if (ca != cb) return ca < cb;
  return mask_objects(a, m) < mask_objects(b, m);
}

void check_subset_budget(const Instance& instance, const Budget& budget) {
  if (instance.num_objects() > budget.max_subset_objects || instance.num_objects() >= 63) {
    throw BudgetExceeded("subset enumeration over " + std::to_string(instance.num_objects()) +
                         " objects exceeds the budget of " +
                         std::to_string(budget.max_subset_objects));
  }
}

Quantity overdemand_on(const FlowNetwork& network, const std::vector<bool>& in_set) {
  // Capacity of s -> tier node, indexed by tier node.
  std::vector<Quantity> tier_demand(network.num_nodes(), 0);
  std::vector<Quantity> outside(network.num_nodes(), 0);
  std::vector<bool> touches(network.num_nodes(), false);
  for (const Arc& arc : network.arcs()) {
    if (arc.from == FlowNetwork::source()) {
      tier_demand[arc.to] = arc.capacity;
    } else if (network.is_tier_node(arc.from)) {
      if (in_set[network.object_of(arc.to)]) {
        touches[arc.from] = true;
      } else {
        outside[arc.from] += arc.capacity;
      }
    }
  }
  Quantity total = 0;
  for (NodeId n = 0; n < network.num_nodes(); ++n) {
    if (touches[n]) total += std::max<Quantity>(0, tier_demand[n] - outside[n]);
  }
  return total;
}

}  // namespace

Quantity overdemand(const Instance& instance, const PriceVector& prices,
                    const std::vector<ObjectIndex>& objects) {
  check_prices(instance, prices);
  std::vector<bool> in_set(instance.num_objects(), false);
  for (ObjectIndex i : objects) {
    if (i >= instance.num_objects()) {
      throw PreconditionError("unknown object index " + std::to_string(i));
    }
    in_set[i] = true;
  }
  return overdemand_on(build_demand_network(instance, prices), in_set);
}

HallResult hall_check(const Instance& instance, const PriceVector& prices, const Budget& budget) {
  check_prices(instance, prices);
  check_subset_budget(instance, budget);
  const std::size_t m = instance.num_objects();
  const FlowNetwork network = build_demand_network(instance, prices);

  Quantity best_excess = 0;
  std::optional<Mask> best;
  std::vector<bool> in_set(m);
  for (Mask mask = 0; mask < (Mask{1} << m); ++mask) {
    Quantity supply = 0;
    for (ObjectIndex i = 0; i < m; ++i) {
      in_set[i] = (mask >> i & 1U) != 0;
      if (in_set[i]) supply += instance.supply(i);
    }
    const Quantity excess = overdemand_on(network, in_set) - supply;
    if (excess <= 0) continue;
    if (!best || excess > best_excess || (excess == best_excess && canonical_less(mask, *best, m))) {
      best = mask;
      best_excess = excess;
    }
  }
  if (!best) return {true, std::nullopt};
  return {false, mask_objects(*best, m)};
}

bool is_competitive_flowcheck(const Instance& instance, const PriceVector& prices) {
  check_prices(instance, prices);
  const FlowNetwork network = build_demand_network(instance, prices);
  return max_flow(network).value == network.source_capacity();
}

std::vector<Bundle> enumerate_preferred_bundles(const Instance& instance, BuyerIndex buyer,
                                                const PriceVector& prices,
                                                const Budget& budget) {
  check_prices(instance, prices);
  const std::size_t m = instance.num_objects();
  std::uint64_t count = 1;
  for (ObjectIndex i = 0; i < m; ++i) {
    count *= static_cast<std::uint64_t>(instance.supply(i)) + 1;
    if (count > budget.max_price_vectors) {
      throw BudgetExceeded("bundle enumeration exceeds the budget");
    }
  }

  std::vector<Bundle> best;
  Value best_payoff = 0;
  Bundle x(m, 0);
  const Quantity demand = instance.demand(buyer);
  std::function<void(ObjectIndex, Quantity)> visit = [&](ObjectIndex i, Quantity used) {
    if (i == m) {
      const Value payoff = bundle_payoff(instance, buyer, prices, x);
      if (best.empty() || payoff > best_payoff) {
        best.assign(1, x);
        best_payoff = payoff;
      } else if (payoff == best_payoff) {
        best.push_back(x);
      }
      return;
    }
    for (Quantity q = 0; q <= instance.supply(i) && used + q <= demand; ++q) {
      x[i] = q;
      visit(i + 1, used + q);
    }
    x[i] = 0;
  };
  visit(0, 0);
  return best;
}

bool is_competitive_bruteforce(const Instance& instance, const PriceVector& prices,
                               const Budget& budget) {
  std::vector<std::vector<Bundle>> options;
  for (BuyerIndex j = 0; j < instance.num_buyers(); ++j) {
    options.push_back(enumerate_preferred_bundles(instance, j, prices, budget));
  }
  std::vector<Quantity> remaining = instance.supplies();
  std::uint64_t visited = 0;
  std::function<bool(BuyerIndex)> assign = [&](BuyerIndex j) {
    if (j == instance.num_buyers()) return true;
    for (const Bundle& bundle : options[j]) {
      if (++visited > budget.max_price_vectors) {
        throw BudgetExceeded("stable-allocation search exceeds the budget");
      }
      bool fits = true;
      for (ObjectIndex i = 0; i < bundle.size(); ++i) fits = fits && bundle[i] <= remaining[i];
      if (!fits) continue;
      for (ObjectIndex i = 0; i < bundle.size(); ++i) remaining[i] -= bundle[i];
      const bool ok = assign(j + 1);
      for (ObjectIndex i = 0; i < bundle.size(); ++i) remaining[i] += bundle[i];
      if (ok) return true;
    }
    return false;
  };
  return assign(0);
}

PriceVector min_competitive_bruteforce(const Instance& instance, const Budget& budget) {
  const std::size_t m = instance.num_objects();
  const Price top = instance.max_valuation() + 1;
  std::uint64_t grid = 1;
  for (std::size_t i = 0; i < m; ++i) {
    grid *= static_cast<std::uint64_t>(top) + 1;
    if (grid > budget.max_price_vectors) {
      throw BudgetExceeded("price grid of (" + std::to_string(top + 1) + ")^" +
                           std::to_string(m) + " vectors exceeds the budget of " +
                           std::to_string(budget.max_price_vectors));
    }
  }

  PriceVector lowest(m, top);
  PriceVector p(m, 0);
  bool any = false;
  while (true) {
    if (is_competitive_flowcheck(instance, p)) {
      any = true;
      for (ObjectIndex i = 0; i < m; ++i) lowest[i] = std::min(lowest[i], p[i]);
    }
    ObjectIndex k = 0;
    while (k < m && p[k] == top) p[k++] = 0;
    if (k == m) break;
    ++p[k];
  }
  if (!any || !is_competitive_flowcheck(instance, lowest)) {
    throw std::logic_error("component-wise minimum of competitive prices is not competitive");
  }
  return lowest;
}

Value lyapunov(const Instance& instance, const PriceVector& prices) {
  check_prices(instance, prices);
  Value total = 0;
  for (BuyerIndex j = 0; j < instance.num_buyers(); ++j) {
    total += indirect_utility(instance, j, prices);
  }
  for (ObjectIndex i = 0; i < instance.num_objects(); ++i) {
    total += instance.supply(i) * prices[i];
  }
  return total;
}

std::vector<ObjectIndex> steepest_descent_bruteforce(const Instance& instance,
                                                     const PriceVector& prices,
                                                     const Budget& budget) {
  check_prices(instance, prices);
  check_subset_budget(instance, budget);
  const std::size_t m = instance.num_objects();

  std::vector<Mask> minimizers;
  Value best = 0;
  for (Mask mask = 0; mask < (Mask{1} << m); ++mask) {
    const Value value = lyapunov(instance, prices.raised(mask_objects(mask, m)));
    if (minimizers.empty() || value < best) {
      minimizers.assign(1, mask);
      best = value;
    } else if (value == best) {
      minimizers.push_back(mask);
    }
  }
  Mask minimal = minimizers.front();
  for (Mask mask : minimizers) {
    if (canonical_less(mask, minimal, m)) minimal = mask;
  }
  for (Mask mask : minimizers) {
    if ((mask & minimal) != minimal) {
      throw std::logic_error("minimizers of L(p + chi_X) have no unique minimal element");
    }
  }
  return mask_objects(minimal, m);
}

EquilibriumReport check_equilibrium(const Instance& instance, const PriceVector& prices,
                                    const Allocation& allocation) {
  check_prices(instance, prices);
  EquilibriumReport report;
  report.feasible = allocation.feasible_for(instance);
  report.expected_quantity = std::min(instance.total_supply(), instance.total_demand());
  if (!report.feasible) {
    report.stable.assign(instance.num_buyers(), false);
    report.positive_price_sellout = false;
    report.overall = false;
    return report;
  }

  for (BuyerIndex j = 0; j < instance.num_buyers(); ++j) {
    Bundle bundle(instance.num_objects());
    for (ObjectIndex i = 0; i < instance.num_objects(); ++i) bundle[i] = allocation.at(i, j);
    report.stable.push_back(bundle_payoff(instance, j, prices, bundle) ==
                            indirect_utility(instance, j, prices));
  }
  report.quantity_sold = allocation.total();
  for (ObjectIndex i = 0; i < instance.num_objects(); ++i) {
    if (prices[i] > 0 && allocation.sold(i) != instance.supply(i)) {
      report.positive_price_sellout = false;
    }
  }
  report.overall = std::all_of(report.stable.begin(), report.stable.end(),
                               [](bool b) { return b; }) &&
                   report.quantity_sold == report.expected_quantity &&
                   report.positive_price_sellout;
  return report;
}

bool check_monotonicity_pair(const Instance& instance_old, const Instance& instance_new,
                             const PriceVector& p_old, const PriceVector& p_new) {
  if (instance_old.object_ids() != instance_new.object_ids() ||
      instance_old.buyer_ids() != instance_new.buyer_ids()) {
    throw PreconditionError("instances must share object and buyer ids");
  }
  for (BuyerIndex j = 0; j < instance_old.num_buyers(); ++j) {
    if (instance_new.demand(j) < instance_old.demand(j)) {
      throw PreconditionError("demand of '" + instance_old.buyer_ids()[j] + "' decreased");
    }
    for (ObjectIndex i = 0; i < instance_old.num_objects(); ++i) {
      if (instance_old.valuation(i, j) != instance_new.valuation(i, j)) {
        throw PreconditionError("valuations differ between the instances");
      }
    }
  }
  for (ObjectIndex i = 0; i < instance_old.num_objects(); ++i) {
    if (instance_new.supply(i) > instance_old.supply(i)) {
      throw PreconditionError("supply of '" + instance_old.object_ids()[i] + "' increased");
    }
  }
  check_prices(instance_old, p_old);
  check_prices(instance_new, p_new);
  for (ObjectIndex i = 0; i < instance_old.num_objects(); ++i) {
    if (instance_new.supply(i) > 0 && p_old[i] > p_new[i]) return false;
  }
  return true;
}

Instance random_instance(std::mt19937_64& rng, const RandomInstanceParams& params) {
  auto draw = [&rng](std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
  };
  RawInstance raw;
  const auto m = draw(1, static_cast<std::int64_t>(params.max_objects));
  const auto n = draw(1, static_cast<std::int64_t>(params.max_buyers));
  for (std::int64_t i = 0; i < m; ++i) {
    raw.objects.push_back({"o" + std::to_string(i), draw(0, params.max_supply)});
  }
  for (std::int64_t j = 0; j < n; ++j) {
    RawBuyer buyer{"b" + std::to_string(j), draw(0, params.max_demand), {}};
    for (std::int64_t i = 0; i < m; ++i) {
      buyer.valuations.emplace_back("o" + std::to_string(i), draw(0, params.max_value));
    }
    raw.buyers.push_back(std::move(buyer));
  }
  return validate_instance(raw);
}

Instance apply_perturbation(const Instance& instance, const Perturbation& perturbation) {
  if (perturbation.delta < 0) throw PreconditionError("perturbation delta must be >= 0");
  RawInstance raw = instance.to_raw();
  if (perturbation.kind == PerturbationKind::demand_up) {
    raw.buyers.at(perturbation.index).demand += perturbation.delta;
  } else {
    auto& supply = raw.objects.at(perturbation.index).supply;
    supply = std::max<Quantity>(0, supply - perturbation.delta);
  }
  return validate_instance(raw);
}

Perturbation random_perturbation(std::mt19937_64& rng, const Instance& instance) {
  const std::size_t n = instance.num_buyers();
  const std::size_t m = instance.num_objects();
  if (n + m == 0) throw PreconditionError("nothing to perturb in an empty instance");
  const auto coordinate = std::uniform_int_distribution<std::size_t>(0, n + m - 1)(rng);
  const auto delta = std::uniform_int_distribution<Quantity>(1, 3)(rng);
  if (coordinate < n) return {PerturbationKind::demand_up, coordinate, delta};
  return {PerturbationKind::supply_down, coordinate - n, delta};
}

std::string describe(const Instance& instance, const Perturbation& perturbation) {
  if (perturbation.kind == PerturbationKind::demand_up) {
    return "demand(" + instance.buyer_ids().at(perturbation.index) + ") +" +
           std::to_string(perturbation.delta);
  }
  return "supply(" + instance.object_ids().at(perturbation.index) + ") -" +
         std::to_string(perturbation.delta);
}

MonotonicityCase run_monotonicity_case(std::size_t index, const Instance& before,
                                       const Perturbation& perturbation) {
  const Instance after = apply_perturbation(before, perturbation);
  MonotonicityCase out;
  out.index = index;
  out.perturbation = describe(before, perturbation);
  out.p_old = price_raising(before).prices;
  out.p_new = price_raising(after).prices;
  out.monotone = check_monotonicity_pair(before, after, out.p_old, out.p_new);

  SolveOptions warm;
  PriceVector start = out.p_old;
  for (ObjectIndex i = 0; i < after.num_objects(); ++i) {
    if (after.supply(i) == 0) start[i] = 0;
  }
  warm.start_prices = start;
  warm.trace = false;
  const PriceRaisingResult restart = price_raising(after, warm);
  out.warm_restart_steps = restart.trace.raise_steps;
  out.warm_restart_agrees = restart.prices == out.p_new;
  return out;
}

std::vector<MonotonicityCase> monotonicity_sweep(std::uint64_t seed, std::size_t count,
                                                 const std::optional<Instance>& base,
                                                 unsigned threads) {
  std::mt19937_64 rng(seed);
  std::vector<Instance> instances;
  std::vector<Perturbation> perturbations;
  instances.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    instances.push_back(base ? *base : random_instance(rng));
    perturbations.push_back(random_perturbation(rng, instances.back()));
  }

  std::vector<MonotonicityCase> results(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      results[k] = run_monotonicity_case(k, instances[k], perturbations[k]);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::max(threads, 1U); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return results;
}

}  // namespace flowauction

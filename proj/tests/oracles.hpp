#pragma once

// Test-only reference implementations. Each one works straight from the
// definitions by exhaustive enumeration and shares no code with the library
// beyond the data types.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "flowauction/flow.hpp"
#include "flowauction/instance_io.hpp"
#include "flowauction/model.hpp"

namespace oracle {

using namespace flowauction;

inline std::string data_path(const std::string& name) {
  return std::string(FLOWAUCTION_TEST_DATA) + "/" + name;
}

inline Instance fixture(const std::string& name) { return load_instance(data_path(name)); }

inline PriceVector prices(std::vector<Price> values) { return PriceVector(std::move(values)); }

/// Calls `visit` on every bundle x with 0 <= x_i <= b_i and sum x <= d.
inline void for_each_bundle(const Instance& inst, BuyerIndex j,
                            const std::function<void(const std::vector<Quantity>&)>& visit) {
  std::vector<Quantity> x(inst.num_objects(), 0);
  std::function<void(std::size_t, Quantity)> rec = [&](std::size_t i, Quantity left) {
    if (i == x.size()) {
      visit(x);
      return;
    }
    for (Quantity q = 0; q <= std::min(inst.supply(i), left); ++q) {
      x[i] = q;
      rec(i + 1, left - q);
    }
    x[i] = 0;
  };
  rec(0, inst.demand(j));
}

inline Value payoff(const Instance& inst, BuyerIndex j, const PriceVector& p,
                    const std::vector<Quantity>& x) {
  Value total = 0;
  for (ObjectIndex i = 0; i < x.size(); ++i) total += (inst.valuation(i, j) - p[i]) * x[i];
  return total;
}

inline Value best_payoff(const Instance& inst, BuyerIndex j, const PriceVector& p) {
  Value best = std::numeric_limits<Value>::min();
  for_each_bundle(inst, j, [&](const auto& x) { best = std::max(best, payoff(inst, j, p, x)); });
  return best;
}

inline std::vector<std::vector<Quantity>> preferred(const Instance& inst, BuyerIndex j,
                                                    const PriceVector& p) {
  const Value best = best_payoff(inst, j, p);
  std::vector<std::vector<Quantity>> out;
  for_each_bundle(inst, j, [&](const auto& x) {
    if (payoff(inst, j, p, x) == best) out.push_back(x);
  });
  return out;
}

/// Some choice of preferred bundles fits within supply.
inline bool competitive(const Instance& inst, const PriceVector& p) {
  std::vector<std::vector<std::vector<Quantity>>> options;
  for (BuyerIndex j = 0; j < inst.num_buyers(); ++j) options.push_back(preferred(inst, j, p));
  std::vector<Quantity> left = inst.supplies();
  std::function<bool(std::size_t)> rec = [&](std::size_t j) {
    if (j == options.size()) return true;
    for (const auto& x : options[j]) {
      bool fits = true;
      for (std::size_t i = 0; i < x.size(); ++i) fits = fits && x[i] <= left[i];
      if (!fits) continue;
      for (std::size_t i = 0; i < x.size(); ++i) left[i] -= x[i];
      const bool ok = rec(j + 1);
      for (std::size_t i = 0; i < x.size(); ++i) left[i] += x[i];
      if (ok) return true;
    }
    return false;
  };
  return rec(0);
}

/// Component-wise minimum of all competitive vectors in {0..vmax+1}^m.
inline PriceVector min_competitive(const Instance& inst) {
  const std::size_t m = inst.num_objects();
  const Price top = inst.max_valuation() + 1;
  PriceVector low(m, top);
  PriceVector p(m, 0);
  while (true) {
    if (competitive(inst, p)) {
      for (std::size_t i = 0; i < m; ++i) low[i] = std::min(low[i], p[i]);
    }
    std::size_t k = 0;
    while (k < m && p[k] == top) p[k++] = 0;
    if (k == m) break;
    ++p[k];
  }
  return low;
}

inline Value lyapunov(const Instance& inst, const PriceVector& p) {
  Value total = 0;
  for (BuyerIndex j = 0; j < inst.num_buyers(); ++j) total += best_payoff(inst, j, p);
  for (ObjectIndex i = 0; i < inst.num_objects(); ++i) total += inst.supply(i) * p[i];
  return total;
}

struct MinCut {
  Quantity capacity = 0;
  std::vector<NodeId> leftmost;  // intersection of all minimum cuts, sorted
  bool leftmost_is_min = false;
};

/// Enumerates every s-t cut of a network with at most 14 nodes.
inline MinCut min_cut(const FlowNetwork& net) {
  const std::size_t n = net.num_nodes();
  if (n > 14) throw std::invalid_argument("network too large for cut enumeration");
  std::vector<NodeId> inner;
  for (NodeId v = 0; v < n; ++v) {
    if (v != FlowNetwork::source() && v != FlowNetwork::sink()) inner.push_back(v);
  }
  auto capacity_of = [&](const std::vector<bool>& side) {
    Quantity c = 0;
    for (const Arc& a : net.arcs()) {
      if (side[a.from] && !side[a.to]) c += a.capacity;
    }
    return c;
  };
  MinCut out;
  out.capacity = std::numeric_limits<Quantity>::max();
  std::vector<bool> meet(n, true);
  for (std::uint32_t mask = 0; mask < (1U << inner.size()); ++mask) {
    std::vector<bool> side(n, false);
    side[FlowNetwork::source()] = true;
    for (std::size_t k = 0; k < inner.size(); ++k) side[inner[k]] = (mask >> k & 1U) != 0;
    const Quantity c = capacity_of(side);
    if (c < out.capacity) {
      out.capacity = c;
      meet = side;
    } else if (c == out.capacity) {
      for (NodeId v = 0; v < n; ++v) meet[v] = meet[v] && side[v];
    }
  }
  for (NodeId v = 0; v < n; ++v) {
    if (meet[v]) out.leftmost.push_back(v);
  }
  out.leftmost_is_min = capacity_of(meet) == out.capacity;
  return out;
}

}  // namespace oracle

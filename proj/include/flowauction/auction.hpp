#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "flowauction/flow.hpp"
#include "flowauction/model.hpp"
#include "flowauction/tiers.hpp"

namespace flowauction {

enum class StepMode { unit, adapted };

struct SolveOptions {
  StepMode mode = StepMode::unit;
  /// Carry the previous maximum flow into the next network instead of
  /// starting from zero. Unit mode uses flow_update; adapted mode reuses
  /// the maximum flow computed while probing the accepted step.
  bool warm_start = true;
  /// Must not exceed the minimum competitive prices; all zero if unset.
  std::optional<PriceVector> start_prices;
  /// Keep per-iteration records. Counters are kept either way.
  bool trace = true;
};

/// One price raise.
struct IterationRecord {
  std::size_t iter = 0;
  PriceVector prices;                  // before the raise
  std::vector<ObjectIndex> raised_set;
  std::vector<NodeId> cut_nodes;
  Quantity flow_value = 0;             // maximum flow in G(prices)
  Quantity cap_s = 0;                  // D_p
  Price step = 0;
  /// Value of the flow carried into G(prices) before augmentation, if any.
  std::optional<Quantity> carried_flow_value;
};

struct AuctionTrace {
  std::vector<IterationRecord> iterations;
  PriceVector final_prices;
  std::int64_t oracle_calls = 0;
  std::size_t raise_steps = 0;
  /// Flow at the final, competitive prices.
  Quantity final_flow_value = 0;
  Quantity final_cap_s = 0;
  std::optional<Quantity> final_carried_flow_value;

  /// Number of max-flow rounds, the terminal check included.
  std::size_t outer_iterations() const noexcept { return raise_steps + 1; }
};

struct PriceRaisingResult {
  PriceVector prices;
  AuctionTrace trace;
};

/// Ascending auction: raise prices on the objects of the left-most min cut
/// of G(p) until G(p) admits a flow saturating every source arc. Returns
/// the component-wise minimum competitive prices.
PriceRaisingResult price_raising(const Instance& instance, const SolveOptions& options = {});

/// Largest step alpha >= 1 such that G(prices + alpha * chi_I) still has the
/// left-most cut objects I of `cut`; 1 if the very first unit step changes
/// them. `cut` and `flow` must be the left-most min cut and a maximum flow of
/// G(prices), with prices not yet competitive.
Price adapted_step_length(const Instance& instance, const PriceVector& prices,
                          const CutResult& cut, const IntegralFlow& flow);

/// Stable allocation at minimum competitive prices, read off a maximum flow
/// of H(prices) on the balanced instance. Dummy entities are stripped.
Allocation allocate(const Instance& instance, const PriceVector& prices);

struct Equilibrium {
  PriceVector prices;
  Allocation allocation;
  AuctionTrace trace;
};

Equilibrium solve(const Instance& instance, const SolveOptions& options = {});

/// Network and maximum flow of the first auction round, for dumps.
struct InitialRound {
  FlowNetwork network;
  IntegralFlow flow;
};
InitialRound initial_round(const Instance& instance, const PriceVector& prices);

}  // namespace flowauction

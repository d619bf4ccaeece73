#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "flowauction/model.hpp"
#include "flowauction/tiers.hpp"

namespace flowauction {

using NodeId = std::size_t;
using ArcId = std::size_t;

enum class NetworkKind { demand, allocation };

/// Which buyer-tier node an arc leaves: j', j'' or j'''.
enum class Tier { strong = 0, marginal = 1, zero = 2 };

struct Arc {
  NodeId from;
  NodeId to;
  Quantity capacity;

  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Layered s-t network over buyer tiers and objects.
///
/// Node layout is fixed by the instance shape: s, t, then three tier nodes
/// per buyer (j', j'', j''') and one node per object. Tier nodes exist even
/// when their tier is empty so node ids are stable across price changes.
/// Source arcs are always present (possibly with capacity 0); tier-to-object
/// arcs of capacity 0 are omitted.
class FlowNetwork {
 public:
  FlowNetwork(NetworkKind kind, const Instance& instance, PriceVector prices,
              std::vector<TierReport> tiers);

  NetworkKind kind() const noexcept { return kind_; }
  std::size_t num_nodes() const noexcept { return 2 + 3 * num_buyers_ + num_objects_; }
  std::size_t num_buyers() const noexcept { return num_buyers_; }
  std::size_t num_objects() const noexcept { return num_objects_; }

  static constexpr NodeId source() noexcept { return 0; }
  static constexpr NodeId sink() noexcept { return 1; }
  NodeId tier_node(BuyerIndex j, Tier tier) const noexcept {
    return 2 + 3 * j + static_cast<std::size_t>(tier);
  }
  NodeId object_node(ObjectIndex i) const noexcept { return 2 + 3 * num_buyers_ + i; }

  bool is_tier_node(NodeId n) const noexcept { return n >= 2 && n < 2 + 3 * num_buyers_; }
  bool is_object_node(NodeId n) const noexcept {
    return n >= 2 + 3 * num_buyers_ && n < num_nodes();
  }
  BuyerIndex buyer_of(NodeId tier_node) const noexcept { return (tier_node - 2) / 3; }
  Tier tier_of(NodeId tier_node) const noexcept { return static_cast<Tier>((tier_node - 2) % 3); }
  ObjectIndex object_of(NodeId object_node) const noexcept {
    return object_node - 2 - 3 * num_buyers_;
  }

  const std::vector<Arc>& arcs() const noexcept { return arcs_; }
  std::optional<ArcId> find_arc(NodeId from, NodeId to) const;

  /// cap(s): total capacity on source arcs.
  Quantity source_capacity() const noexcept { return source_capacity_; }

  const PriceVector& prices() const noexcept { return prices_; }
  const std::vector<TierReport>& tiers() const noexcept { return tiers_; }

  /// "s", "t", "<buyer>'", "<buyer>''", "<buyer>'''", "<object>".
  const std::string& node_label(NodeId n) const { return labels_.at(n); }

 private:
  void add_arc(NodeId from, NodeId to, Quantity capacity);

  NetworkKind kind_;
  std::size_t num_buyers_;
  std::size_t num_objects_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<ArcId>> out_arcs_;
  Quantity source_capacity_ = 0;
  PriceVector prices_;
  std::vector<TierReport> tiers_;
  std::vector<std::string> labels_;
};

/// Integral flow on a specific FlowNetwork; `arc_flow` is aligned with arcs().
struct IntegralFlow {
  std::vector<Quantity> arc_flow;
  Quantity value = 0;

  friend bool operator==(const IntegralFlow&, const IntegralFlow&) = default;
};

struct CutResult {
  std::vector<NodeId> node_set;      // sorted; contains s, not t
  std::vector<ObjectIndex> objects;  // sorted
  Quantity capacity = 0;
};

/// G(p): arcs from s to j', j'' and on to Omega'_j, Omega''_j.
FlowNetwork build_demand_network(const Instance& instance, const PriceVector& prices,
                                 std::vector<TierReport> tiers);
FlowNetwork build_demand_network(const Instance& instance, const PriceVector& prices);

/// H(p): G(p) plus the zero-payoff tier j'''. `instance` must be balanced.
FlowNetwork build_allocation_network(const Instance& instance, const PriceVector& prices);

/// Empty string when `flow` obeys capacities and conservation on `network`
/// and `flow.value` equals the net outflow of s; otherwise a description of
/// the first violation.
std::string flow_violation(const FlowNetwork& network, const IntegralFlow& flow);

/// Shortest-augmenting-path max flow. A warm start must be feasible
/// (PreconditionError otherwise) and is augmented to a maximum.
IntegralFlow max_flow(const FlowNetwork& network,
                      const std::optional<IntegralFlow>& warm_start = std::nullopt);

/// Nodes reachable from s in the residual graph of a maximum flow: the
/// inclusion-wise minimal minimum cut. Throws PreconditionError if t is
/// reachable, i.e. the flow is not maximum.
CutResult leftmost_min_cut(const FlowNetwork& network, const IntegralFlow& flow);

struct DroppedUnits {
  BuyerIndex buyer;
  ObjectIndex object;
  Quantity units;

  friend bool operator==(const DroppedUnits&, const DroppedUnits&) = default;
};

struct FlowUpdateResult {
  IntegralFlow flow;
  std::vector<DroppedUnits> dropped;
};

/// Carries a maximum flow of G(p) over to G(p + chi_I), I being the objects
/// of the left-most min cut. Units a buyer held on object i move to the
/// j' path if i is strong at the new prices, else to the j'' path if i is
/// marginal, else they are dropped and recorded.
FlowUpdateResult flow_update(const FlowNetwork& old_network, const IntegralFlow& old_flow,
                             const PriceVector& new_prices, const FlowNetwork& new_network);

bool cut_objects_equal(const CutResult& a, const CutResult& b);

/// One line per arc: "from -> to [cap, flow]", in arc order.
std::string dump_network(const FlowNetwork& network, const IntegralFlow& flow);

}  // namespace flowauction

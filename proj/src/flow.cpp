#include "flowauction/flow.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <sstream>

namespace flowauction {

FlowNetwork::FlowNetwork(NetworkKind kind, const Instance& instance, PriceVector prices,
                         std::vector<TierReport> tiers)
    : kind_(kind),
      num_buyers_(instance.num_buyers()),
      num_objects_(instance.num_objects()),
      out_arcs_(2 + 3 * instance.num_buyers() + instance.num_objects()),
      prices_(std::move(prices)),
      tiers_(std::move(tiers)) {
  check_prices(instance, prices_);
  if (tiers_.size() != num_buyers_) {
    throw PreconditionError("need one tier report per buyer");
  }

  labels_.resize(num_nodes());
  labels_[source()] = "s";
  labels_[sink()] = "t";
  for (BuyerIndex j = 0; j < num_buyers_; ++j) {
    const std::string& id = instance.buyer_ids()[j];
    labels_[tier_node(j, Tier::strong)] = id + "'";
    labels_[tier_node(j, Tier::marginal)] = id + "''";
    labels_[tier_node(j, Tier::zero)] = id + "'''";
  }
  for (ObjectIndex i = 0; i < num_objects_; ++i) {
    labels_[object_node(i)] = instance.object_ids()[i];
  }

  const bool with_zero_tier = kind_ == NetworkKind::allocation;
  for (BuyerIndex j = 0; j < num_buyers_; ++j) {
    add_arc(source(), tier_node(j, Tier::strong), tiers_[j].strong_demand);
    add_arc(source(), tier_node(j, Tier::marginal), tiers_[j].marginal_demand);
    if (with_zero_tier) add_arc(source(), tier_node(j, Tier::zero), tiers_[j].zero_demand);
  }
  for (BuyerIndex j = 0; j < num_buyers_; ++j) {
    const TierReport& t = tiers_[j];
    for (ObjectIndex i : t.strong) {
      if (instance.supply(i) > 0) {
        add_arc(tier_node(j, Tier::strong), object_node(i), instance.supply(i));
      }
    }
    for (ObjectIndex i : t.marginal) {
      const Quantity cap = std::min(instance.supply(i), t.marginal_demand);
      if (cap > 0) add_arc(tier_node(j, Tier::marginal), object_node(i), cap);
    }
    if (with_zero_tier) {
      for (ObjectIndex i : t.zero) {
        if (instance.supply(i) > 0) {
          add_arc(tier_node(j, Tier::zero), object_node(i), instance.supply(i));
        }
      }
    }
  }
  for (ObjectIndex i = 0; i < num_objects_; ++i) {
    add_arc(object_node(i), sink(), instance.supply(i));
  }
}

void FlowNetwork::add_arc(NodeId from, NodeId to, Quantity capacity) {
  out_arcs_[from].push_back(arcs_.size());
  arcs_.push_back({from, to, capacity});
  if (from == source()) source_capacity_ += capacity;
}

std::optional<ArcId> FlowNetwork::find_arc(NodeId from, NodeId to) const {
  if (from >= out_arcs_.size()) return std::nullopt;
  for (ArcId a : out_arcs_[from]) {
    if (arcs_[a].to == to) return a;
  }
  return std::nullopt;
}

FlowNetwork build_demand_network(const Instance& instance, const PriceVector& prices,
                                 std::vector<TierReport> tiers) {
  return FlowNetwork(NetworkKind::demand, instance, prices, std::move(tiers));
}

FlowNetwork build_demand_network(const Instance& instance, const PriceVector& prices) {
  TierOracle oracle(instance);
  return build_demand_network(instance, prices, oracle.query_all(prices));
}

FlowNetwork build_allocation_network(const Instance& instance, const PriceVector& prices) {
  if (instance.total_supply() != instance.total_demand()) {
    throw PreconditionError("allocation network needs a balanced instance (total supply " +
                            std::to_string(instance.total_supply()) + " vs total demand " +
                            std::to_string(instance.total_demand()) + ")");
  }
  TierOracle oracle(instance);
  return FlowNetwork(NetworkKind::allocation, instance, prices, oracle.query_all(prices));
}

std::string flow_violation(const FlowNetwork& network, const IntegralFlow& flow) {
  const auto& arcs = network.arcs();
  if (flow.arc_flow.size() != arcs.size()) return "flow does not match the network's arcs";
  std::vector<Quantity> balance(network.num_nodes(), 0);
  for (ArcId a = 0; a < arcs.size(); ++a) {
    const Quantity f = flow.arc_flow[a];
    if (f < 0 || f > arcs[a].capacity) {
      return "arc " + network.node_label(arcs[a].from) + " -> " + network.node_label(arcs[a].to) +
             " carries " + std::to_string(f) + " with capacity " +
             std::to_string(arcs[a].capacity);
    }
    balance[arcs[a].from] -= f;
    balance[arcs[a].to] += f;
  }
  for (NodeId n = 0; n < network.num_nodes(); ++n) {
    if (n == FlowNetwork::source() || n == FlowNetwork::sink()) continue;
    if (balance[n] != 0) return "flow conservation fails at " + network.node_label(n);
  }
  if (-balance[FlowNetwork::source()] != flow.value) {
    return "flow value " + std::to_string(flow.value) + " differs from net source outflow " +
           std::to_string(-balance[FlowNetwork::source()]);
  }
  return {};
}

namespace {

struct ResidualStep {
  ArcId arc;
  bool forward;
};

class Residual {
 public:
  Residual(const FlowNetwork& network, IntegralFlow& flow)
      : network_(network), flow_(flow), adjacency_(network.num_nodes()) {
    const auto& arcs = network.arcs();
    for (ArcId a = 0; a < arcs.size(); ++a) {
      adjacency_[arcs[a].from].push_back({a, true});
      adjacency_[arcs[a].to].push_back({a, false});
    }
  }

  Quantity residual(const ResidualStep& step) const {
    const Quantity f = flow_.arc_flow[step.arc];
    return step.forward ? network_.arcs()[step.arc].capacity - f : f;
  }

  NodeId head(const ResidualStep& step) const {
    const Arc& arc = network_.arcs()[step.arc];
    return step.forward ? arc.to : arc.from;
  }

  /// BFS from s; fills `parent` and returns the visited mask.
  std::vector<bool> search(std::vector<std::optional<ResidualStep>>& parent) const {
    std::vector<bool> seen(network_.num_nodes(), false);
    parent.assign(network_.num_nodes(), std::nullopt);
    std::deque<NodeId> queue{FlowNetwork::source()};
    seen[FlowNetwork::source()] = true;
    while (!queue.empty()) {
      const NodeId u = queue.front();
      queue.pop_front();
      for (const ResidualStep& step : adjacency_[u]) {
        if (residual(step) <= 0) continue;
        const NodeId v = head(step);
        if (seen[v]) continue;
        seen[v] = true;
        parent[v] = step;
        queue.push_back(v);
      }
    }
    return seen;
  }

  bool augment_once() {
    std::vector<std::optional<ResidualStep>> parent;
    const auto seen = search(parent);
    if (!seen[FlowNetwork::sink()]) return false;

    Quantity bottleneck = std::numeric_limits<Quantity>::max();
    for (NodeId v = FlowNetwork::sink(); v != FlowNetwork::source();) {
      const ResidualStep& step = *parent[v];
      bottleneck = std::min(bottleneck, residual(step));
      v = step.forward ? network_.arcs()[step.arc].from : network_.arcs()[step.arc].to;
    }
    for (NodeId v = FlowNetwork::sink(); v != FlowNetwork::source();) {
      const ResidualStep& step = *parent[v];
      flow_.arc_flow[step.arc] += step.forward ? bottleneck : -bottleneck;
      v = step.forward ? network_.arcs()[step.arc].from : network_.arcs()[step.arc].to;
    }
    flow_.value += bottleneck;
    return true;
  }

 private:
  const FlowNetwork& network_;
  IntegralFlow& flow_;
  std::vector<std::vector<ResidualStep>> adjacency_;
};

}  // namespace

IntegralFlow max_flow(const FlowNetwork& network, const std::optional<IntegralFlow>& warm_start) {
  IntegralFlow flow;
  if (warm_start) {
    if (auto why = flow_violation(network, *warm_start); !why.empty()) {
      throw PreconditionError("infeasible warm start: " + why);
    }
    flow = *warm_start;
  } else {
    flow.arc_flow.assign(network.arcs().size(), 0);
  }
  Residual residual(network, flow);
  while (residual.augment_once()) {
  }
  return flow;
}

CutResult leftmost_min_cut(const FlowNetwork& network, const IntegralFlow& flow) {
  if (auto why = flow_violation(network, flow); !why.empty()) {
    throw PreconditionError("cannot cut with an infeasible flow: " + why);
  }
  IntegralFlow copy = flow;
  Residual residual(network, copy);
  std::vector<std::optional<ResidualStep>> parent;
  const auto reachable = residual.search(parent);
  if (reachable[FlowNetwork::sink()]) {
    throw PreconditionError("flow is not maximum: sink reachable in the residual graph");
  }

  CutResult cut;
  for (NodeId n = 0; n < network.num_nodes(); ++n) {
    if (!reachable[n]) continue;
    cut.node_set.push_back(n);
    if (network.is_object_node(n)) cut.objects.push_back(network.object_of(n));
  }
  for (const Arc& arc : network.arcs()) {
    if (reachable[arc.from] && !reachable[arc.to]) cut.capacity += arc.capacity;
  }
  if (cut.capacity != flow.value) {
    throw std::logic_error("residual cut capacity differs from the maximum flow value");
  }
  return cut;
}

FlowUpdateResult flow_update(const FlowNetwork& old_network, const IntegralFlow& old_flow,
                             const PriceVector& new_prices, const FlowNetwork& new_network) {
  if (old_network.kind() != NetworkKind::demand || new_network.kind() != NetworkKind::demand) {
    throw PreconditionError("flow update works on demand networks");
  }
  if (old_network.num_buyers() != new_network.num_buyers() ||
      old_network.num_objects() != new_network.num_objects()) {
    throw PreconditionError("flow update needs networks over the same instance");
  }
  const CutResult cut = leftmost_min_cut(old_network, old_flow);
  if (new_prices != old_network.prices().raised(cut.objects) ||
      new_network.prices() != new_prices) {
    throw PreconditionError("new prices must raise exactly the left-most cut objects by one");
  }

  FlowUpdateResult out;
  out.flow.arc_flow.assign(new_network.arcs().size(), 0);

  auto push_path = [&](NodeId tier, ObjectIndex i, Quantity units) {
    const NodeId obj = new_network.object_node(i);
    for (auto [from, to] : {std::pair{FlowNetwork::source(), tier}, std::pair{tier, obj},
                            std::pair{obj, FlowNetwork::sink()}}) {
      out.flow.arc_flow[*new_network.find_arc(from, to)] += units;
    }
    out.flow.value += units;
  };

  for (BuyerIndex j = 0; j < old_network.num_buyers(); ++j) {
    for (ObjectIndex i = 0; i < old_network.num_objects(); ++i) {
      const NodeId obj = old_network.object_node(i);
      Quantity units = 0;
      for (Tier tier : {Tier::strong, Tier::marginal}) {
        if (auto a = old_network.find_arc(old_network.tier_node(j, tier), obj)) {
          units += old_flow.arc_flow[*a];
        }
      }
      if (units == 0) continue;

      const NodeId strong = new_network.tier_node(j, Tier::strong);
      const NodeId marginal = new_network.tier_node(j, Tier::marginal);
      if (new_network.find_arc(strong, new_network.object_node(i))) {
        push_path(strong, i, units);
      } else if (new_network.find_arc(marginal, new_network.object_node(i))) {
        push_path(marginal, i, units);
      } else {
        out.dropped.push_back({j, i, units});
      }
    }
  }

  if (auto why = flow_violation(new_network, out.flow); !why.empty()) {
    throw std::logic_error("updated flow is infeasible: " + why);
  }
  return out;
}

bool cut_objects_equal(const CutResult& a, const CutResult& b) { return a.objects == b.objects; }

std::string dump_network(const FlowNetwork& network, const IntegralFlow& flow) {
  if (flow.arc_flow.size() != network.arcs().size()) {
    throw PreconditionError("flow does not match the network's arcs");
  }
  std::ostringstream out;
  for (ArcId a = 0; a < network.arcs().size(); ++a) {
    const Arc& arc = network.arcs()[a];
    out << network.node_label(arc.from) << " -> " << network.node_label(arc.to) << " ["
        << arc.capacity << ", " << flow.arc_flow[a] << "]\n";
  }
  return out.str();
}

}  // namespace flowauction

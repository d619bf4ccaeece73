#include "flowauction/model.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace flowauction {

namespace {

bool is_reserved(std::string_view id) {
  return id == kDummyObjectId || id == kDummyBuyerId;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b, const std::string& what) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw InstanceError("", what + " overflows 64-bit arithmetic");
  }
  return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b, const std::string& what) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw InstanceError("", what + " overflows 64-bit arithmetic");
  }
  return out;
}

}  // namespace

Instance detail::make_instance(const RawInstance& raw, bool allow_reserved_ids) {
  Instance out;
  std::unordered_map<std::string, ObjectIndex> object_index;
  std::unordered_set<std::string> seen_buyers;

  for (const auto& obj : raw.objects) {
    if (obj.id.empty()) throw InstanceError(obj.id, "object id must be nonempty");
    if (!allow_reserved_ids && is_reserved(obj.id)) {
      throw InstanceError(obj.id, "object id '" + obj.id + "' is reserved");
    }
    if (!object_index.emplace(obj.id, out.object_ids_.size()).second) {
      throw InstanceError(obj.id, "duplicate object id '" + obj.id + "'");
    }
    if (obj.supply < 0) {
      throw InstanceError(obj.id, "object '" + obj.id + "' has negative supply");
    }
    out.object_ids_.push_back(obj.id);
    out.supplies_.push_back(obj.supply);
    out.total_supply_ = checked_add(out.total_supply_, obj.supply, "total supply");
  }

  const std::size_t m = out.object_ids_.size();
  out.valuations_.assign(m * raw.buyers.size(), 0);

  for (std::size_t j = 0; j < raw.buyers.size(); ++j) {
    const auto& buyer = raw.buyers[j];
    if (buyer.id.empty()) throw InstanceError(buyer.id, "buyer id must be nonempty");
    if (!allow_reserved_ids && is_reserved(buyer.id)) {
      throw InstanceError(buyer.id, "buyer id '" + buyer.id + "' is reserved");
    }
    if (!seen_buyers.insert(buyer.id).second) {
      throw InstanceError(buyer.id, "duplicate buyer id '" + buyer.id + "'");
    }
    if (buyer.demand < 0) {
      throw InstanceError(buyer.id, "buyer '" + buyer.id + "' has negative demand");
    }
    out.buyer_ids_.push_back(buyer.id);
    out.demands_.push_back(buyer.demand);
    out.total_demand_ = checked_add(out.total_demand_, buyer.demand, "total demand");

    for (const auto& [object_id, value] : buyer.valuations) {
      auto it = object_index.find(object_id);
      if (it == object_index.end()) {
        throw InstanceError(buyer.id, "buyer '" + buyer.id + "' values unknown object '" +
                                          object_id + "'");
      }
      if (value < 0) {
        throw InstanceError(buyer.id, "buyer '" + buyer.id + "' has negative valuation for '" +
                                          object_id + "'");
      }
      out.valuations_[j * m + it->second] = value;
      out.max_valuation_ = std::max(out.max_valuation_, value);
    }
  }

  // Prices stay within [0, v_max + 1]; make sure every derived sum fits.
  const Quantity max_demand =
      out.demands_.empty() ? 0 : *std::max_element(out.demands_.begin(), out.demands_.end());
  checked_mul(out.max_valuation_, max_demand, "max valuation * max demand");
  checked_mul(out.max_valuation_, out.total_demand_, "max valuation * total demand");
  const Price price_cap = checked_add(out.max_valuation_, 2, "max valuation");
  checked_mul(price_cap, out.total_supply_, "price bound * total supply");
  checked_add(out.total_supply_, out.total_demand_, "total supply + total demand");
  return out;
}

Instance validate_instance(const RawInstance& raw) {
  return detail::make_instance(raw, false);
}

std::optional<ObjectIndex> Instance::find_object(std::string_view id) const {
  auto it = std::find(object_ids_.begin(), object_ids_.end(), id);
  if (it == object_ids_.end()) return std::nullopt;
  return static_cast<ObjectIndex>(it - object_ids_.begin());
}

std::optional<BuyerIndex> Instance::find_buyer(std::string_view id) const {
  auto it = std::find(buyer_ids_.begin(), buyer_ids_.end(), id);
  if (it == buyer_ids_.end()) return std::nullopt;
  return static_cast<BuyerIndex>(it - buyer_ids_.begin());
}

RawInstance Instance::to_raw() const {
  RawInstance raw;
  for (ObjectIndex i = 0; i < num_objects(); ++i) {
    raw.objects.push_back({object_ids_[i], supplies_[i]});
  }
  for (BuyerIndex j = 0; j < num_buyers(); ++j) {
    RawBuyer buyer{buyer_ids_[j], demands_[j], {}};
    for (ObjectIndex i = 0; i < num_objects(); ++i) {
      if (valuation(i, j) != 0) buyer.valuations.emplace_back(object_ids_[i], valuation(i, j));
    }
    raw.buyers.push_back(std::move(buyer));
  }
  return raw;
}

PriceVector PriceVector::raised(const std::vector<ObjectIndex>& objects, Price step) const {
  PriceVector out = *this;
  for (ObjectIndex i : objects) out.values_.at(i) += step;
  return out;
}

bool PriceVector::dominated_by(const PriceVector& other) const {
  if (size() != other.size()) throw PreconditionError("price vectors differ in size");
  for (std::size_t i = 0; i < size(); ++i) {
    if (values_[i] > other.values_[i]) return false;
  }
  return true;
}

Price PriceVector::distance_inf(const PriceVector& other) const {
  if (size() != other.size()) throw PreconditionError("price vectors differ in size");
  Price out = 0;
  for (std::size_t i = 0; i < size(); ++i) {
    out = std::max(out, values_[i] > other.values_[i] ? values_[i] - other.values_[i]
                                                      : other.values_[i] - values_[i]);
  }
  return out;
}

void check_prices(const Instance& instance, const PriceVector& prices) {
  if (prices.size() != instance.num_objects()) {
    throw PreconditionError("price vector has " + std::to_string(prices.size()) +
                            " entries, instance has " + std::to_string(instance.num_objects()) +
                            " objects");
  }
  for (ObjectIndex i = 0; i < prices.size(); ++i) {
    if (prices[i] < 0) {
      throw PreconditionError("negative price on object '" + instance.object_ids()[i] + "'");
    }
  }
}

Quantity Allocation::sold(ObjectIndex i) const {
  Quantity out = 0;
  for (BuyerIndex j = 0; j < num_buyers_; ++j) out += at(i, j);
  return out;
}

Quantity Allocation::received(BuyerIndex j) const {
  Quantity out = 0;
  for (ObjectIndex i = 0; i < num_objects_; ++i) out += at(i, j);
  return out;
}

Quantity Allocation::total() const {
  Quantity out = 0;
  for (Quantity q : quantity_) out += q;
  return out;
}

bool Allocation::feasible_for(const Instance& instance) const {
  if (num_objects_ != instance.num_objects() || num_buyers_ != instance.num_buyers()) {
    return false;
  }
  for (Quantity q : quantity_) {
    if (q < 0) return false;
  }
  for (ObjectIndex i = 0; i < num_objects_; ++i) {
    if (sold(i) > instance.supply(i)) return false;
  }
  for (BuyerIndex j = 0; j < num_buyers_; ++j) {
    if (received(j) > instance.demand(j)) return false;
  }
  return true;
}

BalancedInstance balance_instance(const Instance& instance) {
  const Quantity supply = instance.total_supply();
  const Quantity demand = instance.total_demand();
  if (supply == demand) return {instance, DummyInfo{}};

  RawInstance raw = instance.to_raw();
  DummyInfo dummy;
  if (supply < demand) {
    dummy = {DummyKind::dummy_object, std::string(kDummyObjectId), demand - supply};
    raw.objects.push_back({dummy.id, dummy.size});
  } else {
    dummy = {DummyKind::dummy_buyer, std::string(kDummyBuyerId), supply - demand};
    raw.buyers.push_back({dummy.id, dummy.size, {}});
  }
  return {detail::make_instance(raw, true), dummy};
}

Instance duplicate_instance(const Instance& instance) {
  RawInstance raw;
  std::vector<std::vector<std::string>> copies(instance.num_objects());
  for (ObjectIndex i = 0; i < instance.num_objects(); ++i) {
    for (Quantity k = 1; k <= instance.supply(i); ++k) {
      copies[i].push_back(instance.object_ids()[i] + "#" + std::to_string(k));
      raw.objects.push_back({copies[i].back(), 1});
    }
  }
  for (BuyerIndex j = 0; j < instance.num_buyers(); ++j) {
    std::vector<std::pair<std::string, std::int64_t>> valuations;
    for (ObjectIndex i = 0; i < instance.num_objects(); ++i) {
      const Value v = instance.valuation(i, j);
      if (v == 0) continue;
      for (const auto& copy : copies[i]) valuations.emplace_back(copy, v);
    }
    for (Quantity k = 1; k <= instance.demand(j); ++k) {
      raw.buyers.push_back({instance.buyer_ids()[j] + "#" + std::to_string(k), 1, valuations});
    }
  }
  return detail::make_instance(raw, true);
}

}  // namespace flowauction

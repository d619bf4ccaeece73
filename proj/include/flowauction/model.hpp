#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace flowauction {

using Quantity = std::int64_t;
using Price = std::int64_t;
using Value = std::int64_t;

using ObjectIndex = std::size_t;
using BuyerIndex = std::size_t;

inline constexpr std::string_view kDummyObjectId = "__dummy_object";
inline constexpr std::string_view kDummyBuyerId = "__dummy_buyer";

/// Raised when instance data is malformed. `entity()` names the offending
/// object or buyer id (empty when the problem is not tied to one entity).
class InstanceError : public std::invalid_argument {
 public:
  InstanceError(std::string entity, const std::string& what)
      : std::invalid_argument(what), entity_(std::move(entity)) {}

  const std::string& entity() const noexcept { return entity_; }

 private:
  std::string entity_;
};

/// A violated caller-side contract (wrong sizes, stale flows, ...).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Unvalidated input, as read from a file or assembled in code.
struct RawObject {
  std::string id;
  std::int64_t supply = 0;
};

struct RawBuyer {
  std::string id;
  std::int64_t demand = 0;
  std::vector<std::pair<std::string, std::int64_t>> valuations;
};

struct RawInstance {
  std::vector<RawObject> objects;
  std::vector<RawBuyer> buyers;
};

class Instance;
Instance validate_instance(const RawInstance& raw);

namespace detail {
Instance make_instance(const RawInstance& raw, bool allow_reserved_ids);
}

/// A multi-unit market: objects with supplies, buyers with demands and
/// per-unit valuations. Immutable after construction; build one with
/// validate_instance().
class Instance {
 public:
  std::size_t num_objects() const noexcept { return object_ids_.size(); }
  std::size_t num_buyers() const noexcept { return buyer_ids_.size(); }

  const std::vector<std::string>& object_ids() const noexcept { return object_ids_; }
  const std::vector<std::string>& buyer_ids() const noexcept { return buyer_ids_; }
  const std::vector<Quantity>& supplies() const noexcept { return supplies_; }
  const std::vector<Quantity>& demands() const noexcept { return demands_; }

  Quantity supply(ObjectIndex i) const { return supplies_.at(i); }
  Quantity demand(BuyerIndex j) const { return demands_.at(j); }
  Value valuation(ObjectIndex i, BuyerIndex j) const {
    return valuations_.at(j * num_objects() + i);
  }

  std::optional<ObjectIndex> find_object(std::string_view id) const;
  std::optional<BuyerIndex> find_buyer(std::string_view id) const;

  Quantity total_supply() const noexcept { return total_supply_; }
  Quantity total_demand() const noexcept { return total_demand_; }
  Value max_valuation() const noexcept { return max_valuation_; }

  /// Converts back to raw fields; valuations of 0 are omitted.
  RawInstance to_raw() const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  friend Instance detail::make_instance(const RawInstance&, bool);
  Instance() = default;

  std::vector<std::string> object_ids_;
  std::vector<Quantity> supplies_;
  std::vector<std::string> buyer_ids_;
  std::vector<Quantity> demands_;
  std::vector<Value> valuations_;  // buyer-major: [j * m + i]
  Quantity total_supply_ = 0;
  Quantity total_demand_ = 0;
  Value max_valuation_ = 0;
};

/// Per-object unit prices, indexed like Instance::object_ids().
class PriceVector {
 public:
  PriceVector() = default;
  explicit PriceVector(std::size_t num_objects, Price fill = 0)
      : values_(num_objects, fill) {}
  explicit PriceVector(std::vector<Price> values) : values_(std::move(values)) {}

  static PriceVector zeros(const Instance& instance) {
    return PriceVector(instance.num_objects());
  }

  std::size_t size() const noexcept { return values_.size(); }
  Price operator[](ObjectIndex i) const { return values_[i]; }
  Price& operator[](ObjectIndex i) { return values_[i]; }
  const std::vector<Price>& values() const noexcept { return values_; }

  /// Returns a copy with `step` added on every object in `objects`.
  PriceVector raised(const std::vector<ObjectIndex>& objects, Price step = 1) const;

  /// Component-wise <=.
  bool dominated_by(const PriceVector& other) const;

  /// Max-norm distance; vectors must have equal size.
  Price distance_inf(const PriceVector& other) const;

  friend bool operator==(const PriceVector&, const PriceVector&) = default;

 private:
  std::vector<Price> values_;
};

/// Throws PreconditionError unless `prices` has one nonnegative entry per object.
void check_prices(const Instance& instance, const PriceVector& prices);

/// Item-to-buyer quantities x_ij.
class Allocation {
 public:
  Allocation() = default;
  Allocation(std::size_t num_objects, std::size_t num_buyers)
      : num_objects_(num_objects), num_buyers_(num_buyers),
        quantity_(num_objects * num_buyers, 0) {}

  std::size_t num_objects() const noexcept { return num_objects_; }
  std::size_t num_buyers() const noexcept { return num_buyers_; }

  Quantity at(ObjectIndex i, BuyerIndex j) const { return quantity_.at(i * num_buyers_ + j); }
  Quantity& at(ObjectIndex i, BuyerIndex j) { return quantity_.at(i * num_buyers_ + j); }

  Quantity sold(ObjectIndex i) const;
  Quantity received(BuyerIndex j) const;
  Quantity total() const;

  /// Row and column feasibility against the instance.
  bool feasible_for(const Instance& instance) const;

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  std::size_t num_objects_ = 0;
  std::size_t num_buyers_ = 0;
  std::vector<Quantity> quantity_;
};

enum class DummyKind { none, dummy_object, dummy_buyer };

struct DummyInfo {
  DummyKind kind = DummyKind::none;
  std::string id;
  Quantity size = 0;

  friend bool operator==(const DummyInfo&, const DummyInfo&) = default;
};

struct BalancedInstance {
  Instance instance;
  DummyInfo dummy;
};

/// Pads supply or demand with a zero-value dummy so that total supply equals
/// total demand. The dummy is appended after the original entities.
BalancedInstance balance_instance(const Instance& instance);

/// Splits every object into b_i unit-supply copies and every buyer into d_j
/// unit-demand copies with the same valuations. Copies are named "<id>#k".
Instance duplicate_instance(const Instance& instance);

}  // namespace flowauction

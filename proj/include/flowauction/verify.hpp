#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "flowauction/auction.hpp"
#include "flowauction/model.hpp"

namespace flowauction {

/// Enumeration limits for the brute-force oracles.
struct Budget {
  std::size_t max_subset_objects = 16;       // 2^16 subsets
  std::uint64_t max_price_vectors = 1000000;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// d_p(I): demand of tier nodes adjacent to I that cannot be served outside I,
/// evaluated on G(prices).
Quantity overdemand(const Instance& instance, const PriceVector& prices,
                    const std::vector<ObjectIndex>& objects);

struct HallResult {
  bool holds = true;
  /// Set maximizing d_p(I) - b(I), inclusion-minimal; absent when `holds`.
  std::optional<std::vector<ObjectIndex>> violating_set;
};

HallResult hall_check(const Instance& instance, const PriceVector& prices,
                      const Budget& budget = {});

bool is_competitive_flowcheck(const Instance& instance, const PriceVector& prices);

/// Every preferred bundle of `buyer` at `prices`, by exhaustive enumeration.
std::vector<Bundle> enumerate_preferred_bundles(const Instance& instance, BuyerIndex buyer,
                                                const PriceVector& prices,
                                                const Budget& budget = {});

/// Competitiveness straight from the definition: some choice of one
/// preferred bundle per buyer respects every supply.
bool is_competitive_bruteforce(const Instance& instance, const PriceVector& prices,
                               const Budget& budget = {});

/// Component-wise minimum over all competitive p in {0..v_max+1}^objects.
/// Throws std::logic_error if that minimum is not itself competitive.
PriceVector min_competitive_bruteforce(const Instance& instance, const Budget& budget = {});

/// L(p) = sum_j V_j(p) + sum_i b_i p(i).
Value lyapunov(const Instance& instance, const PriceVector& prices);

/// Inclusion-wise minimal minimizer of X -> L(p + chi_X). Throws
/// std::logic_error if the minimizers have no unique minimal element.
std::vector<ObjectIndex> steepest_descent_bruteforce(const Instance& instance,
                                                     const PriceVector& prices,
                                                     const Budget& budget = {});

struct EquilibriumReport {
  bool feasible = true;
  std::vector<bool> stable;  // per buyer
  Quantity quantity_sold = 0;
  Quantity expected_quantity = 0;
  bool positive_price_sellout = true;
  bool overall = true;
};

EquilibriumReport check_equilibrium(const Instance& instance, const PriceVector& prices,
                                    const Allocation& allocation);

/// p_old <= p_new on every object still supplied in `instance_new`.
/// Throws PreconditionError unless the pair is a demand-up / supply-down
/// perturbation with identical ids and valuations.
bool check_monotonicity_pair(const Instance& instance_old, const Instance& instance_new,
                             const PriceVector& p_old, const PriceVector& p_new);

// ---- experiment harness ----

struct RandomInstanceParams {
  std::size_t max_objects = 3;
  std::size_t max_buyers = 3;
  Quantity max_supply = 3;
  Quantity max_demand = 3;
  Value max_value = 4;
};

Instance random_instance(std::mt19937_64& rng, const RandomInstanceParams& params = {});

enum class PerturbationKind { demand_up, supply_down };

struct Perturbation {
  PerturbationKind kind;
  std::size_t index;  // buyer or object
  Quantity delta;     // >= 0; supply is clamped at 0
};

Instance apply_perturbation(const Instance& instance, const Perturbation& perturbation);

/// Uniform single-coordinate change by 1..3. The instance needs a buyer or
/// an object.
Perturbation random_perturbation(std::mt19937_64& rng, const Instance& instance);

std::string describe(const Instance& instance, const Perturbation& perturbation);

struct MonotonicityCase {
  std::size_t index = 0;
  std::string perturbation;
  PriceVector p_old;
  PriceVector p_new;
  bool monotone = false;
  /// Re-solving from the old prices (zero on objects no longer supplied)
  /// reaches the cold-start result.
  bool warm_restart_agrees = false;
  /// Raise steps of the warm restart; bounded by ||p_old - p_new|| on the
  /// surviving objects.
  std::size_t warm_restart_steps = 0;
  bool passed() const noexcept { return monotone && warm_restart_agrees; }
};

/// Runs one perturbation case: solve both instances cold, compare prices,
/// and re-solve the new one warm-started from the old prices.
MonotonicityCase run_monotonicity_case(std::size_t index, const Instance& before,
                                       const Perturbation& perturbation);

/// `count` seeded cases. With `base` set every case perturbs it; otherwise
/// each case draws a fresh random instance. Cases fan out over `threads`
/// workers and come back ordered by index.
std::vector<MonotonicityCase> monotonicity_sweep(std::uint64_t seed, std::size_t count,
                                                 const std::optional<Instance>& base,
                                                 unsigned threads = 1);

}  // namespace flowauction

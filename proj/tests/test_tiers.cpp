#include <gtest/gtest.h>

#include <random>

#include "flowauction/tiers.hpp"
#include "flowauction/verify.hpp"
#include "oracles.hpp"

using namespace flowauction;

namespace {
constexpr ObjectIndex kAlpha = 0, kBeta = 1, kGamma = 2;
using Set = std::vector<ObjectIndex>;
}  // namespace

TEST(PayoffOrder, NonIncreasingWithCanonicalTies) {
  const Instance inst = oracle::fixture("beta_overdemanded.json");
  EXPECT_EQ(payoff_order(inst, 0, PriceVector(3)), (Set{kAlpha, kBeta, kGamma}));
  EXPECT_EQ(payoff_order(inst, 1, PriceVector(3)), (Set{kBeta, kAlpha, kGamma}));
  EXPECT_EQ(payoff_order(inst, 0, oracle::prices({2, 0, 0})), (Set{kBeta, kAlpha, kGamma}));
}

TEST(PreferredBundle, BetaOverdemandedAtZero) {
  const Instance inst = oracle::fixture("beta_overdemanded.json");
  const PreferredBundle b1 = preferred_bundle(inst, 0, PriceVector(3));
  EXPECT_EQ(b1.quantity, (Bundle{1, 1, 2}));
  EXPECT_EQ(b1.last_item, kGamma);
  const PreferredBundle b2 = preferred_bundle(inst, 1, PriceVector(3));
  EXPECT_EQ(b2.quantity, (Bundle{0, 1, 0}));
  EXPECT_EQ(b2.last_item, kBeta);
}

TEST(PreferredBundle, SingleBuyer) {
  const Instance inst = oracle::fixture("single_buyer.json");
  const PreferredBundle b = preferred_bundle(inst, 0, PriceVector(2));
  EXPECT_EQ(b.quantity, (Bundle{1, 1}));
  EXPECT_EQ(indirect_utility(inst, 0, PriceVector(2)), 6);
}

TEST(PreferredBundle, RejectsBadOrders) {
  const Instance inst = oracle::fixture("beta_overdemanded.json");
  const PriceVector zero(3);
  EXPECT_THROW(preferred_bundle(inst, 0, zero, {kGamma, kBeta, kAlpha}), PreconditionError);
  EXPECT_THROW(preferred_bundle(inst, 0, zero, {kAlpha, kBeta}), PreconditionError);
  EXPECT_THROW(preferred_bundle(inst, 0, zero, {kAlpha, kAlpha, kGamma}), PreconditionError);
  EXPECT_THROW(preferred_bundle(inst, 0, PriceVector(2)), PreconditionError);
}

TEST(PreferredBundle, ZeroSupplyObjectCanBeLastVisited) {
  const Instance inst = validate_instance({{{"a", 1}, {"b", 0}}, {{"x", 3, {{"a", 5}, {"b", 2}}}}});
  const PreferredBundle b = preferred_bundle(inst, 0, PriceVector(2));
  EXPECT_EQ(b.quantity, (Bundle{1, 0}));
  EXPECT_EQ(b.last_item, 1U);
  const TierReport r = tier_report(inst, 0, PriceVector(2));
  EXPECT_EQ(r.strong, (Set{0}));
  EXPECT_EQ(r.marginal, (Set{1}));
  EXPECT_EQ(r.strong_demand, 1);
  EXPECT_EQ(r.marginal_demand, 0);
}

TEST(TierReport, BetaOverdemandedAtZero) {
  const Instance inst = oracle::fixture("beta_overdemanded.json");
  const TierReport r1 = tier_report(inst, 0, PriceVector(3));
  EXPECT_EQ(r1.strong, (Set{kAlpha, kBeta}));
  EXPECT_EQ(r1.marginal, (Set{kGamma}));
  EXPECT_TRUE(r1.zero.empty());
  EXPECT_EQ(r1.strong_demand, 2);
  EXPECT_EQ(r1.marginal_demand, 2);
  EXPECT_EQ(r1.zero_demand, 0);

  const TierReport r2 = tier_report(inst, 1, PriceVector(3));
  EXPECT_TRUE(r2.strong.empty());
  EXPECT_EQ(r2.marginal, (Set{kBeta}));
  EXPECT_EQ(r2.zero, (Set{kAlpha, kGamma}));
  EXPECT_EQ(r2.strong_demand, 0);
  EXPECT_EQ(r2.marginal_demand, 1);
  EXPECT_EQ(r2.zero_demand, 1);
}

TEST(TierReport, BetaOverdemandedAtEquilibrium) {
  const Instance inst = oracle::fixture("beta_overdemanded.json");
  const PriceVector p = oracle::prices({0, 1, 0});
  const TierReport r1 = tier_report(inst, 0, p);
  EXPECT_EQ(r1.strong, (Set{kAlpha}));
  EXPECT_EQ(r1.marginal, (Set{kBeta, kGamma}));
  EXPECT_EQ(r1.strong_demand, 1);
  EXPECT_EQ(r1.marginal_demand, 3);
  const TierReport r2 = tier_report(inst, 1, p);
  EXPECT_EQ(r2.marginal, (Set{kBeta}));
  EXPECT_EQ(r2.marginal_demand, 1);
  EXPECT_EQ(r2.zero_demand, 1);
}

TEST(TierReport, ZeroDemandReportsNothing) {
  const Instance inst = validate_instance({{{"a", 2}}, {{"x", 0, {{"a", 3}}}}});
  const TierReport r = tier_report(inst, 0, PriceVector(1));
  EXPECT_EQ(r, TierReport{});
}

TEST(TierReport, AllPricedOut) {
  const Instance inst = oracle::fixture("beta_overdemanded.json");
  const TierReport r = tier_report(inst, 0, oracle::prices({3, 2, 1}));
  EXPECT_TRUE(r.strong.empty());
  EXPECT_TRUE(r.marginal.empty());
  EXPECT_EQ(r.zero, (Set{kAlpha, kBeta, kGamma}));
  EXPECT_EQ(r.zero_demand, 4);
  EXPECT_FALSE(r.last_item.has_value());
}

TEST(TierOracle, CountsQueries) {
  const Instance inst = oracle::fixture("beta_overdemanded.json");
  TierOracle to(inst);
  EXPECT_EQ(to.query_all(PriceVector(3)).size(), 2U);
  to.query_all(PriceVector(3));
  EXPECT_EQ(to.calls(), 4);
}

TEST(TiersProperty, GreedyBundleIsPreferred) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const Instance inst = random_instance(rng);
    PriceVector p(inst.num_objects());
    for (ObjectIndex i = 0; i < p.size(); ++i) p[i] = static_cast<Price>(rng() % 6);
    for (BuyerIndex j = 0; j < inst.num_buyers(); ++j) {
      const PreferredBundle b = preferred_bundle(inst, j, p);
      const Value best = oracle::best_payoff(inst, j, p);
      EXPECT_EQ(bundle_payoff(inst, j, p, b.quantity), best);
      EXPECT_EQ(indirect_utility(inst, j, p), best);

      const TierReport r = tier_report(inst, j, p);
      Quantity strong_supply = 0;
      for (ObjectIndex i : r.strong) strong_supply += inst.supply(i);
      EXPECT_EQ(r.strong_demand, strong_supply);
      EXPECT_LE(r.strong_demand + r.marginal_demand + r.zero_demand, inst.demand(j));
      for (ObjectIndex i : r.zero) EXPECT_EQ(inst.valuation(i, j), p[i]);
      // Greedy bundle lives in the strong and marginal tiers.
      Quantity total = 0;
      for (ObjectIndex i = 0; i < p.size(); ++i) total += b.quantity[i];
      EXPECT_EQ(total, r.strong_demand + r.marginal_demand);
    }
  }
}

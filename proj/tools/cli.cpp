#include "flowauction/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "flowauction/auction.hpp"
#include "flowauction/flow.hpp"
#include "flowauction/instance_io.hpp"
#include "flowauction/model.hpp"
#include "flowauction/verify.hpp"

namespace flowauction::cli {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 20240611;
constexpr std::size_t kDefaultSweepCount = 200;

struct Settings {
  std::string instance_path;
  std::string mode = "unit";
  bool warm_start = true;
  std::string start_prices_path;
  std::string trace_path;
  std::string dump_path;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t budget = Budget{}.max_price_vectors;
  std::size_t count = kDefaultSweepCount;
  unsigned threads = 0;
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InstanceError("", "cannot write '" + path + "'");
  file << text;
}

SolveOptions solve_options(const Settings& s, const Instance& instance) {
  SolveOptions options;
  options.mode = s.mode == "adapted" ? StepMode::adapted : StepMode::unit;
  options.warm_start = s.warm_start;
  if (!s.start_prices_path.empty()) options.start_prices = load_prices(instance, s.start_prices_path);
  return options;
}

Budget budget_of(const Settings& s) {
  Budget budget;
  budget.max_price_vectors = s.budget;
  return budget;
}

json object_set_json(const Instance& instance, const std::vector<ObjectIndex>& objects) {
  json out = json::array();
  for (ObjectIndex i : objects) out.push_back(instance.object_ids()[i]);
  return out;
}

json trace_json(const Instance& instance, const Equilibrium& eq) {
  json iterations = json::array();
  for (const IterationRecord& rec : eq.trace.iterations) {
    iterations.push_back({{"iter", rec.iter},
                          {"prices", prices_to_json(instance, rec.prices)},
                          {"raised_set", object_set_json(instance, rec.raised_set)},
                          {"alpha", rec.step},
                          {"flow_value", rec.flow_value},
                          {"cap_s", rec.cap_s}});
  }
  json final_record = {{"prices", prices_to_json(instance, eq.prices)},
                       {"allocation", allocation_to_json(instance, eq.allocation)},
                       {"iterations", eq.trace.outer_iterations()},
                       {"oracle_calls", eq.trace.oracle_calls}};
  return {{"iterations", std::move(iterations)}, {"final", std::move(final_record)}};
}

void maybe_dump(const Settings& s, const Instance& instance, const SolveOptions& options) {
  if (s.dump_path.empty()) return;
  const InitialRound round =
      initial_round(instance, options.start_prices.value_or(PriceVector::zeros(instance)));
  write_text(s.dump_path, dump_network(round.network, round.flow));
}

bool nonzero(const std::optional<PriceVector>& prices) {
  if (!prices) return false;
  for (Price p : prices->values()) {
    if (p != 0) return true;
  }
  return false;
}

int cmd_solve(const Settings& s, std::ostream& out, std::ostream& err) {
  const Instance instance = load_instance(s.instance_path);
  const SolveOptions options = solve_options(s, instance);
  if (nonzero(options.start_prices)) {
    err << "warning: nonzero start prices; the result is the minimum competitive price vector "
           "only if the start prices do not exceed it (run 'verify' to check)\n";
  }
  maybe_dump(s, instance, options);
  const Equilibrium eq = solve(instance, options);
  if (!s.trace_path.empty()) write_text(s.trace_path, trace_json(instance, eq).dump(2) + "\n");
  const json doc = {{"prices", prices_to_json(instance, eq.prices)},
                    {"allocation", allocation_to_json(instance, eq.allocation)}};
  out << doc.dump(2) << "\n";
  return kOk;
}

// ---- verify ----

struct Check {
  std::string claim;
  std::string status;  // pass, fail, skipped
  std::string detail;
};

std::string join_prices(const PriceVector& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + ")";
}

Check run_check(const std::string& claim, const std::function<std::string()>& body) {
  try {
    std::string failure = body();
    if (failure.empty()) return {claim, "pass", ""};
    return {claim, "fail", std::move(failure)};
  } catch (const BudgetExceeded& e) {
    return {claim, "skipped", e.what()};
  } catch (const std::logic_error& e) {
    return {claim, "fail", e.what()};
  }
}

int cmd_verify(const Settings& s, std::ostream& out, std::ostream&) {
  const Instance instance = load_instance(s.instance_path);
  SolveOptions options = solve_options(s, instance);
  const PriceVector start = options.start_prices.value_or(PriceVector::zeros(instance));
  const Budget budget = budget_of(s);
  maybe_dump(s, instance, options);

  const Equilibrium eq = solve(instance, options);
  SolveOptions unit_options = options;
  unit_options.mode = StepMode::unit;
  const PriceRaisingResult unit = price_raising(instance, unit_options);

  std::vector<PriceVector> visited;
  for (const IterationRecord& rec : unit.trace.iterations) visited.push_back(rec.prices);
  visited.push_back(unit.prices);

  std::map<std::string, Check> checks;
  checks["equilibrium"] = run_check(
      "the allocation is stable, sells min(total supply, total demand) and sells out every "
      "positively priced object",
      [&]() -> std::string {
        const EquilibriumReport r = check_equilibrium(instance, eq.prices, eq.allocation);
        if (r.overall) return "";
        std::string why;
        if (!r.feasible) why += "infeasible allocation; ";
        for (BuyerIndex j = 0; j < r.stable.size(); ++j) {
          if (!r.stable[j]) why += "buyer '" + instance.buyer_ids()[j] + "' not stable; ";
        }
        if (r.quantity_sold != r.expected_quantity) {
          why += "sold " + std::to_string(r.quantity_sold) + " of " +
                 std::to_string(r.expected_quantity) + "; ";
        }
        if (!r.positive_price_sellout) why += "a positively priced object is not sold out; ";
        return why;
      });
  checks["minimum_competitive_prices"] = run_check(
      "the auction returns the component-wise minimum competitive prices", [&]() -> std::string {
        const PriceVector brute = min_competitive_bruteforce(instance, budget);
        if (brute == eq.prices) return "";
        return "auction " + join_prices(eq.prices) + " vs enumeration " + join_prices(brute);
      });
  checks["hall_flow_agreement"] = run_check(
      "Hall's condition on overdemand holds exactly when G(p) has a saturating flow",
      [&]() -> std::string {
        for (const PriceVector& p : visited) {
          if (hall_check(instance, p, budget).holds != is_competitive_flowcheck(instance, p)) {
            return "disagreement at " + join_prices(p);
          }
        }
        return "";
      });
  checks["steepest_descent_cut"] = run_check(
      "every raised set is the minimal minimizer of X -> L(p + chi_X)", [&]() -> std::string {
        for (const IterationRecord& rec : unit.trace.iterations) {
          if (steepest_descent_bruteforce(instance, rec.prices, budget) != rec.raised_set) {
            return "iteration " + std::to_string(rec.iter) + " at " + join_prices(rec.prices);
          }
        }
        if (!steepest_descent_bruteforce(instance, unit.prices, budget).empty()) {
          return "nonempty descent set at the final prices";
        }
        return "";
      });
  checks["lyapunov_descent"] = run_check(
      "L strictly decreases across every unit price raise", [&]() -> std::string {
        for (std::size_t k = 0; k + 1 < visited.size(); ++k) {
          if (lyapunov(instance, visited[k + 1]) >= lyapunov(instance, visited[k])) {
            return "no decrease after iteration " + std::to_string(k);
          }
        }
        return "";
      });
  checks["iteration_bound"] = run_check(
      "unit steps use at most ||p* - p0||_inf + 1 iterations", [&]() -> std::string {
        const std::size_t bound = static_cast<std::size_t>(unit.prices.distance_inf(start)) + 1;
        if (unit.trace.outer_iterations() <= bound) return "";
        return std::to_string(unit.trace.outer_iterations()) + " iterations > " +
               std::to_string(bound);
      });
  checks["adapted_step_agreement"] = run_check(
      "adapted steps reach the same prices in no more iterations", [&]() -> std::string {
        SolveOptions adapted = options;
        adapted.mode = StepMode::adapted;
        const PriceRaisingResult r = price_raising(instance, adapted);
        if (r.prices != unit.prices) return "adapted " + join_prices(r.prices);
        if (r.trace.outer_iterations() > unit.trace.outer_iterations()) {
          return std::to_string(r.trace.outer_iterations()) + " adapted iterations > " +
                 std::to_string(unit.trace.outer_iterations());
        }
        return "";
      });
  checks["warm_start_agreement"] = run_check(
      "warm and cold flow starts reach the same prices", [&]() -> std::string {
        SolveOptions flipped = options;
        flipped.warm_start = !options.warm_start;
        const PriceRaisingResult r = price_raising(instance, flipped);
        return r.prices == eq.prices ? "" : "other start " + join_prices(r.prices);
      });
  checks["restart_invariance"] = run_check(
      "restarting from any intermediate price vector reaches the same prices",
      [&]() -> std::string {
        for (const PriceVector& q : visited) {
          SolveOptions restart;
          restart.start_prices = q;
          restart.trace = false;
          const PriceRaisingResult r = price_raising(instance, restart);
          if (r.prices != unit.prices) return "restart from " + join_prices(q);
        }
        return "";
      });

  json report = json::object();
  json failed = json::array();
  for (const auto& [name, check] : checks) {
    json entry = {{"claim", check.claim}, {"status", check.status}};
    if (!check.detail.empty()) entry["detail"] = check.detail;
    report[name] = std::move(entry);
    if (check.status == "fail") failed.push_back(name);
  }
  const json doc = {{"prices", prices_to_json(instance, eq.prices)},
                    {"checks", std::move(report)},
                    {"failed", failed},
                    {"overall", failed.empty()}};
  out << doc.dump(2) << "\n";
  return failed.empty() ? kOk : kVerificationFailed;
}

int cmd_brute(const Settings& s, std::ostream& out, std::ostream&) {
  const Instance instance = load_instance(s.instance_path);
  const PriceVector p = min_competitive_bruteforce(instance, budget_of(s));
  out << json{{"prices", prices_to_json(instance, p)}}.dump(2) << "\n";
  return kOk;
}

int cmd_monotone(const Settings& s, std::ostream& out, std::ostream&) {
  std::optional<Instance> base;
  if (!s.instance_path.empty()) base = load_instance(s.instance_path);
  const unsigned threads =
      s.threads ? s.threads : std::max(1U, std::thread::hardware_concurrency());
  const auto cases = monotonicity_sweep(s.seed, s.count, base, threads);

  std::size_t passed = 0;
  out << "case\tperturbation\tp_old\tp_new\tmonotone\twarm_restart\tresult\n";
  for (const MonotonicityCase& c : cases) {
    passed += c.passed();
    out << c.index << '\t' << c.perturbation << '\t' << join_prices(c.p_old) << '\t'
        << join_prices(c.p_new) << '\t' << (c.monotone ? "yes" : "no") << '\t'
        << (c.warm_restart_agrees ? "yes" : "no") << '\t' << (c.passed() ? "PASS" : "FAIL")
        << '\n';
  }
  out << "passed " << passed << "/" << cases.size() << " (seed " << s.seed << ")\n";
  return passed == cases.size() ? kOk : kVerificationFailed;
}

int cmd_duplicate_demo(const Settings& s, std::ostream& out, std::ostream&) {
  const Instance instance = load_instance(s.instance_path);
  const Instance copies = duplicate_instance(instance);
  const Equilibrium original = solve(instance);
  const Equilibrium duplicated = solve(copies);
  const json doc = {
      {"original",
       {{"prices", prices_to_json(instance, original.prices)},
        {"allocation", allocation_to_json(instance, original.allocation)}}},
      {"duplicated",
       {{"prices", prices_to_json(copies, duplicated.prices)},
        {"allocation", allocation_to_json(copies, duplicated.allocation)}}}};
  out << doc.dump(2) << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimum Walrasian prices for multi-unit markets via a flow-based ascending "
               "auction"};
  app.require_subcommand(1);
  Settings s;

  auto add_solver_flags = [&s](CLI::App* sub) {
    sub->add_option("--mode", s.mode, "Price step: unit or adapted")
        ->check(CLI::IsMember({"unit", "adapted"}));
    sub->add_flag("--warm-start,!--no-warm-start", s.warm_start,
                  "Carry the maximum flow between rounds (default on)");
    sub->add_option("--start-prices", s.start_prices_path, "JSON object of starting prices");
    sub->add_option("--dump-network", s.dump_path,
                    "Write the first demand network with its maximum flow");
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "Minimum competitive prices and allocation");
  solve_cmd->add_option("instance", s.instance_path, "Instance JSON")->required();
  add_solver_flags(solve_cmd);
  solve_cmd->add_option("--trace", s.trace_path, "Write the iteration trace as JSON");

  CLI::App* verify_cmd = app.add_subcommand("verify", "Solve and run every independent check");
  verify_cmd->add_option("instance", s.instance_path, "Instance JSON")->required();
  add_solver_flags(verify_cmd);
  verify_cmd->add_option("--budget", s.budget, "Largest price grid to enumerate");

  CLI::App* brute_cmd = app.add_subcommand("brute", "Minimum competitive prices by enumeration");
  brute_cmd->add_option("instance", s.instance_path, "Instance JSON")->required();
  brute_cmd->add_option("--budget", s.budget, "Largest price grid to enumerate");

  CLI::App* monotone_cmd =
      app.add_subcommand("monotone", "Seeded demand-up / supply-down perturbation sweep");
  monotone_cmd->add_option("instance", s.instance_path,
                           "Perturb this instance instead of random ones");
  monotone_cmd->add_option("--seed", s.seed, "Random seed");
  monotone_cmd->add_option("--count", s.count, "Number of cases");
  monotone_cmd->add_option("--threads", s.threads, "Worker threads (0 = all cores)");

  CLI::App* dup_cmd = app.add_subcommand(
      "duplicate-demo", "Solve an instance and its unit-copy duplication side by side");
  dup_cmd->add_option("instance", s.instance_path, "Instance JSON")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(s, out, err);
    if (verify_cmd->parsed()) return cmd_verify(s, out, err);
    if (brute_cmd->parsed()) return cmd_brute(s, out, err);
    if (monotone_cmd->parsed()) return cmd_monotone(s, out, err);
    return cmd_duplicate_demo(s, out, err);
  } catch (const InstanceError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kBudgetExceeded;
  } catch (const std::exception& e) {
    err << "check failed: " << e.what() << "\n";
    return kVerificationFailed;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace flowauction::cli

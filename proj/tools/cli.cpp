#include "cli.hpp"

#include <clopa/clopa.hpp>

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

namespace clopa::cli {
namespace {

using io::format_decimal;
using io::format_rrf;
using io::format_shortest;

constexpr std::uint64_t kDefaultTrials = 100000;
constexpr double kValidateHazardTarget = 400.0;
constexpr double kValidateDrawBudget = 2e8;
constexpr double kValidateSigmas = 4.0;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::SchemaError:
    case ErrorCode::IoError:
      return kExitUsage;
    default:
      return kExitDomain;
  }
}

std::uint64_t default_seed() {
  const char* env = std::getenv("CLOPA_SEED");
  if (!env || *env == '\0') return 0;
  std::uint64_t seed = 0;
  const std::string_view text(env);
  auto res = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError, "CLOPA_SEED must be a non-negative integer");
  }
  return seed;
}

void write_json(std::ostream& out, const io::Json& j) { out << j.dump(2) << '\n'; }

// Writes to `path`, or to `out` when the path is empty or "-".
void write_rows(const std::vector<io::CurveRow>& rows, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    io::write_curve_csv(out, rows);
  } else {
    io::emit_curve_csv(rows, path);
  }
}

bool close(double a, double b, double rel) {
  return std::fabs(a - b) <= rel * std::max(std::fabs(a), std::fabs(b)) + 1e-300;
}

struct Check {
  std::ostream& out;
  int failures = 0;

  void line(const char* status, const std::string& name, const std::string& detail) {
    out << status << "  " << name << "  " << detail << '\n';
  }
  void expect(bool ok, const std::string& name, const std::string& detail) {
    line(ok ? "PASS" : "FAIL", name, detail);
    if (!ok) ++failures;
  }
};

int cmd_assess(const std::string& file, bool json, std::ostream& out) {
  const auto parsed = io::parse_scenario(file);
  const auto report = io::assess(parsed);
  if (json) {
    write_json(out, io::report_to_json(report));
  } else {
    io::write_report_text(out, report);
  }
  return report.clopa.feasible() ? kExitOk : kExitDomain;
}

int cmd_classic(const std::string& file, bool json, std::ostream& out) {
  const auto parsed = io::parse_scenario(file);
  const auto bound = classical_lopa(parsed.scenario);
  if (json) {
    write_json(out, io::Json{{"alpha1", bound.coefficients.alpha1},
                             {"beta", bound.coefficients.beta},
                             {"pfd_bound", bound.pfd_bound ? io::Json(bound.pfd_bound->value()) : io::Json(nullptr)},
                             {"rrf", bound.rrf ? io::Json(*bound.rrf) : io::Json(nullptr)}});
  } else if (bound.feasible()) {
    out << "Classical LOPA: PFD <= " << format_decimal(bound.pfd_bound->value(), 6)
        << ", RRF = " << format_rrf(*bound.rrf) << " (" << io::sil_band(*bound.rrf) << ")\n";
  } else {
    out << "Classical LOPA: INFEASIBLE\n";
  }
  return bound.feasible() ? kExitOk : kExitDomain;
}

int cmd_boundary(const std::string& file, std::size_t samples, const std::string& dest,
                 std::ostream& out) {
  const auto parsed = io::parse_scenario(file);
  const auto coeffs = clopa_coefficients(parsed.scenario, parsed.document.posture);
  const auto curve = sample_boundary(coeffs, samples);
  write_rows(io::curve_rows(curve), dest, out);
  return kExitOk;
}

int cmd_contour(const std::string& file, const std::vector<double>& rrfs, std::size_t samples,
                const std::string& dest, std::ostream& out) {
  const auto parsed = io::parse_scenario(file);
  const auto coeffs = clopa_coefficients(parsed.scenario, parsed.document.posture);
  std::vector<io::CurveRow> rows;
  for (double c : rrfs) {
    const auto curve = sample_contour(coeffs, c, samples);
    const auto part = io::curve_rows(curve, c);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  write_rows(rows, dest, out);
  return kExitOk;
}

int cmd_error(const std::string& file, double pas, double pabs, bool json, std::ostream& out) {
  const auto parsed = io::parse_scenario(file);
  const auto coeffs = clopa_coefficients(parsed.scenario, parsed.document.posture);
  const double e = rrf_error(coeffs, Probability(pas), Probability(pabs));
  if (json) {
    write_json(out, io::Json{{"p_as", pas}, {"p_abs", pabs}, {"rrf_error", e}});
  } else {
    out << "e_RRF = " << format_rrf(e) << '\n';
  }
  return kExitOk;
}

int cmd_limits(const std::string& file, bool json, std::ostream& out) {
  const auto parsed = io::parse_scenario(file);
  const auto limits = region_limits(clopa_coefficients(parsed.scenario, parsed.document.posture));
  if (json) {
    write_json(out, io::limits_to_json(limits));
  } else {
    out << "max P[A_S]  = " << format_decimal(limits.max_pas.value(), 6) << '\n'
        << "max P[A_BS] = " << format_decimal(limits.max_pabs.value(), 6) << '\n'
        << "RRF_min     = " << format_rrf(limits.rrf_min) << '\n';
  }
  return kExitOk;
}

int cmd_tree_eval(const std::string& file, bool json, std::ostream& out) {
  const auto tree = io::parse_attack_tree(file);
  const double p = eval_tree(tree).value();
  if (json) {
    write_json(out, io::Json{{"name", tree.name}, {"probability", p}});
  } else {
    out << (tree.name.empty() ? std::string("tree") : tree.name) << ": P = " << format_decimal(p, 6)
        << '\n';
  }
  return kExitOk;
}

int cmd_design(const std::string& file, double target, double pas, bool json, std::ostream& out) {
  const auto parsed = io::parse_scenario(file);
  const auto& posture = parsed.document.posture;
  const auto point = initial_design_point(parsed.scenario, {posture.p_ab, posture.p_asb}, target,
                                          Probability(pas));
  if (json) {
    write_json(out, io::Json{{"p_as", point.p_as.value()},
                             {"p_abs", point.p_abs.value()},
                             {"pfd_bound", point.pfd_bound ? io::Json(point.pfd_bound->value()) : io::Json(nullptr)},
                             {"rrf", point.rrf ? io::Json(*point.rrf) : io::Json(nullptr)}});
  } else {
    out << "P[A_S] = " << format_decimal(point.p_as.value(), 6)
        << ", P[A_BS] = " << format_decimal(point.p_abs.value(), 6);
    if (point.rrf) out << ", RRF = " << format_rrf(*point.rrf);
    out << '\n';
  }
  return kExitOk;
}

int cmd_codesign(const std::string& file, const std::string& script_file,
                 std::optional<std::size_t> max_iter, bool json, std::ostream& out) {
  const auto parsed = io::parse_scenario(file);
  const auto script = io::parse_codesign_script(script_file);
  const auto& posture = parsed.document.posture;
  const BpcsSecurity bpcs{posture.p_ab, posture.p_asb};
  const auto initial = initial_design_point(parsed.scenario, bpcs, script.target_rrf, script.p_as);
  ScriptedOracle oracle(script.responses, script.cycle);
  const std::size_t limit = max_iter.value_or(script.max_iterations.value_or(kDefaultMaxIterations));
  const auto trace = run_codesign(parsed.scenario, bpcs, initial, oracle, oracle, limit);
  if (json) {
    write_json(out, io::trace_to_json(trace));
  } else {
    out << "start: P[A_S] = " << format_decimal(initial.p_as.value(), 6)
        << ", P[A_BS] = " << format_decimal(initial.p_abs.value(), 6)
        << ", RRF = " << format_rrf(*initial.rrf) << '\n';
    for (const auto& it : trace.iterations) {
      out << "iteration " << it.index << ": target " << format_rrf(it.target_rrf) << ", verified "
          << format_rrf(it.verified_rrf) << " [" << it.architecture << "], assessed ("
          << format_shortest(it.posture.p_as.value()) << ", "
          << format_shortest(it.posture.p_abs.value()) << ") -> required "
          << format_rrf(it.recomputed_rrf) << '\n';
    }
    out << "outcome: " << to_string(trace.outcome) << '\n';
    if (!trace.failure_reason.empty()) out << "reason: " << trace.failure_reason << '\n';
  }
  return trace.outcome == CodesignOutcome::Converged ? kExitOk : kExitDomain;
}

int cmd_validate(const std::string& file, std::uint64_t trials, std::uint64_t seed,
                 unsigned threads, std::ostream& out) {
  const auto parsed = io::parse_scenario(file);
  const auto& scenario = parsed.scenario;
  const auto& posture = parsed.document.posture;
  Check check{out};

  const auto closed = cyber_failure_probs(posture);
  const auto enumerated = oracle::enumerate_cyber_events(posture);
  const bool cyber_ok = close(closed.p_bc.value(), enumerated.p_bc.value(), 1e-12) &&
                        close(closed.p_sc.value(), enumerated.p_sc.value(), 1e-12) &&
                        close(closed.p_joint_cyber.value(), enumerated.p_joint_cyber.value(), 1e-12);
  check.expect(cyber_ok, "cyber-failure-enumeration",
               "P[B_c]=" + format_decimal(closed.p_bc.value(), 8) +
                   " P[S_c]=" + format_decimal(closed.p_sc.value(), 8) +
                   " P[S_c,B_c]=" + format_decimal(closed.p_joint_cyber.value(), 8));

  const auto coeffs = clopa_coefficients(scenario, posture);
  const auto bound = sis_pfd_bound(coeffs, posture.p_as, posture.p_abs);
  const Probability p_sp = bound.pfd_bound.value_or(Probability(0.0));
  const Probability p_bp = scenario.bpcs().pfd_physical;
  const double joint = joint_sis_bpcs_failure(p_sp, p_bp, closed).value();
  const double joint_enum = oracle::enumerate_joint_failure(p_sp, p_bp, posture).value();
  check.expect(close(joint, joint_enum, 1e-12), "joint-failure-enumeration",
               "P[S,B]=" + format_decimal(joint, 8) + " enumeration=" + format_decimal(joint_enum, 8));

  const auto general = sis_pfd_bound_general(scenario, closed);
  check.expect(close(general.raw_ratio(), bound.raw_ratio(), 1e-9), "bound-forms-agree",
               "cyber form=" + format_decimal(general.raw_ratio(), 10) +
                   " attack form=" + format_decimal(bound.raw_ratio(), 10));

  const double rate = expected_hazard_rate(scenario, p_sp, posture).value();
  if (bound.feasible()) {
    check.expect(close(rate, coeffs.beta, 1e-9), "hazard-rate-at-bound-equals-tmel",
                 "E[H]=" + format_decimal(rate, 8) + " TMEL=" + format_decimal(coeffs.beta, 8));
  } else {
    check.line("SKIP", "hazard-rate-at-bound-equals-tmel", "design point infeasible");
  }

  // Horizon long enough for a few hundred expected hazards in total.
  const auto& b = scenario.bpcs();
  double arrivals_per_year = b.lambda_physical.value() + b.lambda_cyber.value();
  for (const auto& e : scenario.initiating_events()) arrivals_per_year += e.likelihood.value();
  const double n = static_cast<double>(trials);
  const double horizon = rate > 0.0 ? std::max(1.0, kValidateHazardTarget / (rate * n)) : 1.0;
  if (!(rate > 0.0) || arrivals_per_year * horizon * n > kValidateDrawBudget) {
    check.line("SKIP", "monte-carlo-hazard-rate",
               "expected hazards too rare for " + std::to_string(trials) + " trials");
  } else {
    oracle::SimConfig config;
    config.trials = trials;
    config.seed = seed;
    config.horizon_years = horizon;
    config.threads = threads;
    const auto sim = oracle::simulate_hazards(scenario, p_sp, posture, config);
    const double z = sim.standard_error > 0.0 ? (sim.mean_per_year - rate) / sim.standard_error : 0.0;
    check.expect(std::fabs(z) <= kValidateSigmas, "monte-carlo-hazard-rate",
                 "simulated=" + format_decimal(sim.mean_per_year, 6) + " +/- " +
                     format_decimal(sim.standard_error, 3) + " expected=" + format_decimal(rate, 6) +
                     " z=" + format_decimal(z, 3) + " horizon=" + format_decimal(horizon, 6) +
                     "yr seed=" + std::to_string(seed));
  }
  out << (check.failures == 0 ? "ALL CHECKS PASSED" : "VALIDATION FAILED") << '\n';
  return check.failures == 0 ? kExitOk : kExitDomain;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cyber-aware layer of protection analysis", "clopa"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string file;
  std::string second_file;
  std::string dest;
  bool json = false;
  std::size_t samples = 201;
  std::vector<double> rrfs;
  double pas = 0.0;
  double pabs = 0.0;
  double target = 0.0;
  std::optional<std::size_t> max_iter;
  std::uint64_t trials = kDefaultTrials;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  std::function<int()> action;

  auto scenario_arg = [&](CLI::App* sub) {
    sub->add_option("scenario", file, "Scenario file")->required();
  };
  auto json_flag = [&](CLI::App* sub) { sub->add_flag("--json", json, "Machine-readable output"); };

  auto* assess = app.add_subcommand("assess", "Full CLOPA assessment report");
  scenario_arg(assess);
  json_flag(assess);
  assess->callback([&] { action = [&] { return cmd_assess(file, json, out); }; });

  auto* classic = app.add_subcommand("classic", "Classical LOPA bound only");
  scenario_arg(classic);
  json_flag(classic);
  classic->callback([&] { action = [&] { return cmd_classic(file, json, out); }; });

  auto* boundary = app.add_subcommand("boundary", "Sample the design boundary as CSV");
  scenario_arg(boundary);
  boundary->add_option("--samples", samples, "Number of samples")->check(CLI::Range(2, 10000000));
  boundary->add_option("--out", dest, "Output CSV file (default stdout)");
  boundary->callback([&] { action = [&] { return cmd_boundary(file, samples, dest, out); }; });

  auto* contour = app.add_subcommand("contour", "Sample RRF contours as CSV");
  scenario_arg(contour);
  contour->add_option("--rrf", rrfs, "Contour RRF values")->required()->delimiter(',');
  contour->add_option("--samples", samples, "Samples per contour")->check(CLI::Range(2, 10000000));
  contour->add_option("--out", dest, "Output CSV file (default stdout)");
  contour->callback([&] { action = [&] { return cmd_contour(file, rrfs, samples, dest, out); }; });

  auto* error = app.add_subcommand("error", "RRF underestimate of classical LOPA");
  scenario_arg(error);
  error->add_option("--pas", pas, "P[A_S]")->required()->check(CLI::Range(0.0, 1.0));
  error->add_option("--pabs", pabs, "P[A_BS]")->required()->check(CLI::Range(0.0, 1.0));
  json_flag(error);
  error->callback([&] { action = [&] { return cmd_error(file, pas, pabs, json, out); }; });

  auto* limits = app.add_subcommand("limits", "Design region limits");
  scenario_arg(limits);
  json_flag(limits);
  limits->callback([&] { action = [&] { return cmd_limits(file, json, out); }; });

  auto* tree = app.add_subcommand("tree", "Attack tree tools");
  tree->require_subcommand(1);
  auto* tree_eval = tree->add_subcommand("eval", "Evaluate an attack tree");
  tree_eval->add_option("tree", second_file, "Attack tree file")->required();
  json_flag(tree_eval);
  tree_eval->callback([&] { action = [&] { return cmd_tree_eval(second_file, json, out); }; });

  auto* design = app.add_subcommand("design", "Initial co-design point on an RRF contour");
  scenario_arg(design);
  design->add_option("--target-rrf", target, "Target RRF")->required();
  design->add_option("--pas", pas, "Chosen P[A_S]")->required()->check(CLI::Range(0.0, 1.0));
  json_flag(design);
  design->callback([&] { action = [&] { return cmd_design(file, target, pas, json, out); }; });

  auto* codesign = app.add_subcommand("codesign", "Run the co-design loop with scripted oracles");
  scenario_arg(codesign);
  codesign->add_option("--script", second_file, "Scripted oracle table")->required();
  codesign->add_option("--max-iter", max_iter, "Iteration limit")->check(CLI::PositiveNumber);
  json_flag(codesign);
  codesign->callback(
      [&] { action = [&] { return cmd_codesign(file, second_file, max_iter, json, out); }; });

  auto* validate = app.add_subcommand("validate", "Cross-check closed forms against oracles");
  scenario_arg(validate);
  validate->add_option("--trials", trials, "Monte-Carlo trials")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 40));
  validate->add_option("--seed", seed, "Monte-Carlo seed (default $CLOPA_SEED or 0)");
  validate->add_option("--threads", threads, "Worker threads (0 = all cores)");
  validate->callback([&] {
    action = [&] { return cmd_validate(file, trials, seed ? *seed : default_seed(), threads, out); };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    return action();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}

}  // namespace clopa::cli

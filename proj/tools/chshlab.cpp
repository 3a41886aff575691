// chshlab: command-line front end for the CHSH numerical laboratory.
//
// Exit codes: 0 success, 2 usage error, 3 a deterministic bound was violated
// (internal consistency failure), 4 numerical failure.

#include <chshlab/constrained.hpp>
#include <chshlab/lhv_model.hpp>
#include <chshlab/quantum_model.hpp>
#include <chshlab/scan.hpp>
#include <chshlab/t_observable.hpp>

#include <CLI11.hpp>

#include "output.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using namespace chshlab;
using cli::Cell;
using cli::Report;

constexpr int kExitUsage = 2;
constexpr int kExitBoundViolation = 3;
constexpr int kExitNumerical = 4;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;
  std::string action = "eval";
  Angles angles{std::numbers::pi / 4, 0.0, std::numbers::pi / 8, 3 * std::numbers::pi / 8};
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> q;
  std::string model = "sign";
  std::string mode;
  std::string objective = "constrained_e4";
  std::optional<double> bound;
  std::int64_t trials = 100000;
  std::uint64_t seed = 1;
  int resolution = 24;
  int restarts = 20;
  bool degrees = false;
  std::string format = "csv";
  std::string out;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["version"] = CHSHLAB_VERSION;
    j["subcommand"] = subcommand;
    j["action"] = action;
    j["alpha1"] = angles.alpha1;
    j["alpha2"] = angles.alpha2;
    j["beta1"] = angles.beta1;
    j["beta2"] = angles.beta2;
    j["alpha"] = alpha;
    j["beta"] = beta;
    j["q"] = q;
    j["model"] = model;
    j["mode"] = mode;
    j["objective"] = objective;
    j["bound"] = bound ? nlohmann::ordered_json(*bound) : nlohmann::ordered_json(nullptr);
    j["trials"] = trials;
    j["seed"] = seed;
    j["resolution"] = resolution;
    j["restarts"] = restarts;
    j["degrees"] = degrees;
    j["format"] = format;
    j["out"] = out;
    return j;
  }
};

void add_four_angles(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--alpha1", cfg.angles.alpha1, "Alice's first analyzer angle");
  cmd->add_option("--alpha2", cfg.angles.alpha2, "Alice's second analyzer angle");
  cmd->add_option("--beta1", cfg.angles.beta1, "Bob's first analyzer angle");
  cmd->add_option("--beta2", cfg.angles.beta2, "Bob's second analyzer angle");
}

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_flag("--degrees", cfg.degrees, "Interpret angle flags in degrees");
  cmd->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", cfg.out, "Write output to this path instead of stdout");
}

Cell num(double v) { return v; }
Cell count(std::int64_t v) { return v; }
Cell text(std::string s) { return s; }

// --- correlate -------------------------------------------------------------

Report run_correlate(const RunConfig& cfg) {
  Report r;
  r.columns = {"alpha", "beta", "analytic", "matrix", "p_pp", "p_pm", "p_mp", "p_mm"};
  const auto d = joint_distribution(cfg.alpha, cfg.beta);
  r.add_row({num(cfg.alpha), num(cfg.beta), num(singlet_correlation_closed(cfg.alpha, cfg.beta)),
             num(singlet_correlation(cfg.alpha, cfg.beta)), num(d(1, 1)), num(d(1, -1)),
             num(d(-1, 1)), num(d(-1, -1))});
  return r;
}

// --- chsh ------------------------------------------------------------------

Report run_chsh(const RunConfig& cfg, int& exit_code) {
  if (cfg.trials < 2) throw UsageError("--trials must be at least 2");
  Report r;
  r.columns = {"mode", "model", "estimate", "std_error", "trials", "bound_lo", "bound_hi",
               "within_bound"};
  CorrelationEstimate e;
  double bound = 0.0;
  std::string model_name = cfg.model;
  if (cfg.mode == "quantum") {
    RandomStream rng(cfg.seed, StreamId::kQuantumChsh);
    e = quantum_chsh_independent(cfg.angles, cfg.trials, rng);
    bound = 2.0 * std::numbers::sqrt2;
    model_name = "singlet";
  } else {
    HiddenVariableModel model = [&] {
      try {
        return model_by_name(cfg.model);
      } catch (const std::invalid_argument& ex) {
        throw UsageError(ex.what());
      }
    }();
    RandomStream rng(cfg.seed, StreamId::kHiddenVariable);
    if (cfg.mode == "same-lambda") {
      if (!model.is_local())
        throw UsageError("model '" + cfg.model + "' cannot be used with mode same-lambda");
      e = chsh_same_lambda(model, cfg.angles, cfg.trials, rng);
      bound = 2.0;
    } else {
      e = chsh_independent(model, cfg.angles, cfg.trials, rng);
      bound = 4.0;
    }
  }
  // The same-lambda and independent bounds hold trial by trial. The quantum
  // bound constrains the expectation only, so the sample mean is given the
  // usual four standard errors and exceeding it is a statistical finding.
  const bool quantum = cfg.mode == "quantum";
  const bool within = quantum ? std::abs(e.mean) <= bound + 4.0 * e.std_error
                              : e.within(-bound, bound);
  r.add_row({text(cfg.mode), text(model_name), num(e.mean), num(e.std_error), count(e.n_samples),
             num(-bound), num(bound), Cell{within}});
  if (!within) {
    r.status = quantum ? "statistical_bound_exceeded" : "bound_violated";
    if (!quantum) exit_code = kExitBoundViolation;
  }
  return r;
}

// --- constrained -----------------------------------------------------------

Report scan_report(const ScanReport& s) {
  Report r;
  r.columns = {"record", "value", "alpha1", "alpha2", "beta1", "beta2"};
  auto angles_row = [&](const std::string& name, double v, const Angles& c) {
    r.add_row({text(name), num(v), num(c.alpha1), num(c.alpha2), num(c.beta1), num(c.beta2)});
  };
  auto scalar_row = [&](const std::string& name, Cell v) {
    r.add_row({text(name), std::move(v), {}, {}, {}, {}});
  };
  scalar_row("objective", text(s.objective_name));
  scalar_row("bound", num(s.bound));
  scalar_row("resolution", count(s.grid_resolution));
  scalar_row("evaluated", count(s.n_evaluated));
  scalar_row("skipped", count(s.n_skipped));
  scalar_row("refinements", count(s.n_refinements));
  angles_row("max", s.max_value, s.argmax);
  angles_row("min", s.min_value, s.argmin);
  for (const auto& v : s.violations) angles_row("violation", v.value, v.config);
  r.status = s.violations.empty() ? "ok" : "violations_found";
  return r;
}

Report run_constrained(const RunConfig& cfg) {
  if (cfg.action == "scan") {
    if (cfg.resolution < 2) throw UsageError("--resolution must be at least 2");
    return scan_report(verify_bound(objective_by_name("constrained_e4"), 2.0, cfg.resolution,
                                    cfg.restarts, cfg.seed));
  }

  CorrelationQuad<double> q;
  if (!cfg.q.empty()) {
    if (cfg.q.size() != 4) throw UsageError("--q takes exactly four comma-separated values");
    for (int i = 0; i < 4; ++i) {
      if (!(cfg.q[i] >= -1.0 && cfg.q[i] <= 1.0)) throw UsageError("--q values must lie in [-1, 1]");
      q(i) = cfg.q[i];
    }
  } else {
    q = correlation_quad(cfg.angles);
  }

  Report r;
  r.columns = {"quantity", "k1", "l1", "k4", "l4", "value"};
  auto scalar = [&](const std::string& name, double v) {
    r.add_row({text(name), {}, {}, {}, {}, num(v)});
  };
  for (int i = 0; i < 4; ++i) scalar("q" + std::to_string(i + 1), q(i));

  ConstrainedDistribution<double> d;
  try {
    d = cfg.q.empty() ? build_constrained(cfg.angles) : build_constrained(q);
  } catch (const NumericalError&) {
    scalar("degenerate_conditioning", 1.0 + q.prod());
    r.status = "degenerate_conditioning";
    return r;
  }
  using Dist = ConstrainedDistribution<double>;
  for (int i = 0; i < 16; ++i)
    r.add_row({text("P"), count(Dist::outcome(i, 0)), count(Dist::outcome(i, 1)),
               count(Dist::outcome(i, 2)), count(Dist::outcome(i, 3)), num(d.probs(i))});
  scalar("normalizer", d.normalizer);
  scalar("mean_X1", d.marginal_mean(0));
  scalar("mean_Y1", d.marginal_mean(1));
  scalar("mean_X4", d.marginal_mean(2));
  scalar("mean_Y4", d.marginal_mean(3));
  scalar("expectation_closed", constrained_expectation_closed(q));
  scalar("expectation_bruteforce", constrained_expectation_bruteforce(d));
  scalar("eight_variable_sum", quantum_eight_variable_sum(q));
  return r;
}

// --- spectrum --------------------------------------------------------------

Report run_spectrum(const RunConfig& cfg) {
  Report r;
  r.columns = {"quantity", "index", "value"};
  auto scalar = [&](const std::string& name, double v) { r.add_row({text(name), {}, num(v)}); };

  const auto op = build_t(cfg.angles);
  const auto s = t_spectrum(op);
  const auto psi = singlet_state<double>();
  for (int i = 0; i < 4; ++i)
    r.add_row({text("eigenvalue"), count(i), num(s.eigen.eigenvalues[i])});
  for (int i = 0; i < 4; ++i)
    r.add_row({text("singlet_overlap"), count(i), num(std::norm(s.eigen.eigenvector(i).dot(psi)))});
  scalar("t0", s.t0);
  scalar("t1", s.t1);
  scalar("E", s.mean);
  scalar("mean_matrix", t_mean_matrix(op));
  try {
    const auto d = t_distribution(cfg.angles);
    scalar("weight_plus", d.weight_plus);
    scalar("weight_minus", d.weight_minus);
    scalar("mean_distribution", d.mean());
  } catch (const NumericalError&) {
    r.status = "t0_vanishes";
  }
  return r;
}

// --- simulate --------------------------------------------------------------

Report run_simulate(const RunConfig& cfg) {
  if (cfg.trials < 2) throw UsageError("--trials must be at least 2");
  Report r;
  r.columns = {"experiment", "alpha", "beta", "trials", "empirical_mean", "std_error",
               "analytic_mean", "n_positive", "check"};
  auto verdict = [](double mean, double se, double expected) {
    return std::abs(mean - expected) <= 4.0 * se + 1e-12 ? "PASS" : "FAIL";
  };

  RandomStream pair_rng(cfg.seed, StreamId::kPairSampling);
  const auto pairs = pair_index_map(cfg.angles);
  for (int n = 0; n < 4; ++n) {
    const auto [alpha, beta] = pairs[n];
    const auto dist = joint_distribution(alpha, beta);
    SampleTally tally;
    std::int64_t positive = 0;
    for (std::int64_t i = 0; i < cfg.trials; ++i) {
      const auto o = sample_pair(dist, pair_rng);
      tally.add(o.x * o.y);
      positive += o.x * o.y > 0;
    }
    const auto e = tally.finish();
    const double expected = singlet_correlation_closed(alpha, beta);
    r.add_row({text("pair" + std::to_string(n + 1)), num(alpha), num(beta), count(cfg.trials),
               num(e.mean), num(e.std_error), num(expected), count(positive),
               text(verdict(e.mean, e.std_error, expected))});
  }

  RandomStream t_rng(cfg.seed, StreamId::kTOutcome);
  try {
    const auto samples = sample_t(cfg.angles, cfg.trials, t_rng);
    double sum = 0.0, sum_sq = 0.0;
    std::int64_t positive = 0;
    for (double t : samples) {
      sum += t;
      sum_sq += t * t;
      positive += t > 0;
    }
    const double n = static_cast<double>(cfg.trials);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    const double se = std::sqrt(var / n);
    const double expected = t_mean(cfg.angles);
    r.add_row({text("t_outcome"), {}, {}, count(cfg.trials), num(mean), num(se), num(expected),
               count(positive), text(verdict(mean, se, expected))});
  } catch (const NumericalError&) {
    r.add_row({text("t_outcome"), {}, {}, count(cfg.trials), {}, {}, num(t_mean(cfg.angles)), {},
               text("UNDEFINED")});
    r.status = "t0_vanishes";
  }
  return r;
}

// --- scan ------------------------------------------------------------------

Report run_scan(const RunConfig& cfg) {
  if (cfg.resolution < 2) throw UsageError("--resolution must be at least 2");
  Objective obj = [&] {
    try {
      return objective_by_name(cfg.objective);
    } catch (const std::invalid_argument& ex) {
      throw UsageError(ex.what());
    }
  }();
  return scan_report(
      verify_bound(obj, cfg.bound.value_or(obj.bound), cfg.resolution, cfg.restarts, cfg.seed));
}

void to_radians(RunConfig& cfg) {
  if (!cfg.degrees) return;
  constexpr double k = std::numbers::pi / 180.0;
  cfg.angles.alpha1 *= k;
  cfg.angles.alpha2 *= k;
  cfg.angles.beta1 *= k;
  cfg.angles.beta2 *= k;
  cfg.alpha *= k;
  cfg.beta *= k;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of CHSH correlations, hidden-variable protocols and the CHSH operator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("chshlab ") + CHSHLAB_VERSION);
  RunConfig cfg;

  auto* correlate = app.add_subcommand("correlate", "Singlet correlation and joint probabilities");
  correlate->add_option("--alpha", cfg.alpha, "Alice's analyzer angle");
  correlate->add_option("--beta", cfg.beta, "Bob's analyzer angle");
  add_common(correlate, cfg);

  auto* chsh = app.add_subcommand("chsh", "Monte Carlo CHSH experiment");
  chsh->add_option("--mode", cfg.mode, "Protocol")
      ->required()
      ->check(CLI::IsMember({"same-lambda", "independent", "quantum"}));
  chsh->add_option("--model", cfg.model, "Hidden-variable model (sign, quantum-mimic)");
  chsh->add_option("--trials", cfg.trials, "Number of trials");
  chsh->add_option("--seed", cfg.seed, "Run seed");
  add_four_angles(chsh, cfg);
  add_common(chsh, cfg);

  auto* constrained = app.add_subcommand("constrained", "Constrained four-variable reduction");
  constrained->add_option("action", cfg.action, "eval or scan")
      ->check(CLI::IsMember({"eval", "scan"}));
  constrained->add_option("--q", cfg.q, "Four correlations q1,q2,q3,q4 (eval only)")
      ->delimiter(',')
      ->expected(4);
  constrained->add_option("--resolution", cfg.resolution, "Lattice points per angle (scan)");
  constrained->add_option("--restarts", cfg.restarts, "Random refinement restarts (scan)");
  constrained->add_option("--seed", cfg.seed, "Run seed (scan)");
  add_four_angles(constrained, cfg);
  add_common(constrained, cfg);

  auto* spectrum = app.add_subcommand("spectrum", "Spectrum of the CHSH operator");
  add_four_angles(spectrum, cfg);
  add_common(spectrum, cfg);

  auto* simulate = app.add_subcommand("simulate", "Sample pair outcomes and CHSH-operator outcomes");
  simulate->add_option("--trials", cfg.trials, "Number of trials");
  simulate->add_option("--seed", cfg.seed, "Run seed");
  add_four_angles(simulate, cfg);
  add_common(simulate, cfg);

  auto* scan = app.add_subcommand("scan", "Lattice scan and refinement of a bound");
  scan->add_option("--objective", cfg.objective, "constrained_e4, eight_variable_sum or t_validity_margin");
  scan->add_option("--bound", cfg.bound, "Override the objective's declared bound");
  scan->add_option("--resolution", cfg.resolution, "Lattice points per angle");
  scan->add_option("--restarts", cfg.restarts, "Random refinement restarts");
  scan->add_option("--seed", cfg.seed, "Run seed");
  add_common(scan, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  for (auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
  if (cfg.subcommand != "constrained") cfg.action.clear();
  to_radians(cfg);

  int exit_code = 0;
  Report report;
  try {
    if (!cfg.angles.finite() || !std::isfinite(cfg.alpha) || !std::isfinite(cfg.beta))
      throw UsageError("angles must be finite");
    if (cfg.subcommand == "correlate")
      report = run_correlate(cfg);
    else if (cfg.subcommand == "chsh")
      report = run_chsh(cfg, exit_code);
    else if (cfg.subcommand == "constrained")
      report = run_constrained(cfg);
    else if (cfg.subcommand == "spectrum")
      report = run_spectrum(cfg);
    else if (cfg.subcommand == "simulate")
      report = run_simulate(cfg);
    else
      report = run_scan(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  report.config = cfg.to_json();
  const std::string text =
      cfg.format == "json" ? cli::render_json(report) : cli::render_csv(report);
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot open " << cfg.out << " for writing\n";
      return kExitUsage;
    }
    file << text;
  }
  return exit_code;
}

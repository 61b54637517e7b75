//
// Copyright 2026 The dpratio Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dpratio/cli.h"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpratio/analysis.h"
#include "dpratio/config.h"
#include "dpratio/confidence.h"
#include "dpratio/estimators.h"
#include "dpratio/mechanisms.h"
#include "dpratio/report.h"
#include "dpratio/simulation.h"

namespace dpratio {
namespace {

constexpr const char* kSeedEnvVar = "DPRATIO_SEED";

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnvVar);
  if (env == nullptr) return 0;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(kSeedEnvVar) +
                                " must be a nonnegative integer");
  }
}

struct EstimateArgs {
  long long x = 0, y = 0, n_x = 0, n_y = 0;
  double epsilon = 1.0;
  double delta = 0.0;
  std::string method;
  double proposal = 0.0;
  bool has_proposal = false;
  std::optional<std::uint64_t> seed;
};

int cmd_estimate(const EstimateArgs& args) {
  const std::uint64_t seed = args.seed ? *args.seed : default_seed();
  RngHandle rng(seed);
  const CountTable t(args.x, args.y, args.n_x, args.n_y);

  RatioEstimate est;
  if (args.method == "ptr") {
    if (!args.has_proposal) {
      std::cerr << "usage: --method ptr requires --proposal\n";
      return 2;
    }
    const PtrOutcome outcome = propose_test_release(
        rng, t, PrivacyBudget(args.epsilon, args.delta), args.proposal);
    std::cout << "method=ptr gamma-hat=" << format_double(outcome.gamma_hat);
    if (outcome.failed()) {
      std::cout << " FAIL";
    } else {
      std::cout << " value=" << format_double(outcome.estimate->value);
    }
    std::cout << " epsilon=" << format_double(args.epsilon)
              << " delta=" << format_double(args.delta) << "\n";
    return 0;
  }

  const PrivacyBudget budget(args.epsilon, args.delta);
  if (args.method == "noised-counts") {
    est = laplace_noised_counts(rng, t, budget, false);
  } else if (args.method == "noised-counts-maxed") {
    est = laplace_noised_counts(rng, t, budget, true);
  } else if (args.method == "naive") {
    est = naive_relative_risk(rng, t, budget);
  } else if (args.method == "noised-log") {
    est = noised_log(rng, t, budget, false);
  } else if (args.method == "noised-log-debiased") {
    est = noised_log(rng, t, budget, true);
  } else if (args.method == "smooth-sens") {
    est = smooth_sensitivity_estimate(rng, t, budget);
  } else {
    std::cerr << "usage: unknown method '" << args.method << "'\n";
    return 2;
  }

  std::cout << "method=" << estimator_method_name(est.method)
            << " value=" << format_double(est.value);
  if (est.x_tilde) std::cout << " x-tilde=" << format_double(*est.x_tilde);
  if (est.y_tilde) std::cout << " y-tilde=" << format_double(*est.y_tilde);
  std::cout << " epsilon=" << format_double(est.budget_spent.epsilon)
            << " delta=" << format_double(est.budget_spent.delta) << "\n";
  return 0;
}

struct AnalyzeArgs {
  std::string curve;
  long long x = 0, y = 0;
  long long n_x = 0, n_y = 0;
  double alpha = 0.1;
  double delta = 0.0;
  std::string epsilon_grid;
  std::string method = "noised-counts";
  std::string out;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw std::runtime_error("io: cannot open '" + path + "' for writing");
  }
  file << text;
  if (!file) {
    throw std::runtime_error("io: failed writing '" + path + "'");
  }
}

int cmd_analyze(const AnalyzeArgs& args) {
  std::vector<double> grid;
  try {
    grid = parse_grid_spec(args.epsilon_grid);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  }
  const long long n_x = args.n_x > 0 ? args.n_x : std::max(args.x, args.y);
  const long long n_y = args.n_y > 0 ? args.n_y : std::max(args.x, args.y);
  const CountTable t(args.x, args.y, n_x, n_y);

  std::string csv = "#schema=1\n";
  if (args.curve == "accuracy") {
    csv += "epsilon,beta,one_minus_beta,reason\n";
    for (const double eps : grid) {
      std::string reason;
      double beta = std::numeric_limits<double>::quiet_NaN();
      try {
        const PrivacyBudget budget(eps, args.delta);
        if (args.method == "noised-counts") {
          beta = noised_counts_accuracy(t, budget, args.alpha).beta;
        } else if (args.method == "noised-log") {
          beta = noised_log_accuracy(t, budget, args.alpha).beta;
        } else if (args.method == "naive") {
          beta = naive_accuracy(t, budget, args.alpha).beta;
        } else if (args.method == "smooth-sens") {
          const double smooth = smooth_sensitivity_ratio(t, budget);
          beta = std::exp(-args.alpha * eps / (2.0 * smooth));
        } else {
          std::cerr << "usage: unknown accuracy method '" << args.method << "'\n";
          return 2;
        }
      } catch (const std::domain_error& e) {
        reason = e.what();
      }
      csv += format_double(eps);
      csv += ',';
      if (!std::isnan(beta)) csv += format_double(beta);
      csv += ',';
      if (!std::isnan(beta)) csv += format_double(1.0 - beta);
      csv += ',';
      csv += reason;
      csv += '\n';
    }
  } else if (args.curve == "bias") {
    csv += "epsilon,exact,approx,reason\n";
    for (const double eps : grid) {
      const PrivacyBudget budget(eps);
      std::string reason;
      double exact = std::numeric_limits<double>::quiet_NaN();
      double approx = std::numeric_limits<double>::quiet_NaN();
      try {
        exact = noised_counts_bias_exact(t, budget);
      } catch (const std::exception& e) {
        reason = e.what();
      }
      try {
        approx = noised_counts_bias_approx(t, budget);
      } catch (const std::exception& e) {
        if (reason.empty()) reason = e.what();
      }
      csv += format_double(eps);
      csv += ',';
      if (!std::isnan(exact)) csv += format_double(exact);
      csv += ',';
      if (!std::isnan(approx)) csv += format_double(approx);
      csv += ',';
      csv += reason;
      csv += '\n';
    }
  } else {
    std::cerr << "usage: --curve must be 'accuracy' or 'bias'\n";
    return 2;
  }
  write_text(args.out, csv);
  return 0;
}

struct CiArgs {
  double x_tilde = 0.0, y_tilde = 0.0;
  long long n_x = 0, n_y = 0;
  double level = 0.95;
  std::string method;
  double noise_variance = 0.0;
};

int cmd_ci(const CiArgs& args) {
  ConfidenceInterval ci;
  if (args.method == "classic") {
    const long long x = static_cast<long long>(args.x_tilde);
    const long long y = static_cast<long long>(args.y_tilde);
    if (static_cast<double>(x) != args.x_tilde ||
        static_cast<double>(y) != args.y_tilde) {
      std::cerr << "usage: the classic interval takes integer counts\n";
      return 2;
    }
    ci = classic_ci(CountTable(x, y, args.n_x, args.n_y), args.level);
  } else if (args.method == "asymptotic") {
    ci = private_asymptotic_ci(
        ProportionPair::from_counts(args.x_tilde, args.y_tilde, args.n_x, args.n_y),
        args.level);
  } else if (args.method == "conservative") {
    ci = conservative_ci(
        ProportionPair::from_counts(args.x_tilde, args.y_tilde, args.n_x,
                                    args.n_y, args.noise_variance),
        args.level, CiMethod::kConservativeGaussian);
  } else {
    std::cerr << "usage: --method must be classic, asymptotic, or conservative\n";
    return 2;
  }
  std::cout << "#schema=1\nlower,upper,width,method\n"
            << format_double(ci.lower) << ',' << format_double(ci.upper) << ','
            << format_double(ci.width()) << ',' << args.method << "\n";
  return 0;
}

struct CalibrateArgs {
  double epsilon = 0.0;
  double delta = 0.0;
  double sensitivity = 1.0;
  std::string method;
};

int cmd_calibrate(const CalibrateArgs& args) {
  const PrivacyBudget budget(args.epsilon, args.delta);
  const Sensitivity sens(args.sensitivity);
  GaussianDist dist(0.0, 1.0);
  if (args.method == "dwork") {
    dist = calibrate_gaussian_dwork(budget, sens);
  } else if (args.method == "balle") {
    dist = calibrate_gaussian_balle(budget, sens);
  } else {
    std::cerr << "usage: --method must be dwork or balle\n";
    return 2;
  }
  std::cout << "sigma=" << format_double(dist.sigma) << " achieved-delta="
            << format_double(
                   gaussian_mechanism_delta(args.epsilon, args.sensitivity, dist.sigma))
            << "\n";
  return 0;
}

struct SimulateArgs {
  std::string experiment;
  std::string config_path;
  std::string out;
  int workers = 1;
  std::optional<std::uint64_t> seed;
  std::optional<long long> replications;
};

int cmd_simulate(const SimulateArgs& args) {
  ExperimentKind kind;
  if (args.experiment == "accuracy") {
    kind = ExperimentKind::kAccuracy;
  } else if (args.experiment == "bias") {
    kind = ExperimentKind::kBias;
  } else if (args.experiment == "coverage") {
    kind = ExperimentKind::kCoverage;
  } else if (args.experiment == "cdf") {
    kind = ExperimentKind::kCdfValidation;
  } else {
    std::cerr << "usage: --experiment must be accuracy, bias, coverage, or cdf\n";
    return 2;
  }
  GridOverrides overrides;
  overrides.seed = args.seed;
  if (!args.seed && std::getenv(kSeedEnvVar) != nullptr) {
    overrides.seed = default_seed();
  }
  overrides.replications = args.replications;

  ExperimentGrid grid;
  try {
    grid = load_experiment_grid_from_file(args.config_path, kind, overrides);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  const auto records = run_experiment(grid, args.workers);
  write_text(args.out, records_to_csv(records));
  std::cout << "rows=" << records.size() << " out=" << args.out << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Differentially private ratio statistics"};
  app.require_subcommand(1);

  EstimateArgs est;
  CLI::App* estimate = app.add_subcommand(
      "estimate", "Release one private ratio estimate");
  estimate->add_option("--x", est.x, "numerator count")->required();
  estimate->add_option("--y", est.y, "denominator count")->required();
  estimate->add_option("--nx", est.n_x, "numerator group size")->required();
  estimate->add_option("--ny", est.n_y, "denominator group size")->required();
  estimate->add_option("--epsilon", est.epsilon)->required();
  estimate->add_option("--delta", est.delta);
  estimate->add_option("--method", est.method)->required();
  CLI::Option* proposal_opt = estimate->add_option("--proposal", est.proposal);
  std::uint64_t est_seed = 0;
  CLI::Option* est_seed_opt = estimate->add_option("--seed", est_seed);

  AnalyzeArgs ana;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Closed-form accuracy and bias curves as CSV");
  analyze->add_option("--curve", ana.curve)->required();
  analyze->add_option("--x", ana.x)->required();
  analyze->add_option("--y", ana.y)->required();
  analyze->add_option("--nx", ana.n_x);
  analyze->add_option("--ny", ana.n_y);
  analyze->add_option("--alpha", ana.alpha);
  analyze->add_option("--delta", ana.delta);
  analyze->add_option("--epsilon-grid", ana.epsilon_grid)->required();
  analyze->add_option("--method", ana.method);
  analyze->add_option("--out", ana.out);

  CiArgs ci;
  CLI::App* ci_cmd = app.add_subcommand("ci", "One confidence interval as CSV");
  ci_cmd->add_option("--x-tilde", ci.x_tilde)->required();
  ci_cmd->add_option("--y-tilde", ci.y_tilde)->required();
  ci_cmd->add_option("--nx", ci.n_x)->required();
  ci_cmd->add_option("--ny", ci.n_y)->required();
  ci_cmd->add_option("--level", ci.level);
  ci_cmd->add_option("--method", ci.method)->required();
  ci_cmd->add_option("--noise-variance", ci.noise_variance);

  CalibrateArgs cal;
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "Gaussian-mechanism noise calibration");
  calibrate->add_option("--epsilon", cal.epsilon)->required();
  calibrate->add_option("--delta", cal.delta)->required();
  calibrate->add_option("--sensitivity", cal.sensitivity)->required();
  calibrate->add_option("--method", cal.method)->required();

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Run a Monte Carlo experiment and write CSV");
  simulate->add_option("--experiment", sim.experiment)->required();
  simulate->add_option("--config", sim.config_path)->required();
  simulate->add_option("--out", sim.out)->required();
  simulate->add_option("--workers", sim.workers)->check(CLI::PositiveNumber);
  std::uint64_t sim_seed = 0;
  CLI::Option* sim_seed_opt = simulate->add_option("--seed", sim_seed);
  long long sim_reps = 0;
  CLI::Option* sim_reps_opt = simulate->add_option("--replications", sim_reps);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*estimate) {
      est.has_proposal = proposal_opt->count() > 0;
      if (est_seed_opt->count() > 0) est.seed = est_seed;
      return cmd_estimate(est);
    }
    if (*analyze) return cmd_analyze(ana);
    if (*ci_cmd) return cmd_ci(ci);
    if (*calibrate) return cmd_calibrate(cal);
    if (*simulate) {
      if (sim_seed_opt->count() > 0) sim.seed = sim_seed;
      if (sim_reps_opt->count() > 0) sim.replications = sim_reps;
      return cmd_simulate(sim);
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace dpratio

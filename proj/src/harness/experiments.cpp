// Copyright 2026 The PPSC Gossip Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ppsc/harness/experiments.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ppsc/consensus.hpp"
#include "ppsc/errors.hpp"
#include "ppsc/privacy_audit.hpp"

namespace ppsc::harness {

TrialStats Summarize(const std::vector<double>& values) {
  TrialStats s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  for (double v : values) s.mean += v;
  s.mean /= n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std_err = std::sqrt(ss / (n - 1.0) / n);
  }
  return s;
}

std::string Params(std::initializer_list<std::pair<const char*, double>> kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    if (!out.empty()) out += ';';
    out += k;
    out += '=';
    out += FormatNumber(v);
  }
  return out;
}

ConsensusSweep SweepConsensus(const Eigen::VectorXd& d, const PublicGraph& g,
                              const PrivateGraph& gp, const Plan& plan, double nu,
                              std::int64_t trials, std::uint64_t seed, const std::string& label,
                              Execution exec) {
  struct Trial {
    std::vector<double> errors;
    double mean = 0.0;
  };
  const ConsensusPlan cp{plan.steps, plan.averaging, plan.sigma_gamma};
  const auto runs = MapTrials<Trial>(trials, exec, [&](std::int64_t t) {
    Stream stream(seed, static_cast<std::uint64_t>(t), label);
    ConsensusRun run = RunConsensus(d, g, gp, cp, stream);
    return Trial{std::move(run.error_by_step), run.final_state.mean()};
  });

  ConsensusSweep sweep;
  const std::size_t steps = runs.front().errors.size();
  std::vector<double> column(runs.size());
  for (std::size_t s = 0; s < steps; ++s) {
    for (std::size_t t = 0; t < runs.size(); ++t) column[t] = runs[t].errors[s];
    sweep.mse_by_step.push_back(Summarize(column));
  }
  for (std::size_t t = 0; t < runs.size(); ++t) column[t] = runs[t].mean;
  sweep.final_mean = Summarize(column);
  for (int avg = 1; avg <= plan.averaging; ++avg) {
    if (sweep.mse_by_step[plan.steps + avg].mean <= nu) {
      sweep.empirical_min_averaging = avg;
      break;
    }
  }
  return sweep;
}

NleCell RunNleTrials(const EquationSystem& sys, const PublicGraph& g, const PrivateGraph& gp,
                     const Plan& plan, const Eigen::VectorXd& zeta0, std::int64_t trials,
                     std::uint64_t seed, const std::string& label, Execution exec) {
  struct Trial {
    double error = 0.0;
    bool covered = false;
  };
  const NlePlan np{plan.steps, plan.averaging, plan.recursions, plan.sigma_gamma};
  const auto runs = MapTrials<Trial>(trials, exec, [&](std::int64_t t) {
    Stream stream(seed, static_cast<std::uint64_t>(t), label);
    const SolverRun run = RunNle(sys, g, gp, np, zeta0, stream);
    return Trial{run.final_error, run.AllCovered()};
  });
  NleCell cell;
  std::vector<double> errors;
  double covered = 0.0;
  for (const auto& r : runs) {
    errors.push_back(r.error);
    covered += r.covered ? 1.0 : 0.0;
  }
  cell.error = Summarize(errors);
  cell.covered_fraction = covered / static_cast<double>(runs.size());
  return cell;
}

DcoProblem QuadraticProblem(std::vector<Eigen::VectorXd> centers, ConvexSet set) {
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(centers.front().size());
  for (const auto& c : centers) mean += c;
  mean /= static_cast<double>(centers.size());
  Eigen::VectorXd reference = set.Project(mean);
  Eigen::VectorXd zeta0 = set.Project(Eigen::VectorXd::Zero(mean.size()));
  return DcoProblem{ObjectiveFamily::Quadratic(std::move(centers)), std::move(set),
                    std::move(zeta0), std::move(reference)};
}

std::vector<Eigen::VectorXd> RandomCenters(int n, Eigen::Index m, double scale, Stream& stream) {
  std::vector<Eigen::VectorXd> centers;
  for (int i = 0; i < n; ++i) centers.push_back(stream.Gaussian(m, scale));
  return centers;
}

DcoProblem QuadraticFromConfig(const ExperimentConfig& cfg) {
  std::vector<Eigen::VectorXd> centers = cfg.task.centers;
  if (centers.empty()) {
    Stream stream(cfg.seed, 0, "centers");
    centers = RandomCenters(cfg.public_graph.n, cfg.task.dim, 1.0, stream);
  }
  const Eigen::Index m = centers.front().size();
  return QuadraticProblem(std::move(centers), cfg.BuildSet(m));
}

DcoTrialSummary RunDcoTrials(const DcoProblem& problem, const PublicGraph& g,
                             const PrivateGraph& gp, const Plan& plan,
                             const StepsizeSchedule& schedule, double nu, std::int64_t trials,
                             std::uint64_t seed, const std::string& label, Execution exec) {
  const DcoPlan dp{plan.steps, plan.averaging, plan.recursions, plan.sigma_gamma};
  DcoOptions opts;
  opts.reference = problem.reference;
  const auto errors = MapTrials<double>(trials, exec, [&](std::int64_t t) {
    Stream stream(seed, static_cast<std::uint64_t>(t), label);
    return RunDco(problem.family, problem.set, g, gp, dp, schedule, problem.zeta0, stream, opts)
        .final_error;
  });
  DcoTrialSummary s;
  s.final_error = Summarize(errors);
  s.success_frequency =
      static_cast<double>(std::count_if(errors.begin(), errors.end(),
                                        [nu](double e) { return e <= nu; })) /
      static_cast<double>(errors.size());
  return s;
}

DcoSearch SearchDcoRecursions(const DcoProblem& problem, const Budget& budget,
                              const PublicGraph& g, const PrivateGraph& gp,
                              const StepsizeSchedule& schedule, const PlannerOptions& options,
                              std::int64_t trials, std::uint64_t seed, int max_doublings,
                              Execution exec) {
  const DcoBounds bounds = BoundsFor(problem.family, problem.set, budget.nu);
  DcoSearch search;
  int l = 1;
  for (int k = 0; k <= max_doublings; ++k, l *= 2) {
    search.plan = PlanDco(budget, bounds, g, gp, schedule, l, options);
    search.summary = RunDcoTrials(problem, g, gp, search.plan, schedule, budget.nu, trials, seed,
                                  fmt::format("dco L={}", l), exec);
    search.tried.emplace_back(l, search.summary.success_frequency);
    if (search.summary.success_frequency >= budget.p) {
      search.reached = true;
      break;
    }
  }
  return search;
}

ClassificationData LoadClassificationData(const ExperimentConfig& cfg) {
  const auto& t = cfg.task;
  ClassificationData out;
  if (t.dataset == "synthetic") {
    Stream stream(cfg.seed, 0, "dataset");
    const LabelledData all =
        SyntheticBlobs(t.samples + t.test_samples, t.features, t.separation, stream);
    out.train.features = all.features.topRows(t.samples);
    out.train.labels.assign(all.labels.begin(), all.labels.begin() + t.samples);
    out.test.features = all.features.bottomRows(t.test_samples);
    out.test.labels.assign(all.labels.begin() + t.samples, all.labels.end());
  } else if (t.dataset == "csv") {
    out.train = LoadCsvDataset(cfg.Resolve(t.csv_train));
    out.test = LoadCsvDataset(cfg.Resolve(t.csv_test));
  } else {
    const auto& m = t.mnist;
    out.train = LoadMnistIdx(cfg.Resolve(m.train_images), cfg.Resolve(m.train_labels),
                             m.positive_digits, m.train_limit);
    out.test = LoadMnistIdx(cfg.Resolve(m.test_images), cfg.Resolve(m.test_labels),
                            m.positive_digits, m.test_limit);
  }
  if (out.train.features.cols() != out.test.features.cols()) {
    throw Error(ErrorKind::kDimensionMismatch, "train and test features differ in width");
  }
  return out;
}

double TestAuc(const LabelledData& data, const Eigen::VectorXd& y) {
  const Eigen::VectorXd scores = data.features * y;
  return Auc(std::span<const double>(scores.data(), static_cast<std::size_t>(scores.size())),
             data.labels);
}

std::vector<TrialStats> LogisticAucTrajectory(const ObjectiveFamily& family,
                                              const ConvexSet& set, const LabelledData& test,
                                              const PublicGraph& g, const PrivateGraph& gp,
                                              const Plan& plan,
                                              const StepsizeSchedule& schedule,
                                              std::int64_t trials, std::uint64_t seed,
                                              const std::string& label, Execution exec) {
  const DcoPlan dp{plan.steps, plan.averaging, plan.recursions, plan.sigma_gamma};
  const Eigen::VectorXd zeta0 = set.Project(Eigen::VectorXd::Zero(family.dim()));
  const auto runs = MapTrials<std::vector<double>>(trials, exec, [&](std::int64_t t) {
    Stream stream(seed, static_cast<std::uint64_t>(t), label);
    std::vector<double> aucs;
    aucs.reserve(plan.recursions);
    DcoOptions opts;
    opts.on_recursion = [&](int, const Eigen::MatrixXd& x) {
      aucs.push_back(TestAuc(test, x.colwise().mean().transpose()));
    };
    RunDco(family, set, g, gp, dp, schedule, zeta0, stream, opts);
    return aucs;
  });
  std::vector<TrialStats> out;
  std::vector<double> column(runs.size());
  for (int l = 0; l < plan.recursions; ++l) {
    for (std::size_t t = 0; t < runs.size(); ++t) column[t] = runs[t][l];
    out.push_back(Summarize(column));
  }
  return out;
}

double Plateau(const std::vector<TrialStats>& trajectory) {
  if (trajectory.empty()) return kNotMeasured;
  const std::size_t count = std::max<std::size_t>(1, trajectory.size() / 4);
  double sum = 0.0;
  for (std::size_t i = trajectory.size() - count; i < trajectory.size(); ++i) {
    sum += trajectory[i].mean;
  }
  return sum / static_cast<double>(count);
}

namespace {

void RequireKind(const ExperimentConfig& cfg, const char* kind) {
  if (cfg.task.kind != kind) {
    throw Error(ErrorKind::kConfig,
                fmt::format("config key 'task.kind': this experiment needs '{}'", kind));
  }
}

std::vector<double> OrDefault(const std::vector<double>& grid, double fallback) {
  return grid.empty() ? std::vector<double>{fallback} : grid;
}

void AddPlanRows(ResultTable& table, const std::string& p, const Plan& plan,
                 const std::string& flag) {
  table.Add(p, "S", plan.steps, kNotMeasured, flag);
  table.Add(p, "T_theory", plan.averaging, kNotMeasured, flag);
  table.Add(p, "L", plan.recursions, kNotMeasured, flag);
  table.Add(p, "sigma_gamma", plan.sigma_gamma, kNotMeasured, flag);
  table.Add(p, "lambda_ppsc", plan.lambda_ppsc, kNotMeasured, flag);
}

}  // namespace

ResultTable ExperimentAvg(const ExperimentConfig& cfg, bool force) {
  RequireKind(cfg, "average");
  const PublicGraph g = cfg.BuildPublicGraph();
  const PrivateGraph gp = cfg.BuildPrivateGraph();
  const Eigen::VectorXd& d = cfg.task.data;
  const PlannerOptions opts = cfg.BuildPlannerOptions();

  ResultTable table;
  for (double eps : OrDefault(cfg.grid.epsilons, cfg.budget.epsilon)) {
    Budget b = cfg.budget;
    b.epsilon = eps;
    Plan plan = PlanConsensus(b, d.squaredNorm(), g, gp, opts);
    const std::string flag = ApplyOverrides(plan, cfg.overrides, force);
    const ConsensusSweep sweep = SweepConsensus(d, g, gp, plan, b.nu, cfg.trials, cfg.seed,
                                                fmt::format("avg eps={}", FormatNumber(eps)));
    const std::string p = Params({{"eps", eps}});
    AddPlanRows(table, p, plan, flag);
    table.Add(p, "T_empirical_min", sweep.empirical_min_averaging, kNotMeasured, flag);
    const TrialStats& final_mse = sweep.mse_by_step.back();
    table.Add(p, "mse_final", final_mse.mean, final_mse.std_err, flag);
    table.Add(p, "mse_bound",
              ConsensusMseBound(g, gp, d.squaredNorm(), plan.steps, plan.averaging,
                                plan.sigma_gamma),
              kNotMeasured, flag);
    table.Add(p, "final_mean", sweep.final_mean.mean, sweep.final_mean.std_err, flag);
    for (int t = 0; t <= plan.averaging; ++t) {
      const TrialStats& s = sweep.mse_by_step[plan.steps + t];
      table.Add(Params({{"eps", eps}, {"T", t}}), "mse", s.mean, s.std_err, flag);
    }
  }
  for (const auto& e : CoveringCurve(gp, cfg.grid.covering_max_steps, cfg.grid.covering_trials,
                                     cfg.seed)) {
    const std::string p = Params({{"S", e.steps}});
    table.Add(p, "covering_empirical", e.empirical, e.std_err);
    table.Add(p, "covering_lb", e.analytic_lb);
  }
  return table;
}

ResultTable ExperimentNle(const ExperimentConfig& cfg, bool force) {
  RequireKind(cfg, "nle");
  const PublicGraph g = cfg.BuildPublicGraph();
  const PrivateGraph gp = cfg.BuildPrivateGraph();
  const EquationSystem sys = cfg.BuildEquationSystem();
  const Eigen::VectorXd zeta0 = cfg.task.zeta0.value_or(Eigen::VectorXd::Zero(sys.m()));
  if (zeta0.size() != sys.m()) {
    throw Error(ErrorKind::kDimensionMismatch, "config key 'task.zeta0': wrong dimension");
  }
  const PlannerOptions opts = cfg.BuildPlannerOptions();

  ResultTable table;
  {
    // Noise-free run planned for a tight target; checks exact convergence.
    Budget b = cfg.budget;
    b.nu = 1e-13;
    Plan plan = PlanNle(b, sys, zeta0, g, gp, opts);
    plan.sigma_gamma = 0.0;
    Stream stream(cfg.seed, 0, "nle noiseless");
    const SolverRun run = RunNle(sys, g, gp,
                                 {plan.steps, plan.averaging, plan.recursions, 0.0}, zeta0,
                                 stream);
    const double dev =
        (run.final_state.rowwise() - sys.y_star().transpose()).cwiseAbs().maxCoeff();
    table.Add("noiseless", "L", plan.recursions);
    table.Add("noiseless", "T", plan.averaging);
    table.Add("noiseless", "error", run.final_error);
    table.Add("noiseless", "max_abs_deviation", dev);
  }
  for (double nu : OrDefault(cfg.grid.nus, cfg.budget.nu)) {
    for (double eps : OrDefault(cfg.grid.epsilons, cfg.budget.epsilon)) {
      Budget b = cfg.budget;
      b.nu = nu;
      b.epsilon = eps;
      Plan plan = PlanNle(b, sys, zeta0, g, gp, opts);
      const std::string flag = ApplyOverrides(plan, cfg.overrides, force);
      const std::string key = fmt::format("nle nu={} eps={}", FormatNumber(nu), FormatNumber(eps));
      const NleCell cell = RunNleTrials(sys, g, gp, plan, zeta0, cfg.trials, cfg.seed, key);
      const std::string p = Params({{"nu", nu}, {"eps", eps}});
      AddPlanRows(table, p, plan, flag);
      table.Add(p, "error", cell.error.mean, cell.error.std_err, flag);
      table.Add(p, "covered_fraction", cell.covered_fraction, kNotMeasured, flag);
      table.Add(p, "covering_lb",
                std::pow(CoveringLowerBound(gp, plan.steps), plan.recursions), kNotMeasured,
                flag);

      int min_t = cell.error.mean <= nu ? plan.averaging : -1;
      for (int div : {2, 4, 8, 16}) {
        Plan shorter = plan;
        shorter.averaging = std::max(1, plan.averaging / div);
        const NleCell c = RunNleTrials(sys, g, gp, shorter, zeta0, cfg.grid.curve_trials,
                                       cfg.seed, fmt::format("{} T={}", key, shorter.averaging));
        table.Add(Params({{"nu", nu}, {"eps", eps}, {"T", shorter.averaging}}), "error",
                  c.error.mean, c.error.std_err, flag);
        if (c.error.mean <= nu) min_t = shorter.averaging;
      }
      table.Add(p, "T_empirical_min", min_t, kNotMeasured, flag);
    }
  }
  return table;
}

ResultTable ExperimentLogistic(const ExperimentConfig& cfg, bool force) {
  RequireKind(cfg, "logistic");
  const PublicGraph g = cfg.BuildPublicGraph();
  const PrivateGraph gp = cfg.BuildPrivateGraph();
  const ClassificationData data = LoadClassificationData(cfg);
  const ObjectiveFamily family =
      ObjectiveFamily::Logistic(SplitAmongAgents(data.train, g.n()), cfg.task.lambda);
  const ConvexSet set = cfg.BuildSet(family.dim());
  const StepsizeSchedule schedule = cfg.BuildStepsize();
  const PlannerOptions opts = cfg.BuildPlannerOptions();
  const int recursions = cfg.overrides.recursions.value_or(100);

  ResultTable table;
  {
    const double lipschitz =
        0.25 * data.train.features.squaredNorm() + family.lambda();
    const Eigen::VectorXd y_ref = CentralizedProjectedGradient(
        family, set, Eigen::VectorXd::Zero(family.dim()), 2000, 1.0 / lipschitz);
    table.Add("centralized", "auc", TestAuc(data.test, y_ref));
  }
  double lo = 1.0, hi = 0.0;
  for (double eps : OrDefault(cfg.grid.epsilons, cfg.budget.epsilon)) {
    Budget b = cfg.budget;
    b.epsilon = eps;
    Plan plan = PlanDco(b, BoundsFor(family, set, b.nu), g, gp, schedule, recursions, opts);
    const std::string flag = ApplyOverrides(plan, cfg.overrides, force);
    const auto traj = LogisticAucTrajectory(family, set, data.test, g, gp, plan, schedule,
                                            cfg.trials, cfg.seed,
                                            fmt::format("logistic eps={}", FormatNumber(eps)));
    const std::string p = Params({{"eps", eps}});
    AddPlanRows(table, p, plan, flag);
    const double plateau = Plateau(traj);
    lo = std::min(lo, plateau);
    hi = std::max(hi, plateau);
    table.Add(p, "auc_plateau", plateau, kNotMeasured, flag);
    for (std::size_t l = 0; l < traj.size(); ++l) {
      table.Add(Params({{"eps", eps}, {"l", static_cast<double>(l + 1)}}), "auc", traj[l].mean,
                traj[l].std_err, flag);
    }
  }
  table.Add("all", "auc_plateau_spread", hi - lo);
  return table;
}

}  // namespace ppsc::harness

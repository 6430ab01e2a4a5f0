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

// Command-line front end: planning, single solver runs, audits and the
// experiment reproductions. Exit codes: 0 success, 1 invalid input, 2 runtime
// failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ppsc/consensus.hpp"
#include "ppsc/errors.hpp"
#include "ppsc/harness/config.hpp"
#include "ppsc/harness/experiments.hpp"
#include "ppsc/harness/result_table.hpp"
#include "ppsc/linear_eq.hpp"
#include "ppsc/monte_carlo.hpp"
#include "ppsc/optim.hpp"
#include "ppsc/planner.hpp"
#include "ppsc/ppsc.hpp"
#include "ppsc/privacy_audit.hpp"

namespace {

using namespace ppsc;
using namespace ppsc::harness;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  std::string out;
  bool force = false;
};

void AddCommon(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON config file")->required();
  cmd->add_option("--seed", f.seed, "root seed; overrides the config");
  cmd->add_option("--trials", f.trials, "Monte-Carlo trials; overrides the config")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", f.out, "output CSV path (default: config 'out', else stdout)");
  cmd->add_flag("--force", f.force, "accept overrides below the planner bounds");
}

ExperimentConfig Load(const CommonFlags& f) {
  ExperimentConfig cfg = LoadConfig(f.config);
  if (f.seed) cfg.seed = *f.seed;
  if (f.trials) cfg.trials = *f.trials;
  if (!f.out.empty()) cfg.out = f.out;
  if (cfg.BuildPublicGraph().weight_above_default()) {
    std::cerr << "warning: public weight " << cfg.public_graph.weight << " exceeds 1/n = "
              << 1.0 / cfg.public_graph.n << "; accepted because I - A still contracts\n";
  }
  return cfg;
}

// Runtime failures (I/O after validation) map to exit code 2.
struct RuntimeFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void Emit(const ExperimentConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) {
    throw RuntimeFailure("cannot write " + cfg.out);
  }
}

std::string PlanText(const Plan& plan) {
  std::size_t width = 0;
  for (const auto& e : plan.provenance) width = std::max(width, e.name.size());
  std::string out;
  for (const auto& e : plan.provenance) {
    out += fmt::format("{:<{}}  {:>14}  {}\n", e.name, width, FormatNumber(e.value), e.source);
  }
  return out;
}

std::string PlanCsv(const Plan& plan) {
  std::string out = "name,value,source\n";
  for (const auto& e : plan.provenance) {
    out += fmt::format("{},{},\"{}\"\n", e.name, FormatNumber(e.value), e.source);
  }
  return out;
}

Eigen::VectorXd Zeta0(const ExperimentConfig& cfg, Eigen::Index m) {
  Eigen::VectorXd z = cfg.task.zeta0.value_or(Eigen::VectorXd::Zero(m));
  if (z.size() != m) {
    throw Error(ErrorKind::kDimensionMismatch, "config key 'task.zeta0': wrong dimension");
  }
  return z;
}

// Plan for the configured task, overrides applied.
struct PlannedTask {
  Plan plan;
  std::string flag;
};

PlannedTask PlanTask(const ExperimentConfig& cfg, bool force) {
  const PublicGraph g = cfg.BuildPublicGraph();
  const PrivateGraph gp = cfg.BuildPrivateGraph();
  const PlannerOptions opts = cfg.BuildPlannerOptions();
  PlannedTask out;
  const auto& kind = cfg.task.kind;
  if (kind == "average") {
    out.plan = PlanConsensus(cfg.budget, cfg.task.data.squaredNorm(), g, gp, opts);
  } else if (kind == "nle") {
    const EquationSystem sys = cfg.BuildEquationSystem();
    out.plan = PlanNle(cfg.budget, sys, Zeta0(cfg, sys.m()), g, gp, opts);
  } else if (kind == "quadratic") {
    const DcoProblem problem = QuadraticFromConfig(cfg);
    const StepsizeSchedule schedule = cfg.BuildStepsize();
    if (cfg.overrides.recursions) {
      out.plan = PlanDco(cfg.budget, BoundsFor(problem.family, problem.set, cfg.budget.nu), g,
                         gp, schedule, *cfg.overrides.recursions, opts);
    } else {
      const DcoSearch search = SearchDcoRecursions(problem, cfg.budget, g, gp, schedule, opts,
                                                   cfg.trials, cfg.seed,
                                                   cfg.grid.max_doublings);
      if (!search.reached) {
        std::cerr << "warning: accuracy frequency " << search.summary.success_frequency
                  << " < p at L = " << search.plan.recursions << "\n";
      }
      out.plan = search.plan;
    }
  } else {
    const ClassificationData data = LoadClassificationData(cfg);
    const ObjectiveFamily family =
        ObjectiveFamily::Logistic(SplitAmongAgents(data.train, g.n()), cfg.task.lambda);
    const ConvexSet set = cfg.BuildSet(family.dim());
    out.plan = PlanDco(cfg.budget, BoundsFor(family, set, cfg.budget.nu), g, gp,
                       cfg.BuildStepsize(), cfg.overrides.recursions.value_or(100), opts);
  }
  out.flag = ApplyOverrides(out.plan, cfg.overrides, force);
  return out;
}

int CmdPlan(const CommonFlags& f) {
  const ExperimentConfig cfg = Load(f);
  const PlannedTask t = PlanTask(cfg, f.force);
  if (cfg.out.empty()) {
    std::cout << PlanText(t.plan) << "\n" << PlanCsv(t.plan);
  } else {
    std::cout << PlanText(t.plan);
    Emit(cfg, PlanCsv(t.plan));
  }
  if (!t.flag.empty()) std::cerr << "warning: overrides below planner bounds (forced)\n";
  return 0;
}

int CmdPpsc(const CommonFlags& f) {
  const ExperimentConfig cfg = Load(f);
  const PrivateGraph gp = cfg.BuildPrivateGraph();
  const PlannedTask t = PlanTask(cfg, f.force);
  Eigen::MatrixXd state = cfg.task.kind == "average"
                              ? Eigen::MatrixXd(cfg.task.data)
                              : Eigen::MatrixXd::Zero(gp.n(), 1);
  Stream stream(cfg.seed, 0, "ppsc");
  const PpscTranscript tr =
      RunPpsc(state, gp, PpscConfig(t.plan.steps, t.plan.sigma_gamma, 1), stream);
  std::ostringstream out;
  WriteTranscript(out, tr);
  Emit(cfg, out.str());
  return 0;
}

int CmdConsensus(const CommonFlags& f) {
  const ExperimentConfig cfg = Load(f);
  if (cfg.task.kind != "average") {
    throw Error(ErrorKind::kConfig, "config key 'task.kind': consensus needs 'average'");
  }
  const PublicGraph g = cfg.BuildPublicGraph();
  const PrivateGraph gp = cfg.BuildPrivateGraph();
  const PlannedTask t = PlanTask(cfg, f.force);
  const ConsensusSweep sweep = SweepConsensus(cfg.task.data, g, gp, t.plan, cfg.budget.nu,
                                              cfg.trials, cfg.seed, "consensus");
  std::string out = "s,stage,mse,std_err\n";
  for (std::size_t s = 0; s < sweep.mse_by_step.size(); ++s) {
    const char* stage = s == 0                                          ? "input"
                        : s <= static_cast<std::size_t>(t.plan.steps) ? "gossip"
                                                                        : "average";
    out += fmt::format("{},{},{},{}\n", s, stage, FormatNumber(sweep.mse_by_step[s].mean),
                       FormatNumber(sweep.mse_by_step[s].std_err));
  }
  Emit(cfg, out);
  return 0;
}

int CmdNle(const CommonFlags& f) {
  const ExperimentConfig cfg = Load(f);
  if (cfg.task.kind != "nle") {
    throw Error(ErrorKind::kConfig, "config key 'task.kind': nle needs 'nle'");
  }
  const PublicGraph g = cfg.BuildPublicGraph();
  const PrivateGraph gp = cfg.BuildPrivateGraph();
  const EquationSystem sys = cfg.BuildEquationSystem();
  const Eigen::VectorXd zeta0 = Zeta0(cfg, sys.m());
  const PlannedTask t = PlanTask(cfg, f.force);
  const Plan& plan = t.plan;

  const auto runs = MapTrials<SolverRun>(cfg.trials, Execution::kParallel, [&](std::int64_t k) {
    Stream stream(cfg.seed, static_cast<std::uint64_t>(k), "nle");
    if (sys.mode() == EquationSystem::Mode::kLeastSquares) {
      return RunNleLeastSquares(
          sys, g, gp, {plan.steps, plan.averaging, plan.recursions, plan.sigma_gamma},
          cfg.BuildStepsize(), zeta0, stream);
    }
    return RunNle(sys, g, gp, {plan.steps, plan.averaging, plan.recursions, plan.sigma_gamma},
                  zeta0, stream);
  });
  std::string out = "l,error,delta_l_norm,error_std_err\n";
  std::vector<double> err(runs.size()), dn(runs.size());
  for (int l = 0; l < plan.recursions; ++l) {
    for (std::size_t k = 0; k < runs.size(); ++k) {
      err[k] = runs[k].recursions[l].error;
      dn[k] = runs[k].recursions[l].delta_norm;
    }
    const TrialStats e = Summarize(err);
    out += fmt::format("{},{},{},{}\n", l + 1, FormatNumber(e.mean),
                       FormatNumber(Summarize(dn).mean), FormatNumber(e.std_err));
  }
  Emit(cfg, out);
  return 0;
}

int CmdDco(const CommonFlags& f) {
  const ExperimentConfig cfg = Load(f);
  const PublicGraph g = cfg.BuildPublicGraph();
  const PrivateGraph gp = cfg.BuildPrivateGraph();
  const StepsizeSchedule schedule = cfg.BuildStepsize();
  const PlannedTask t = PlanTask(cfg, f.force);
  const DcoPlan dp{t.plan.steps, t.plan.averaging, t.plan.recursions, t.plan.sigma_gamma};

  std::optional<DcoProblem> quad;
  std::optional<ClassificationData> data;
  std::optional<ObjectiveFamily> family;
  std::optional<ConvexSet> set;
  if (cfg.task.kind == "quadratic") {
    quad = QuadraticFromConfig(cfg);
    family = quad->family;
    set = quad->set;
  } else if (cfg.task.kind == "logistic") {
    data = LoadClassificationData(cfg);
    family = ObjectiveFamily::Logistic(SplitAmongAgents(data->train, g.n()), cfg.task.lambda);
    set = cfg.BuildSet(family->dim());
  } else {
    throw Error(ErrorKind::kConfig, "config key 'task.kind': dco needs 'quadratic' or 'logistic'");
  }
  const Eigen::VectorXd zeta0 = quad ? quad->zeta0 : set->Project(Zeta0(cfg, family->dim()));

  struct Row {
    double error, objective, auc;
  };
  const auto runs =
      MapTrials<std::vector<Row>>(cfg.trials, Execution::kParallel, [&](std::int64_t k) {
        Stream stream(cfg.seed, static_cast<std::uint64_t>(k), "dco");
        std::vector<Row> rows;
        DcoOptions opts;
        if (quad) opts.reference = quad->reference;
        opts.on_recursion = [&](int, const Eigen::MatrixXd& x) {
          rows.push_back({kNotMeasured, kNotMeasured,
                          data ? TestAuc(data->test, x.colwise().mean().transpose())
                               : kNotMeasured});
        };
        const SolverRun run = RunDco(*family, *set, g, gp, dp, schedule, zeta0, stream, opts);
        for (std::size_t l = 0; l < rows.size(); ++l) {
          rows[l].error = run.recursions[l].error;
          rows[l].objective = run.recursions[l].objective;
        }
        return rows;
      });
  std::string out = "l,error,objective,auc\n";
  std::vector<double> e(runs.size()), o(runs.size()), a(runs.size());
  for (int l = 0; l < dp.recursions; ++l) {
    for (std::size_t k = 0; k < runs.size(); ++k) {
      e[k] = runs[k][l].error;
      o[k] = runs[k][l].objective;
      a[k] = runs[k][l].auc;
    }
    out += fmt::format("{},{},{},{}\n", l + 1, FormatNumber(Summarize(e).mean),
                       FormatNumber(Summarize(o).mean), FormatNumber(Summarize(a).mean));
  }
  Emit(cfg, out);
  return 0;
}

int CmdAuditCovering(const CommonFlags& f) {
  const ExperimentConfig cfg = Load(f);
  const PrivateGraph gp = cfg.BuildPrivateGraph();
  const std::int64_t trials = f.trials.value_or(cfg.grid.covering_trials);
  std::string out = "S,empirical_p,analytic_lb,std_err\n";
  for (const auto& e : CoveringCurve(gp, cfg.grid.covering_max_steps, trials, cfg.seed)) {
    out += fmt::format("{},{},{},{}\n", e.steps, FormatNumber(e.empirical),
                       FormatNumber(e.analytic_lb), FormatNumber(e.std_err));
  }
  Emit(cfg, out);
  return 0;
}

int CmdAuditDp(const CommonFlags& f) {
  const ExperimentConfig cfg = Load(f);
  const PrivateGraph gp = cfg.BuildPrivateGraph();
  const PlannedTask t = PlanTask(cfg, f.force);
  const Plan& plan = t.plan;
  const double step_eps = cfg.budget.epsilon / plan.recursions;
  const double step_delta =
      plan.recursions > 1 ? DeltaSharp(cfg.budget.epsilon, cfg.budget.delta, plan.recursions)
                          : cfg.budget.delta;

  struct Trial {
    double min_sv;
    bool covered;
  };
  const auto runs = MapTrials<Trial>(cfg.trials, Execution::kParallel, [&](std::int64_t k) {
    Stream stream(cfg.seed, static_cast<std::uint64_t>(k), "audit dp");
    Eigen::MatrixXd state = Eigen::MatrixXd::Zero(gp.n(), 1);
    const PpscTranscript tr = RunPpsc(state, gp, PpscConfig(plan.steps, 0.0, 1), stream);
    return Trial{MinNonzeroSingularValue(TranscriptToMatrices(tr, gp).d), tr.AllTouched()};
  });
  ResultTable table;
  double worst_delta = 0.0, min_sv = std::numeric_limits<double>::infinity(), covered = 0.0;
  for (const auto& r : runs) {
    min_sv = std::min(min_sv, r.min_sv);
    covered += r.covered ? 1.0 : 0.0;
    if (r.min_sv > 0.0 && plan.sigma_gamma > 0.0) {
      worst_delta = std::max(
          worst_delta, DpDeltaBound(step_eps, plan.sigma_gamma, r.min_sv, cfg.budget.mu));
    }
  }
  const std::string p = Params({{"eps", step_eps}, {"S", plan.steps}});
  table.Add(p, "sigma_gamma", plan.sigma_gamma, kNotMeasured, t.flag);
  table.Add(p, "lambda_ppsc", plan.lambda_ppsc, kNotMeasured, t.flag);
  table.Add(p, "delta_target", step_delta, kNotMeasured, t.flag);
  if (plan.sigma_gamma > 0.0) {
    table.Add(p, "delta_at_lambda_ppsc",
              DpDeltaBound(step_eps, plan.sigma_gamma, plan.lambda_ppsc, cfg.budget.mu),
              kNotMeasured, t.flag);
  }
  table.Add(p, "transcript_min_singular_value", min_sv, kNotMeasured, t.flag);
  table.Add(p, "transcript_delta_max", worst_delta, kNotMeasured, t.flag);
  table.Add(p, "covered_fraction", covered / static_cast<double>(runs.size()), kNotMeasured,
            t.flag);
  Emit(cfg, table.ToCsv());
  return 0;
}

int CmdExperiment(const std::string& which, const CommonFlags& f) {
  const ExperimentConfig cfg = Load(f);
  ResultTable table = which == "avg"   ? ExperimentAvg(cfg, f.force)
                      : which == "nle" ? ExperimentNle(cfg, f.force)
                                       : ExperimentLogistic(cfg, f.force);
  Emit(cfg, table.ToCsv());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private gossip over public-private networks"};
  app.require_subcommand(1);

  CommonFlags flags;
  int (*handler)(const CommonFlags&) = nullptr;
  std::string experiment;

  auto* plan = app.add_subcommand("plan", "Print the planned S, T, L, sigma with provenance");
  AddCommon(plan, flags);
  plan->callback([&] { handler = CmdPlan; });

  auto* ppsc_cmd = app.add_subcommand("ppsc", "Run one PPSC stage and write its transcript");
  AddCommon(ppsc_cmd, flags);
  ppsc_cmd->callback([&] { handler = CmdPpsc; });

  auto* consensus = app.add_subcommand("consensus", "Averaging consensus; per-step MSE CSV");
  AddCommon(consensus, flags);
  consensus->callback([&] { handler = CmdConsensus; });

  auto* nle = app.add_subcommand("nle", "Network linear equations; per-recursion CSV");
  AddCommon(nle, flags);
  nle->callback([&] { handler = CmdNle; });

  auto* dco = app.add_subcommand("dco", "Distributed convex optimization; per-recursion CSV");
  AddCommon(dco, flags);
  dco->callback([&] { handler = CmdDco; });

  auto* audit = app.add_subcommand("audit", "Privacy audits");
  audit->require_subcommand(1);
  auto* covering = audit->add_subcommand("covering", "Covering probability curve");
  AddCommon(covering, flags);
  covering->callback([&] { handler = CmdAuditCovering; });
  auto* dp = audit->add_subcommand("dp", "Gaussian delta bound on simulated transcripts");
  AddCommon(dp, flags);
  dp->callback([&] { handler = CmdAuditDp; });

  auto* exp = app.add_subcommand("experiment", "Case-study reproductions");
  exp->require_subcommand(1);
  for (const char* name : {"avg", "nle", "logistic"}) {
    auto* sub = exp->add_subcommand(name, fmt::format("{} experiment", name));
    AddCommon(sub, flags);
    sub->callback([&, name] { experiment = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (!experiment.empty()) return CmdExperiment(experiment, flags);
    return handler(flags);
  } catch (const ppsc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

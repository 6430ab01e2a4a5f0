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

#include "ppsc/harness/config.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <utility>

#include <fmt/format.h>

#include "ppsc/errors.hpp"

namespace ppsc::harness {

namespace {

using nlohmann::json;

[[noreturn]] void Fail(const std::string& key, const std::string& msg,
                       ErrorKind kind = ErrorKind::kConfig) {
  throw Error(kind, fmt::format("config key '{}': {}", key, msg));
}

// Typed access to one JSON object that remembers which keys were read.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) Fail(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string Key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

  bool Has(const std::string& k) {
    seen_.insert(k);
    return j_.contains(k);
  }

  const json& At(const std::string& k) {
    seen_.insert(k);
    return j_.at(k);
  }

  std::optional<double> OptNum(const std::string& k) {
    if (!Has(k)) return std::nullopt;
    const json& v = j_.at(k);
    if (!v.is_number()) Fail(Key(k), "expected a number");
    return v.get<double>();
  }
  double Num(const std::string& k, double def) { return OptNum(k).value_or(def); }
  double ReqNum(const std::string& k) {
    if (!Has(k)) Fail(Key(k), "missing");
    return *OptNum(k);
  }

  std::optional<std::int64_t> OptInt(const std::string& k) {
    if (!Has(k)) return std::nullopt;
    const json& v = j_.at(k);
    if (!v.is_number_integer()) Fail(Key(k), "expected an integer");
    return v.get<std::int64_t>();
  }
  std::int64_t Int(const std::string& k, std::int64_t def) { return OptInt(k).value_or(def); }

  std::string Str(const std::string& k, const std::string& def) {
    if (!Has(k)) return def;
    const json& v = j_.at(k);
    if (!v.is_string()) Fail(Key(k), "expected a string");
    return v.get<std::string>();
  }

  bool Bool(const std::string& k, bool def) {
    if (!Has(k)) return def;
    const json& v = j_.at(k);
    if (!v.is_boolean()) Fail(Key(k), "expected true or false");
    return v.get<bool>();
  }

  std::optional<Eigen::VectorXd> OptVec(const std::string& k) {
    if (!Has(k)) return std::nullopt;
    return ToVec(j_.at(k), Key(k));
  }

  std::vector<double> Nums(const std::string& k) {
    if (!Has(k)) return {};
    const Eigen::VectorXd v = ToVec(j_.at(k), Key(k));
    return {v.data(), v.data() + v.size()};
  }

  std::vector<Edge> Edges(const std::string& k) {
    std::vector<Edge> out;
    if (!Has(k)) return out;
    const json& v = j_.at(k);
    if (!v.is_array()) Fail(Key(k), "expected a list of [u, v] pairs");
    for (std::size_t i = 0; i < v.size(); ++i) {
      const json& e = v[i];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
          !e[1].is_number_integer()) {
        Fail(fmt::format("{}[{}]", Key(k), i), "expected [u, v] with integer nodes");
      }
      out.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return out;
  }

  void Done() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) Fail(Key(k), "unknown key");
    }
  }

  static Eigen::VectorXd ToVec(const json& v, const std::string& key) {
    if (!v.is_array()) Fail(key, "expected a list of numbers");
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) Fail(fmt::format("{}[{}]", key, i), "expected a number");
      out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
    }
    return out;
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

int CheckedInt(std::int64_t v, const std::string& key, std::int64_t lo) {
  if (v < lo || v > std::numeric_limits<int>::max()) {
    Fail(key, fmt::format("must be an integer >= {}", lo));
  }
  return static_cast<int>(v);
}

void ParseBudget(Obj o, Budget& b) {
  b.mu = o.Num("mu", b.mu);
  b.epsilon = o.Num("epsilon", b.epsilon);
  b.delta = o.Num("delta", b.delta);
  b.rho = o.Num("rho", b.rho);
  b.nu = o.Num("nu", b.nu);
  b.p = o.Num("p", b.p);
  o.Done();
  if (!(b.epsilon > 0.0)) Fail(o.Key("epsilon"), "must be > 0", ErrorKind::kNonPositiveEpsilon);
  if (!(b.delta > 0.0 && b.delta < 0.5)) {
    Fail(o.Key("delta"), "must lie in (0, 1/2)", ErrorKind::kDeltaOutOfRange);
  }
  if (!(b.mu > 0.0)) Fail(o.Key("mu"), "must be > 0");
  if (!(b.rho > 0.0 && b.rho < 1.0)) Fail(o.Key("rho"), "must lie in (0, 1)");
  if (!(b.nu > 0.0)) Fail(o.Key("nu"), "must be > 0");
  if (!(b.p > 0.0 && b.p < 1.0)) Fail(o.Key("p"), "must lie in (0, 1)");
}

void ParseOverrides(Obj o, Overrides& ov) {
  if (auto v = o.OptInt("S")) ov.steps = CheckedInt(*v, o.Key("S"), 1);
  if (auto v = o.OptInt("T")) ov.averaging = CheckedInt(*v, o.Key("T"), 1);
  if (auto v = o.OptInt("L")) ov.recursions = CheckedInt(*v, o.Key("L"), 1);
  ov.sigma_gamma = o.OptNum("sigma_gamma");
  ov.epsilon0 = o.OptNum("epsilon0");
  ov.lambda_ppsc = o.OptNum("lambda_ppsc");
  o.Done();
  if (ov.sigma_gamma && *ov.sigma_gamma < 0.0) {
    Fail(o.Key("sigma_gamma"), "must be >= 0", ErrorKind::kNegativeSigma);
  }
  if (ov.epsilon0 && !(*ov.epsilon0 > 0.0 && *ov.epsilon0 < 1.0)) {
    Fail(o.Key("epsilon0"), "must lie in (0, 1)");
  }
  if (ov.lambda_ppsc && !(*ov.lambda_ppsc > 0.0)) {
    Fail(o.Key("lambda_ppsc"), "must be > 0", ErrorKind::kZeroLambdaPpsc);
  }
}

void ParseSet(Obj o, SetSpec& s) {
  s.shape = o.Str("shape", s.shape);
  if (auto c = o.OptVec("center")) s.center = *c;
  s.radius = o.Num("radius", s.radius);
  if (auto v = o.OptVec("lo")) s.lo = *v;
  if (auto v = o.OptVec("hi")) s.hi = *v;
  o.Done();
  if (s.shape != "ball" && s.shape != "box") Fail(o.Key("shape"), "expected 'ball' or 'box'");
  if (s.shape == "ball" && !(s.radius > 0.0)) Fail(o.Key("radius"), "must be > 0");
  if (s.shape == "box" && (s.lo.size() == 0 || s.lo.size() != s.hi.size())) {
    Fail(o.Key("lo"), "box needs lo and hi of equal length");
  }
}

void ParseStepsize(Obj o, StepsizeSpec& s) {
  s.rule = o.Str("rule", s.rule);
  s.scale = o.Num("scale", s.scale);
  s.exponent = o.Num("exponent", s.exponent);
  o.Done();
  if (s.rule != "harmonic" && s.rule != "power" && s.rule != "constant") {
    Fail(o.Key("rule"), "expected 'harmonic', 'power' or 'constant'");
  }
  if (!(s.scale > 0.0)) Fail(o.Key("scale"), "must be > 0");
  if (!(s.exponent > 0.0)) Fail(o.Key("exponent"), "must be > 0");
}

void ParseMnist(Obj o, MnistSpec& m) {
  m.train_images = o.Str("train_images", "");
  m.train_labels = o.Str("train_labels", "");
  m.test_images = o.Str("test_images", "");
  m.test_labels = o.Str("test_labels", "");
  if (o.Has("positive_digits")) {
    m.positive_digits.clear();
    for (double d : o.Nums("positive_digits")) {
      if (d != static_cast<int>(d) || d < 0 || d > 9) {
        Fail(o.Key("positive_digits"), "digits must be integers in 0..9");
      }
      m.positive_digits.push_back(static_cast<int>(d));
    }
  }
  m.train_limit = CheckedInt(o.Int("train_limit", m.train_limit), o.Key("train_limit"), 1);
  m.test_limit = CheckedInt(o.Int("test_limit", m.test_limit), o.Key("test_limit"), 1);
  o.Done();
  if (m.train_images.empty() || m.train_labels.empty() || m.test_images.empty() ||
      m.test_labels.empty()) {
    Fail(o.Key("train_images"), "mnist needs train/test image and label paths");
  }
}

void ParseTask(Obj o, TaskSpec& t) {
  t.kind = o.Str("kind", "");
  static const std::set<std::string> kKinds{"average", "nle", "quadratic", "logistic"};
  if (!kKinds.count(t.kind)) {
    Fail(o.Key("kind"), "expected 'average', 'nle', 'quadratic' or 'logistic'");
  }
  if (auto d = o.OptVec("data")) t.data = *d;
  t.system = o.Str("system", t.system);
  t.least_squares = o.Bool("least_squares", t.least_squares);
  t.zeta0 = o.OptVec("zeta0");
  if (o.Has("centers")) {
    const json& c = o.At("centers");
    if (!c.is_array()) Fail(o.Key("centers"), "expected a list of vectors");
    for (std::size_t i = 0; i < c.size(); ++i) {
      t.centers.push_back(Obj::ToVec(c[i], fmt::format("{}[{}]", o.Key("centers"), i)));
    }
  }
  t.dim = CheckedInt(o.Int("dim", t.dim), o.Key("dim"), 1);
  t.dataset = o.Str("dataset", t.dataset);
  t.samples = CheckedInt(o.Int("samples", t.samples), o.Key("samples"), 2);
  t.test_samples = CheckedInt(o.Int("test_samples", t.test_samples), o.Key("test_samples"), 2);
  t.features = CheckedInt(o.Int("features", t.features), o.Key("features"), 1);
  t.separation = o.Num("separation", t.separation);
  t.lambda = o.Num("lambda", t.lambda);
  t.csv_train = o.Str("csv_train", "");
  t.csv_test = o.Str("csv_test", "");
  if (o.Has("mnist")) ParseMnist(Obj(o.At("mnist"), o.Key("mnist")), t.mnist);
  if (o.Has("set")) ParseSet(Obj(o.At("set"), o.Key("set")), t.set);
  if (o.Has("stepsize")) ParseStepsize(Obj(o.At("stepsize"), o.Key("stepsize")), t.stepsize);
  o.Done();

  if (t.kind == "average" && t.data.size() == 0) Fail(o.Key("data"), "average task needs data");
  if (t.kind == "logistic") {
    if (t.dataset != "synthetic" && t.dataset != "csv" && t.dataset != "mnist") {
      Fail(o.Key("dataset"), "expected 'synthetic', 'csv' or 'mnist'");
    }
    if (t.dataset == "csv" && (t.csv_train.empty() || t.csv_test.empty())) {
      Fail(o.Key("csv_train"), "csv dataset needs csv_train and csv_test");
    }
    if (t.dataset == "mnist" && t.mnist.train_images.empty()) {
      Fail(o.Key("mnist"), "mnist dataset needs the mnist block");
    }
    if (!(t.lambda >= 0.0)) Fail(o.Key("lambda"), "must be >= 0");
  }
}

void ParseGrid(Obj o, GridSpec& g) {
  g.epsilons = o.Nums("epsilons");
  g.nus = o.Nums("nus");
  g.covering_max_steps =
      CheckedInt(o.Int("covering_max_steps", g.covering_max_steps), o.Key("covering_max_steps"), 1);
  g.covering_trials = o.Int("covering_trials", g.covering_trials);
  if (g.covering_trials < 1) Fail(o.Key("covering_trials"), "must be >= 1");
  g.curve_trials = CheckedInt(o.Int("curve_trials", g.curve_trials), o.Key("curve_trials"), 1);
  g.max_doublings = CheckedInt(o.Int("max_doublings", g.max_doublings), o.Key("max_doublings"), 0);
  o.Done();
  for (double e : g.epsilons) {
    if (!(e > 0.0)) Fail(o.Key("epsilons"), "must be > 0", ErrorKind::kNonPositiveEpsilon);
  }
  for (double v : g.nus) {
    if (!(v > 0.0)) Fail(o.Key("nus"), "must be > 0");
  }
}

}  // namespace

ExperimentConfig ParseConfig(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  cfg.base_dir = base_dir;
  Obj root(doc, "");

  if (!root.Has("public_graph")) Fail("public_graph", "missing");
  {
    Obj o(root.At("public_graph"), "public_graph");
    auto& pg = cfg.public_graph;
    pg.n = CheckedInt(o.Int("n", 0), o.Key("n"), 1);
    pg.topology = o.Str("topology", "");
    pg.edges = o.Edges("edges");
    pg.weight = o.ReqNum("weight");
    o.Done();
    if (!pg.topology.empty() && pg.topology != "cycle") {
      Fail(o.Key("topology"), "only 'cycle' is built in; list edges otherwise");
    }
    if (pg.topology.empty() == pg.edges.empty() && pg.n > 1) {
      Fail(o.Key("edges"), "give exactly one of 'topology' or 'edges'");
    }
  }
  if (!root.Has("private_graph")) Fail("private_graph", "missing");
  {
    Obj o(root.At("private_graph"), "private_graph");
    cfg.private_graph.n = CheckedInt(o.Int("n", cfg.public_graph.n), o.Key("n"), 1);
    cfg.private_graph.edges = o.Edges("edges");
    o.Done();
    if (cfg.private_graph.n != cfg.public_graph.n) {
      Fail(o.Key("n"), "private and public graphs must have the same node count",
           ErrorKind::kDimensionMismatch);
    }
  }
  if (root.Has("budget")) ParseBudget(Obj(root.At("budget"), "budget"), cfg.budget);
  if (root.Has("overrides")) ParseOverrides(Obj(root.At("overrides"), "overrides"), cfg.overrides);
  if (!root.Has("task")) Fail("task", "missing");
  ParseTask(Obj(root.At("task"), "task"), cfg.task);
  if (root.Has("experiment")) ParseGrid(Obj(root.At("experiment"), "experiment"), cfg.grid);

  if (auto s = root.OptInt("seed")) {
    if (*s < 0) Fail("seed", "must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(*s);
  }
  cfg.trials = root.Int("trials", cfg.trials);
  if (cfg.trials < 1) Fail("trials", "must be >= 1");
  cfg.out = root.Str("out", "");
  root.Done();

  if (cfg.task.kind == "average" && cfg.task.data.size() != cfg.public_graph.n) {
    Fail("task.data", fmt::format("has {} entries for {} nodes", cfg.task.data.size(),
                                  cfg.public_graph.n),
         ErrorKind::kDimensionMismatch);
  }
  if (cfg.task.kind == "quadratic" && !cfg.task.centers.empty() &&
      static_cast<int>(cfg.task.centers.size()) != cfg.public_graph.n) {
    Fail("task.centers", "needs one center per node", ErrorKind::kDimensionMismatch);
  }
  return cfg;
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfig, "cannot open config file " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kConfig, "config file " + path + " is not valid JSON: " + e.what());
  }
  return ParseConfig(doc, std::filesystem::path(path).parent_path());
}

std::string ExperimentConfig::Resolve(const std::string& path) const {
  const std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return p.string();
  return (base_dir / p).string();
}

PublicGraph ExperimentConfig::BuildPublicGraph() const {
  if (public_graph.topology == "cycle") {
    return PublicGraph::Cycle(public_graph.n, public_graph.weight);
  }
  return PublicGraph::Build(public_graph.n, public_graph.edges, public_graph.weight);
}

PrivateGraph ExperimentConfig::BuildPrivateGraph() const {
  return PrivateGraph::Build(private_graph.n, private_graph.edges);
}

EquationSystem ExperimentConfig::BuildEquationSystem() const {
  const auto mode =
      task.least_squares ? EquationSystem::Mode::kLeastSquares : EquationSystem::Mode::kExact;
  if (task.system == "benchmark") {
    return EquationSystem(BenchmarkSystem().equations(), mode);
  }
  return EquationSystem::Load(Resolve(task.system), mode);
}

ConvexSet ExperimentConfig::BuildSet(Eigen::Index dim) const {
  if (task.set.shape == "box") {
    if (task.set.lo.size() != dim) {
      throw Error(ErrorKind::kDimensionMismatch, "config key 'task.set.lo': wrong dimension");
    }
    return ConvexSet::MakeBox(task.set.lo, task.set.hi);
  }
  Eigen::VectorXd center = task.set.center.size() ? task.set.center : Eigen::VectorXd::Zero(dim);
  if (center.size() != dim) {
    throw Error(ErrorKind::kDimensionMismatch, "config key 'task.set.center': wrong dimension");
  }
  return ConvexSet::MakeBall(std::move(center), task.set.radius);
}

StepsizeSchedule ExperimentConfig::BuildStepsize() const {
  const auto& s = task.stepsize;
  if (s.rule == "constant") return StepsizeSchedule::Constant(s.scale);
  if (s.rule == "power") return StepsizeSchedule::PowerLaw(s.scale, s.exponent);
  return StepsizeSchedule::Harmonic(s.scale);
}

PlannerOptions ExperimentConfig::BuildPlannerOptions() const {
  PlannerOptions opts;
  if (overrides.epsilon0) opts.epsilon0 = *overrides.epsilon0;
  opts.lambda_ppsc = overrides.lambda_ppsc;
  opts.seed = seed;
  return opts;
}

std::string ApplyOverrides(Plan& plan, const Overrides& ov, bool force) {
  std::string flag;
  auto apply = [&](const char* name, auto value, auto& field, const char* bound_name) {
    if (value == field) return;
    if (value < field) {
      if (!force) {
        throw Error(ErrorKind::kBoundViolation,
                    fmt::format("override {}={} is below the planner bound {} >= {}", name,
                                value, bound_name, field));
      }
      flag = "forced";
    }
    field = value;
    plan.Note(name, static_cast<double>(value), "override");
  };
  if (ov.steps) apply("S", *ov.steps, plan.steps, "S");
  if (ov.averaging) apply("T", *ov.averaging, plan.averaging, "T");
  if (ov.recursions) apply("L", *ov.recursions, plan.recursions, "L");
  if (ov.sigma_gamma) apply("sigma_gamma", *ov.sigma_gamma, plan.sigma_gamma, "sigma_gamma");
  return flag;
}

}  // namespace ppsc::harness

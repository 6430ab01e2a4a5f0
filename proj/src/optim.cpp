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

#include "ppsc/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ppsc/consensus.hpp"
#include "ppsc/errors.hpp"

namespace ppsc {

ConvexSet ConvexSet::UnitBall(Eigen::Index m) {
  return MakeBall(Eigen::VectorXd::Zero(m), 1.0);
}

ConvexSet ConvexSet::MakeBall(Eigen::VectorXd center, double radius) {
  if (center.size() == 0 || !(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorKind::kInvalidArgument, "ball needs a center and a finite radius > 0");
  }
  return ConvexSet(Ball{std::move(center), radius});
}

ConvexSet ConvexSet::MakeBox(Eigen::VectorXd lo, Eigen::VectorXd hi) {
  if (lo.size() == 0 || lo.size() != hi.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "box bounds must have equal nonzero size");
  }
  if ((lo.array() > hi.array()).any() || !lo.allFinite() || !hi.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "box needs finite lo <= hi");
  }
  return ConvexSet(Box{std::move(lo), std::move(hi)});
}

Eigen::Index ConvexSet::dim() const {
  if (const auto* b = std::get_if<Ball>(&shape_)) return b->center.size();
  return std::get<Box>(shape_).lo.size();
}

Eigen::VectorXd ConvexSet::Project(const Eigen::VectorXd& y) const {
  if (y.size() != dim()) {
    throw Error(ErrorKind::kDimensionMismatch, "projection input has the wrong dimension");
  }
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    const Eigen::VectorXd off = y - b->center;
    const double r = off.norm();
    if (r <= b->radius) return y;
    return b->center + off * (b->radius / r);
  }
  const auto& box = std::get<Box>(shape_);
  return y.cwiseMax(box.lo).cwiseMin(box.hi);
}

bool ConvexSet::Contains(const Eigen::VectorXd& y, double tol) const {
  if (y.size() != dim()) return false;
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    return (y - b->center).norm() <= b->radius + tol;
  }
  const auto& box = std::get<Box>(shape_);
  return ((y.array() >= box.lo.array() - tol) && (y.array() <= box.hi.array() + tol)).all();
}

double ConvexSet::MaxNorm() const {
  if (const auto* b = std::get_if<Ball>(&shape_)) return b->center.norm() + b->radius;
  const auto& box = std::get<Box>(shape_);
  return box.lo.cwiseAbs().cwiseMax(box.hi.cwiseAbs()).norm();
}

StepsizeSchedule StepsizeSchedule::Harmonic(double scale) { return PowerLaw(scale, 1.0); }

StepsizeSchedule StepsizeSchedule::PowerLaw(double scale, double exponent) {
  if (!(scale > 0.0) || !(exponent > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "step size scale and exponent must be > 0");
  }
  return StepsizeSchedule(scale, exponent);
}

StepsizeSchedule StepsizeSchedule::Constant(double value) {
  if (!(value > 0.0)) throw Error(ErrorKind::kInvalidArgument, "step size must be > 0");
  return StepsizeSchedule(value, 0.0);
}

double StepsizeSchedule::At(int l) const {
  if (l < 0) throw Error(ErrorKind::kInvalidArgument, "negative recursion index");
  if (exponent_ == 0.0) return scale_;
  if (exponent_ == 1.0) return scale_ / (l + 1.0);
  return scale_ / std::pow(l + 1.0, exponent_);
}

bool StepsizeSchedule::SatisfiesConditions() const {
  return exponent_ > 0.5 && exponent_ <= 1.0;
}

namespace {

double Softplus(double u) { return std::max(u, 0.0) + std::log1p(std::exp(-std::abs(u))); }

double Sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

}  // namespace

ObjectiveFamily::ObjectiveFamily(std::vector<Term> terms, Eigen::Index dim, double lambda,
                                 double parameter_radius)
    : terms_(std::move(terms)), dim_(dim), lambda_(lambda), parameter_radius_(parameter_radius) {}

ObjectiveFamily ObjectiveFamily::Quadratic(std::vector<Eigen::VectorXd> centers,
                                           std::optional<double> parameter_radius) {
  if (centers.empty()) throw Error(ErrorKind::kInvalidArgument, "no agents");
  const Eigen::Index m = centers.front().size();
  double largest = 0.0;
  std::vector<Term> terms;
  for (auto& c : centers) {
    if (c.size() != m || m == 0) {
      throw Error(ErrorKind::kDimensionMismatch, "quadratic centers differ in dimension");
    }
    largest = std::max(largest, c.norm());
    terms.emplace_back(QuadraticTerm{std::move(c)});
  }
  const double radius = parameter_radius.value_or(largest);
  if (radius < largest) {
    throw Error(ErrorKind::kInvalidArgument, "parameter radius smaller than a present center");
  }
  return ObjectiveFamily(std::move(terms), m, 0.0, radius);
}

ObjectiveFamily ObjectiveFamily::Linear(std::vector<Eigen::VectorXd> coefficients) {
  if (coefficients.empty()) throw Error(ErrorKind::kInvalidArgument, "no agents");
  const Eigen::Index m = coefficients.front().size();
  double largest = 0.0;
  std::vector<Term> terms;
  for (auto& c : coefficients) {
    if (c.size() != m || m == 0) {
      throw Error(ErrorKind::kDimensionMismatch, "linear coefficients differ in dimension");
    }
    largest = std::max(largest, c.norm());
    terms.emplace_back(LinearTerm{std::move(c)});
  }
  return ObjectiveFamily(std::move(terms), m, 0.0, largest);
}

ObjectiveFamily ObjectiveFamily::Logistic(std::vector<LogisticTerm> agents, double lambda) {
  if (agents.empty()) throw Error(ErrorKind::kInvalidArgument, "no agents");
  if (!(lambda >= 0.0)) throw Error(ErrorKind::kInvalidArgument, "ridge weight must be >= 0");
  const Eigen::Index m = agents.front().features.cols();
  std::vector<Term> terms;
  for (auto& a : agents) {
    if (a.features.cols() != m || m == 0 || a.features.rows() != a.labels.size()) {
      throw Error(ErrorKind::kDimensionMismatch, "logistic samples have inconsistent shape");
    }
    if (((a.labels.array() != 0.0) && (a.labels.array() != 1.0)).any()) {
      throw Error(ErrorKind::kDegenerateLabels, "logistic labels must be 0 or 1");
    }
    terms.emplace_back(std::move(a));
  }
  return ObjectiveFamily(std::move(terms), m, lambda, 0.0);
}

double ObjectiveFamily::Value(int i, const Eigen::VectorXd& y) const {
  const double ridge = lambda_ / (2.0 * n());
  return std::visit(
      Overloaded{
          [&](const QuadraticTerm& t) { return (y - t.center).squaredNorm(); },
          [&](const LinearTerm& t) { return t.c.dot(y); },
          [&](const LogisticTerm& t) {
            const Eigen::VectorXd u = t.features * y;
            double v = ridge * y.squaredNorm();
            for (Eigen::Index j = 0; j < u.size(); ++j) v += Softplus(u[j]) - t.labels[j] * u[j];
            return v;
          },
      },
      terms_.at(i));
}

Eigen::VectorXd ObjectiveFamily::Gradient(int i, const Eigen::VectorXd& y) const {
  const double ridge = lambda_ / n();
  return std::visit(
      Overloaded{
          [&](const QuadraticTerm& t) -> Eigen::VectorXd { return 2.0 * (y - t.center); },
          [&](const LinearTerm& t) -> Eigen::VectorXd { return t.c; },
          [&](const LogisticTerm& t) -> Eigen::VectorXd {
            Eigen::VectorXd r = t.features * y;
            for (Eigen::Index j = 0; j < r.size(); ++j) r[j] = Sigmoid(r[j]) - t.labels[j];
            return t.features.transpose() * r + ridge * y;
          },
      },
      terms_.at(i));
}

double ObjectiveFamily::TotalValue(const Eigen::VectorXd& y) const {
  double v = 0.0;
  for (int i = 0; i < n(); ++i) v += Value(i, y);
  return v;
}

Eigen::VectorXd ObjectiveFamily::TotalGradient(const Eigen::VectorXd& y) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim_);
  for (int i = 0; i < n(); ++i) g += Gradient(i, y);
  return g;
}

Eigen::VectorXd ObjectiveFamily::Parameters(int i) const {
  return std::visit(
      Overloaded{
          [](const QuadraticTerm& t) -> Eigen::VectorXd { return t.center; },
          [](const LinearTerm& t) -> Eigen::VectorXd { return t.c; },
          [](const LogisticTerm& t) -> Eigen::VectorXd {
            const Eigen::Index rows = t.features.rows();
            const Eigen::Index cols = t.features.cols();
            Eigen::VectorXd out(rows * cols + rows);
            out.head(rows * cols) = Eigen::Map<const Eigen::VectorXd>(t.features.data(), rows * cols);
            out.tail(rows) = t.labels;
            return out;
          },
      },
      terms_.at(i));
}

bool MuAdjacentObjectives(const ObjectiveFamily& a, const ObjectiveFamily& b, double mu) {
  if (a.n() != b.n() || a.dim() != b.dim()) {
    throw Error(ErrorKind::kStructureMismatch, "families differ in agent count or dimension");
  }
  bool adjacent = true;
  for (int i = 0; i < a.n(); ++i) {
    if (a.terms()[i].index() != b.terms()[i].index()) {
      throw Error(ErrorKind::kStructureMismatch, "agent " + std::to_string(i) +
                                                     " uses a different objective form");
    }
    const Eigen::VectorXd pa = a.Parameters(i);
    const Eigen::VectorXd pb = b.Parameters(i);
    if (pa.size() != pb.size()) {
      throw Error(ErrorKind::kStructureMismatch,
                  "agent " + std::to_string(i) + " parameters differ in shape");
    }
    if ((pa - pb).norm() > mu) adjacent = false;
  }
  if (a.lambda() != b.lambda()) {
    throw Error(ErrorKind::kStructureMismatch, "families differ in the public ridge weight");
  }
  return adjacent;
}

double GDagger(const ObjectiveFamily& family, const ConvexSet& set, double nu) {
  if (!(nu > 0.0)) throw Error(ErrorKind::kInvalidArgument, "nu must be > 0");
  const double max_norm = set.MaxNorm();
  const double reach = std::sqrt(max_norm * max_norm + nu);
  double bound = 0.0;
  for (const auto& term : family.terms()) {
    const double b = std::visit(
        Overloaded{
            [&](const QuadraticTerm&) { return 2.0 * (reach + family.parameter_radius()); },
            [&](const LinearTerm&) { return family.parameter_radius(); },
            [&](const LogisticTerm& t) {
              return t.features.rowwise().norm().sum() + family.lambda() / family.n() * reach;
            },
        },
        term);
    bound = std::max(bound, b);
  }
  if (!std::isfinite(bound)) {
    throw Error(ErrorKind::kUnboundedGradient, "gradient bound is not finite");
  }
  return bound;
}

namespace {

void CheckPlan(const DcoPlan& plan) {
  if (plan.steps < 1 || plan.averaging < 1 || plan.recursions < 1) {
    throw Error(ErrorKind::kInvalidArgument, "plan needs S, T, L >= 1");
  }
  if (plan.sigma_gamma < 0.0) throw Error(ErrorKind::kNegativeSigma, "sigma_gamma < 0");
}

}  // namespace

SolverRun RunDco(const ObjectiveFamily& family, const ConvexSet& set,
                 const PublicGraph& g, const PrivateGraph& gp, const DcoPlan& plan,
                 const StepsizeSchedule& schedule, const Eigen::VectorXd& zeta0,
                 Stream& stream, const DcoOptions& options) {
  CheckPlan(plan);
  if (family.n() != g.n() || gp.n() != g.n()) {
    throw Error(ErrorKind::kDimensionMismatch, "objectives, G and G_p must share n");
  }
  if (zeta0.size() != family.dim() || set.dim() != family.dim()) {
    throw Error(ErrorKind::kDimensionMismatch, "zeta0, set and objectives differ in dimension");
  }
  if (!set.Contains(zeta0)) {
    throw Error(ErrorKind::kInfeasibleStart, "zeta0 lies outside the feasible set");
  }
  const int n = family.n();
  Eigen::MatrixXd x(n, family.dim());
  const double alpha0 = schedule.At(0);
  for (int i = 0; i < n; ++i) {
    x.row(i) = set.Project(zeta0 - alpha0 * family.Gradient(i, zeta0)).transpose();
  }

  SolverRun run;
  run.recursions.reserve(plan.recursions);
  for (int l = 1; l <= plan.recursions; ++l) {
    const Eigen::RowVectorXd phi_mean = x.colwise().mean();
    const PpscTranscript tr =
        GossipThenAverage(x, g, gp, plan.steps, plan.averaging, plan.sigma_gamma, stream);
    RecursionRecord rec;
    rec.l = l;
    rec.delta_norm = std::sqrt(DistanceToBroadcastSq(x, phi_mean));
    rec.covered = tr.AllTouched();
    const double alpha = schedule.At(l);
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd xi = x.row(i).transpose();
      x.row(i) = set.Project(xi - alpha * family.Gradient(i, xi)).transpose();
    }
    rec.mean_state = x.colwise().mean().transpose();
    rec.objective = family.TotalValue(rec.mean_state);
    if (options.reference) rec.error = DistanceToBroadcastSq(x, options.reference->transpose());
    if (options.on_recursion) options.on_recursion(l, x);
    run.recursions.push_back(std::move(rec));
  }
  run.final_state = x;
  run.final_error = run.recursions.back().error;
  return run;
}

Eigen::VectorXd NormalizedLeastSquares(const EquationSystem& sys) {
  Eigen::MatrixXd h = sys.h();
  Eigen::VectorXd z = sys.z();
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    const double norm = h.row(i).norm();
    h.row(i) /= norm;
    z[i] /= norm;
  }
  return h.colPivHouseholderQr().solve(z);
}

SolverRun RunNleLeastSquares(const EquationSystem& sys, const PublicGraph& g,
                             const PrivateGraph& gp, const DcoPlan& plan,
                             const StepsizeSchedule& schedule,
                             const Eigen::VectorXd& zeta0, Stream& stream) {
  CheckPlan(plan);
  if (sys.n() != g.n() || gp.n() != g.n()) {
    throw Error(ErrorKind::kDimensionMismatch, "system, G and G_p must share n");
  }
  if (zeta0.size() != sys.m()) {
    throw Error(ErrorKind::kDimensionMismatch, "zeta0 has the wrong dimension");
  }
  const int n = sys.n();
  const Eigen::RowVectorXd target =
      (sys.mode() == EquationSystem::Mode::kExact ? sys.y_star() : NormalizedLeastSquares(sys))
          .transpose();
  Eigen::MatrixXd x(n, sys.m());
  for (int k = 0; k < n; ++k) x.row(k) = sys.equations()[k].Project(zeta0).transpose();

  SolverRun run;
  run.recursions.reserve(plan.recursions);
  for (int l = 0; l < plan.recursions; ++l) {
    const Eigen::RowVectorXd phi_mean = x.colwise().mean();
    const PpscTranscript tr =
        GossipThenAverage(x, g, gp, plan.steps, plan.averaging, plan.sigma_gamma, stream);
    RecursionRecord rec;
    rec.l = l;
    rec.delta_norm = std::sqrt(DistanceToBroadcastSq(x, phi_mean));
    rec.covered = tr.AllTouched();
    const double alpha = schedule.At(l);
    for (int k = 0; k < n; ++k) {
      const Eigen::VectorXd xk = x.row(k).transpose();
      const Eigen::VectorXd pk = sys.equations()[k].Project(xk);
      x.row(k) = (alpha == 1.0 ? pk : Eigen::VectorXd(xk + alpha * (pk - xk))).transpose();
    }
    rec.error = DistanceToBroadcastSq(x, target);
    rec.mean_state = x.colwise().mean().transpose();
    run.recursions.push_back(std::move(rec));
  }
  run.final_state = x;
  run.final_error = run.recursions.back().error;
  return run;
}

Eigen::VectorXd CentralizedProjectedGradient(const ObjectiveFamily& family,
                                             const ConvexSet& set,
                                             const Eigen::VectorXd& start,
                                             int iterations, double step) {
  if (!(step > 0.0) || iterations < 0) {
    throw Error(ErrorKind::kInvalidArgument, "need step > 0 and iterations >= 0");
  }
  Eigen::VectorXd y = set.Project(start);
  for (int it = 0; it < iterations; ++it) y = set.Project(y - step * family.TotalGradient(y));
  return y;
}

double Auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorKind::kDimensionMismatch, "scores and labels differ in length");
  }
  std::size_t pos = 0;
  for (int b : labels) {
    if (b != 0 && b != 1) throw Error(ErrorKind::kDegenerateLabels, "labels must be 0 or 1");
    pos += static_cast<std::size_t>(b);
  }
  const std::size_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0) {
    throw Error(ErrorKind::kDegenerateLabels, "AUC needs both classes present");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Average ranks over ties, then Mann-Whitney U.
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]] == 1) rank_sum += avg_rank;
    }
    i = j + 1;
  }
  const double p = static_cast<double>(pos);
  const double u = rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(neg));
}

}  // namespace ppsc

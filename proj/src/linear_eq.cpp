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

#include "ppsc/linear_eq.hpp"

#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "ppsc/consensus.hpp"
#include "ppsc/errors.hpp"

namespace ppsc {

AffineEquation::AffineEquation(Eigen::VectorXd h, double z)
    : h_(std::move(h)), z_(z), h_norm_sq_(h_.squaredNorm()) {
  if (h_.size() == 0 || !(h_norm_sq_ > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "equation normal vector must be nonzero");
  }
}

Eigen::MatrixXd AffineEquation::NormalProjector() const {
  return h_ * h_.transpose() / h_norm_sq_;
}

Eigen::MatrixXd AffineEquation::Projector() const {
  return Eigen::MatrixXd::Identity(dim(), dim()) - NormalProjector();
}

Eigen::VectorXd AffineEquation::Translation() const { return z_ * h_ / h_norm_sq_; }

Eigen::VectorXd AffineEquation::Project(const Eigen::VectorXd& x) const {
  return x - ((h_.dot(x) - z_) / h_norm_sq_) * h_;
}

double RotationalDistance(const AffineEquation& a, const AffineEquation& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::kDimensionMismatch, "equations live in different dimensions");
  }
  const Eigen::MatrixXd diff = a.NormalProjector() - b.NormalProjector();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(diff, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

double TranslationalDistance(const AffineEquation& a, const AffineEquation& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::kDimensionMismatch, "equations live in different dimensions");
  }
  return (a.Translation() - b.Translation()).norm();
}

bool MuAdjacent(const EquationSystem& a, const EquationSystem& b, double mu) {
  if (a.n() != b.n() || a.m() != b.m()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "systems differ in agent count or unknown dimension");
  }
  for (int i = 0; i < a.n(); ++i) {
    const auto& ea = a.equations()[i];
    const auto& eb = b.equations()[i];
    if (RotationalDistance(ea, eb) + TranslationalDistance(ea, eb) > mu) return false;
  }
  return true;
}

namespace {

Eigen::MatrixXd Stack(const std::vector<AffineEquation>& eqs) {
  if (eqs.empty()) throw Error(ErrorKind::kInvalidArgument, "no equations");
  const Eigen::Index m = eqs.front().dim();
  Eigen::MatrixXd h(static_cast<Eigen::Index>(eqs.size()), m);
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    if (eqs[i].dim() != m) {
      throw Error(ErrorKind::kDimensionMismatch, "equations have different dimensions");
    }
    h.row(static_cast<Eigen::Index>(i)) = eqs[i].h().transpose();
  }
  return h;
}

void RequireFullColumnRank(const Eigen::MatrixXd& h) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(h);
  if (qr.rank() < h.cols()) {
    throw Error(ErrorKind::kRankDeficient,
                "rank(H) = " + std::to_string(qr.rank()) + " < m = " +
                    std::to_string(h.cols()));
  }
}

}  // namespace

double LambdaH(const std::vector<AffineEquation>& equations) {
  const Eigen::MatrixXd h = Stack(equations);
  RequireFullColumnRank(h);
  const Eigen::Index m = h.cols();
  Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(m, m);
  for (const auto& eq : equations) avg += eq.NormalProjector();
  avg /= static_cast<double>(equations.size());
  const Eigen::MatrixXd op = Eigen::MatrixXd::Identity(m, m) - avg;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(op, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

EquationSystem::EquationSystem(std::vector<AffineEquation> equations, Mode mode)
    : equations_(std::move(equations)), mode_(mode) {
  h_ = Stack(equations_);
  RequireFullColumnRank(h_);
  z_.resize(n());
  for (int i = 0; i < n(); ++i) z_[i] = equations_[i].z();
  y_star_ = h_.colPivHouseholderQr().solve(z_);
  if (mode == Mode::kExact) {
    const double residual = (h_ * y_star_ - z_).norm();
    if (residual > 1e-8 * z_.norm() + 1e-12) {
      throw Error(ErrorKind::kInconsistent,
                  "z is not in span(H): residual " + std::to_string(residual));
    }
  }
  lambda_h_ = LambdaH(equations_);
}

EquationSystem EquationSystem::Parse(std::istream& in, Mode mode) {
  std::vector<AffineEquation> eqs;
  std::string line;
  int line_no = 0;
  Eigen::Index width = -1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<double> values;
    for (double v; ls >> v;) values.push_back(v);
    if (!ls.eof()) {
      throw Error(ErrorKind::kConfig,
                  "equation file line " + std::to_string(line_no) + ": not a number");
    }
    if (values.empty()) continue;
    if (values.size() < 2) {
      throw Error(ErrorKind::kConfig, "equation file line " + std::to_string(line_no) +
                                          ": need m coefficients and z");
    }
    const auto w = static_cast<Eigen::Index>(values.size());
    if (width >= 0 && w != width) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "equation file line " + std::to_string(line_no) + " has " +
                      std::to_string(w) + " values, expected " + std::to_string(width));
    }
    width = w;
    Eigen::VectorXd h = Eigen::Map<Eigen::VectorXd>(values.data(), w - 1);
    eqs.emplace_back(std::move(h), values.back());
  }
  return EquationSystem(std::move(eqs), mode);
}

EquationSystem EquationSystem::Load(const std::string& path, Mode mode) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfig, "cannot open equation file " + path);
  return Parse(in, mode);
}

Eigen::MatrixXd EquationSystem::BlockProjector() const {
  const Eigen::Index m = this->m();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n() * m, n() * m);
  for (int i = 0; i < n(); ++i) {
    out.block(i * m, i * m, m, m) = equations_[i].NormalProjector();
  }
  return out;
}

Eigen::VectorXd EquationSystem::BlockOffset() const {
  const Eigen::Index m = this->m();
  Eigen::VectorXd out(n() * m);
  for (int i = 0; i < n(); ++i) out.segment(i * m, m) = equations_[i].Translation();
  return out;
}

EquationSystem BenchmarkSystem() {
  const double rows[10][7] = {
      {1, 2, 0, 0, 0, 0, -15}, {1, 1, 1, 0, 0, 0, 5},   {0, 1, 1, 0, 0, 3, 15},
      {0, -1, 1, 2, 5, -2, 5}, {5, -2, 0, 2, 0, 1, 40}, {2, 0, 1, 0, 2, 1, 27},
      {1, 1, 1, 2, 0, 1, 0},   {3, 1, 5, 6, 8, -2, 23}, {0, -2, 0, 1, 5, 0, 20},
      {0, 0, 0, 0, 2, -1, -3},
  };
  std::vector<AffineEquation> eqs;
  for (const auto& r : rows) {
    Eigen::VectorXd h(6);
    for (int j = 0; j < 6; ++j) h[j] = r[j];
    eqs.emplace_back(std::move(h), r[6]);
  }
  return EquationSystem(std::move(eqs));
}

SolverRun RunNle(const EquationSystem& sys, const PublicGraph& g,
                 const PrivateGraph& gp, const NlePlan& plan,
                 const Eigen::VectorXd& zeta0, Stream& stream) {
  if (plan.steps < 1 || plan.averaging < 1 || plan.recursions < 1) {
    throw Error(ErrorKind::kInvalidArgument, "NLE plan needs S, T, L >= 1");
  }
  if (sys.n() != g.n() || gp.n() != g.n()) {
    throw Error(ErrorKind::kDimensionMismatch, "system, G and G_p must share n");
  }
  if (zeta0.size() != sys.m()) {
    throw Error(ErrorKind::kDimensionMismatch, "zeta0 has the wrong dimension");
  }
  const int n = sys.n();
  const Eigen::RowVectorXd y_star = sys.y_star().transpose();
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
    for (int k = 0; k < n; ++k) {
      x.row(k) = sys.equations()[k].Project(x.row(k).transpose()).transpose();
    }
    rec.error = DistanceToBroadcastSq(x, y_star);
    rec.mean_state = x.colwise().mean().transpose();
    run.recursions.push_back(std::move(rec));
  }
  run.final_state = x;
  run.final_error = run.recursions.back().error;
  return run;
}

}  // namespace ppsc

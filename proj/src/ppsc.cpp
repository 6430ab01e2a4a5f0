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

#include "ppsc/ppsc.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "ppsc/errors.hpp"

namespace ppsc {

PpscConfig::PpscConfig(int steps, double sigma_gamma, int dim)
    : steps_(steps), sigma_gamma_(sigma_gamma), dim_(dim) {
  if (steps < 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "PPSC steps S must be >= 1, got " + std::to_string(steps));
  }
  if (!(sigma_gamma >= 0.0)) {
    throw Error(ErrorKind::kNegativeSigma,
                "sigma_gamma must be >= 0, got " + std::to_string(sigma_gamma));
  }
  if (dim < 1) {
    throw Error(ErrorKind::kInvalidArgument, "state dimension must be >= 1");
  }
}

bool PpscTranscript::AllTouched() const {
  return std::all_of(touched.begin(), touched.end(), [](bool b) { return b; });
}

std::vector<std::pair<int, int>> SelectGossipPairs(const PrivateGraph& gp,
                                                   Stream& stream) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(gp.q());
  for (const auto& comp : gp.components()) {
    if (comp.size() < 2) continue;
    const int sender = comp[stream.UniformIndex(comp.size())];
    const auto& nb = gp.neighbors()[sender];
    const int receiver = nb[stream.UniformIndex(nb.size())];
    pairs.emplace_back(sender, receiver);
  }
  return pairs;
}

std::vector<GossipRecord> PpscStep(Eigen::MatrixXd& state, const PrivateGraph& gp,
                                   double sigma, Stream& stream, int step_index) {
  const Eigen::Index m = state.cols();
  std::vector<GossipRecord> records;
  records.reserve(gp.q());
  for (const auto& [sender, receiver] : SelectGossipPairs(gp, stream)) {
    GossipRecord rec;
    rec.step = step_index;
    rec.component = gp.component_of(sender);
    rec.sender = sender;
    rec.receiver = receiver;
    rec.noise = stream.Gaussian(m, sigma);
    rec.message = state.row(sender).transpose() - rec.noise;
    state.row(sender) = rec.noise.transpose();
    state.row(receiver) += rec.message.transpose();
    records.push_back(std::move(rec));
  }
  return records;
}

PpscTranscript RunPpsc(Eigen::MatrixXd& state, const PrivateGraph& gp,
                       const PpscConfig& cfg, Stream& stream) {
  if (state.rows() != gp.n()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "state has " + std::to_string(state.rows()) + " rows, graph has " +
                    std::to_string(gp.n()) + " nodes");
  }
  PpscTranscript tr;
  tr.n = gp.n();
  tr.dim = static_cast<int>(state.cols());
  tr.steps = cfg.steps();
  tr.touched.assign(gp.n(), false);
  for (int k = 0; k < gp.q(); ++k) {
    if (gp.components()[k].size() >= 2) tr.active_components.push_back(k);
  }
  tr.records.reserve(static_cast<std::size_t>(cfg.steps()) * tr.active_components.size());
  for (int t = 1; t <= cfg.steps(); ++t) {
    for (auto& rec : PpscStep(state, gp, cfg.sigma_gamma(), stream, t)) {
      tr.touched[rec.sender] = true;
      tr.touched[rec.receiver] = true;
      tr.records.push_back(std::move(rec));
    }
  }
  return tr;
}

namespace {

void ValidateTranscript(const PpscTranscript& tr, const PrivateGraph& gp) {
  auto fail = [](const std::string& why) {
    throw Error(ErrorKind::kMalformedTranscript, why);
  };
  if (tr.n != gp.n()) fail("node count differs from the private graph");
  if (tr.steps < 1) fail("transcript has no steps");
  const std::size_t q_active = tr.active_components.size();
  if (tr.records.size() != q_active * static_cast<std::size_t>(tr.steps)) {
    fail("expected " + std::to_string(q_active * tr.steps) + " records, found " +
         std::to_string(tr.records.size()));
  }
  for (std::size_t idx = 0; idx < tr.records.size(); ++idx) {
    const auto& rec = tr.records[idx];
    const int want_step = static_cast<int>(idx / q_active) + 1;
    const int want_comp = tr.active_components[idx % q_active];
    if (rec.step != want_step || rec.component != want_comp) {
      fail("record " + std::to_string(idx) + " out of (step, component) order");
    }
    if (rec.sender < 0 || rec.sender >= gp.n() || rec.receiver < 0 ||
        rec.receiver >= gp.n()) {
      fail("record " + std::to_string(idx) + " has an out-of-range node");
    }
    const auto& nb = gp.neighbors()[rec.sender];
    if (!std::binary_search(nb.begin(), nb.end(), rec.receiver)) {
      fail("record " + std::to_string(idx) + " uses a non-edge (" +
           std::to_string(rec.sender) + "," + std::to_string(rec.receiver) + ")");
    }
    if (gp.component_of(rec.sender) != rec.component) {
      fail("record " + std::to_string(idx) + " edge outside its component");
    }
    if (rec.noise.size() != tr.dim) {
      fail("record " + std::to_string(idx) + " noise has wrong dimension");
    }
  }
}

// D for a single component given its local edge sequence (local indices).
Eigen::MatrixXd LocalD(int nk, const std::vector<std::pair<int, int>>& seq) {
  const int steps = static_cast<int>(seq.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(nk, nk);
  Eigen::MatrixXd d(nk, steps);
  for (int h = steps - 1; h >= 0; --h) {
    const auto [s, r] = seq[h];
    d.col(h) = p.col(s) - p.col(r);
    p.col(s) = p.col(r);
  }
  return d;
}

struct LocalComponent {
  int size = 0;
  std::vector<std::pair<int, int>> oriented;  // local indices
  std::vector<std::vector<int>> neighbors;    // local indices
};

LocalComponent Localize(const PrivateGraph& gp, int k) {
  const auto& nodes = gp.components()[k];
  LocalComponent lc;
  lc.size = static_cast<int>(nodes.size());
  lc.neighbors.resize(nodes.size());
  auto local = [&](int v) {
    return static_cast<int>(std::lower_bound(nodes.begin(), nodes.end(), v) -
                            nodes.begin());
  };
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (int w : gp.neighbors()[nodes[i]]) {
      lc.oriented.emplace_back(static_cast<int>(i), local(w));
      lc.neighbors[i].push_back(local(w));
    }
  }
  return lc;
}

}  // namespace

TranscriptMatrices TranscriptToMatrices(const PpscTranscript& tr,
                                        const PrivateGraph& gp) {
  ValidateTranscript(tr, gp);
  const int n = tr.n;
  const int steps = tr.steps;
  const int q_active = static_cast<int>(tr.active_components.size());
  TranscriptMatrices out;
  out.d = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(q_active) * steps);
  out.noise = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(q_active) * steps, tr.dim);

  // P accumulates C_S * ... * C_{h+1}; right-multiplying by C_h copies the
  // receiver column into the sender column.
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
  for (int h = steps; h >= 1; --h) {
    for (int a = 0; a < q_active; ++a) {
      const auto& rec = tr.records[static_cast<std::size_t>(h - 1) * q_active + a];
      const Eigen::Index col = static_cast<Eigen::Index>(a) * steps + (h - 1);
      out.d.col(col) = p.col(rec.sender) - p.col(rec.receiver);
      out.noise.row(col) = rec.noise.transpose();
    }
    for (int a = 0; a < q_active; ++a) {
      const auto& rec = tr.records[static_cast<std::size_t>(h - 1) * q_active + a];
      p.col(rec.sender) = p.col(rec.receiver);
    }
  }
  out.c = std::move(p);
  return out;
}

double MinNonzeroSingularValue(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double tol = 1e-9 * std::max(1.0, sv.maxCoeff());
  double best = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > tol && (best == 0.0 || sv[i] < best)) best = sv[i];
  }
  return best;
}

std::int64_t SequenceCount(const PrivateGraph& gp, int steps) {
  constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
  std::int64_t total = 0;
  for (int k = 0; k < gp.q(); ++k) {
    if (gp.components()[k].size() < 2) continue;
    const std::int64_t base = gp.oriented_edge_count(k);
    std::int64_t count = 1;
    for (int s = 0; s < steps; ++s) {
      if (count > kMax / base) return kMax;
      count *= base;
    }
    if (total > kMax - count) return kMax;
    total += count;
  }
  return total;
}

LambdaPpscEstimate LambdaPpsc(const PrivateGraph& gp, int steps,
                              const LambdaPpscOptions& options, Stream& stream) {
  if (steps < 1) {
    throw Error(ErrorKind::kInvalidArgument, "lambda_ppsc needs S >= 1");
  }
  const std::int64_t count = SequenceCount(gp, steps);
  bool exact = false;
  switch (options.mode) {
    case LambdaPpscOptions::Mode::kExact:
      if (count > options.exact_limit) {
        throw Error(ErrorKind::kEnumerationTooLarge,
                    std::to_string(count) + " edge sequences exceed the limit " +
                        std::to_string(options.exact_limit));
      }
      exact = true;
      break;
    case LambdaPpscOptions::Mode::kMonteCarlo:
      exact = false;
      break;
    case LambdaPpscOptions::Mode::kAuto:
      exact = count <= options.exact_limit;
      break;
  }

  LambdaPpscEstimate est;
  est.method = exact ? LambdaMethod::kExact : LambdaMethod::kMonteCarlo;
  est.value = std::numeric_limits<double>::infinity();
  std::vector<std::pair<int, int>> seq(steps);
  for (int k = 0; k < gp.q(); ++k) {
    if (gp.components()[k].size() < 2) continue;
    const LocalComponent lc = Localize(gp, k);
    if (exact) {
      const int base = static_cast<int>(lc.oriented.size());
      std::vector<int> digits(steps, 0);
      while (true) {
        for (int s = 0; s < steps; ++s) seq[s] = lc.oriented[digits[s]];
        est.value = std::min(est.value, MinNonzeroSingularValue(LocalD(lc.size, seq)));
        ++est.samples;
        int pos = 0;
        while (pos < steps && ++digits[pos] == base) digits[pos++] = 0;
        if (pos == steps) break;
      }
    } else {
      for (std::int64_t i = 0; i < options.monte_carlo_samples; ++i) {
        for (int s = 0; s < steps; ++s) {
          const int sender = static_cast<int>(stream.UniformIndex(lc.size));
          const auto& nb = lc.neighbors[sender];
          seq[s] = {sender, nb[stream.UniformIndex(nb.size())]};
        }
        est.value = std::min(est.value, MinNonzeroSingularValue(LocalD(lc.size, seq)));
        ++est.samples;
      }
    }
  }
  return est;
}

void WriteTranscript(std::ostream& out, const PpscTranscript& tr) {
  out << "# ppsc-transcript n=" << tr.n << " dim=" << tr.dim << " steps=" << tr.steps
      << " components=";
  for (std::size_t i = 0; i < tr.active_components.size(); ++i) {
    out << (i ? "," : "") << tr.active_components[i];
  }
  out << '\n';
  out.precision(17);
  for (const auto& rec : tr.records) {
    out << rec.step << ' ' << rec.component << ' ' << rec.sender << ' ' << rec.receiver;
    for (Eigen::Index i = 0; i < rec.noise.size(); ++i) out << ' ' << rec.noise[i];
    for (Eigen::Index i = 0; i < rec.message.size(); ++i) out << ' ' << rec.message[i];
    out << '\n';
  }
}

PpscTranscript ReadTranscript(std::istream& in, const PrivateGraph& gp) {
  auto fail = [](const std::string& why) {
    throw Error(ErrorKind::kMalformedTranscript, why);
  };
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ppsc-transcript", 0) != 0) {
    fail("missing transcript header");
  }
  PpscTranscript tr;
  std::string components;
  {
    std::istringstream hs(line.substr(std::string("# ppsc-transcript").size()));
    std::string token;
    while (hs >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos) fail("bad header token '" + token + "'");
      const std::string key = token.substr(0, eq);
      const std::string value = token.substr(eq + 1);
      if (key == "n") tr.n = std::stoi(value);
      else if (key == "dim") tr.dim = std::stoi(value);
      else if (key == "steps") tr.steps = std::stoi(value);
      else if (key == "components") components = value;
      else fail("unknown header key '" + key + "'");
    }
  }
  std::istringstream cs(components);
  for (std::string c; std::getline(cs, c, ',');) {
    if (!c.empty()) tr.active_components.push_back(std::stoi(c));
  }
  tr.touched.assign(std::max(tr.n, 0), false);
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    GossipRecord rec;
    if (!(ls >> rec.step >> rec.component >> rec.sender >> rec.receiver)) {
      fail("bad record line '" + line + "'");
    }
    std::vector<double> values;
    for (double v; ls >> v;) values.push_back(v);
    if (values.size() != static_cast<std::size_t>(tr.dim) &&
        values.size() != static_cast<std::size_t>(2 * tr.dim)) {
      fail("record line has " + std::to_string(values.size()) + " values");
    }
    rec.noise = Eigen::Map<Eigen::VectorXd>(values.data(), tr.dim);
    if (values.size() == static_cast<std::size_t>(2 * tr.dim)) {
      rec.message = Eigen::Map<Eigen::VectorXd>(values.data() + tr.dim, tr.dim);
    }
    if (rec.sender >= 0 && rec.sender < tr.n) tr.touched[rec.sender] = true;
    if (rec.receiver >= 0 && rec.receiver < tr.n) tr.touched[rec.receiver] = true;
    tr.records.push_back(std::move(rec));
  }
  ValidateTranscript(tr, gp);
  return tr;
}

}  // namespace ppsc

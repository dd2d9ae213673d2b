// Copyright 2026 The Shiftlab Authors
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

#include "shiftlab/transport.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace shiftlab {
namespace {

constexpr int kMaxPivots = 100000;
constexpr double kBalanceTolerance = 1e-10;
constexpr double kForbiddenMassTolerance = 1e-12;

// Lexicographic cost: `big` counts forbidden cells (an exact big-M), `small`
// carries the finite part.
struct Cost2 {
  double big = 0.0;
  double small = 0.0;
};

Cost2 operator-(Cost2 a, Cost2 b) { return {a.big - b.big, a.small - b.small}; }

bool LexLess(Cost2 a, Cost2 b, double eps) {
  if (a.big < b.big - 0.5) return true;
  if (a.big > b.big + 0.5) return false;
  return a.small < b.small - eps;
}

struct Cell {
  int row;
  int col;
};

struct Edge {
  int to;
  int basic_index;
};

void Validate(const Eigen::VectorXd& supply, const Eigen::VectorXd& demand,
              const Eigen::MatrixXd& cost) {
  const auto n = supply.size();
  const auto m = demand.size();
  if (n < 1 || m < 1 || n > kMaxTransportSupport ||
      m > kMaxTransportSupport) {
    throw std::invalid_argument("transport supports 1..64 atoms per side");
  }
  if (cost.rows() != n || cost.cols() != m) {
    throw std::invalid_argument("cost matrix shape does not match marginals");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(supply[i] >= 0.0) || !std::isfinite(supply[i])) {
      throw std::invalid_argument("supply must be finite and >= 0");
    }
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    if (!(demand[j] >= 0.0) || !std::isfinite(demand[j])) {
      throw std::invalid_argument("demand must be finite and >= 0");
    }
  }
  const double total = supply.sum();
  if (std::abs(total - demand.sum()) >
      kBalanceTolerance * std::max(1.0, total)) {
    throw std::invalid_argument("marginals have different total mass");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const double c = cost(i, j);
      if (std::isnan(c) || c == -std::numeric_limits<double>::infinity()) {
        throw std::invalid_argument("costs must be finite or +infinity");
      }
    }
  }
}

class TransportSimplex {
 public:
  TransportSimplex(const Eigen::VectorXd& supply,
                   const Eigen::VectorXd& demand, const Eigen::MatrixXd& cost)
      : n_(static_cast<int>(supply.size())),
        m_(static_cast<int>(demand.size())),
        cost_(cost) {
    double scale = 0.0;
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < m_; ++j) {
        if (std::isfinite(cost(i, j))) scale = std::max(scale, std::abs(cost(i, j)));
      }
    }
    eps_ = 1e-12 * std::max(1.0, scale);
    InitialBasis(supply, demand);
  }

  TransportResult Solve() {
    TransportResult result;
    int degenerate_run = 0;
    bool bland = false;
    const double total = std::max(total_, 1e-300);
    for (result.pivots = 0;; ++result.pivots) {
      if (result.pivots >= kMaxPivots) {
        throw std::runtime_error("transport simplex hit the pivot cap");
      }
      ComputePotentials();
      const Cell entering = Price(bland);
      if (entering.row < 0) break;
      const double theta = Pivot(entering, bland);
      if (theta <= 1e-15 * total) {
        if (++degenerate_run > 2 * (n_ + m_)) bland = true;
      } else {
        degenerate_run = 0;
      }
    }
    result.plan = Eigen::MatrixXd::Zero(n_, m_);
    for (size_t k = 0; k < basis_.size(); ++k) {
      result.plan(basis_[k].row, basis_[k].col) = std::max(0.0, flow_[k]);
    }
    double forbidden = 0.0;
    double value = 0.0;
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < m_; ++j) {
        const double x = result.plan(i, j);
        if (x == 0.0) continue;
        if (std::isinf(cost_(i, j))) {
          forbidden += x;
        } else {
          value += x * cost_(i, j);
        }
      }
    }
    result.value = forbidden > kForbiddenMassTolerance * std::max(1.0, total_)
                       ? std::numeric_limits<double>::infinity()
                       : value;
    return result;
  }

 private:
  Cost2 CellCost(int i, int j) const {
    const double c = cost_(i, j);
    return std::isinf(c) ? Cost2{1.0, 0.0} : Cost2{0.0, c};
  }

  // Northwest corner rule. Ties move down only, so the basis always has
  // exactly n + m - 1 cells (some possibly degenerate).
  void InitialBasis(const Eigen::VectorXd& supply,
                    const Eigen::VectorXd& demand) {
    std::vector<double> a(supply.data(), supply.data() + n_);
    std::vector<double> b(demand.data(), demand.data() + m_);
    total_ = supply.sum();
    b[m_ - 1] += total_ - demand.sum();
    b[m_ - 1] = std::max(0.0, b[m_ - 1]);
    int i = 0;
    int j = 0;
    while (true) {
      const double x = std::max(0.0, std::min(a[i], b[j]));
      basis_.push_back({i, j});
      flow_.push_back(x);
      a[i] -= x;
      b[j] -= x;
      if (i == n_ - 1 && j == m_ - 1) break;
      if (i == n_ - 1) {
        ++j;
      } else if (j == m_ - 1) {
        ++i;
      } else if (a[i] <= b[j]) {
        ++i;
      } else {
        ++j;
      }
    }
    is_basic_.assign(static_cast<size_t>(n_) * m_, false);
    for (const Cell& c : basis_) is_basic_[c.row * m_ + c.col] = true;
  }

  void ComputePotentials() {
    const int nodes = n_ + m_;
    adjacency_.assign(nodes, {});
    for (size_t k = 0; k < basis_.size(); ++k) {
      const int r = basis_[k].row;
      const int c = n_ + basis_[k].col;
      adjacency_[r].push_back({c, static_cast<int>(k)});
      adjacency_[c].push_back({r, static_cast<int>(k)});
    }
    potential_.assign(nodes, Cost2{});
    parent_.assign(nodes, -1);
    parent_edge_.assign(nodes, -1);
    depth_.assign(nodes, -1);
    std::queue<int> queue;
    depth_[0] = 0;
    queue.push(0);
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop();
      for (const Edge& e : adjacency_[u]) {
        if (depth_[e.to] >= 0) continue;
        const Cell& cell = basis_[e.basic_index];
        const Cost2 c = CellCost(cell.row, cell.col);
        // u_row + v_col = c on every basic cell.
        potential_[e.to] = c - potential_[u];
        parent_[e.to] = u;
        parent_edge_[e.to] = e.basic_index;
        depth_[e.to] = depth_[u] + 1;
        queue.push(e.to);
      }
    }
    for (int v = 0; v < nodes; ++v) {
      if (depth_[v] < 0) throw std::logic_error("transport basis is not a tree");
    }
  }

  Cell Price(bool bland) const {
    Cell best{-1, -1};
    Cost2 best_reduced{0.0, 0.0};
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < m_; ++j) {
        if (is_basic_[i * m_ + j]) continue;
        const Cost2 c = CellCost(i, j);
        const Cost2 reduced{c.big - potential_[i].big - potential_[n_ + j].big,
                            c.small - potential_[i].small -
                                potential_[n_ + j].small};
        if (!LexLess(reduced, Cost2{}, eps_)) continue;
        if (bland) return {i, j};
        if (best.row < 0 || LexLess(reduced, best_reduced, 0.0)) {
          best = {i, j};
          best_reduced = reduced;
        }
      }
    }
    return best;
  }

  // Returns the step length theta.
  double Pivot(Cell entering, bool bland) {
    // Tree path from the entering row node to the entering column node.
    int a = entering.row;
    int b = n_ + entering.col;
    std::vector<int> from_a;
    std::vector<int> from_b;
    while (a != b) {
      if (depth_[a] >= depth_[b]) {
        from_a.push_back(parent_edge_[a]);
        a = parent_[a];
      } else {
        from_b.push_back(parent_edge_[b]);
        b = parent_[b];
      }
    }
    std::vector<int> path = from_a;
    path.insert(path.end(), from_b.rbegin(), from_b.rend());
    // The last path edge touches the entering column and loses flow; signs
    // alternate back toward the entering row.
    const int k = static_cast<int>(path.size());
    int leaving = -1;
    double theta = std::numeric_limits<double>::infinity();
    for (int t = 0; t < k; ++t) {
      if ((k - 1 - t) % 2 != 0) continue;
      const int e = path[t];
      const double x = flow_[e];
      bool take = x < theta;
      if (!take && x == theta && bland) {
        const Cell& cur = basis_[leaving];
        const Cell& cand = basis_[e];
        take = cand.row < cur.row || (cand.row == cur.row && cand.col < cur.col);
      }
      if (take) {
        theta = x;
        leaving = e;
      }
    }
    if (leaving < 0) throw std::logic_error("transport cycle has no exit");
    for (int t = 0; t < k; ++t) {
      flow_[path[t]] += ((k - 1 - t) % 2 == 0) ? -theta : theta;
    }
    const Cell out = basis_[leaving];
    is_basic_[out.row * m_ + out.col] = false;
    is_basic_[entering.row * m_ + entering.col] = true;
    basis_[leaving] = entering;
    flow_[leaving] = theta;
    return theta;
  }

  int n_;
  int m_;
  const Eigen::MatrixXd& cost_;
  double eps_ = 0.0;
  double total_ = 0.0;
  std::vector<Cell> basis_;
  std::vector<double> flow_;
  std::vector<bool> is_basic_;
  std::vector<std::vector<Edge>> adjacency_;
  std::vector<Cost2> potential_;
  std::vector<int> parent_;
  std::vector<int> parent_edge_;
  std::vector<int> depth_;
};

}  // namespace

TransportResult SolveTransport(const Eigen::VectorXd& supply,
                               const Eigen::VectorXd& demand,
                               const Eigen::MatrixXd& cost) {
  Validate(supply, demand, cost);
  TransportSimplex simplex(supply, demand, cost);
  return simplex.Solve();
}

TransportResult SolveBottleneck(const Eigen::VectorXd& supply,
                                const Eigen::VectorXd& demand,
                                const Eigen::MatrixXd& cost) {
  Validate(supply, demand, cost);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> thresholds;
  for (Eigen::Index i = 0; i < cost.rows(); ++i) {
    for (Eigen::Index j = 0; j < cost.cols(); ++j) {
      if (supply[i] > 0.0 && demand[j] > 0.0 && std::isfinite(cost(i, j))) {
        thresholds.push_back(cost(i, j));
      }
    }
  }
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  auto feasible_at = [&](double threshold) {
    Eigen::MatrixXd zero_one(cost.rows(), cost.cols());
    for (Eigen::Index i = 0; i < cost.rows(); ++i) {
      for (Eigen::Index j = 0; j < cost.cols(); ++j) {
        zero_one(i, j) = cost(i, j) <= threshold ? 0.0 : inf;
      }
    }
    TransportSimplex simplex(supply, demand, zero_one);
    return simplex.Solve();
  };

  TransportResult best;
  if (thresholds.empty()) {
    best = feasible_at(-inf);
    best.value = std::isinf(best.value) ? inf : 0.0;
    return best;
  }
  TransportResult top = feasible_at(thresholds.back());
  if (std::isinf(top.value)) return top;
  best = top;
  best.value = thresholds.back();
  size_t lo = 0;
  size_t hi = thresholds.size() - 1;  // feasible
  while (lo < hi) {
    const size_t mid = lo + (hi - lo) / 2;
    TransportResult trial = feasible_at(thresholds[mid]);
    if (std::isfinite(trial.value)) {
      best = trial;
      best.value = thresholds[mid];
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return best;
}

}  // namespace shiftlab

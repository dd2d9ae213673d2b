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

// Exact solvers for small balanced transportation problems.
//
// SolveTransport runs the transportation simplex (northwest-corner start,
// u-v potentials, Dantzig pricing with a fallback to Bland's rule after a
// run of degenerate pivots). Cells with cost +infinity are forbidden.
// SolveBottleneck minimizes the largest cost over the support of the plan.

#ifndef SHIFTLAB_TRANSPORT_H_
#define SHIFTLAB_TRANSPORT_H_

#include <Eigen/Dense>

namespace shiftlab {

inline constexpr int kMaxTransportSupport = 64;

struct TransportResult {
  Eigen::MatrixXd plan;
  // Sum of cost * plan; +infinity when no plan avoids forbidden cells.
  double value = 0.0;
  int pivots = 0;
};

// Minimizes <cost, plan> over nonnegative plans with row sums `supply` and
// column sums `demand`. Both must be nonnegative with equal totals (within
// 1e-10); sizes are capped at kMaxTransportSupport. Costs must be finite or
// +infinity. Throws std::invalid_argument on bad input and
// std::runtime_error if the pivot cap is hit.
TransportResult SolveTransport(const Eigen::VectorXd& supply,
                               const Eigen::VectorXd& demand,
                               const Eigen::MatrixXd& cost);

// Minimizes max{cost(i, j) : plan(i, j) > 0} over the same polytope by binary
// search over the distinct cost values with a feasibility LP at each
// threshold. `value` holds the optimal bottleneck.
TransportResult SolveBottleneck(const Eigen::VectorXd& supply,
                                const Eigen::VectorXd& demand,
                                const Eigen::MatrixXd& cost);

}  // namespace shiftlab

#endif  // SHIFTLAB_TRANSPORT_H_

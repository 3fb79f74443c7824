// Copyright 2026 The ocsim Authors
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

#ifndef OCSIM_LP_HPP
#define OCSIM_LP_HPP

#include <limits>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "ocsim/linalg.hpp"

namespace ocsim {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

/// maximize c^T x  subject to  A x = b,  lower_j <= x_j <= upper_j,
/// where lower_j is 0 or -infinity (free_var[j]) and upper_j may be +infinity.
struct LpProblem {
    RealVector c;
    SparseMatrix a;
    RealVector b;
    std::vector<bool> free_var;
    RealVector upper;

    /// A problem with all variables nonnegative and unbounded above, A and b zero.
    static LpProblem with_shape(int rows, int cols);
    int rows() const {
        return static_cast<int>(a.rows());
    }
    int cols() const {
        return static_cast<int>(a.cols());
    }
    /// Throws ValidationError when the shapes disagree or data is non-finite.
    void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded };

const char *lp_status_name(LpStatus s);

struct LpIterate {
    int iteration;
    int phase;
    double primal_objective;
    /// b^T y for the basic dual solution of this iterate (maximization sense).
    double dual_objective;
};

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    RealVector x;
    double objective = 0;
    /// Multipliers of the rows of A (maximization sense: A^T y >= c on nonnegative columns).
    RealVector dual;
    /// max |A x - b| together with any bound violation.
    double residual = 0;
    /// |primal objective - dual objective|, the dual objective including upper-bound multipliers.
    double gap = 0;
    /// Largest violation of dual feasibility at the final basis.
    double dual_infeasibility = 0;
    int iterations = 0;
    std::vector<LpIterate> log;
};

struct LpSettings {
    int refactor_every = 50;
    /// 0 selects 20 * (rows + cols) + 1000.
    int max_iterations = 0;
    double feasibility_tol = 1e-9;
    double optimality_tol = 1e-10;
    double pivot_tol = 1e-9;
    /// Consecutive degenerate pivots after which pricing falls back to Bland's rule.
    int degenerate_limit = 50;
    bool record_log = true;
    double residual_tol = 1e-8;
    double gap_tol = 1e-7;
};

/// Two-phase revised simplex on the standard form of the problem. Deterministic.
/// Throws SolverError (with the last iterates in the message) when the iteration cap is hit
/// or the final certificates miss their tolerances.
LpSolution solve_lp(const LpProblem &p, const LpSettings &settings = {});

/// Plain-text dump, one item per line:
///   lp <rows> <cols> maximize
///   c <c_1> ... <c_n>
///   lower <0|-inf> ...
///   upper <u_j|inf> ...
///   row <i> <b_i> <j>:<a_ij> ...      (nonzeros only, 0-based indices)
std::string lp_dump(const LpProblem &p);

}  // namespace ocsim

#endif

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

#ifndef OCSIM_SDP_HPP
#define OCSIM_SDP_HPP

#include <string>
#include <vector>

#include "ocsim/linalg.hpp"

namespace ocsim {

struct SdpTerm {
    int block;
    HermitianOperator f;
};

/// sum over terms of tr(f X_block) = rhs
struct SdpConstraint {
    std::vector<SdpTerm> terms;
    double rhs = 0;
};

/// maximize sum_k tr(C_k X_k)  subject to the linear constraints and X_k PSD (complex Hermitian blocks).
struct SdpProblem {
    std::vector<int> block_dims;
    std::vector<HermitianOperator> objective;
    std::vector<SdpConstraint> constraints;

    /// Blocks of the given sizes with zero objective and no constraints.
    static SdpProblem with_blocks(const std::vector<int> &dims);
    void validate() const;
};

enum class SdpStatus { optimal, infeasible, unbounded };

const char *sdp_status_name(SdpStatus s);

struct SdpSolution {
    SdpStatus status = SdpStatus::infeasible;
    std::vector<HermitianOperator> x;
    double objective = 0;
    /// Dual multipliers: sum_j y_j F_j - C is PSD, dual objective g^T y.
    RealVector y;
    double dual_objective = 0;
    /// |primal - dual| / (1 + |primal| + |dual|)
    double gap = 0;
    /// max_j |sum_k tr(F_jk X_k) - g_j|
    double residual = 0;
    /// Frobenius norm of the dual slack mismatch.
    double dual_residual = 0;
    double min_eigenvalue = 0;
    int iterations = 0;
};

struct SdpSettings {
    int max_iterations = 200;
    double gap_tol = 1e-9;
    double feas_tol = 1e-9;
    /// Looser thresholds accepted when progress stalls before the targets are met.
    double accept_gap = 1e-7;
    double accept_feas = 1e-8;
    double step_fraction = 0.98;
};

/// Primal-dual interior-point method (Nesterov-Todd scaling, Mehrotra predictor-corrector)
/// on the real symmetric embedding of the Hermitian blocks. Infeasible and unbounded problems
/// are classified by auxiliary programs when the main iteration fails to converge.
/// Throws SolverError with the final residuals when no status can be certified.
SdpSolution solve_sdp(const SdpProblem &p, const SdpSettings &settings = {});

struct SdpFeasibility {
    bool feasible = false;
    /// A point meeting the constraints (when feasible).
    std::vector<HermitianOperator> x;
    double residual = 0;
    /// When infeasible: y with g^T y > 0 and sum_j y_j F_j negative semidefinite.
    RealVector certificate;
    double certificate_value = 0;
};

/// Decides whether the constraint set of p (objective ignored) has a PSD solution.
SdpFeasibility sdp_feasible(const SdpProblem &p, const SdpSettings &settings = {});

/// Plain-text dump:
///   sdp <num blocks> <num constraints> maximize
///   blocks <d_1> ... <d_K>
///   objective <k> followed by d_k rows of "re,im" entries
///   constraint <j> <rhs>, then for each term "term <k>" and d_k rows
std::string sdp_dump(const SdpProblem &p);

}  // namespace ocsim

#endif

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

#ifndef OCSIM_STEERING_HPP
#define OCSIM_STEERING_HPP

#include <string>
#include <utility>
#include <vector>

#include "ocsim/model.hpp"
#include "ocsim/sdp.hpp"
#include "ocsim/witness.hpp"

namespace ocsim {

/// sum_{x,y} s_{xy} <A_x B_y> <= zeta with rank-one projective qubit measurements B_y on Bob's side.
struct SteeringInequality {
    RealMatrix s;
    std::vector<Povm> bob;

    SteeringInequality(RealMatrix s, std::vector<Povm> bob);
};

/// The witness c_{bxy} = (-1)^b s_{xy} on Bob's measurements, with its exact bound zeta.
std::pair<Witness, WitnessBound> steering_to_witness(const SteeringInequality &ineq);

/// Parent G_o with binary post-processing p(0|x, o); p(1|x, o) = 1 - p(0|x, o).
struct ParentMeasurement {
    std::vector<HermitianOperator> effects;
    std::vector<std::string> labels;
    /// p0[x][o]
    std::vector<std::vector<double>> p0;

    ParentMeasurement(std::vector<HermitianOperator> effects, std::vector<std::string> labels,
                      std::vector<std::vector<double>> p0, double tol = 1e-9);
    int dim() const {
        return effects.front().dim();
    }
    int num_outcomes() const {
        return static_cast<int>(effects.size());
    }
    int num_measurements() const {
        return static_cast<int>(p0.size());
    }
    /// M_{0|x} = sum_o p(0|x, o) G_o
    HermitianOperator marginal(int x) const;
};

/// G(i, lambda) = q(lambda) |phi_i><phi_i|, p(0|x, (i, lambda)) = p(i|x, lambda). Needs full-basis devices.
/// Checks M_{0|x} = reconstruct(x) to 1e-9.
ParentMeasurement parent_from_model(const ClassicalModel &model);

/// Each device's subset widened to its whole basis (the basis columns outside the subset complete it);
/// the added outcomes get probability 0.
ClassicalModel complete_bases(const ClassicalModel &model);

/// Model for E' = E u {(I - rho_x)/(d - 1)}: same devices (completed), new rows p'(i|x') = (1 - p(i|x))/(d - 1).
ClassicalModel extend_model(const ClassicalModel &model);

enum class QubitRoute {
    /// every p(0|x, lambda) <= 1/2: mu = 2 p0 eta
    direct,
    /// every p(0|x, lambda) >= 1/2: simulate I - rho_x with p1, then complement
    complement,
    /// neither: mu = (2 p0 - 1) eta, which uses sum_lambda p(lambda) eta n = 0
    centered,
};
const char *qubit_route_name(QubitRoute r);

struct QubitModel {
    ClassicalModel model;
    QubitRoute route;
};

/// Classical model for the qubit states rho_x = M_{0|x} of a parent measurement.
/// tol bounds the marginal trace defect and the reconstruction error.
QubitModel qubit_model_from_parent(const ParentMeasurement &parent, double tol = 1e-9);

/// Bloch form G = p (I + eta n.sigma); eta in [0, 1].
struct BlochEffect {
    double p;
    double eta;
    Eigen::Vector3d n;
};
BlochEffect bloch_decompose(const HermitianOperator &g, int index = 0);

struct JmResult {
    bool feasible = false;
    double residual = 0;
    double certificate_value = 0;
    /// Parent effects indexed by bit strings a (bit x is a_x, x = 0 most significant) when feasible,
    /// rescaled to sum to I exactly; the marginals then hold to about the SDP residual.
    std::vector<HermitianOperator> parent;
};

/// Parent G_a, a in {0,1}^m: G_a PSD, sum_a G_a = I, sum_{a: a_x = 0} G_a = v rho_x + (1 - v) I/d.
SdpProblem jm_sdp(const StateSet &set, double v);
JmResult jm_binarized_check(const StateSet &set, double v, const SdpSettings &settings = {});
bool jm_binarized_feasible(const StateSet &set, double v);

struct JmThreshold {
    double v = 0;
    int sdp_calls = 0;
    /// Largest v tested feasible and smallest tested infeasible.
    double lo = 0;
    double hi = 1;
};

/// Bisection for the largest feasible v in [0, 1] to the given width.
JmThreshold jm_threshold(const StateSet &set, double width = 1e-4);

/// Parent outcome cap: 2^m blocks with m <= 12.
constexpr int kMaxJmStates = 12;

}  // namespace ocsim

#endif

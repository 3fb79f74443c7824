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

#ifndef OCSIM_MODEL_HPP
#define OCSIM_MODEL_HPP

#include <vector>

#include "ocsim/states.hpp"

namespace ocsim {

/// An orthonormal basis (columns of a unitary) restricted to an index subset.
/// Subset indices are 0-based in memory and 1-based in files.
class Device {
   public:
    Device(ComplexMatrix basis, std::vector<int> subset);
    /// The whole basis.
    explicit Device(ComplexMatrix basis);

    int dim() const {
        return static_cast<int>(basis_.rows());
    }
    int rank() const {
        return static_cast<int>(subset_.size());
    }
    const ComplexMatrix &basis() const {
        return basis_;
    }
    const std::vector<int> &subset() const {
        return subset_;
    }
    /// Basis vector emitted on classical outcome k (k indexes the subset).
    ComplexVector state(int k) const {
        return basis_.col(subset_[k]);
    }
    HermitianOperator projector(int k) const {
        return HermitianOperator::projector(state(k));
    }

   private:
    ComplexMatrix basis_;
    std::vector<int> subset_;
};

/// cond[device][x][k]: probability that the device emits its k-th subset state for input x.
using Conditionals = std::vector<std::vector<std::vector<double>>>;

/// rho_x = sum_lambda q(lambda) sum_k p(k | x, lambda) |e_k^lambda><e_k^lambda|.
class ClassicalModel {
   public:
    ClassicalModel(std::vector<Device> devices, std::vector<double> weights, Conditionals cond);

    int dim() const {
        return devices_.front().dim();
    }
    int num_devices() const {
        return static_cast<int>(devices_.size());
    }
    int num_states() const {
        return static_cast<int>(cond_.front().size());
    }
    const std::vector<Device> &devices() const {
        return devices_;
    }
    const std::vector<double> &weights() const {
        return weights_;
    }
    const Conditionals &cond() const {
        return cond_;
    }
    double p(int device, int x, int k) const {
        return cond_[device][x][k];
    }
    /// Largest subset size over devices.
    int complexity() const;

   private:
    std::vector<Device> devices_;
    std::vector<double> weights_;
    Conditionals cond_;
};

/// tau_{x,lambda} = sum_k p(k | x, lambda) |e_k><e_k|, unweighted.
HermitianOperator device_output(const ClassicalModel &model, int device, int x);

DensityMatrix reconstruct(const ClassicalModel &model, int x);

/// max_x || v rho_x + (1 - v) I / d - reconstruct(x) ||_F
double reconstruction_residual(const ClassicalModel &model, const StateSet &set, double v);

/// p[x][y][b] = sum_lambda q sum_k p(k|x,lambda) <e_k|M_{b|y}|e_k>
using ProbabilityTable = std::vector<std::vector<std::vector<double>>>;
ProbabilityTable predict_statistics(const ClassicalModel &model, const std::vector<Povm> &measurements);
/// tr(rho_x M_{b|y}) in the same layout.
ProbabilityTable born_statistics(const StateSet &set, const std::vector<Povm> &measurements);

/// Convex mixture: model for {p rho_x + (1 - p) sigma_y}, joint index x * m_b + y.
/// Devices with zero weight are dropped.
ClassicalModel mix_models(const ClassicalModel &a, const ClassicalModel &b, double p);

}  // namespace ocsim

#endif

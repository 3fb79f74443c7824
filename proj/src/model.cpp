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

#include "ocsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ocsim/error.hpp"

namespace ocsim {

namespace {

constexpr double kProbTol = 1e-9;
constexpr double kNegTol = 1e-12;

}  // namespace

Device::Device(ComplexMatrix basis, std::vector<int> subset) : basis_(std::move(basis)), subset_(std::move(subset)) {
    if (basis_.rows() < 1 || basis_.rows() != basis_.cols()) {
        throw ValidationError("device basis must be a square matrix");
    }
    if (!basis_.allFinite() || unitarity_defect(basis_) > 1e-10) {
        throw ValidationError("device basis is not unitary (defect " + std::to_string(unitarity_defect(basis_)) + ")");
    }
    if (subset_.empty() || static_cast<int>(subset_.size()) > dim()) {
        throw ValidationError("device subset size must lie in [1, d]");
    }
    for (size_t i = 0; i < subset_.size(); i++) {
        if (subset_[i] < 0 || subset_[i] >= dim()) {
            throw ValidationError("device subset index out of range");
        }
        if (i > 0 && subset_[i] <= subset_[i - 1]) {
            throw ValidationError("device subset must be strictly increasing");
        }
    }
}

Device::Device(ComplexMatrix basis) : Device(basis, [&] {
    std::vector<int> all(basis.cols());
    std::iota(all.begin(), all.end(), 0);
    return all;
}()) {
}

ClassicalModel::ClassicalModel(std::vector<Device> devices, std::vector<double> weights, Conditionals cond)
    : devices_(std::move(devices)), weights_(std::move(weights)), cond_(std::move(cond)) {
    if (devices_.empty()) {
        throw ValidationError("classical model: at least one device required");
    }
    if (weights_.size() != devices_.size() || cond_.size() != devices_.size()) {
        throw ValidationError("classical model: weights and conditionals must match the device count");
    }
    double total = 0;
    size_t m = cond_.front().size();
    if (m == 0) {
        throw ValidationError("classical model: no states");
    }
    for (size_t l = 0; l < devices_.size(); l++) {
        if (devices_[l].dim() != devices_.front().dim()) {
            throw ValidationError("classical model: devices have different dimensions");
        }
        if (!(weights_[l] >= -kNegTol)) {
            throw ValidationError("classical model: negative weight for device " + std::to_string(l));
        }
        total += weights_[l];
        if (cond_[l].size() != m) {
            throw ValidationError("classical model: device " + std::to_string(l) + " has the wrong state count");
        }
        for (size_t x = 0; x < m; x++) {
            const auto &row = cond_[l][x];
            if (static_cast<int>(row.size()) != devices_[l].rank()) {
                throw ValidationError("classical model: conditional row length differs from subset size");
            }
            double s = 0;
            for (double v : row) {
                if (!(v >= -kNegTol)) {
                    throw ValidationError("classical model: negative conditional probability");
                }
                s += v;
            }
            if (std::abs(s - 1) > kProbTol) {
                throw ValidationError("classical model: conditional probabilities for device " + std::to_string(l) +
                                      ", state " + std::to_string(x) + " sum to " + std::to_string(s));
            }
        }
    }
    if (std::abs(total - 1) > kProbTol) {
        throw ValidationError("classical model: weights sum to " + std::to_string(total));
    }
}

int ClassicalModel::complexity() const {
    int r = 0;
    for (const auto &d : devices_) {
        r = std::max(r, d.rank());
    }
    return r;
}

HermitianOperator device_output(const ClassicalModel &model, int device, int x) {
    const Device &dev = model.devices().at(device);
    ComplexMatrix t = ComplexMatrix::Zero(dev.dim(), dev.dim());
    for (int k = 0; k < dev.rank(); k++) {
        ComplexVector e = dev.state(k);
        t += model.p(device, x, k) * (e * e.adjoint());
    }
    return HermitianOperator(t);
}

DensityMatrix reconstruct(const ClassicalModel &model, int x) {
    if (x < 0 || x >= model.num_states()) {
        throw ValidationError("state index " + std::to_string(x) + " out of range");
    }
    HermitianOperator rho = HermitianOperator::zero(model.dim());
    for (int l = 0; l < model.num_devices(); l++) {
        rho += model.weights()[l] * device_output(model, l, x);
    }
    StateTolerances tol;
    tol.trace = 1e-8;
    tol.psd = 1e-9;
    return DensityMatrix(rho, false, tol);
}

double reconstruction_residual(const ClassicalModel &model, const StateSet &set, double v) {
    if (set.size() != model.num_states() || set.dim() != model.dim()) {
        throw ValidationError("model and state set differ in size or dimension");
    }
    int d = set.dim();
    double worst = 0;
    for (int x = 0; x < set.size(); x++) {
        ComplexMatrix target = v * set.state(x).matrix() + ((1 - v) / d) * ComplexMatrix::Identity(d, d);
        worst = std::max(worst, (target - reconstruct(model, x).matrix()).norm());
    }
    return worst;
}

ProbabilityTable predict_statistics(const ClassicalModel &model, const std::vector<Povm> &measurements) {
    for (const auto &m : measurements) {
        if (m.dim() != model.dim()) {
            throw ValidationError("measurement dimension differs from the model dimension");
        }
    }
    int nm = model.num_states();
    ProbabilityTable p(nm);
    for (int x = 0; x < nm; x++) {
        p[x].resize(measurements.size());
        for (size_t y = 0; y < measurements.size(); y++) {
            p[x][y].assign(measurements[y].size(), 0.0);
        }
    }
    for (int l = 0; l < model.num_devices(); l++) {
        const Device &dev = model.devices()[l];
        double q = model.weights()[l];
        for (int k = 0; k < dev.rank(); k++) {
            ComplexVector e = dev.state(k);
            for (size_t y = 0; y < measurements.size(); y++) {
                for (int b = 0; b < measurements[y].size(); b++) {
                    double born = e.dot(measurements[y].effect(b).matrix() * e).real();
                    for (int x = 0; x < nm; x++) {
                        p[x][y][b] += q * model.p(l, x, k) * born;
                    }
                }
            }
        }
    }
    return p;
}

ProbabilityTable born_statistics(const StateSet &set, const std::vector<Povm> &measurements) {
    ProbabilityTable p(set.size());
    for (int x = 0; x < set.size(); x++) {
        for (const auto &m : measurements) {
            if (m.dim() != set.dim()) {
                throw ValidationError("measurement dimension differs from the state dimension");
            }
            std::vector<double> col;
            for (const auto &e : m.effects()) {
                col.push_back(set.state(x).op().inner(e));
            }
            p[x].push_back(col);
        }
    }
    return p;
}

ClassicalModel mix_models(const ClassicalModel &a, const ClassicalModel &b, double p) {
    if (a.dim() != b.dim()) {
        throw ValidationError("mix_models: dimension mismatch");
    }
    if (!(p >= 0 && p <= 1)) {
        throw ValidationError("mix_models: weight must lie in [0, 1]");
    }
    int ma = a.num_states();
    int mb = b.num_states();
    std::vector<Device> devices;
    std::vector<double> weights;
    Conditionals cond;
    auto add = [&](const ClassicalModel &model, double scale, bool first) {
        if (scale == 0) {
            return;
        }
        for (int l = 0; l < model.num_devices(); l++) {
            devices.push_back(model.devices()[l]);
            weights.push_back(scale * model.weights()[l]);
            std::vector<std::vector<double>> rows;
            for (int x = 0; x < ma; x++) {
                for (int y = 0; y < mb; y++) {
                    rows.push_back(model.cond()[l][first ? x : y]);
                }
            }
            cond.push_back(std::move(rows));
        }
    };
    add(a, p, true);
    add(b, 1 - p, false);
    return ClassicalModel(std::move(devices), std::move(weights), std::move(cond));
}

}  // namespace ocsim

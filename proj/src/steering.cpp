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

#include "ocsim/steering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ocsim/error.hpp"

namespace ocsim {

namespace {

constexpr double kTol = 1e-9;
constexpr double kRouteTol = 1e-12;

bool bit(std::uint64_t a, int x, int m) {
    return (a >> (m - 1 - x)) & 1;
}

double max_abs(const HermitianOperator &a) {
    return a.matrix().cwiseAbs().maxCoeff();
}

HermitianOperator pauli(int k) {
    ComplexMatrix m(2, 2);
    if (k == 0) {
        m << 0, 1, 1, 0;
    } else if (k == 1) {
        m << 0, Complex(0, -1), Complex(0, 1), 0;
    } else {
        m << 1, 0, 0, -1;
    }
    return HermitianOperator(m);
}

/// Unitary whose first column has Bloch vector n and second -n.
ComplexMatrix bloch_basis(const Eigen::Vector3d &n) {
    HermitianOperator h = n.x() * pauli(0) + n.y() * pauli(1) + n.z() * pauli(2);
    auto e = eig_hermitian(h);
    ComplexMatrix u(2, 2);
    u.col(0) = e.vectors.col(1);
    u.col(1) = e.vectors.col(0);
    return u;
}

}  // namespace

SteeringInequality::SteeringInequality(RealMatrix s_, std::vector<Povm> bob_) : s(std::move(s_)), bob(std::move(bob_)) {
    if (s.rows() < 1 || s.cols() < 1) {
        throw ValidationError("steering inequality: empty coefficient matrix");
    }
    if (static_cast<int>(bob.size()) != s.cols()) {
        throw ValidationError("steering inequality: " + std::to_string(s.cols()) + " columns but " +
                              std::to_string(bob.size()) + " measurements");
    }
    if (!s.allFinite()) {
        throw ValidationError("steering inequality: coefficients must be finite");
    }
    for (size_t y = 0; y < bob.size(); y++) {
        if (bob[y].dim() != 2) {
            throw ValidationError("steering inequality: only qubit measurements are supported");
        }
        if (bob[y].size() != 2 || !bob[y].is_rank_one_projective()) {
            throw ValidationError("steering inequality: measurement " + std::to_string(y + 1) +
                                  " is not rank-one projective");
        }
    }
}

std::pair<Witness, WitnessBound> steering_to_witness(const SteeringInequality &ineq) {
    return {sign_witness(ineq.s, ineq.bob), qubit_exact_bound(ineq.s, ineq.bob)};
}

ParentMeasurement::ParentMeasurement(std::vector<HermitianOperator> effects_, std::vector<std::string> labels_,
                                     std::vector<std::vector<double>> p0_, double tol)
    : effects(std::move(effects_)), labels(std::move(labels_)), p0(std::move(p0_)) {
    if (effects.empty()) {
        throw ValidationError("parent measurement: no effects");
    }
    int d = effects.front().dim();
    if (labels.empty()) {
        for (size_t o = 0; o < effects.size(); o++) {
            labels.push_back(std::to_string(o + 1));
        }
    }
    if (labels.size() != effects.size()) {
        throw ValidationError("parent measurement: label count differs from effect count");
    }
    HermitianOperator sum = HermitianOperator::zero(d);
    for (size_t o = 0; o < effects.size(); o++) {
        if (effects[o].dim() != d) {
            throw ValidationError("parent measurement: effects have different dimensions");
        }
        if (!is_psd(effects[o], tol)) {
            throw ValidationError("parent measurement: effect " + labels[o] + " is not PSD");
        }
        sum += effects[o];
    }
    double defect = max_abs(sum - HermitianOperator::identity(d));
    if (defect > tol) {
        throw ValidationError("parent measurement: effects sum to I only within " + std::to_string(defect));
    }
    if (p0.empty()) {
        throw ValidationError("parent measurement: no post-processing rows");
    }
    for (size_t x = 0; x < p0.size(); x++) {
        if (p0[x].size() != effects.size()) {
            throw ValidationError("parent measurement: post-processing row " + std::to_string(x + 1) +
                                  " has the wrong length");
        }
        for (double &p : p0[x]) {
            if (!(p >= -tol && p <= 1 + tol)) {
                throw ValidationError("parent measurement: post-processing probability outside [0, 1]");
            }
            p = std::clamp(p, 0.0, 1.0);
        }
    }
}

HermitianOperator ParentMeasurement::marginal(int x) const {
    if (x < 0 || x >= num_measurements()) {
        throw ValidationError("parent measurement: index " + std::to_string(x) + " out of range");
    }
    HermitianOperator m = HermitianOperator::zero(dim());
    for (int o = 0; o < num_outcomes(); o++) {
        m += p0[x][o] * effects[o];
    }
    return m;
}

ParentMeasurement parent_from_model(const ClassicalModel &model) {
    int d = model.dim();
    std::vector<HermitianOperator> effects;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> p0(model.num_states());
    for (int l = 0; l < model.num_devices(); l++) {
        const Device &dev = model.devices()[l];
        if (dev.rank() != d) {
            throw ValidationError("parent_from_model: device " + std::to_string(l + 1) + " has rank " +
                                  std::to_string(dev.rank()) + " < d; complete the bases first");
        }
        for (int k = 0; k < d; k++) {
            effects.push_back(model.weights()[l] * dev.projector(k));
            labels.push_back("(" + std::to_string(dev.subset()[k] + 1) + "," + std::to_string(l + 1) + ")");
            for (int x = 0; x < model.num_states(); x++) {
                p0[x].push_back(model.p(l, x, k));
            }
        }
    }
    ParentMeasurement parent(std::move(effects), std::move(labels), std::move(p0));
    for (int x = 0; x < model.num_states(); x++) {
        double r = max_abs(parent.marginal(x) - reconstruct(model, x).op());
        if (r > kTol) {
            throw SolverError("parent_from_model: marginal " + std::to_string(x + 1) + " misses the model state", r);
        }
    }
    return parent;
}

ClassicalModel complete_bases(const ClassicalModel &model) {
    int d = model.dim();
    std::vector<Device> devices;
    Conditionals cond(model.num_devices());
    for (int l = 0; l < model.num_devices(); l++) {
        const Device &dev = model.devices()[l];
        devices.emplace_back(dev.basis());
        for (int x = 0; x < model.num_states(); x++) {
            std::vector<double> row(d, 0.0);
            for (int k = 0; k < dev.rank(); k++) {
                row[dev.subset()[k]] = model.p(l, x, k);
            }
            cond[l].push_back(row);
        }
    }
    return ClassicalModel(devices, model.weights(), cond);
}

ClassicalModel extend_model(const ClassicalModel &model) {
    int d = model.dim();
    if (d < 2) {
        throw ValidationError("extend_model: needs d >= 2");
    }
    ClassicalModel full = complete_bases(model);
    Conditionals cond = full.cond();
    for (auto &rows : cond) {
        int m = static_cast<int>(rows.size());
        for (int x = 0; x < m; x++) {
            std::vector<double> row(d);
            for (int i = 0; i < d; i++) {
                row[i] = (1 - rows[x][i]) / (d - 1);
            }
            rows.push_back(row);
        }
    }
    return ClassicalModel(full.devices(), full.weights(), cond);
}

const char *qubit_route_name(QubitRoute r) {
    switch (r) {
        case QubitRoute::direct:
            return "direct";
        case QubitRoute::complement:
            return "complement";
        case QubitRoute::centered:
            return "centered";
    }
    return "?";
}

BlochEffect bloch_decompose(const HermitianOperator &g, int index) {
    if (g.dim() != 2) {
        throw ValidationError("bloch_decompose: qubit effect required");
    }
    BlochEffect b;
    b.p = 0.5 * g.trace();
    b.n = Eigen::Vector3d(0, 0, 1);
    b.eta = 0;
    if (b.p <= 0) {
        return b;
    }
    Eigen::Vector3d r;
    for (int k = 0; k < 3; k++) {
        r(k) = g.inner(pauli(k)) / (2 * b.p);
    }
    double eta = r.norm();
    if (eta > 1 + kTol) {
        throw ValidationError("bloch_decompose: effect " + std::to_string(index + 1) + " has eta " +
                              std::to_string(eta) + " > 1");
    }
    if (eta > 0) {
        b.n = r / eta;
    }
    b.eta = std::min(eta, 1.0);
    return b;
}

QubitModel qubit_model_from_parent(const ParentMeasurement &parent, double tol) {
    if (parent.dim() != 2) {
        throw ValidationError("qubit_model_from_parent: parent must act on a qubit");
    }
    int m = parent.num_measurements();
    for (int x = 0; x < m; x++) {
        double t = parent.marginal(x).trace();
        if (std::abs(t - 1) > tol) {
            throw ValidationError("qubit_model_from_parent: marginal " + std::to_string(x + 1) + " has trace " +
                                  std::to_string(t));
        }
    }
    bool low = true, high = true;
    for (const auto &row : parent.p0) {
        for (double p : row) {
            low = low && p <= 0.5 + kRouteTol;
            high = high && p >= 0.5 - kRouteTol;
        }
    }
    QubitRoute route = low ? QubitRoute::direct : high ? QubitRoute::complement : QubitRoute::centered;

    std::vector<Device> devices;
    std::vector<double> weights;
    Conditionals cond;
    for (int o = 0; o < parent.num_outcomes(); o++) {
        BlochEffect b = bloch_decompose(parent.effects[o], o);
        if (b.p <= 0) {
            continue;
        }
        devices.emplace_back(bloch_basis(b.n));
        weights.push_back(b.p);
        std::vector<std::vector<double>> rows;
        for (int x = 0; x < m; x++) {
            double p = parent.p0[x][o], mu;
            switch (route) {
                case QubitRoute::direct:
                    mu = 2 * p * b.eta;
                    break;
                case QubitRoute::complement:
                    // Model for I - rho_x has mu' = 2 p1 eta; complementing flips its outcomes.
                    mu = -2 * (1 - p) * b.eta;
                    break;
                default:
                    mu = (2 * p - 1) * b.eta;
            }
            mu = std::clamp(mu, -1.0, 1.0);
            rows.push_back({0.5 * (1 + mu), 0.5 * (1 - mu)});
        }
        cond.push_back(rows);
    }
    if (devices.empty()) {
        throw ValidationError("qubit_model_from_parent: all effects vanish");
    }
    // tr(sum G) = 2 only up to the parent's completeness tolerance.
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (double &w : weights) {
        w /= total;
    }
    ClassicalModel model(devices, weights, cond);
    for (int x = 0; x < m; x++) {
        double r = max_abs(reconstruct(model, x).op() - parent.marginal(x));
        if (r > tol) {
            throw SolverError("qubit_model_from_parent: model misses marginal " + std::to_string(x + 1) + " (" +
                                  qubit_route_name(route) + " route)",
                              r);
        }
    }
    return {model, route};
}

SdpProblem jm_sdp(const StateSet &set, double v) {
    if (!(v >= 0 && v <= 1)) {
        throw ValidationError("jm: visibility must lie in [0, 1]");
    }
    int m = set.size(), d = set.dim();
    if (m > kMaxJmStates) {
        throw SizingError("jm: 2^m parent outcomes with m = " + std::to_string(m) + " > " +
                          std::to_string(kMaxJmStates));
    }
    int outcomes = 1 << m;
    SdpProblem p = SdpProblem::with_blocks(std::vector<int>(outcomes, d));
    auto basis = hermitian_basis(d);
    HermitianOperator id = HermitianOperator::identity(d);
    for (const auto &f : basis) {
        SdpConstraint c;
        for (int a = 0; a < outcomes; a++) {
            c.terms.push_back({a, f});
        }
        c.rhs = f.inner(id);
        p.constraints.push_back(c);
    }
    for (int x = 0; x < m; x++) {
        HermitianOperator target = v * set.state(x).op() + ((1 - v) / d) * id;
        for (const auto &f : basis) {
            SdpConstraint c;
            for (int a = 0; a < outcomes; a++) {
                if (!bit(a, x, m)) {
                    c.terms.push_back({a, f});
                }
            }
            c.rhs = f.inner(target);
            p.constraints.push_back(c);
        }
    }
    return p;
}

JmResult jm_binarized_check(const StateSet &set, double v, const SdpSettings &settings) {
    auto f = sdp_feasible(jm_sdp(set, v), settings);
    JmResult r;
    r.feasible = f.feasible;
    r.residual = f.residual;
    r.certificate_value = f.certificate_value;
    if (f.feasible) {
        // Clip rounding-level negative eigenvalues, then G -> S^{-1/2} G S^{-1/2} so the effects sum to I.
        int d = set.dim();
        ComplexMatrix sum = ComplexMatrix::Zero(d, d);
        for (const auto &g : f.x) {
            auto e = eig_hermitian(g);
            ComplexMatrix c = e.vectors * e.values.cwiseMax(0.0).asDiagonal() * e.vectors.adjoint();
            r.parent.emplace_back(c);
            sum += r.parent.back().matrix();
        }
        auto e = eig_hermitian(HermitianOperator(sum));
        ComplexMatrix s = e.vectors * e.values.cwiseMax(1e-300).cwiseSqrt().cwiseInverse().asDiagonal() *
                          e.vectors.adjoint();
        for (auto &g : r.parent) {
            g = HermitianOperator(s * g.matrix() * s);
        }
    }
    return r;
}

bool jm_binarized_feasible(const StateSet &set, double v) {
    return jm_binarized_check(set, v).feasible;
}

JmThreshold jm_threshold(const StateSet &set, double width) {
    if (!(width > 0)) {
        throw ValidationError("jm_threshold: width must be positive");
    }
    JmThreshold t;
    t.sdp_calls++;
    if (jm_binarized_feasible(set, 1)) {
        t.lo = t.hi = t.v = 1;
        return t;
    }
    while (t.hi - t.lo > width) {
        double mid = 0.5 * (t.lo + t.hi);
        t.sdp_calls++;
        if (jm_binarized_feasible(set, mid)) {
            t.lo = mid;
        } else {
            t.hi = mid;
        }
    }
    t.v = t.lo;
    return t;
}

}  // namespace ocsim

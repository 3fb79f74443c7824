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

#include "ocsim/states.hpp"

#include <cmath>

#include "ocsim/error.hpp"

namespace ocsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

const char *const kPrime = "′";

bool is_prime(int d) {
    if (d < 2) {
        return false;
    }
    for (int p = 2; p * p <= d; p++) {
        if (d % p == 0) {
            return false;
        }
    }
    return true;
}

/// Four bases complementing the computational one in d = 4 (rows are vectors, times 1/2).
ComplexMatrix mub4(int j) {
    const Complex i(0, 1);
    ComplexMatrix rows(4, 4);
    switch (j) {
        case 1:
            rows << 1, 1, 1, 1,  //
                1, 1, -1, -1,    //
                1, -1, -1, 1,    //
                1, -1, 1, -1;
            break;
        case 2:
            rows << 1, -1, -i, -i,  //
                1, -1, i, i,        //
                1, 1, i, -i,        //
                1, 1, -i, i;
            break;
        case 3:
            rows << 1, -i, -i, -1,  //
                1, -i, i, 1,        //
                1, i, i, -1,        //
                1, i, -i, 1;
            break;
        default:
            rows << 1, -i, -1, -i,  //
                1, -i, 1, i,        //
                1, i, 1, -i,        //
                1, i, -1, i;
            break;
    }
    return rows.transpose() / 2.0;
}

void check_mub(const std::vector<ComplexMatrix> &bases) {
    int d = static_cast<int>(bases.front().rows());
    for (size_t a = 0; a < bases.size(); a++) {
        if (unitarity_defect(bases[a]) > 1e-10) {
            throw ValidationError("MUB table: basis " + std::to_string(a) + " is not orthonormal");
        }
        for (size_t b = 0; b < a; b++) {
            ComplexMatrix g = bases[a].adjoint() * bases[b];
            if ((g.cwiseAbs2().array() - 1.0 / d).abs().maxCoeff() > 1e-10) {
                throw ValidationError("MUB table: bases " + std::to_string(b) + " and " + std::to_string(a) +
                                      " are not unbiased");
            }
        }
    }
}

ComplexVector sic_fiducial(int d) {
    ComplexVector v(d);
    if (d == 2) {
        double theta = std::acos(1 / std::sqrt(3.0));
        v << std::cos(theta / 2), std::polar(std::sin(theta / 2), kPi / 4);
    } else if (d == 3) {
        v << 0, 1, -1;
    } else if (d == 4) {
        v << Complex(0.20118858648686589293, 0), Complex(-0.74269551036289596008, 0.10644596661905317301),
            Complex(0, 0.48571221409126403909), Complex(0.25698329627163192099, -0.30763455310591906595);
    } else {
        throw ValidationError("SIC states are available for d = 2, 3, 4 only, got d = " + std::to_string(d));
    }
    return v / v.norm();
}

}  // namespace

DensityMatrix::DensityMatrix(const HermitianOperator &op, bool repair, const StateTolerances &tol) : op_(op) {
    if (op.dim() < 1) {
        throw ValidationError("density matrix: empty operator");
    }
    if (repair) {
        auto e = eig_hermitian(op_);
        RealVector lam = e.values.cwiseMax(0.0);
        double s = lam.sum();
        if (s <= 0) {
            throw ValidationError("density matrix: cannot repair an operator with no positive part");
        }
        lam /= s;
        op_ = HermitianOperator(e.vectors * lam.cast<Complex>().asDiagonal() * e.vectors.adjoint());
    }
    if (std::abs(op_.trace() - 1) > tol.trace) {
        throw ValidationError("density matrix: trace " + std::to_string(op_.trace()) + " differs from 1");
    }
    double lmin = min_eigenvalue(op_);
    if (lmin < -tol.psd) {
        throw ValidationError("density matrix: negative eigenvalue " + std::to_string(lmin));
    }
}

DensityMatrix DensityMatrix::pure(const ComplexVector &psi) {
    double n = psi.norm();
    if (!(n > 0) || !std::isfinite(n)) {
        throw ValidationError("pure state: zero or non-finite vector");
    }
    return DensityMatrix(HermitianOperator::projector(psi / n));
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
    return DensityMatrix(HermitianOperator::identity(d) * (1.0 / d));
}

double DensityMatrix::purity() const {
    return op_.inner(op_);
}

StateSet::StateSet(std::vector<DensityMatrix> states, std::vector<std::string> labels)
    : states_(std::move(states)), labels_(std::move(labels)) {
    if (states_.empty()) {
        throw ValidationError("state set: at least one state required");
    }
    if (labels_.size() != states_.size()) {
        throw ValidationError("state set: one label per state required");
    }
    for (const auto &s : states_) {
        if (s.dim() != states_.front().dim()) {
            throw ValidationError("state set: states have different dimensions");
        }
    }
}

const DensityMatrix &StateSet::state(int x) const {
    if (x < 0 || x >= size()) {
        throw ValidationError("state index " + std::to_string(x) + " out of range");
    }
    return states_[x];
}

Povm::Povm(std::vector<HermitianOperator> effects, const StateTolerances &tol) : effects_(std::move(effects)) {
    if (effects_.empty()) {
        throw ValidationError("POVM: no effects");
    }
    int d = effects_.front().dim();
    HermitianOperator sum = HermitianOperator::zero(d);
    for (size_t b = 0; b < effects_.size(); b++) {
        if (effects_[b].dim() != d) {
            throw ValidationError("POVM: effects have different dimensions");
        }
        double lmin = min_eigenvalue(effects_[b]);
        if (lmin < -tol.psd) {
            throw ValidationError("POVM: effect " + std::to_string(b) + " has negative eigenvalue " +
                                  std::to_string(lmin));
        }
        sum += effects_[b];
    }
    double dev = (sum.matrix() - ComplexMatrix::Identity(d, d)).norm();
    if (dev > tol.povm_sum) {
        throw ValidationError("POVM: effects sum to identity only within " + std::to_string(dev));
    }
}

Povm Povm::from_basis(const ComplexMatrix &u) {
    std::vector<HermitianOperator> effects;
    for (Eigen::Index k = 0; k < u.cols(); k++) {
        effects.push_back(HermitianOperator::projector(u.col(k)));
    }
    return Povm(std::move(effects));
}

bool Povm::is_rank_one_projective(double tol) const {
    if (size() != dim()) {
        return false;
    }
    for (const auto &e : effects_) {
        if ((e.matrix() * e.matrix() - e.matrix()).norm() > tol || std::abs(e.trace() - 1) > tol) {
            return false;
        }
    }
    return true;
}

ComplexMatrix Povm::basis() const {
    if (!is_rank_one_projective()) {
        throw ValidationError("POVM is not a rank-one projective measurement");
    }
    int d = dim();
    ComplexMatrix u(d, d);
    for (int k = 0; k < d; k++) {
        auto e = eig_hermitian(effects_[k]);
        u.col(k) = e.vectors.col(d - 1);
    }
    return u;
}

NoiseSpec::NoiseSpec(double v) : visibility(v) {
    if (!(v >= 0 && v <= 1)) {
        throw ValidationError("visibility must lie in [0, 1], got " + std::to_string(v));
    }
}

StateSet apply_isotropic_noise(const StateSet &set, NoiseSpec noise) {
    int d = set.dim();
    double v = noise.visibility;
    std::vector<DensityMatrix> out;
    for (const auto &s : set.states()) {
        out.emplace_back(v * s.op() + ((1 - v) / d) * HermitianOperator::identity(d));
    }
    return StateSet(std::move(out), set.labels());
}

StateSet gen_bb84() {
    double h = 1 / std::sqrt(2.0);
    std::vector<DensityMatrix> states;
    states.push_back(DensityMatrix::pure(ComplexVector::Unit(2, 0)));
    states.push_back(DensityMatrix::pure(ComplexVector::Unit(2, 1)));
    ComplexVector plus(2), minus(2);
    plus << h, h;
    minus << h, -h;
    states.push_back(DensityMatrix::pure(plus));
    states.push_back(DensityMatrix::pure(minus));
    return StateSet(std::move(states), {"0", "1", "+", "−"});
}

std::vector<ComplexMatrix> mub_unitaries(int d) {
    std::vector<ComplexMatrix> bases;
    bases.push_back(ComplexMatrix::Identity(d, d));
    if (d == 2) {
        double h = 1 / std::sqrt(2.0);
        ComplexMatrix x(2, 2), y(2, 2);
        x << h, h, h, -h;
        y << h, h, Complex(0, h), Complex(0, -h);
        bases.push_back(x);
        bases.push_back(y);
    } else if (d == 4) {
        for (int j = 1; j <= 4; j++) {
            bases.push_back(mub4(j));
        }
    } else if (is_prime(d)) {
        double norm = 1 / std::sqrt(double(d));
        for (int j = 1; j <= d; j++) {
            ComplexMatrix u(d, d);
            for (int k = 0; k < d; k++) {
                for (int l = 0; l < d; l++) {
                    long e = (static_cast<long>(j) * l * l + static_cast<long>(k) * l) % d;
                    u(l, k) = std::polar(norm, 2 * kPi * e / d);
                }
            }
            bases.push_back(u);
        }
    } else {
        throw ValidationError("mutually unbiased bases are available for prime d and d = 4, got d = " +
                              std::to_string(d));
    }
    check_mub(bases);
    return bases;
}

std::vector<Povm> gen_mub_bases(int d) {
    std::vector<Povm> out;
    for (const auto &u : mub_unitaries(d)) {
        out.push_back(Povm::from_basis(u));
    }
    return out;
}

StateSet gen_mub_states(int d, int n) {
    auto bases = mub_unitaries(d);
    if (n < 1 || n > static_cast<int>(bases.size())) {
        throw ValidationError("number of bases must lie in [1, " + std::to_string(bases.size()) + "]");
    }
    std::vector<DensityMatrix> states;
    std::vector<std::string> labels;
    for (int j = 0; j < n; j++) {
        for (int k = 0; k < d; k++) {
            states.push_back(DensityMatrix::pure(bases[j].col(k)));
            labels.push_back("(" + std::to_string(j + 1) + "," + std::to_string(k + 1) + ")");
        }
    }
    return StateSet(std::move(states), std::move(labels));
}

StateSet gen_sic(int d) {
    ComplexVector fid = sic_fiducial(d);
    std::vector<ComplexVector> vecs;
    std::vector<std::string> labels;
    for (int a = 0; a < d; a++) {
        for (int b = 0; b < d; b++) {
            // (X^a Z^b v)_k = omega^{b (k - a)} v_{k - a}
            ComplexVector w(d);
            for (int k = 0; k < d; k++) {
                int src = ((k - a) % d + d) % d;
                w(k) = std::polar(1.0, 2 * kPi * b * src / d) * fid(src);
            }
            vecs.push_back(w);
            labels.push_back("(" + std::to_string(a) + "," + std::to_string(b) + ")");
        }
    }
    for (size_t i = 0; i < vecs.size(); i++) {
        for (size_t j = 0; j < i; j++) {
            double ov = std::norm(vecs[i].dot(vecs[j]));
            if (std::abs(ov - 1.0 / (d + 1)) > 1e-9) {
                throw ValidationError("SIC fiducial table: overlap " + std::to_string(ov) + " differs from 1/(d+1)");
            }
        }
    }
    std::vector<DensityMatrix> states;
    for (const auto &v : vecs) {
        states.push_back(DensityMatrix::pure(v));
    }
    return StateSet(std::move(states), std::move(labels));
}

StateSet gen_pair_maxcoherent() {
    std::vector<DensityMatrix> states;
    states.push_back(DensityMatrix::pure(ComplexVector::Unit(3, 0)));
    states.push_back(DensityMatrix::pure(ComplexVector::Ones(3)));
    return StateSet(std::move(states), {"0", "+"});
}

StateSet extend_set(const StateSet &set) {
    int d = set.dim();
    if (d < 2) {
        throw ValidationError("extended set requires d >= 2");
    }
    std::vector<DensityMatrix> states = set.states();
    std::vector<std::string> labels = set.labels();
    for (int x = 0; x < set.size(); x++) {
        states.emplace_back((HermitianOperator::identity(d) - set.state(x).op()) * (1.0 / (d - 1)));
        labels.push_back(set.label(x) + kPrime);
    }
    return StateSet(std::move(states), std::move(labels));
}

}  // namespace ocsim

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

#include "gtest/gtest.h"
#include "ocsim/error.hpp"
#include "ocsim/analytic.hpp"
#include "ocsim/simulation.hpp"

using namespace ocsim;

namespace {

ComplexMatrix pauli(int k) {
    ComplexMatrix m(2, 2);
    if (k == 0) {
        m << 0, 1, 1, 0;
    } else if (k == 1) {
        m << 0, Complex(0, -1), Complex(0, 1), 0;
    } else {
        m << 1, 0, 0, -1;
    }
    return m;
}

Povm basis_of_pauli(int k) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(pauli(k));
    ComplexMatrix u(2, 2);
    u.col(0) = es.eigenvectors().col(1);
    u.col(1) = es.eigenvectors().col(0);
    return Povm::from_basis(u);
}

/// Pure qubit state with the given Bloch vector.
DensityMatrix bloch_state(double x, double y, double z) {
    ComplexMatrix m = 0.5 * (ComplexMatrix::Identity(2, 2) + x * pauli(0) + y * pauli(1) + z * pauli(2));
    return DensityMatrix(HermitianOperator(m));
}

StateSet pauli_states(int count) {
    std::vector<DensityMatrix> s = {bloch_state(0, 0, 1), bloch_state(1, 0, 0), bloch_state(0, 1, 0)};
    std::vector<std::string> labels = {"z", "x", "y"};
    s.erase(s.begin() + count, s.end());
    labels.resize(count);
    return StateSet(s, labels);
}

double max_entry(const ComplexMatrix &a) {
    return a.cwiseAbs().maxCoeff();
}

/// Sign-pattern enumeration with Eigen's eigensolver: max_gamma lambda_max(sum_x gamma_x sum_y s_xy B_y).
double brute_zeta(const RealMatrix &s, const std::vector<Povm> &bob) {
    int m = static_cast<int>(s.rows());
    double best = -INFINITY;
    for (int a = 0; a < (1 << m); a++) {
        ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
        for (int x = 0; x < m; x++) {
            double g = (a >> x) & 1 ? -1 : 1;
            for (int y = 0; y < s.cols(); y++) {
                sum += g * s(x, y) * (bob[y].effect(0).matrix() - bob[y].effect(1).matrix());
            }
        }
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sum);
        best = std::max(best, es.eigenvalues()(1));
    }
    return best;
}

ClassicalModel random_model(int d, int devices, int states, bool full, std::uint64_t seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> u(0.05, 1);
    std::vector<Device> devs;
    std::vector<double> w;
    Conditionals cond;
    double total = 0;
    for (int l = 0; l < devices; l++) {
        int r = full ? d : 1 + l % d;
        std::vector<int> subset;
        for (int k = 0; k < r; k++) {
            subset.push_back((k + l) % d);
        }
        std::sort(subset.begin(), subset.end());
        devs.emplace_back(sample_haar_unitary(d, rng), subset);
        w.push_back(u(rng));
        total += w.back();
        std::vector<std::vector<double>> rows;
        for (int x = 0; x < states; x++) {
            std::vector<double> row(r);
            double s = 0;
            for (auto &p : row) {
                s += p = u(rng);
            }
            for (auto &p : row) {
                p /= s;
            }
            rows.push_back(row);
        }
        cond.push_back(rows);
    }
    for (auto &x : w) {
        x /= total;
    }
    return ClassicalModel(devs, w, cond);
}

}  // namespace

TEST(steering, validation) {
    RealMatrix s = RealMatrix::Identity(2, 2);
    EXPECT_THROW(SteeringInequality(s, {basis_of_pauli(2)}), ValidationError);
    EXPECT_THROW(SteeringInequality(s, {basis_of_pauli(2), gen_mub_bases(3)[0]}), ValidationError);
    Povm noisy({HermitianOperator(0.5 * ComplexMatrix::Identity(2, 2)),
                HermitianOperator(0.5 * ComplexMatrix::Identity(2, 2))});
    EXPECT_THROW(SteeringInequality(s, {basis_of_pauli(2), noisy}), ValidationError);
}

TEST(steering, zx_inequality) {
    SteeringInequality ineq(RealMatrix::Identity(2, 2), {basis_of_pauli(2), basis_of_pauli(0)});
    auto [w, bound] = steering_to_witness(ineq);
    EXPECT_NEAR(bound.beta, std::sqrt(2.0), 1e-12);
    StateSet zx = pauli_states(2);
    EXPECT_NEAR(evaluate(w, zx), 2, 1e-12);
    EXPECT_NEAR(critical_visibility(w, zx, bound.beta), 1 / std::sqrt(2.0), 1e-9);
}

TEST(steering, random_inequalities_against_enumeration) {
    Rng rng(5);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 10; rep++) {
        int m = 2 + rep % 4, n = 1 + rep % 3;
        RealMatrix s(m, n);
        for (int i = 0; i < m; i++) {
            for (int j = 0; j < n; j++) {
                s(i, j) = g(rng);
            }
        }
        std::vector<Povm> bob;
        for (int y = 0; y < n; y++) {
            bob.push_back(Povm::from_basis(sample_haar_unitary(2, rng)));
        }
        auto [w, bound] = steering_to_witness(SteeringInequality(s, bob));
        EXPECT_NEAR(bound.beta, brute_zeta(s, bob), 1e-10);
        auto sdp = classical_bound(w);
        EXPECT_NEAR(sdp.beta, bound.beta, 1e-6);
    }
}

TEST(steering, extend_model_identities) {
    for (int d = 2; d <= 4; d++) {
        auto model = random_model(d, 5, 3, false, 10 + d);
        auto ext = extend_model(model);
        ASSERT_EQ(ext.num_states(), 6);
        EXPECT_EQ(ext.complexity(), d);
        for (int x = 0; x < 3; x++) {
            ComplexMatrix rho = reconstruct(model, x).matrix();
            EXPECT_LE(max_entry(reconstruct(ext, x).matrix() - rho), 1e-12);
            ComplexMatrix expect = (ComplexMatrix::Identity(d, d) - rho) / (d - 1);
            EXPECT_LE(max_entry(reconstruct(ext, 3 + x).matrix() - expect), 1e-12);
        }
    }
    // |0> from a single Z device maps to |1>.
    ClassicalModel zero({Device(ComplexMatrix::Identity(2, 2))}, {1.0}, {{{1.0, 0.0}}});
    EXPECT_LE(max_entry(reconstruct(extend_model(zero), 1).matrix() - bloch_state(0, 0, -1).matrix()), 1e-15);
    // The maximally mixed state is a fixed point.
    ClassicalModel mixed({Device(ComplexMatrix::Identity(3, 3))}, {1.0}, {{{1.0 / 3, 1.0 / 3, 1.0 / 3}}});
    EXPECT_LE(max_entry(reconstruct(extend_model(mixed), 1).matrix() - ComplexMatrix::Identity(3, 3) / 3), 1e-15);
    ClassicalModel trivial({Device(ComplexMatrix::Identity(1, 1))}, {1.0}, {{{1.0}}});
    EXPECT_THROW(extend_model(trivial), ValidationError);
}

TEST(steering, complete_bases_keeps_states) {
    auto model = random_model(3, 4, 2, false, 3);
    auto full = complete_bases(model);
    for (const auto &dev : full.devices()) {
        EXPECT_EQ(dev.rank(), 3);
    }
    for (int x = 0; x < 2; x++) {
        EXPECT_LE(max_entry(reconstruct(full, x).matrix() - reconstruct(model, x).matrix()), 1e-14);
    }
}

TEST(steering, parent_from_model_round_trip) {
    for (int d = 2; d <= 4; d++) {
        auto model = random_model(d, 4, 5, true, 20 + d);
        auto parent = parent_from_model(model);
        EXPECT_EQ(parent.num_outcomes(), 4 * d);
        ComplexMatrix sum = ComplexMatrix::Zero(d, d);
        for (const auto &g : parent.effects) {
            sum += g.matrix();
            EXPECT_GE(Eigen::SelfAdjointEigenSolver<ComplexMatrix>(g.matrix()).eigenvalues()(0), -1e-12);
        }
        EXPECT_LE(max_entry(sum - ComplexMatrix::Identity(d, d)), 1e-9);
        for (int x = 0; x < 5; x++) {
            EXPECT_LE(max_entry(parent.marginal(x).matrix() - reconstruct(model, x).matrix()), 1e-9);
        }
    }
    EXPECT_EQ(parent_from_model(random_model(2, 1, 1, true, 1)).labels[1], "(2,1)");
    EXPECT_THROW(parent_from_model(random_model(3, 4, 2, false, 3)), ValidationError);
}

TEST(steering, parent_validation) {
    auto id = HermitianOperator::identity(2);
    EXPECT_THROW(ParentMeasurement({0.5 * id}, {}, {{1.0}}), ValidationError);
    EXPECT_THROW(ParentMeasurement({id}, {}, {{1.5}}), ValidationError);
    EXPECT_THROW(ParentMeasurement({id}, {}, {{1.0, 0.0}}), ValidationError);
    EXPECT_THROW(ParentMeasurement({2.0 * id, -1.0 * id}, {}, {{1.0, 0.0}}), ValidationError);
    EXPECT_NO_THROW(ParentMeasurement({id}, {}, {{1.0}}));
}

TEST(steering, qubit_model_from_random_parent) {
    for (int rep = 0; rep < 6; rep++) {
        auto model = random_model(2, 3 + rep, 4, true, 40 + rep);
        auto parent = parent_from_model(model);
        auto q = qubit_model_from_parent(parent);
        EXPECT_EQ(q.route, QubitRoute::centered);
        EXPECT_EQ(q.model.complexity(), 2);
        for (int x = 0; x < 4; x++) {
            EXPECT_LE(max_entry(reconstruct(q.model, x).matrix() - reconstruct(model, x).matrix()), 1e-9);
        }
    }
}

TEST(steering, qubit_routes) {
    // p0 = 1/2 everywhere: the direct route, every marginal I/2.
    auto id = HermitianOperator::identity(2);
    HermitianOperator up(0.5 * (ComplexMatrix::Identity(2, 2) + pauli(0)));
    ParentMeasurement half({0.5 * up, id - 0.5 * up, 0.0 * id}, {}, {{0.5, 0.5, 0.9}});
    auto q = qubit_model_from_parent(half);
    EXPECT_EQ(q.route, QubitRoute::complement);
    ParentMeasurement flat({0.5 * up, id - 0.5 * up}, {}, {{0.5, 0.5}});
    q = qubit_model_from_parent(flat);
    EXPECT_EQ(q.route, QubitRoute::direct);
    EXPECT_LE(max_entry(reconstruct(q.model, 0).matrix() - 0.5 * ComplexMatrix::Identity(2, 2)), 1e-12);
    // Marginals that are not states.
    ParentMeasurement bad({up, id - up}, {}, {{1.0, 1.0}});
    EXPECT_THROW(qubit_model_from_parent(bad), ValidationError);
}

TEST(steering, bloch_decompose) {
    HermitianOperator g(0.3 * (ComplexMatrix::Identity(2, 2) + 0.6 * pauli(1)));
    auto b = bloch_decompose(g);
    EXPECT_NEAR(b.p, 0.3, 1e-15);
    EXPECT_NEAR(b.eta, 0.6, 1e-15);
    EXPECT_NEAR(b.n.y(), 1, 1e-15);
    EXPECT_THROW(bloch_decompose(HermitianOperator(0.5 * ComplexMatrix::Identity(2, 2) + pauli(2))), ValidationError);
}

TEST(steering, busch_threshold) {
    auto t = jm_threshold(pauli_states(2));
    EXPECT_NEAR(t.v, 1 / std::sqrt(2.0), 1e-4);
    EXPECT_LE(t.hi - t.lo, 1e-4);
    // Three orthogonal unbiased qubit observables.
    auto t3 = jm_threshold(pauli_states(3));
    EXPECT_NEAR(t3.v, 1 / std::sqrt(3.0), 1e-4);
}

TEST(steering, jm_parent_is_certified_and_gives_qubit_model) {
    StateSet zx = pauli_states(2);
    double v = 0.7;
    auto r = jm_binarized_check(zx, v);
    ASSERT_TRUE(r.feasible);
    ASSERT_EQ(r.parent.size(), 4u);
    std::vector<HermitianOperator> effects;
    std::vector<std::vector<double>> p0(2);
    for (int a = 0; a < 4; a++) {
        effects.push_back(r.parent[a]);
        for (int x = 0; x < 2; x++) {
            p0[x].push_back(((a >> (1 - x)) & 1) ? 0.0 : 1.0);
        }
    }
    ParentMeasurement parent(effects, {}, p0, 1e-7);
    auto noisy = apply_isotropic_noise(zx, NoiseSpec(v));
    for (int x = 0; x < 2; x++) {
        EXPECT_LE(max_entry(parent.marginal(x).matrix() - noisy.state(x).matrix()), 1e-7);
    }
    auto q = qubit_model_from_parent(parent, 1e-7);
    EXPECT_EQ(q.route, QubitRoute::centered);
    EXPECT_LE(reconstruction_residual(q.model, zx, v), 1e-7);
    EXPECT_FALSE(jm_binarized_check(zx, 0.75).feasible);
}

TEST(steering, lp_models_imply_joint_measurability) {
    StateSet bb84 = gen_bb84();
    auto sim = simulate(bb84, bb84_two_device_model().devices());
    ASSERT_NEAR(sim.visibility, 1 / std::sqrt(2.0), 1e-9);
    EXPECT_TRUE(jm_binarized_feasible(bb84, sim.visibility));
    // The LP model itself is a parent.
    auto parent = parent_from_model(complete_bases(sim.model));
    auto noisy = apply_isotropic_noise(bb84, NoiseSpec(sim.visibility));
    for (int x = 0; x < 4; x++) {
        EXPECT_LE(max_entry(parent.marginal(x).matrix() - noisy.state(x).matrix()), 1e-9);
    }

    StateSet mub = gen_mub_states(3, 2);
    auto b3 = gen_mub_bases(3);
    auto sim3 = simulate(mub, bases_device_family({b3[0], b3[1]}, 3));
    EXPECT_GE(sim3.visibility, 0.5 - 1e-9);
    EXPECT_TRUE(jm_binarized_feasible(mub, sim3.visibility));
}

TEST(steering, jm_validation) {
    EXPECT_THROW(jm_binarized_feasible(pauli_states(2), 1.5), ValidationError);
    std::vector<DensityMatrix> many(13, bloch_state(0, 0, 1));
    EXPECT_THROW(jm_binarized_feasible(StateSet(many, std::vector<std::string>(13, "z")), 0.5), SizingError);
}

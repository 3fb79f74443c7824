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

#include "gtest/gtest.h"
#include "ocsim/error.hpp"

using namespace ocsim;

namespace {

void expect_valid(const StateSet &s) {
    for (const auto &rho : s.states()) {
        EXPECT_NEAR(rho.op().trace(), 1, 1e-10);
        EXPECT_GE(min_eigenvalue(rho.op()), -1e-10);
    }
}

double overlap(const DensityMatrix &a, const DensityMatrix &b) {
    return a.op().inner(b.op());
}

}  // namespace

TEST(states, density_matrix_validation) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 1.1;
    m(1, 1) = -0.1;
    EXPECT_THROW(DensityMatrix(HermitianOperator(m)), ValidationError);
    DensityMatrix repaired(HermitianOperator(m), true);
    EXPECT_NEAR(repaired.matrix()(0, 0).real(), 1, 1e-14);
    m(0, 0) = 0.5;
    m(1, 1) = 0.4;
    EXPECT_THROW(DensityMatrix(HermitianOperator(m)), ValidationError);
    EXPECT_THROW(DensityMatrix::pure(ComplexVector::Zero(2)), ValidationError);
}

TEST(states, povm_validation) {
    EXPECT_NO_THROW(Povm::from_basis(ComplexMatrix::Identity(3, 3)));
    std::vector<HermitianOperator> bad = {HermitianOperator::identity(2), HermitianOperator::identity(2)};
    EXPECT_THROW(Povm{bad}, ValidationError);
    Povm trivial({HermitianOperator::identity(2)});
    EXPECT_FALSE(trivial.is_rank_one_projective());
}

TEST(states, noise_examples) {
    auto bb = gen_bb84();
    auto same = apply_isotropic_noise(bb, NoiseSpec(1));
    for (int x = 0; x < 4; x++) {
        EXPECT_LE((same.state(x).matrix() - bb.state(x).matrix()).norm(), 1e-15);
    }
    auto mixed = apply_isotropic_noise(bb, NoiseSpec(0));
    for (int x = 0; x < 4; x++) {
        EXPECT_LE((mixed.state(x).matrix() - 0.5 * ComplexMatrix::Identity(2, 2)).norm(), 1e-15);
    }
    double v = 1 / std::sqrt(2.0);
    auto noisy = apply_isotropic_noise(bb, NoiseSpec(v));
    EXPECT_NEAR(noisy.state(0).matrix()(0, 0).real(), (1 + v) / 2, 1e-15);
    EXPECT_NEAR(noisy.state(0).matrix()(1, 1).real(), (1 - v) / 2, 1e-15);
    EXPECT_THROW(NoiseSpec(1.5), ValidationError);
    EXPECT_THROW(NoiseSpec(-0.1), ValidationError);
}

TEST(states, bb84) {
    auto s = gen_bb84();
    EXPECT_EQ(s.size(), 4);
    EXPECT_EQ(s.dim(), 2);
    EXPECT_EQ(s.label(3), "−");
    EXPECT_NEAR(overlap(s.state(0), s.state(2)), 0.5, 1e-15);
    for (const auto &r : s.states()) {
        EXPECT_TRUE(r.is_pure());
    }
}

TEST(states, mub_overlaps) {
    for (int d : {2, 3, 4, 5, 7}) {
        auto bases = gen_mub_bases(d);
        ASSERT_EQ(static_cast<int>(bases.size()), d + 1);
        for (size_t a = 0; a < bases.size(); a++) {
            EXPECT_TRUE(bases[a].is_rank_one_projective());
            for (size_t b = 0; b < a; b++) {
                for (int i = 0; i < d; i++) {
                    for (int j = 0; j < d; j++) {
                        EXPECT_NEAR(bases[a].effect(i).inner(bases[b].effect(j)), 1.0 / d, 1e-10);
                    }
                }
            }
        }
    }
    EXPECT_THROW(gen_mub_bases(6), ValidationError);
    EXPECT_THROW(gen_mub_bases(1), ValidationError);
}

TEST(states, mub_states) {
    auto s = gen_mub_states(3, 2);
    EXPECT_EQ(s.size(), 6);
    EXPECT_EQ(s.label(0), "(1,1)");
    EXPECT_EQ(s.label(5), "(2,3)");
    EXPECT_EQ(gen_mub_states(3, 4).size(), 12);
    EXPECT_THROW(gen_mub_states(3, 5), ValidationError);
    // d = 2, two bases: the BB84 states in the same order.
    auto q = gen_mub_states(2, 2);
    auto bb = gen_bb84();
    for (int x = 0; x < 4; x++) {
        EXPECT_LE((q.state(x).matrix() - bb.state(x).matrix()).norm(), 1e-15);
    }
}

TEST(states, sic_overlaps) {
    for (int d : {2, 3, 4}) {
        auto s = gen_sic(d);
        ASSERT_EQ(s.size(), d * d);
        for (int i = 0; i < s.size(); i++) {
            EXPECT_TRUE(s.state(i).is_pure());
            for (int j = 0; j < i; j++) {
                EXPECT_NEAR(overlap(s.state(i), s.state(j)), 1.0 / (d + 1), 1e-9);
            }
        }
    }
    EXPECT_THROW(gen_sic(5), ValidationError);
}

TEST(states, sic_qubit_is_tetrahedron) {
    // Bloch vectors of a qubit SIC sum to zero and have pairwise dot product -1/3.
    auto s = gen_sic(2);
    double sum[3] = {0, 0, 0};
    for (const auto &r : s.states()) {
        sum[0] += 2 * r.matrix()(0, 1).real();
        sum[1] += -2 * r.matrix()(0, 1).imag();
        sum[2] += (r.matrix()(0, 0) - r.matrix()(1, 1)).real();
    }
    for (double c : sum) {
        EXPECT_NEAR(c, 0, 1e-12);
    }
}

TEST(states, pair) {
    auto s = gen_pair_maxcoherent();
    EXPECT_EQ(s.size(), 2);
    EXPECT_EQ(s.dim(), 3);
    EXPECT_NEAR(overlap(s.state(0), s.state(1)), 1.0 / 3, 1e-15);
    EXPECT_TRUE(s.state(0).is_pure());
    EXPECT_TRUE(s.state(1).is_pure());
}

TEST(states, extend_set) {
    StateSet one({DensityMatrix::pure(ComplexVector::Unit(2, 0))}, {"0"});
    auto e = extend_set(one);
    ASSERT_EQ(e.size(), 2);
    EXPECT_NEAR(e.state(1).matrix()(1, 1).real(), 1, 1e-15);
    EXPECT_EQ(e.label(1), "0′");
    StateSet three({DensityMatrix::pure(ComplexVector::Unit(3, 0))}, {"0"});
    auto e3 = extend_set(three);
    EXPECT_NEAR(e3.state(1).matrix()(1, 1).real(), 0.5, 1e-15);
    EXPECT_NEAR(e3.state(1).matrix()(2, 2).real(), 0.5, 1e-15);
    EXPECT_EQ(extend_set(gen_mub_states(3, 2)).size(), 12);
    StateSet trivial({DensityMatrix::maximally_mixed(1)}, {"x"});
    EXPECT_THROW(extend_set(trivial), ValidationError);
}

TEST(states, noise_then_extend_stays_valid) {
    for (int d : {2, 3, 4}) {
        for (int n = 1; n <= d + 1; n++) {
            for (double v : {0.0, 0.5, 1.0}) {
                expect_valid(extend_set(apply_isotropic_noise(gen_mub_states(d, n), NoiseSpec(v))));
            }
        }
    }
}

TEST(states, set_validation) {
    EXPECT_THROW(StateSet({}, {}), ValidationError);
    EXPECT_THROW(StateSet({DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(3)}, {"a", "b"}),
                 ValidationError);
    EXPECT_THROW(StateSet({DensityMatrix::maximally_mixed(2)}, {}), ValidationError);
    EXPECT_THROW(gen_bb84().state(4), ValidationError);
}

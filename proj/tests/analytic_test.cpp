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

#include "ocsim/analytic.hpp"

#include <cmath>

#include "gtest/gtest.h"
#include "ocsim/error.hpp"

using namespace ocsim;

TEST(analytic, harmonic) {
    EXPECT_EQ(harmonic(1), 1);
    EXPECT_NEAR(harmonic(3), 11.0 / 6, 1e-15);
    EXPECT_NEAR(harmonic(4), 25.0 / 12, 1e-15);
    EXPECT_THROW(harmonic(0), ValidationError);
}

TEST(analytic, result1_values) {
    EXPECT_NEAR(bound_result1(2, 2).v, 0.5, 1e-15);
    EXPECT_NEAR(bound_result1(3, 3).v, 5.0 / 12, 1e-15);
    EXPECT_NEAR(bound_result1(4, 4).v, 13.0 / 36, 1e-15);
    EXPECT_NEAR(bound_result1(5, 1).v, 0, 1e-15);
    EXPECT_THROW(bound_result1(3, 4), ValidationError);
    EXPECT_THROW(bound_result1(1, 1), ValidationError);
}

TEST(analytic, result1_monotone) {
    for (int d = 2; d <= 10; d++) {
        for (int r = 2; r <= d; r++) {
            EXPECT_GE(bound_result1(d, r).v, bound_result1(d, r - 1).v);
        }
        if (d > 2) {
            EXPECT_LE(bound_result1(d, d).v, bound_result1(d - 1, d - 1).v);
        }
    }
}

TEST(analytic, subspace_values) {
    EXPECT_NEAR(bound_result1_subspace(4, 4, 4).v, bound_result1(4, 4).v, 1e-15);
    EXPECT_NEAR(bound_result1_subspace(4, 2, 2).v, 1.0 / 3, 1e-15);
    for (int d = 2; d <= 8; d++) {
        for (int r = 1; r <= d; r++) {
            for (int s = r; s <= d; s++) {
                EXPECT_GE(bound_result1_subspace(d, s, r).v, bound_result1(d, r).v - 1e-15);
            }
        }
    }
    EXPECT_THROW(bound_result1_subspace(4, 1, 2), ValidationError);
}

TEST(analytic, result3_values) {
    EXPECT_NEAR(bound_result3(3, 2, 3).v, 0.5, 1e-15);
    EXPECT_NEAR(bound_result3(3, 3, 3).v, 1.0 / 3, 1e-15);
    EXPECT_NEAR(bound_result3(3, 4, 3).v, 0.25, 1e-15);
    EXPECT_NEAR(bound_result3(5, 3, 1).v, 0, 1e-15);
    for (int d = 2; d <= 6; d++) {
        EXPECT_NEAR(bound_result3(d, 3, d).v, 1.0 / 3, 1e-15);
    }
    EXPECT_THROW(bound_result3(3, 0, 2), ValidationError);
}

TEST(analytic, bases_model_reconstructs) {
    for (int d : {2, 3, 4, 5}) {
        auto bases = gen_mub_bases(d);
        for (int M = 1; M <= d + 1; M++) {
            std::vector<Povm> first(bases.begin(), bases.begin() + M);
            auto set = gen_mub_states(d, M);
            for (int r = 1; r <= d; r++) {
                auto model = build_bases_model(first, r);
                EXPECT_EQ(model.num_devices(), M * static_cast<int>(combinations(d, r).size()));
                EXPECT_LE(reconstruction_residual(model, set, bound_result3(d, M, r).v), 1e-10);
            }
        }
    }
}

TEST(analytic, bases_model_random_bases) {
    // The construction does not need unbiasedness.
    Rng rng(5);
    std::vector<Povm> bases;
    std::vector<DensityMatrix> states;
    std::vector<std::string> labels;
    for (int j = 0; j < 3; j++) {
        ComplexMatrix u = sample_haar_unitary(3, rng);
        bases.push_back(Povm::from_basis(u));
        for (int i = 0; i < 3; i++) {
            states.push_back(DensityMatrix::pure(u.col(i)));
            labels.push_back(std::to_string(j) + std::to_string(i));
        }
    }
    StateSet set(states, labels);
    EXPECT_LE(reconstruction_residual(build_bases_model(bases, 2), set, bound_result3(3, 3, 2).v), 1e-10);
}

TEST(analytic, bases_model_bb84) {
    auto b = gen_mub_bases(2);
    auto model = build_bases_model({b[0], b[1]}, 2);
    EXPECT_LE(reconstruction_residual(model, gen_bb84(), 0.5), 1e-12);
    auto trivial = build_bases_model({b[0], b[1]}, 1);
    EXPECT_LE(reconstruction_residual(trivial, gen_bb84(), 0.0), 1e-12);
}

TEST(analytic, bases_model_validation) {
    Povm coarse({HermitianOperator::identity(2)});
    EXPECT_THROW(build_bases_model({coarse}, 1), ValidationError);
    EXPECT_THROW(build_bases_model({gen_mub_bases(2)[0]}, 3), ValidationError);
}

TEST(analytic, mc_low_rank_moment) {
    auto e = mc_mean_max_overlap(2, 1, 20000, 1);
    EXPECT_NEAR(e.estimate, 0.5, 3 * e.std_error);
}

TEST(analytic, mc_harmonic_mean) {
    for (int d = 2; d <= 5; d++) {
        for (int r = 1; r <= d; r++) {
            auto e = mc_mean_max_overlap(d, r, 100000, 1000 + 10 * d + r);
            EXPECT_NEAR(e.estimate, harmonic(r) / d, 4 * e.std_error) << "d=" << d << " r=" << r;
        }
    }
}

TEST(analytic, mc_thread_count_does_not_change_result) {
    auto a = mc_mean_max_overlap(3, 2, 5000, 9, 1);
    auto b = mc_mean_max_overlap(3, 2, 5000, 9, 3);
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.std_error, b.std_error);
    auto t = DensityMatrix::pure(ComplexVector::Unit(3, 0));
    EXPECT_EQ(mc_verify_result1(t, 3, 5000, 4, 1), mc_verify_result1(t, 3, 5000, 4, 4));
}

TEST(analytic, mc_verify_result1) {
    for (int d : {2, 3}) {
        auto t = DensityMatrix::pure(ComplexVector::Unit(d, 0));
        EXPECT_LE(mc_verify_result1(t, d, 100000, 77), 0.02);
    }
    ComplexVector psi(3);
    psi << 1, Complex(0, 1), -1;
    EXPECT_LE(mc_verify_result1(DensityMatrix::pure(psi), 2, 100000, 78), 0.02);
}

TEST(analytic, mc_verify_scaling) {
    // Quadrupling the sample count roughly halves the error; averaged over seeds to tame noise.
    auto t = DensityMatrix::pure(ComplexVector::Unit(2, 0));
    double small = 0, large = 0;
    for (int s = 0; s < 8; s++) {
        small += mc_verify_result1(t, 2, 4000, 100 + s);
        large += mc_verify_result1(t, 2, 16000, 200 + s);
    }
    EXPECT_LT(large / small, 0.75);
    EXPECT_GT(large / small, 0.3);
}

TEST(analytic, mc_verify_rejects_mixed_target) {
    EXPECT_THROW(mc_verify_result1(DensityMatrix::maximally_mixed(2), 2, 1000, 1), ValidationError);
}

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

#include "ocsim/witness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "gtest/gtest.h"
#include "json.hpp"
#include "ocsim/error.hpp"
#include "ocsim/simulation.hpp"

using namespace ocsim;

namespace {

Witness random_witness(int d, int m, int ny, Rng &rng) {
    std::vector<Povm> meas;
    for (int y = 0; y < ny; y++) {
        meas.push_back(Povm::from_basis(sample_haar_unitary(d, rng)));
    }
    std::normal_distribution<double> g;
    WitnessCoefficients c(d, std::vector<std::vector<double>>(m, std::vector<double>(ny)));
    for (auto &b : c) {
        for (auto &x : b) {
            for (auto &v : x) {
                v = g(rng);
            }
        }
    }
    return Witness(meas, c);
}

/// First-occurrence relabeling.
DeterministicStrategy canonical(const DeterministicStrategy &s, int d) {
    std::vector<int> map(d, -1);
    int next = 0;
    DeterministicStrategy out(s.size());
    for (size_t i = 0; i < s.size(); i++) {
        if (map[s[i]] < 0) {
            map[s[i]] = next++;
        }
        out[i] = map[s[i]];
    }
    return out;
}

}  // namespace

TEST(witness, validation) {
    auto z = gen_mub_bases(2)[0];
    EXPECT_THROW(Witness({}, {}), ValidationError);
    EXPECT_THROW(Witness({z}, {{{1}}}), ValidationError);
    EXPECT_THROW(Witness({z}, {{{1}}, {{1, 2}}}), ValidationError);
    EXPECT_THROW(Witness({z, gen_mub_bases(3)[0]}, {{{1, 1}}, {{1, 1}}, {{0, 0}}}), ValidationError);
    EXPECT_NO_THROW(Witness({z}, {{{1}}, {{0}}}));
}

TEST(witness, evaluate_mub_witness) {
    auto w = mub_witness(3, 2);
    auto target = gen_mub_states(3, 2);
    EXPECT_NEAR(evaluate(w, target), 6, 1e-12);
    EXPECT_NEAR(evaluate(w, apply_isotropic_noise(target, NoiseSpec(0.5))), 4, 1e-12);
    EXPECT_NEAR(evaluate(mub_witness(3, 4), gen_mub_states(3, 4)), 12, 1e-12);
    EXPECT_THROW(evaluate(w, gen_mub_states(3, 3)), ValidationError);
}

TEST(witness, evaluate_on_mixed_states) {
    Rng rng(4);
    auto w = random_witness(3, 4, 2, rng);
    StateSet mixed(std::vector<DensityMatrix>(4, DensityMatrix::maximally_mixed(3)), {"a", "b", "c", "d"});
    double expect = 0;
    for (int b = 0; b < 3; b++) {
        for (int x = 0; x < 4; x++) {
            for (int y = 0; y < 2; y++) {
                expect += w.c(b, x, y) * w.measurements()[y].effect(b).trace() / 3;
            }
        }
    }
    EXPECT_NEAR(evaluate(w, mixed), expect, 1e-12);
}

TEST(witness, reduced_operators) {
    auto w = mub_witness(3, 3);
    auto ops = reduced_operators(w);
    ASSERT_EQ(ops.size(), 9u);
    for (int j = 0; j < 3; j++) {
        for (int k = 0; k < 3; k++) {
            EXPECT_LE((ops[j * 3 + k] - w.measurements()[j].effect(k)).frobenius_norm(), 1e-15);
        }
    }
    auto z = gen_mub_bases(2)[0];
    auto one = reduced_operators(Witness({z}, {{{1}}, {{0}}}));
    EXPECT_LE((one[0] - z.effect(0)).frobenius_norm(), 1e-15);
    auto zero = reduced_operators(Witness({z}, {{{0}}, {{0}}}));
    EXPECT_EQ(zero[0].frobenius_norm(), 0);
}

TEST(witness, mub_witness_structure) {
    for (int n = 1; n <= 4; n++) {
        auto w = mub_witness(3, n);
        EXPECT_EQ(w.num_states(), 3 * n);
        int ones = 0, nonzero = 0;
        for (const auto &b : w.coefficients()) {
            for (const auto &x : b) {
                for (double v : x) {
                    ones += v == 1;
                    nonzero += v != 0;
                }
            }
        }
        EXPECT_EQ(ones, 3 * n);
        EXPECT_EQ(nonzero, 3 * n);
    }
    EXPECT_THROW(mub_witness(3, 5), ValidationError);
}

TEST(witness, enumeration_counts) {
    EXPECT_EQ(enumerate_strategies(2, 2, false).size(), 4u);
    EXPECT_EQ(enumerate_strategies(6, 3, false).size(), 729u);
    auto red = enumerate_strategies(2, 2, true);
    ASSERT_EQ(red.size(), 2u);
    EXPECT_EQ(red[0], (DeterministicStrategy{0, 0}));
    EXPECT_EQ(red[1], (DeterministicStrategy{0, 1}));
    EXPECT_EQ(strategy_count(6, 3, true), 122u);
    EXPECT_EQ(strategy_count(9, 3, true), 3281u);
    EXPECT_EQ(strategy_count(12, 3, true), 88574u);
    EXPECT_EQ(strategy_count(12, 3, false), 531441u);
    EXPECT_EQ(strategy_count(200, 3, false), UINT64_MAX);
}

TEST(witness, reduction_is_one_per_orbit) {
    for (int d = 1; d <= 4; d++) {
        for (int m = 1; m <= 6; m++) {
            auto full = enumerate_strategies(m, d, false);
            std::set<DeterministicStrategy> orbits;
            for (const auto &s : full) {
                orbits.insert(canonical(s, d));
            }
            auto red = enumerate_strategies(m, d, true);
            ASSERT_EQ(red.size(), orbits.size()) << "m=" << m << " d=" << d;
            EXPECT_EQ(std::set<DeterministicStrategy>(red.begin(), red.end()), orbits);
            EXPECT_TRUE(std::is_sorted(red.begin(), red.end()));
            EXPECT_TRUE(std::is_sorted(full.begin(), full.end()));
            EXPECT_EQ(red.size(), strategy_count(m, d, true));
        }
    }
}

TEST(witness, enumeration_cap) {
    EXPECT_THROW(enumerate_strategies(12, 3, false, 1000), SizingError);
    BoundSettings s;
    s.symmetry_reduce = false;
    s.cap = 100;
    EXPECT_THROW(classical_bound(mub_witness(3, 2), s), SizingError);
}

TEST(witness, strategy_sdp_small_cases) {
    auto z = gen_mub_bases(2)[0];
    EXPECT_NEAR(strategy_bound_sdp(Witness({z}, {{{1}}, {{0}}}), {0}), 1, 1e-8);
    EXPECT_NEAR(strategy_bound_sdp(Witness({z}, {{{0}}, {{0}}}), {0}), 0, 1e-8);
    EXPECT_THROW(strategy_bound_sdp(Witness({z}, {{{1}}, {{0}}}), {2}), ValidationError);
    EXPECT_THROW(strategy_bound_sdp(Witness({z}, {{{1}}, {{0}}}), {0, 0}), ValidationError);
}

TEST(witness, strategy_sdp_qubit_closed_form) {
    // For d = 2 the relaxation is exact: tr Q_2 + lambda_max(Q_1 - Q_2).
    Rng rng(8);
    for (int rep = 0; rep < 6; rep++) {
        auto w = random_witness(2, 3, 2, rng);
        auto ops = reduced_operators(w);
        for (const auto &g : enumerate_strategies(3, 2, false)) {
            HermitianOperator q[2] = {HermitianOperator::zero(2), HermitianOperator::zero(2)};
            for (int x = 0; x < 3; x++) {
                q[g[x]] += ops[x];
            }
            auto v = strategy_bound_sdp(ops, g);
            EXPECT_NEAR(v.value, q[1].trace() + max_eigenvalue(q[0] - q[1]), 1e-7);
            EXPECT_LE(v.gap, 1e-7);
        }
    }
}

TEST(witness, strategy_sdp_dominates_random_bases) {
    Rng rng(12);
    auto w = random_witness(3, 4, 2, rng);
    auto ops = reduced_operators(w);
    for (const auto &g : enumerate_strategies(4, 3, true)) {
        double bound = strategy_bound_sdp(ops, g).value;
        double best = -INFINITY;
        for (int t = 0; t < 200; t++) {
            ComplexMatrix u = sample_haar_unitary(3, rng);
            double v = 0;
            for (int x = 0; x < 4; x++) {
                ComplexVector phi = u.col(g[x]);
                v += (phi.adjoint() * ops[x].matrix() * phi)(0, 0).real();
            }
            best = std::max(best, v);
        }
        EXPECT_GE(bound, best - 1e-8);
    }
}

TEST(witness, relabeling_invariance) {
    Rng rng(21);
    auto w = random_witness(3, 5, 2, rng);
    auto ops = reduced_operators(w);
    DeterministicStrategy g{0, 1, 1, 2, 0};
    double base = strategy_bound_sdp(ops, g).value;
    std::vector<int> perm{0, 1, 2};
    while (std::next_permutation(perm.begin(), perm.end())) {
        DeterministicStrategy h(g.size());
        for (size_t x = 0; x < g.size(); x++) {
            h[x] = perm[g[x]];
        }
        EXPECT_NEAR(strategy_bound_sdp(ops, h).value, base, 2e-6);
    }
}

TEST(witness, qubit_exact_examples) {
    auto b = gen_mub_bases(2);
    auto r = qubit_exact_bound(RealMatrix::Identity(2, 2), {b[0], b[1]});
    EXPECT_NEAR(r.beta, std::sqrt(2.0), 1e-12);
    EXPECT_EQ(r.strategies, 4u);
    EXPECT_EQ(r.method, BoundMethod::qubit_exact);
    RealMatrix s = RealMatrix::Zero(3, 2);
    s(1, 0) = 1;
    EXPECT_NEAR(qubit_exact_bound(s, {b[0], b[1]}).beta, 1, 1e-12);
    EXPECT_THROW(qubit_exact_bound(s, {b[0]}), ValidationError);
    EXPECT_THROW(qubit_exact_bound(RealMatrix::Identity(3, 3), {gen_mub_bases(3)[0]}), ValidationError);
}

TEST(witness, qubit_exact_matches_sdp) {
    Rng rng(5);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 10; rep++) {
        std::vector<Povm> meas{Povm::from_basis(sample_haar_unitary(2, rng)),
                               Povm::from_basis(sample_haar_unitary(2, rng))};
        RealMatrix s(3, 2);
        for (int i = 0; i < 6; i++) {
            s(i) = g(rng);
        }
        auto exact = qubit_exact_bound(s, meas);
        auto sdp = classical_bound(sign_witness(s, meas));
        EXPECT_NEAR(sdp.beta, exact.beta, 1e-6);
    }
}

TEST(witness, mub_n2_bound) {
    auto w = mub_witness(3, 2);
    auto b = classical_bound(w);
    EXPECT_EQ(b.strategies, 122u);
    EXPECT_NEAR(b.beta, 4.6667, 1e-3);
    EXPECT_LE(b.max_gap, 1e-6);
    EXPECT_NEAR(critical_visibility(w, gen_mub_states(3, 2), b.beta), 2.0 / 3, 1e-3);
    BoundSettings full;
    full.symmetry_reduce = false;
    auto f = classical_bound(w, full);
    EXPECT_EQ(f.strategies, 729u);
    EXPECT_NEAR(f.beta, b.beta, 2e-6);
}

TEST(witness, thread_count_does_not_change_result) {
    Rng rng(30);
    auto w = random_witness(3, 5, 2, rng);
    BoundSettings one, many;
    one.threads = 1;
    many.threads = 3;
    many.checkpoint_every = 7;
    auto a = classical_bound(w, one);
    auto b = classical_bound(w, many);
    EXPECT_EQ(a.beta, b.beta);
    EXPECT_EQ(a.argmax, b.argmax);
    EXPECT_EQ(a.strategies, b.strategies);
}

TEST(witness, checkpoint_resume) {
    Rng rng(31);
    auto w = random_witness(3, 5, 2, rng);
    std::string path = ::testing::TempDir() + "ocsim_witness_ckpt.json";
    std::remove(path.c_str());
    BoundSettings s;
    s.keep_values = true;
    s.checkpoint_path = path;
    s.checkpoint_every = 10;
    auto full = classical_bound(w, s);
    ASSERT_EQ(full.values.size(), full.strategies);

    // Rewind the checkpoint to 20 strategies, as if the run had been interrupted there.
    nlohmann::json j;
    std::ifstream(path) >> j;
    std::vector<double> head(full.values.begin(), full.values.begin() + 20);
    size_t arg = std::max_element(head.begin(), head.end()) - head.begin();
    auto strategies = enumerate_strategies(5, 3, true);
    std::vector<int> argmax;
    for (int v : strategies[arg]) {
        argmax.push_back(v + 1);
    }
    j["next"] = 20;
    j["values"] = head;
    j["beta"] = head[arg];
    j["argmax"] = argmax;
    std::ofstream(path) << j.dump();

    auto resumed = classical_bound(w, s);
    EXPECT_EQ(resumed.resumed_from, 20u);
    EXPECT_EQ(resumed.strategies, full.strategies);
    EXPECT_EQ(resumed.beta, full.beta);
    EXPECT_EQ(resumed.argmax, full.argmax);
    EXPECT_EQ(resumed.values, full.values);

    // A checkpoint from another witness is refused.
    auto other = random_witness(3, 5, 2, rng);
    EXPECT_THROW(classical_bound(other, s), ValidationError);
    std::remove(path.c_str());
}

TEST(witness, constant_shift) {
    Rng rng(40);
    auto w = mub_witness(3, 2);
    std::uniform_real_distribution<double> u(-1, 1);
    auto c = w.coefficients();
    double shift = 0;
    for (int x = 0; x < 6; x++) {
        for (int y = 0; y < 2; y++) {
            double s = u(rng);
            shift += s;
            for (int b = 0; b < 3; b++) {
                c[b][x][y] += s;
            }
        }
    }
    Witness shifted(w.measurements(), c);
    auto target = gen_mub_states(3, 2);
    EXPECT_NEAR(evaluate(shifted, target), evaluate(w, target) + shift, 1e-12);
    EXPECT_NEAR(classical_bound(shifted).beta, classical_bound(w).beta + shift, 1e-6);
}

TEST(witness, simulated_sets_respect_bound) {
    auto w = mub_witness(3, 2);
    double beta = classical_bound(w).beta;
    auto set = gen_mub_states(3, 2);
    for (std::uint64_t seed : {1, 2}) {
        auto r = simulate(set, random_device_family(3, 3, 40, seed));
        auto noisy = apply_isotropic_noise(set, NoiseSpec(r.visibility));
        EXPECT_LE(evaluate(w, noisy), beta + 1e-5);
    }
}

TEST(witness, critical_visibility_range) {
    auto w = mub_witness(3, 2);
    auto t = gen_mub_states(3, 2);
    EXPECT_NEAR(critical_visibility(w, t, 6), 1, 1e-12);
    EXPECT_NEAR(critical_visibility(w, t, 4.6667), 0.6667, 1e-4);
    EXPECT_THROW(critical_visibility(w, t, 6.5), ValidationError);
    EXPECT_THROW(critical_visibility(w, t, 1), ValidationError);
}

TEST(witness, threads_from_environment) {
    setenv("OCSIM_THREADS", "3", 1);
    EXPECT_EQ(default_threads(), 3);
    setenv("OCSIM_THREADS", "zero", 1);
    EXPECT_THROW(default_threads(), ValidationError);
    unsetenv("OCSIM_THREADS");
    EXPECT_EQ(default_threads(), 1);
}

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

#include "ocsim/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gtest/gtest.h"
#include "ocsim/error.hpp"

using namespace ocsim;

namespace {

/// Brute-force optimum over all basic solutions of max c^T x, A x = b, x >= 0.
/// Valid when the feasible region is bounded and A has full row rank.
double vertex_enumeration_max(const RealMatrix &a, const RealVector &b, const RealVector &c) {
    int m = static_cast<int>(a.rows());
    int n = static_cast<int>(a.cols());
    double best = -INFINITY;
    for (const auto &cols : combinations(n, m)) {
        RealMatrix basis(m, m);
        for (int k = 0; k < m; k++) {
            basis.col(k) = a.col(cols[k]);
        }
        Eigen::FullPivLU<RealMatrix> lu(basis);
        if (!lu.isInvertible()) {
            continue;
        }
        RealVector xb = lu.solve(b);
        if (xb.minCoeff() < -1e-12) {
            continue;
        }
        double v = 0;
        for (int k = 0; k < m; k++) {
            v += c(cols[k]) * xb(k);
        }
        best = std::max(best, v);
    }
    return best;
}

/// Fills the constraint matrix row by row.
void set_a(LpProblem &p, std::initializer_list<double> vals) {
    RealMatrix a(p.rows(), p.cols());
    auto it = vals.begin();
    for (int i = 0; i < p.rows(); i++) {
        for (int j = 0; j < p.cols(); j++) {
            a(i, j) = *it++;
        }
    }
    p.a = a.sparseView();
}

}  // namespace

TEST(lp, single_bounded_variable) {
    auto p = LpProblem::with_shape(1, 1);
    p.c << 1;
    set_a(p, {1});
    p.b << 0.3;
    p.upper << 1;
    auto s = solve_lp(p);
    ASSERT_EQ(s.status, LpStatus::optimal);
    EXPECT_NEAR(s.objective, 0.3, 1e-12);
}

TEST(lp, one_equation_toy) {
    // v + (1 - v) / 2 = 0.75  <=>  v / 2 = 0.25
    auto p = LpProblem::with_shape(1, 1);
    p.c << 1;
    set_a(p, {0.5});
    p.b << 0.25;
    auto s = solve_lp(p);
    ASSERT_EQ(s.status, LpStatus::optimal);
    EXPECT_NEAR(s.x(0), 0.5, 1e-12);
}

TEST(lp, infeasible) {
    auto p = LpProblem::with_shape(2, 2);
    set_a(p, {1, 1, 1, 1});
    p.b << 1, 2;
    EXPECT_EQ(solve_lp(p).status, LpStatus::infeasible);
    auto q = LpProblem::with_shape(1, 1);
    set_a(q, {1});
    q.b << -1;
    EXPECT_EQ(solve_lp(q).status, LpStatus::infeasible);
}

TEST(lp, unbounded) {
    auto p = LpProblem::with_shape(1, 2);
    p.c << 1, 0;
    set_a(p, {1, -1});
    p.b << 1;
    EXPECT_EQ(solve_lp(p).status, LpStatus::unbounded);
}

TEST(lp, free_variable) {
    // max -x  s.t.  x - y = -3,  0 <= y <= 1, x free.  -x = 3 - y, so y = 0.
    auto p = LpProblem::with_shape(1, 2);
    p.c << -1, 0;
    set_a(p, {1, -1});
    p.b << -3;
    p.free_var[0] = true;
    p.upper(1) = 1;
    auto s = solve_lp(p);
    ASSERT_EQ(s.status, LpStatus::optimal);
    EXPECT_NEAR(s.x(0), -3, 1e-12);
    EXPECT_NEAR(s.objective, 3, 1e-12);
}

TEST(lp, redundant_rows) {
    auto p = LpProblem::with_shape(3, 3);
    p.c << 1, 2, 3;
    set_a(p, {1, 1, 1, 2, 2, 2, 1, 0, 0});
    p.b << 1, 2, 0.25;
    auto s = solve_lp(p);
    ASSERT_EQ(s.status, LpStatus::optimal);
    EXPECT_NEAR(s.objective, 0.25 + 3 * 0.75, 1e-10);
    EXPECT_LE(s.gap, 1e-9);
}

TEST(lp, beale_cycling_example) {
    // Cycles under textbook Dantzig pricing without anti-cycling.
    auto p = LpProblem::with_shape(3, 7);
    p.c << 0.75, -20, 0.5, -6, 0, 0, 0;
    set_a(p, {0.25, -8, -1, 9, 1, 0, 0,  //
        0.5, -12, -0.5, 3, 0, 1, 0,   //
        0, 0, 1, 0, 0, 0, 1});
    p.b << 0, 0, 1;
    LpSettings settings;
    settings.degenerate_limit = 1;
    auto s = solve_lp(p, settings);
    ASSERT_EQ(s.status, LpStatus::optimal);
    EXPECT_NEAR(s.objective, 1.25, 1e-10);
}

TEST(lp, random_against_vertex_enumeration) {
    Rng rng(31);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int rep = 0; rep < 40; rep++) {
        int m = 3, n = 7;
        RealMatrix a(m, n);
        for (int i = 0; i < m - 1; i++) {
            for (int j = 0; j < n; j++) {
                a(i, j) = u(rng);
            }
        }
        a.row(m - 1).setOnes();  // bounds the region
        RealVector x0(n);
        for (int j = 0; j < n; j++) {
            x0(j) = 0.5 * (u(rng) + 1);
        }
        RealVector b = a * x0;
        RealVector c(n);
        for (int j = 0; j < n; j++) {
            c(j) = u(rng);
        }
        auto p = LpProblem::with_shape(m, n);
        p.a = a.sparseView();
        p.b = b;
        p.c = c;
        auto s = solve_lp(p);
        ASSERT_EQ(s.status, LpStatus::optimal);
        EXPECT_NEAR(s.objective, vertex_enumeration_max(a, b, c), 1e-9);
        EXPECT_LE(s.residual, 1e-8 * (1 + b.lpNorm<Eigen::Infinity>()));
        EXPECT_LE(s.gap, 1e-7 * (1 + std::abs(s.objective)));
        // Dual feasibility of the reported multipliers.
        RealVector slack = a.transpose() * s.dual - c;
        EXPECT_GE(slack.minCoeff(), -1e-9);
        for (const auto &it : s.log) {
            EXPECT_LE(it.primal_objective, it.dual_objective + 1e-7);
        }
    }
}

TEST(lp, upper_bounds_against_enumeration) {
    // max x1 + x2  s.t.  x1 - x2 = 0.2,  x1 <= 0.7, x2 <= 0.9  ->  x1 = 0.7, x2 = 0.5.
    auto p = LpProblem::with_shape(1, 2);
    p.c << 1, 1;
    set_a(p, {1, -1});
    p.b << 0.2;
    p.upper << 0.7, 0.9;
    auto s = solve_lp(p);
    ASSERT_EQ(s.status, LpStatus::optimal);
    EXPECT_NEAR(s.x(0), 0.7, 1e-12);
    EXPECT_NEAR(s.x(1), 0.5, 1e-12);
}

TEST(lp, deterministic) {
    auto p = LpProblem::with_shape(2, 4);
    p.c << 1, 1, 1, 1;
    set_a(p, {1, 1, 0, 0, 0, 0, 1, 1});
    p.b << 1, 1;
    auto s1 = solve_lp(p);
    auto s2 = solve_lp(p);
    EXPECT_EQ(s1.x, s2.x);
}

TEST(lp, validation) {
    auto p = LpProblem::with_shape(1, 2);
    p.c.resize(3);
    EXPECT_THROW(solve_lp(p), ValidationError);
}

TEST(lp, iteration_cap_reports_solver_failure) {
    auto p = LpProblem::with_shape(2, 4);
    p.c << 1, 2, 3, 4;
    set_a(p, {1, 1, 1, 1, 1, -1, 1, -1});
    p.b << 1, 0;
    LpSettings settings;
    settings.max_iterations = 1;
    EXPECT_THROW(solve_lp(p, settings), SolverError);
}

TEST(lp, dump_format) {
    auto p = LpProblem::with_shape(1, 2);
    p.c << 1, 0;
    set_a(p, {1, 0.5});
    p.b << 2;
    p.free_var[1] = true;
    p.upper(0) = 3;
    EXPECT_EQ(lp_dump(p), "lp 1 2 maximize\nc 1 0\nlower 0 -inf\nupper 3 inf\nrow 0 2 0:1 1:0.5\n");
}

TEST(lp, degenerate_assignment_polytope) {
    // Doubly stochastic matrices: every vertex is a permutation, and most bases are degenerate.
    const int n = 5;
    Rng rng(17);
    std::uniform_real_distribution<double> u(0, 1);
    for (int limit : {1, 50}) {
        for (int rep = 0; rep < 4; rep++) {
            auto p = LpProblem::with_shape(2 * n, n * n);
            std::vector<Eigen::Triplet<double>> t;
            for (int i = 0; i < n; i++) {
                for (int j = 0; j < n; j++) {
                    t.emplace_back(i, i * n + j, 1.0);
                    t.emplace_back(n + j, i * n + j, 1.0);
                    p.c(i * n + j) = u(rng);
                }
                p.b(i) = 1;
                p.b(n + i) = 1;
            }
            p.a.setFromTriplets(t.begin(), t.end());
            std::vector<int> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            double best = -INFINITY;
            do {
                double v = 0;
                for (int i = 0; i < n; i++) {
                    v += p.c(i * n + perm[i]);
                }
                best = std::max(best, v);
            } while (std::next_permutation(perm.begin(), perm.end()));
            LpSettings settings;
            settings.degenerate_limit = limit;
            auto s = solve_lp(p, settings);
            ASSERT_EQ(s.status, LpStatus::optimal);
            EXPECT_NEAR(s.objective, best, 1e-9);
        }
    }
}

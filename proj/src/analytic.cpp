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
#include <thread>

#include "ocsim/error.hpp"

namespace ocsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_dr(int d, int r) {
    if (d < 2) {
        throw ValidationError("dimension must be at least 2");
    }
    if (r < 1 || r > d) {
        throw ValidationError("r must lie in [1, d]");
    }
}

/// Runs body(chunk) for every chunk on up to `threads` threads.
template <typename F>
void run_chunks(int chunks, int threads, F body) {
    threads = std::max(1, std::min(threads, chunks));
    if (threads == 1) {
        for (int c = 0; c < chunks; c++) {
            body(c);
        }
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; t++) {
        pool.emplace_back([&, t] {
            for (int c = t; c < chunks; c += threads) {
                body(c);
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
}

long chunk_size(long n, int c) {
    return n / kMonteCarloChunks + (c < n % kMonteCarloChunks ? 1 : 0);
}

/// Index i < r maximizing |<psi|U|i>|^2, lowest index on ties.
int select_column(const ComplexMatrix &u, const ComplexVector &psi, int r, double &best) {
    int arg = 0;
    best = -1;
    for (int i = 0; i < r; i++) {
        double ov = std::norm(psi.dot(u.col(i)));
        if (ov > best) {
            best = ov;
            arg = i;
        }
    }
    return arg;
}

}  // namespace

const char *bound_kind_name(BoundKind k) {
    switch (k) {
        case BoundKind::result1:
            return "result1";
        case BoundKind::result1_subspace:
            return "result1_subspace";
        case BoundKind::result3:
            return "result3";
    }
    return "unknown";
}

double harmonic(int n) {
    if (n < 1) {
        throw ValidationError("harmonic number needs n >= 1");
    }
    double s = 0;
    for (int k = 1; k <= n; k++) {
        s += 1.0 / k;
    }
    return s;
}

AnalyticBound bound_result1(int d, int r) {
    check_dr(d, r);
    return {BoundKind::result1, d, r, 0, 0, (harmonic(r) - 1) / (d - 1)};
}

AnalyticBound bound_result1_subspace(int d, int s, int r) {
    check_dr(d, r);
    if (s < r || s > d) {
        throw ValidationError("subspace dimension s must satisfy r <= s <= d");
    }
    double h = harmonic(r);
    if (r == 1) {
        // 0/0 at s = 1; the numerator vanishes for every s.
        return {BoundKind::result1_subspace, d, r, s, 0, 0.0};
    }
    return {BoundKind::result1_subspace, d, r, s, 0, (h - 1) / (d - 1 - h * (double(d) / s - 1))};
}

AnalyticBound bound_result3(int d, int M, int r) {
    check_dr(d, r);
    if (M < 1) {
        throw ValidationError("number of bases M must be at least 1");
    }
    return {BoundKind::result3, d, r, 0, M, double(r - 1) / (M * double(d - 1))};
}

ClassicalModel build_bases_model(const std::vector<Povm> &bases, int r) {
    if (bases.empty()) {
        throw ValidationError("build_bases_model: no bases");
    }
    int d = bases.front().dim();
    if (r < 1 || r > d) {
        throw ValidationError("build_bases_model: r must lie in [1, d]");
    }
    std::vector<ComplexMatrix> us;
    for (const auto &b : bases) {
        if (b.dim() != d || !b.is_rank_one_projective()) {
            throw ValidationError("build_bases_model: every basis must be a rank-one projective measurement in dimension " +
                                  std::to_string(d));
        }
        us.push_back(b.basis());
    }
    int nb = static_cast<int>(bases.size());
    auto subsets = combinations(d, r);
    double w = 1.0 / (nb * static_cast<double>(subsets.size()));
    std::vector<Device> devices;
    std::vector<double> weights;
    Conditionals cond;
    for (int j = 0; j < nb; j++) {
        for (const auto &mu : subsets) {
            devices.emplace_back(us[j], mu);
            weights.push_back(w);
            std::vector<std::vector<double>> rows;
            for (int jj = 0; jj < nb; jj++) {
                for (int i = 0; i < d; i++) {
                    std::vector<double> row(r, 1.0 / r);
                    if (jj == j) {
                        for (int k = 0; k < r; k++) {
                            if (mu[k] == i) {
                                row.assign(r, 0.0);
                                row[k] = 1;
                            }
                        }
                    }
                    rows.push_back(row);
                }
            }
            cond.push_back(std::move(rows));
        }
    }
    return ClassicalModel(std::move(devices), std::move(weights), std::move(cond));
}

ClassicalModel bb84_two_device_model() {
    double c = std::cos(kPi / 8);
    double s = std::sin(kPi / 8);
    ComplexMatrix p1(2, 2), p2(2, 2);
    // Columns: phi, phi_perp and chi, chi_perp.
    p1 << c, s, s, -c;
    p2 << c, s, -s, c;
    std::vector<Device> devices = {Device(p1), Device(p2)};
    // States 0, 1, +, -: rho_0 = (phi + chi)/2, rho_1 = (phi_perp + chi_perp)/2,
    // rho_+ = (phi + chi_perp)/2, rho_- = (phi_perp + chi)/2.
    Conditionals cond = {
        {{1, 0}, {0, 1}, {1, 0}, {0, 1}},
        {{1, 0}, {0, 1}, {0, 1}, {1, 0}},
    };
    return ClassicalModel(std::move(devices), {0.5, 0.5}, std::move(cond));
}

MonteCarloEstimate mc_mean_max_overlap(int d, int r, long n, std::uint64_t seed, int threads) {
    check_dr(d, r);
    if (n < 1) {
        throw ValidationError("n_samples must be positive");
    }
    std::vector<double> sum(kMonteCarloChunks, 0), sumsq(kMonteCarloChunks, 0);
    ComplexVector psi = ComplexVector::Unit(d, 0);
    run_chunks(kMonteCarloChunks, threads, [&](int c) {
        Rng rng(derive_seed(seed, c));
        for (long k = 0; k < chunk_size(n, c); k++) {
            ComplexMatrix u = sample_haar_unitary(d, rng);
            double best;
            select_column(u, psi, r, best);
            sum[c] += best;
            sumsq[c] += best * best;
        }
    });
    double s = 0, s2 = 0;
    for (int c = 0; c < kMonteCarloChunks; c++) {
        s += sum[c];
        s2 += sumsq[c];
    }
    double mean = s / n;
    double var = n > 1 ? std::max(0.0, (s2 - n * mean * mean) / (n - 1)) : 0.0;
    return {mean, std::sqrt(var / n)};
}

double mc_verify_result1(const DensityMatrix &target, int r, long n, std::uint64_t seed, int threads) {
    int d = target.dim();
    check_dr(d, r);
    if (!target.is_pure()) {
        throw ValidationError("mc_verify_result1: target must be a pure state");
    }
    if (n < 1) {
        throw ValidationError("n_samples must be positive");
    }
    auto e = eig_hermitian(target.op());
    ComplexVector psi = e.vectors.col(d - 1);
    std::vector<ComplexMatrix> acc(kMonteCarloChunks, ComplexMatrix::Zero(d, d));
    run_chunks(kMonteCarloChunks, threads, [&](int c) {
        Rng rng(derive_seed(seed, c));
        for (long k = 0; k < chunk_size(n, c); k++) {
            ComplexMatrix u = sample_haar_unitary(d, rng);
            double best;
            int i = select_column(u, psi, r, best);
            acc[c] += u.col(i) * u.col(i).adjoint();
        }
    });
    ComplexMatrix avg = ComplexMatrix::Zero(d, d);
    for (const auto &a : acc) {
        avg += a;
    }
    avg /= static_cast<double>(n);
    double v = bound_result1(d, r).v;
    HermitianOperator predicted = v * target.op() + ((1 - v) / d) * HermitianOperator::identity(d);
    return trace_distance(HermitianOperator(avg), predicted);
}

}  // namespace ocsim

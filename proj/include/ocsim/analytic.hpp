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

#ifndef OCSIM_ANALYTIC_HPP
#define OCSIM_ANALYTIC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ocsim/model.hpp"

namespace ocsim {

enum class BoundKind { result1, result1_subspace, result3 };

const char *bound_kind_name(BoundKind k);

struct AnalyticBound {
    BoundKind kind;
    int d;
    int r;
    int s = 0;  // subspace kind only
    int M = 0;  // result3 only
    double v;
};

/// sum_{k=1}^n 1/k, accumulated in ascending k.
double harmonic(int n);

/// v = (H_r - 1) / (d - 1): visibility up to which every noisy pure-state set in dimension d
/// has a model of complexity r.
AnalyticBound bound_result1(int d, int r);

/// Improvement when the pure states span an s-dimensional subspace:
/// v = (H_r - 1) / (d - 1 - H_r (d/s - 1)).
AnalyticBound bound_result1_subspace(int d, int s, int r);

/// v = (r - 1) / (M (d - 1)) for all states of M bases.
AnalyticBound bound_result3(int d, int M, int r);

/// One device per (basis j, r-subset mu), subsets in lexicographic order, uniform weights.
/// Device (j, mu) emits e_i^(j) for state (j, i) when i is in mu, and the uniform mixture over
/// mu otherwise. States are indexed x = j * d + i. Reconstructs the noisy basis states at
/// v = (r - 1) / (M (d - 1)).
ClassicalModel build_bases_model(const std::vector<Povm> &bases, int r);

/// The two-device model for the BB84 states at v = 1/sqrt(2): devices with bases
/// {cos(pi/8)|0> + sin(pi/8)|1>, sin(pi/8)|0> - cos(pi/8)|1>} and
/// {cos(pi/8)|0> - sin(pi/8)|1>, sin(pi/8)|0> + cos(pi/8)|1>}, weights 1/2,
/// deterministic responses for the states 0, 1, +, -.
ClassicalModel bb84_two_device_model();

struct MonteCarloEstimate {
    double estimate;
    double std_error;
};

/// Mean over Haar-random U of max_{i < r} |<0|U|i>|^2; tends to H_r / d.
/// Work is split in a fixed number of chunks with seeds derived from (seed, chunk),
/// so the result does not depend on the thread count.
MonteCarloEstimate mc_mean_max_overlap(int d, int r, long n_samples, std::uint64_t seed, int threads = 1);

/// Averages |U i*><U i*| over Haar-random U, where i* < r maximizes the overlap with the
/// target (lowest index on ties), and returns the trace distance of the average to
/// v psi + (1 - v) I / d at v = (H_r - 1) / (d - 1).
double mc_verify_result1(const DensityMatrix &target, int r, long n_samples, std::uint64_t seed, int threads = 1);

/// Number of chunks used by the Monte-Carlo routines.
constexpr int kMonteCarloChunks = 8;

}  // namespace ocsim

#endif

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

#ifndef OCSIM_SIMULATION_HPP
#define OCSIM_SIMULATION_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ocsim/lp.hpp"
#include "ocsim/model.hpp"

namespace ocsim {

enum class SimulationMethod { automatic, explicit_lp, column_generation };
const char *simulation_method_name(SimulationMethod m);

struct SimulationSettings {
    SimulationMethod method = SimulationMethod::automatic;
    /// Largest explicit variable count 1 + N + m * sum_lambda r_lambda accepted; beyond it SizingError.
    std::int64_t variable_cap = 200000;
    /// automatic picks the explicit LP up to this many rows.
    int explicit_row_limit = 250;
    /// Devices whose weight falls below this are dropped from the extracted model.
    double support_threshold = 1e-12;
    /// Column generation stops when no column has reduced cost below -pricing_tol.
    double pricing_tol = 1e-9;
    int max_rounds = 500;
    LpSettings lp;
};

struct SimulationResult {
    explicit SimulationResult(ClassicalModel m) : model(std::move(m)) {
    }
    double visibility = 0;
    ClassicalModel model;
    /// max_x Frobenius residual of the extracted model at the returned visibility.
    double residual = 0;
    double lp_residual = 0;
    double gap = 0;
    /// Most negative reduced cost over the full column set (0 for the explicit LP).
    double pricing_violation = 0;
    SimulationMethod method = SimulationMethod::explicit_lp;
    int lp_iterations = 0;
    int rounds = 0;
    int columns = 0;
    std::string family;
};

/// max v s.t. v rho_x + (1 - v) I/d = sum_lambda sum_k pt(k|x,lambda) P_{lambda,k},
/// sum_k pt(k|x,lambda) = q_lambda, sum q = 1, 0 <= v <= 1.
/// Columns: v, then q_lambda, then pt(k|x,lambda) device-major, then x, then k.
/// Rows: d^2 per state (x-major), then one per (x, lambda), then the normalization row.
LpProblem build_simulation_lp(const StateSet &set, const std::vector<Device> &devices);
std::int64_t simulation_variable_count(const StateSet &set, const std::vector<Device> &devices);

SimulationResult simulate(const StateSet &set, const std::vector<Device> &devices,
                          const SimulationSettings &settings = {});

/// n Haar unitaries drawn in sequence from one generator, each split into all r-subsets.
/// The first k unitaries of a family do not depend on n.
std::vector<Device> random_device_family(int d, int r, int n, std::uint64_t seed);

/// Every r-subset of every basis, lexicographic within a basis.
std::vector<Device> bases_device_family(const std::vector<Povm> &bases, int r);

enum class RefineMode { per_device, global_rotation };
const char *refine_mode_name(RefineMode m);

struct RefineSettings {
    int iterations = 0;
    double step = 0.1;
    std::uint64_t seed = 0;
    RefineMode mode = RefineMode::per_device;
    SimulationSettings simulation;
};

struct RefineResult {
    explicit RefineResult(SimulationResult b) : best(std::move(b)) {
    }
    SimulationResult best;
    std::vector<Device> devices;
    /// Best visibility after each iteration, starting with the unperturbed family.
    std::vector<double> history;
    int accepted = 0;
    /// An LP failure stopped the search early; best is the last good result.
    bool aborted = false;
};

/// Random-perturbation hill climbing on the device unitaries. per_device: iteration t moves basis
/// t mod (number of bases) as U -> exp(i step H) U with a fresh GUE H. global_rotation: one A = exp(i step H) applied as A U A^dagger to every basis.
/// A move is kept iff the optimum does not decrease.
RefineResult refine_devices(const StateSet &set, const std::vector<Device> &initial, const RefineSettings &settings);

}  // namespace ocsim

#endif

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

#include "ocsim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ocsim/error.hpp"

namespace ocsim {

namespace {

using Triplet = Eigen::Triplet<double>;

struct Prepared {
    int d = 0;
    int m = 0;
    int dd = 0;
    std::vector<RealVector> target;          // vec(rho_x - I/d)
    RealVector rhs;                          // vec(I/d)
    std::vector<std::vector<RealVector>> p;  // vec(P_{lambda,k})
};

void check_inputs(const StateSet &set, const std::vector<Device> &devices) {
    if (devices.empty()) {
        throw ValidationError("simulation: empty device list");
    }
    for (const auto &dev : devices) {
        if (dev.dim() != set.dim()) {
            throw ValidationError("simulation: device dimension " + std::to_string(dev.dim()) +
                                  " differs from state dimension " + std::to_string(set.dim()));
        }
    }
}

Prepared prepare(const StateSet &set, const std::vector<Device> &devices) {
    Prepared pr;
    pr.d = set.dim();
    pr.m = set.size();
    pr.dd = pr.d * pr.d;
    HermitianOperator mixed = HermitianOperator::identity(pr.d) * (1.0 / pr.d);
    pr.rhs = hermitian_to_real_vector(mixed);
    for (int x = 0; x < pr.m; x++) {
        pr.target.push_back(hermitian_to_real_vector(set.state(x).op() - mixed));
    }
    for (const auto &dev : devices) {
        std::vector<RealVector> vs;
        for (int k = 0; k < dev.rank(); k++) {
            vs.push_back(hermitian_to_real_vector(dev.projector(k)));
        }
        pr.p.push_back(std::move(vs));
    }
    return pr;
}

void check_size(const StateSet &set, const std::vector<Device> &devices, const SimulationSettings &settings) {
    std::int64_t n = simulation_variable_count(set, devices);
    if (n > settings.variable_cap) {
        throw SizingError("simulation LP needs " + std::to_string(n) + " variables, cap is " +
                          std::to_string(settings.variable_cap));
    }
}

/// Drops dust, renormalizes, and assembles the model. pt[lambda][x][k] are unnormalized.
ClassicalModel extract_model(const std::vector<Device> &devices, const std::vector<std::vector<std::vector<double>>> &pt,
                             double threshold) {
    std::vector<Device> kept;
    std::vector<double> weights;
    Conditionals cond;
    for (size_t l = 0; l < devices.size(); l++) {
        double q = 0;
        for (double v : pt[l][0]) {
            q += std::max(v, 0.0);
        }
        if (q < threshold) {
            continue;
        }
        std::vector<std::vector<double>> rows;
        for (const auto &px : pt[l]) {
            std::vector<double> row(px.size());
            double s = 0;
            for (size_t k = 0; k < px.size(); k++) {
                row[k] = std::max(px[k], 0.0);
                s += row[k];
            }
            for (double &v : row) {
                v /= s;
            }
            rows.push_back(std::move(row));
        }
        kept.push_back(devices[l]);
        weights.push_back(q);
        cond.push_back(std::move(rows));
    }
    if (kept.empty()) {
        throw SolverError("simulation: LP solution has no device with positive weight", 0.0);
    }
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (double &w : weights) {
        w /= total;
    }
    return ClassicalModel(std::move(kept), std::move(weights), std::move(cond));
}

SimulationResult finish(const StateSet &set, ClassicalModel model, double v) {
    SimulationResult r(std::move(model));
    r.visibility = std::clamp(v, 0.0, 1.0);
    r.residual = reconstruction_residual(r.model, set, r.visibility);
    return r;
}

SimulationResult simulate_explicit(const StateSet &set, const std::vector<Device> &devices,
                                   const SimulationSettings &settings) {
    LpProblem lp = build_simulation_lp(set, devices);
    LpSettings ls = settings.lp;
    ls.record_log = false;
    LpSolution sol = solve_lp(lp, ls);
    if (sol.status != LpStatus::optimal) {
        throw SolverError(std::string("simulation LP is ") + lp_status_name(sol.status) +
                          "; no classical model over this device family",
                          sol.residual);
    }
    int n = static_cast<int>(devices.size());
    int m = set.size();
    std::vector<std::vector<std::vector<double>>> pt(n);
    int col = 1 + n;
    for (int l = 0; l < n; l++) {
        int r = devices[l].rank();
        pt[l].assign(m, std::vector<double>(r));
        for (int x = 0; x < m; x++) {
            for (int k = 0; k < r; k++) {
                pt[l][x][k] = sol.x(col++);
            }
        }
    }
    SimulationResult res = finish(set, extract_model(devices, pt, settings.support_threshold), sol.x(0));
    res.method = SimulationMethod::explicit_lp;
    res.lp_residual = sol.residual;
    res.gap = sol.gap;
    res.lp_iterations = sol.iterations;
    res.rounds = 1;
    res.columns = lp.cols();
    return res;
}

struct Column {
    int device;
    std::vector<int> strategy;
};

/// Restricted master over (device, deterministic strategy) columns. Row layout: d^2 per state, then convexity.
/// Column 0 is v; artificials (if any) follow; then the strategy columns.
LpProblem build_master(const Prepared &pr, const std::vector<Column> &cols, bool artificial) {
    int rows = pr.m * pr.dd + 1;
    int nart = artificial ? rows : 0;
    int ncols = 1 + nart + static_cast<int>(cols.size());
    LpProblem lp = LpProblem::with_shape(rows, ncols);
    std::vector<Triplet> t;
    for (int x = 0; x < pr.m; x++) {
        for (int i = 0; i < pr.dd; i++) {
            lp.b(x * pr.dd + i) = pr.rhs(i);
            if (pr.target[x](i) != 0) {
                t.emplace_back(x * pr.dd + i, 0, -pr.target[x](i));
            }
        }
    }
    lp.b(rows - 1) = 1;
    lp.upper(0) = 1;
    for (int i = 0; i < nart; i++) {
        t.emplace_back(i, 1 + i, lp.b(i) < 0 ? -1.0 : 1.0);
        lp.c(1 + i) = -1;
    }
    if (!artificial) {
        lp.c(0) = 1;
    }
    for (size_t j = 0; j < cols.size(); j++) {
        int c = 1 + nart + static_cast<int>(j);
        const auto &pv = pr.p[cols[j].device];
        for (int x = 0; x < pr.m; x++) {
            const RealVector &v = pv[cols[j].strategy[x]];
            for (int i = 0; i < pr.dd; i++) {
                if (v(i) != 0) {
                    t.emplace_back(x * pr.dd + i, c, v(i));
                }
            }
        }
        t.emplace_back(rows - 1, c, 1.0);
    }
    lp.a.setFromTriplets(t.begin(), t.end());
    return lp;
}

struct Priced {
    double value;  // a_j^T y for the best strategy of this device
    Column column;
};

/// For each device the strategy minimizing a^T y, which separates over x.
std::vector<Priced> price(const Prepared &pr, const RealVector &y) {
    double conv = y(pr.m * pr.dd);
    std::vector<Priced> out;
    for (size_t l = 0; l < pr.p.size(); l++) {
        Priced best{conv, {static_cast<int>(l), std::vector<int>(pr.m)}};
        for (int x = 0; x < pr.m; x++) {
            auto yx = y.segment(x * pr.dd, pr.dd);
            double lo = INFINITY;
            for (size_t k = 0; k < pr.p[l].size(); k++) {
                double v = pr.p[l][k].dot(yx);
                if (v < lo) {
                    lo = v;
                    best.column.strategy[x] = static_cast<int>(k);
                }
            }
            best.value += lo;
        }
        out.push_back(std::move(best));
    }
    return out;
}

SimulationResult simulate_column_generation(const StateSet &set, const std::vector<Device> &devices,
                                            const SimulationSettings &settings) {
    Prepared pr = prepare(set, devices);
    std::vector<Column> cols;
    for (size_t l = 0; l < devices.size(); l++) {
        for (int k = 0; k < devices[l].rank(); k++) {
            cols.push_back({static_cast<int>(l), std::vector<int>(pr.m, k)});
        }
    }
    LpSettings ls = settings.lp;
    ls.record_log = false;
    int rows = pr.m * pr.dd + 1;
    int batch = std::max(64, 2 * rows);
    int rounds = 0;
    int iterations = 0;
    LpSolution sol;
    double violation = 0;
    for (int phase = 0; phase < 2; phase++) {
        bool artificial = phase == 0;
        while (true) {
            if (++rounds > settings.max_rounds) {
                throw SolverError("column generation did not converge within " + std::to_string(settings.max_rounds) +
                                  " rounds",
                                  sol.residual);
            }
            LpProblem lp = build_master(pr, cols, artificial);
            sol = solve_lp(lp, ls);
            iterations += sol.iterations;
            if (sol.status != LpStatus::optimal) {
                throw SolverError(std::string("column generation master is ") + lp_status_name(sol.status),
                                  sol.residual);
            }
            if (artificial && sol.objective >= -1e-10) {
                break;
            }
            auto priced = price(pr, sol.dual);
            std::sort(priced.begin(), priced.end(),
                      [](const Priced &a, const Priced &b) { return a.value < b.value; });
            violation = std::max(0.0, -priced.front().value);
            int added = 0;
            for (const auto &p : priced) {
                if (p.value >= -settings.pricing_tol || added >= batch) {
                    break;
                }
                cols.push_back(p.column);
                added++;
            }
            if (added == 0) {
                break;
            }
        }
        if (artificial && sol.objective < -1e-10) {
            throw SolverError("simulation LP is infeasible; no classical model over this device family",
                              -sol.objective);
        }
    }
    int n = static_cast<int>(devices.size());
    std::vector<std::vector<std::vector<double>>> pt(n);
    for (int l = 0; l < n; l++) {
        pt[l].assign(pr.m, std::vector<double>(devices[l].rank(), 0.0));
    }
    for (size_t j = 0; j < cols.size(); j++) {
        double w = sol.x(1 + static_cast<int>(j));
        if (w <= 0) {
            continue;
        }
        for (int x = 0; x < pr.m; x++) {
            pt[cols[j].device][x][cols[j].strategy[x]] += w;
        }
    }
    SimulationResult res = finish(set, extract_model(devices, pt, settings.support_threshold), sol.x(0));
    res.method = SimulationMethod::column_generation;
    res.lp_residual = sol.residual;
    res.gap = sol.gap;
    res.pricing_violation = violation;
    res.lp_iterations = iterations;
    res.rounds = rounds;
    res.columns = static_cast<int>(cols.size());
    return res;
}

}  // namespace

const char *simulation_method_name(SimulationMethod m) {
    switch (m) {
        case SimulationMethod::automatic:
            return "automatic";
        case SimulationMethod::explicit_lp:
            return "explicit";
        case SimulationMethod::column_generation:
            return "column_generation";
    }
    return "unknown";
}

const char *refine_mode_name(RefineMode m) {
    return m == RefineMode::per_device ? "per_device" : "global_rotation";
}

std::int64_t simulation_variable_count(const StateSet &set, const std::vector<Device> &devices) {
    std::int64_t ranks = 0;
    for (const auto &dev : devices) {
        ranks += dev.rank();
    }
    return 1 + static_cast<std::int64_t>(devices.size()) + set.size() * ranks;
}

LpProblem build_simulation_lp(const StateSet &set, const std::vector<Device> &devices) {
    check_inputs(set, devices);
    Prepared pr = prepare(set, devices);
    int n = static_cast<int>(devices.size());
    int rows = pr.m * pr.dd + pr.m * n + 1;
    auto cols = simulation_variable_count(set, devices);
    if (cols > std::numeric_limits<int>::max()) {
        throw SizingError("simulation LP too large to index");
    }
    LpProblem lp = LpProblem::with_shape(rows, static_cast<int>(cols));
    std::vector<Triplet> t;
    lp.c(0) = 1;
    lp.upper(0) = 1;
    for (int x = 0; x < pr.m; x++) {
        for (int i = 0; i < pr.dd; i++) {
            lp.b(x * pr.dd + i) = pr.rhs(i);
            if (pr.target[x](i) != 0) {
                t.emplace_back(x * pr.dd + i, 0, -pr.target[x](i));
            }
        }
    }
    int link = pr.m * pr.dd;
    int col = 1 + n;
    for (int l = 0; l < n; l++) {
        for (int x = 0; x < pr.m; x++) {
            int row = link + x * n + l;
            t.emplace_back(row, 1 + l, -1.0);
            for (int k = 0; k < devices[l].rank(); k++) {
                const RealVector &v = pr.p[l][k];
                for (int i = 0; i < pr.dd; i++) {
                    if (v(i) != 0) {
                        t.emplace_back(x * pr.dd + i, col, v(i));
                    }
                }
                t.emplace_back(row, col, 1.0);
                col++;
            }
        }
        t.emplace_back(rows - 1, 1 + l, 1.0);
    }
    lp.b(rows - 1) = 1;
    lp.a.setFromTriplets(t.begin(), t.end());
    return lp;
}

SimulationResult simulate(const StateSet &set, const std::vector<Device> &devices,
                          const SimulationSettings &settings) {
    check_inputs(set, devices);
    check_size(set, devices, settings);
    SimulationMethod method = settings.method;
    if (method == SimulationMethod::automatic) {
        std::int64_t rows = static_cast<std::int64_t>(set.size()) * (set.dim() * set.dim() +
                                                                     static_cast<std::int64_t>(devices.size())) + 1;
        method = rows <= settings.explicit_row_limit ? SimulationMethod::explicit_lp
                                                     : SimulationMethod::column_generation;
    }
    SimulationResult r = method == SimulationMethod::explicit_lp ? simulate_explicit(set, devices, settings)
                                                                 : simulate_column_generation(set, devices, settings);
    r.family = "devices:" + std::to_string(devices.size());
    return r;
}

std::vector<Device> random_device_family(int d, int r, int n, std::uint64_t seed) {
    if (d < 1 || r < 1 || r > d) {
        throw ValidationError("random_device_family: need 1 <= r <= d");
    }
    if (n < 1) {
        throw ValidationError("random_device_family: need n >= 1");
    }
    Rng rng(seed);
    auto subsets = combinations(d, r);
    std::vector<Device> out;
    for (int i = 0; i < n; i++) {
        ComplexMatrix u = sample_haar_unitary(d, rng);
        for (const auto &s : subsets) {
            out.emplace_back(u, s);
        }
    }
    return out;
}

std::vector<Device> bases_device_family(const std::vector<Povm> &bases, int r) {
    if (bases.empty()) {
        throw ValidationError("bases_device_family: no bases");
    }
    std::vector<Device> out;
    for (const auto &b : bases) {
        if (!b.is_rank_one_projective()) {
            throw ValidationError("bases_device_family: measurement is not a rank-one projective basis");
        }
        if (r < 1 || r > b.dim()) {
            throw ValidationError("bases_device_family: need 1 <= r <= d");
        }
        ComplexMatrix u = b.basis();
        for (const auto &s : combinations(b.dim(), r)) {
            out.emplace_back(u, s);
        }
    }
    return out;
}

RefineResult refine_devices(const StateSet &set, const std::vector<Device> &initial, const RefineSettings &settings) {
    if (settings.iterations < 0) {
        throw ValidationError("refine_devices: iterations must be >= 0");
    }
    check_inputs(set, initial);
    // Devices sharing a basis matrix move together.
    std::vector<int> group(initial.size());
    std::vector<ComplexMatrix> bases;
    for (size_t i = 0; i < initial.size(); i++) {
        int g = -1;
        for (size_t b = 0; b < bases.size(); b++) {
            if (bases[b] == initial[i].basis()) {
                g = static_cast<int>(b);
                break;
            }
        }
        if (g < 0) {
            g = static_cast<int>(bases.size());
            bases.push_back(initial[i].basis());
        }
        group[i] = g;
    }
    auto assemble = [&](const std::vector<ComplexMatrix> &us) {
        std::vector<Device> out;
        for (size_t i = 0; i < initial.size(); i++) {
            out.emplace_back(us[group[i]], initial[i].subset());
        }
        return out;
    };
    RefineResult res(simulate(set, initial, settings.simulation));
    res.devices = initial;
    res.history.push_back(res.best.visibility);
    Rng rng(settings.seed);
    int d = set.dim();
    for (int it = 0; it < settings.iterations; it++) {
        std::vector<ComplexMatrix> trial = bases;
        if (settings.mode == RefineMode::per_device) {
            // One basis per iteration, cycling; a sweep of bases.size() iterations touches each once.
            auto &u = trial[it % trial.size()];
            u = unitary_exp(sample_gue(d, rng), settings.step) * u;
        } else {
            ComplexMatrix a = unitary_exp(sample_gue(d, rng), settings.step);
            for (auto &u : trial) {
                u = a * u * a.adjoint();
            }
        }
        // Re-orthonormalize so rounding does not accumulate over many accepted moves.
        for (auto &u : trial) {
            Eigen::HouseholderQR<ComplexMatrix> qr(u);
            ComplexMatrix q = qr.householderQ();
            ComplexMatrix rr = qr.matrixQR().triangularView<Eigen::Upper>();
            for (int j = 0; j < d; j++) {
                Complex ph = rr(j, j) / std::abs(rr(j, j));
                q.col(j) *= ph;
            }
            u = q;
        }
        std::vector<Device> devs = assemble(trial);
        try {
            SimulationResult r = simulate(set, devs, settings.simulation);
            if (r.visibility >= res.best.visibility) {
                res.best = std::move(r);
                res.devices = std::move(devs);
                bases = std::move(trial);
                res.accepted++;
            }
        } catch (const SolverError &) {
            res.aborted = true;
            break;
        }
        res.history.push_back(res.best.visibility);
    }
    res.best.family = "refined:" + std::to_string(initial.size());
    return res;
}

}  // namespace ocsim

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

#include "ocsim/verify.hpp"

#include <cmath>
#include <cstdio>

#include "ocsim/analytic.hpp"
#include "ocsim/error.hpp"
#include "ocsim/simulation.hpp"
#include "ocsim/steering.hpp"
#include "ocsim/witness.hpp"

namespace ocsim {

namespace {

class Suite {
   public:
    explicit Suite(std::vector<VerifyCheck> &out) : out_(out) {
    }
    void check(const std::string &name, double expected, double got, double tol, Relation rel = Relation::equal) {
        VerifyCheck c{name, expected, got, tol, rel, false};
        switch (rel) {
            case Relation::equal:
                c.pass = std::abs(got - expected) <= tol;
                break;
            case Relation::at_least:
                c.pass = got >= expected - tol;
                break;
            case Relation::at_most:
                c.pass = got <= expected + tol;
                break;
        }
        c.pass = c.pass && std::isfinite(got);
        out_.push_back(c);
    }

   private:
    std::vector<VerifyCheck> &out_;
};

std::string fmt(const char *f, int a, int b = 0) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

void haar_suite(Suite &s, std::uint64_t seed, int threads) {
    for (int d = 2; d <= 4; d++) {
        for (int r = 2; r <= d; r++) {
            auto e = mc_mean_max_overlap(d, r, 100000, seed, threads);
            s.check(fmt("haar/mean_max_overlap d=%d r=%d", d, r), harmonic(r) / d, e.estimate, 4 * e.std_error);
        }
    }
    for (int d = 2; d <= 3; d++) {
        for (int r = 2; r <= d; r++) {
            auto target = DensityMatrix::pure(ComplexVector::Unit(d, 0));
            double t = mc_verify_result1(target, r, 100000, seed, threads);
            s.check(fmt("haar/result1_trace_distance d=%d r=%d (<=)", d, r), 0, t, 0.02, Relation::at_most);
        }
    }
}

void table1_suite(Suite &s) {
    const double r1[] = {0.5, 0.41667, 0.36111};
    for (int d = 2; d <= 4; d++) {
        s.check(fmt("table1/result1 d=%d r=%d", d, d), r1[d - 2], bound_result1(d, d).v, 1e-4);
    }
    const double r3[] = {0.5, 0.33333, 0.25};
    for (int m = 2; m <= 4; m++) {
        s.check(fmt("table1/result3 d=3 M=%d", m), r3[m - 2], bound_result3(3, m, 3).v, 1e-4);
    }
    auto bb = bb84_two_device_model();
    s.check("table1/bb84_model_residual (<=)", 0, reconstruction_residual(bb, gen_bb84(), 1 / std::sqrt(2.0)), 1e-12,
            Relation::at_most);
    auto lp = simulate(gen_bb84(), bb.devices());
    s.check("table1/bb84_lp", 1 / std::sqrt(2.0), lp.visibility, 1e-6);
    s.check("table1/bb84_lp_gap (<=)", 0, lp.gap, 1e-7, Relation::at_most);

    auto bases = gen_mub_bases(3);
    std::vector<Povm> two = {bases[0], bases[1]};
    auto set = gen_mub_states(3, 2);
    auto model = build_bases_model(two, 3);
    s.check("table1/bases_model_residual d=3 M=2 (<=)", 0, reconstruction_residual(model, set, 0.5), 1e-10,
            Relation::at_most);
    auto lp3 = simulate(set, model.devices());
    s.check("table1/bases_model_lp d=3 M=2 (>=)", 0.5, lp3.visibility, 1e-6, Relation::at_least);
    s.check("table1/bases_model_lp_gap (<=)", 0, lp3.gap, 1e-7, Relation::at_most);
}

void witness_suite(Suite &s, int threads) {
    Witness w = mub_witness(3, 2);
    BoundSettings settings;
    settings.threads = threads;
    auto b = classical_bound(w, settings);
    s.check("witness/mub_d3_n2_bound", 4.6667, b.beta, 1e-3);
    s.check("witness/mub_d3_n2_sdp_gap (<=)", 0, b.max_gap, 1e-6, Relation::at_most);
    s.check("witness/mub_d3_n2_critical", 0.6667, critical_visibility(w, gen_mub_states(3, 2), b.beta), 2e-3);

    auto bases = gen_mub_bases(2);
    SteeringInequality ineq(RealMatrix::Identity(2, 2), {bases[0], bases[1]});
    auto [sw, zeta] = steering_to_witness(ineq);
    s.check("witness/steering_zx_zeta", std::sqrt(2.0), zeta.beta, 1e-9);
    s.check("witness/steering_zx_sdp", zeta.beta, classical_bound(sw, settings).beta, 1e-6);
}

void jm_suite(Suite &s) {
    auto bases = gen_mub_bases(2);
    std::vector<DensityMatrix> zx = {DensityMatrix::pure(bases[0].basis().col(0)),
                                     DensityMatrix::pure(bases[1].basis().col(0))};
    auto t = jm_threshold(StateSet(zx, {"z", "x"}));
    s.check("jm/busch_zx_threshold", 1 / std::sqrt(2.0), t.v, 1e-4);
    s.check("jm/bb84_feasible_at_lp_value", 1, jm_binarized_feasible(gen_bb84(), 1 / std::sqrt(2.0)), 0);
    auto mub = gen_mub_states(3, 2);
    s.check("jm/mub_d3_n2_feasible_at_0.5", 1, jm_binarized_feasible(mub, 0.5), 0);
    s.check("jm/mub_d3_n2_feasible_at_0.68", 1, jm_binarized_feasible(mub, 0.68), 0);
}

}  // namespace

std::vector<VerifyCheck> run_verify(const std::string &suite, std::uint64_t seed, int threads) {
    if (threads <= 0) {
        threads = default_threads();
    }
    bool all = suite == "all";
    if (!all && suite != "haar" && suite != "table1" && suite != "witness" && suite != "jm") {
        throw ValidationError("unknown verify suite \"" + suite + "\" (haar, table1, witness, jm, all)");
    }
    std::vector<VerifyCheck> out;
    Suite s(out);
    if (all || suite == "haar") {
        haar_suite(s, seed, threads);
    }
    if (all || suite == "table1") {
        table1_suite(s);
    }
    if (all || suite == "witness") {
        witness_suite(s, threads);
    }
    if (all || suite == "jm") {
        jm_suite(s);
    }
    return out;
}

std::string verify_csv(const std::vector<VerifyCheck> &checks) {
    std::string out = "check,expected,got,tolerance,pass\n";
    char buf[512];
    for (const auto &c : checks) {
        std::snprintf(buf, sizeof buf, "%s,%.10g,%.10g,%.3g,%d\n", c.name.c_str(), c.expected, c.got, c.tolerance,
                      c.pass ? 1 : 0);
        out += buf;
    }
    return out;
}

bool all_pass(const std::vector<VerifyCheck> &checks) {
    for (const auto &c : checks) {
        if (!c.pass) {
            return false;
        }
    }
    return true;
}

}  // namespace ocsim

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

#include "ocsim/ocsim.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <set>

#include "ocsim/analytic.hpp"
#include "ocsim/error.hpp"
#include "ocsim/io.hpp"
#include "ocsim/simulation.hpp"
#include "ocsim/steering.hpp"
#include "ocsim/verify.hpp"
#include "ocsim/witness.hpp"

using namespace ocsim;

struct ocs_state_set {
    StateSet set;
};
struct ocs_devices {
    std::vector<Device> devices;
};
struct ocs_simulation {
    SimulationResult result;
    Json extra;
};
struct ocs_witness {
    Witness w;
};
struct ocs_bound {
    WitnessBound b;
};

namespace {

thread_local std::string last_error;

template <typename F>
int guard(F f) {
    last_error.clear();
    try {
        f();
        return OCS_OK;
    } catch (const Error &e) {
        last_error = e.what();
        return static_cast<int>(e.kind());
    } catch (const nlohmann::json::exception &e) {
        last_error = e.what();
        return OCS_ERR_VALIDATION;
    } catch (const std::bad_alloc &) {
        last_error = "out of memory";
        return OCS_ERR_SIZING;
    } catch (const std::exception &e) {
        last_error = e.what();
        return OCS_ERR_SOLVER;
    }
}

template <typename T>
void need(T *p, const char *what) {
    if (p == nullptr) {
        throw ValidationError(std::string("null ") + what);
    }
}

char *dup(const std::string &s) {
    char *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (out == nullptr) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

Json settings_object(const char *json, const std::set<std::string> &allowed) {
    if (json == nullptr || *json == 0) {
        return Json::object();
    }
    Json j = parse_json(json, "settings");
    if (!j.is_object()) {
        throw ValidationError("settings: expected a JSON object");
    }
    for (const auto &item : j.items()) {
        if (!allowed.count(item.key())) {
            throw ValidationError("settings: unknown key \"" + item.key() + "\"");
        }
    }
    return j;
}

SimulationMethod parse_method(const std::string &s) {
    for (auto m : {SimulationMethod::automatic, SimulationMethod::explicit_lp, SimulationMethod::column_generation}) {
        if (s == simulation_method_name(m)) {
            return m;
        }
    }
    throw ValidationError("unknown simulation method \"" + s + "\"");
}

RefineMode parse_refine_mode(const std::string &s) {
    for (auto m : {RefineMode::per_device, RefineMode::global_rotation}) {
        if (s == refine_mode_name(m)) {
            return m;
        }
    }
    throw ValidationError("unknown refine mode \"" + s + "\"");
}

}  // namespace

extern "C" {

const char *ocs_version(void) {
    return "0.1.0";
}

const char *ocs_last_error(void) {
    return last_error.c_str();
}

void ocs_string_free(char *s) {
    std::free(s);
}

int ocs_state_set_generate(const char *kind, int d, int n, ocs_state_set **out) {
    return guard([&] {
        need(kind, "kind");
        need(out, "output");
        std::string k = kind;
        if (k == "bb84") {
            *out = new ocs_state_set{gen_bb84()};
        } else if (k == "mub") {
            *out = new ocs_state_set{gen_mub_states(d, n)};
        } else if (k == "sic") {
            *out = new ocs_state_set{gen_sic(d)};
        } else if (k == "pair") {
            *out = new ocs_state_set{gen_pair_maxcoherent()};
        } else {
            throw ValidationError("unknown state set kind \"" + k + "\" (bb84, mub, sic, pair)");
        }
    });
}

int ocs_state_set_from_json(const char *json, int repair, ocs_state_set **out) {
    return guard([&] {
        need(json, "json");
        need(out, "output");
        *out = new ocs_state_set{state_set_from_json(parse_json(json, "state set"), repair != 0)};
    });
}

int ocs_state_set_to_json(const ocs_state_set *set, char **json) {
    return guard([&] {
        need(set, "state set");
        need(json, "output");
        *json = dup(state_set_to_json(set->set).dump(2));
    });
}

int ocs_state_set_size(const ocs_state_set *set, int *m) {
    return guard([&] {
        need(set, "state set");
        need(m, "output");
        *m = set->set.size();
    });
}

int ocs_state_set_dim(const ocs_state_set *set, int *d) {
    return guard([&] {
        need(set, "state set");
        need(d, "output");
        *d = set->set.dim();
    });
}

int ocs_state_set_label(const ocs_state_set *set, int x, char **label) {
    return guard([&] {
        need(set, "state set");
        need(label, "output");
        if (x < 0 || x >= set->set.size()) {
            throw ValidationError("state index " + std::to_string(x) + " out of range");
        }
        *label = dup(set->set.label(x));
    });
}

int ocs_state_set_noise(const ocs_state_set *set, double v, ocs_state_set **out) {
    return guard([&] {
        need(set, "state set");
        need(out, "output");
        *out = new ocs_state_set{apply_isotropic_noise(set->set, NoiseSpec(v))};
    });
}

int ocs_state_set_extend(const ocs_state_set *set, ocs_state_set **out) {
    return guard([&] {
        need(set, "state set");
        need(out, "output");
        *out = new ocs_state_set{extend_set(set->set)};
    });
}

void ocs_state_set_free(ocs_state_set *set) {
    delete set;
}

int ocs_harmonic(int n, double *h) {
    return guard([&] {
        need(h, "output");
        *h = harmonic(n);
    });
}

int ocs_bound_result1(int d, int r, double *v) {
    return guard([&] {
        need(v, "output");
        *v = bound_result1(d, r).v;
    });
}

int ocs_bound_result1_subspace(int d, int s, int r, double *v) {
    return guard([&] {
        need(v, "output");
        *v = bound_result1_subspace(d, s, r).v;
    });
}

int ocs_bound_result3(int d, int m, int r, double *v) {
    return guard([&] {
        need(v, "output");
        *v = bound_result3(d, m, r).v;
    });
}

int ocs_mc_mean_max_overlap(int d, int r, long n_samples, uint64_t seed, int threads, double *estimate,
                            double *std_error) {
    return guard([&] {
        need(estimate, "output");
        auto e = mc_mean_max_overlap(d, r, n_samples, seed, threads > 0 ? threads : default_threads());
        *estimate = e.estimate;
        if (std_error) {
            *std_error = e.std_error;
        }
    });
}

int ocs_mc_verify_result1(int d, int r, long n_samples, uint64_t seed, int threads, double *distance) {
    return guard([&] {
        need(distance, "output");
        if (d < 1) {
            throw ValidationError("d must be positive");
        }
        auto target = DensityMatrix::pure(ComplexVector::Unit(d, 0));
        *distance = mc_verify_result1(target, r, n_samples, seed, threads > 0 ? threads : default_threads());
    });
}

int ocs_devices_random(int d, int r, int n, uint64_t seed, ocs_devices **out) {
    return guard([&] {
        need(out, "output");
        *out = new ocs_devices{random_device_family(d, r, n, seed)};
    });
}

int ocs_devices_bases(int d, int m, int r, ocs_devices **out) {
    return guard([&] {
        need(out, "output");
        auto all = gen_mub_bases(d);
        if (m < 1 || m > static_cast<int>(all.size())) {
            throw ValidationError("number of bases must lie in [1, " + std::to_string(all.size()) + "]");
        }
        *out = new ocs_devices{bases_device_family(std::vector<Povm>(all.begin(), all.begin() + m), r)};
    });
}

int ocs_devices_from_json(const char *json, ocs_devices **out) {
    return guard([&] {
        need(json, "json");
        need(out, "output");
        *out = new ocs_devices{devices_from_json(parse_json(json, "devices"))};
    });
}

int ocs_devices_to_json(const ocs_devices *devices, char **json) {
    return guard([&] {
        need(devices, "devices");
        need(json, "output");
        *json = dup(devices_to_json(devices->devices).dump(2));
    });
}

int ocs_devices_count(const ocs_devices *devices, int *n) {
    return guard([&] {
        need(devices, "devices");
        need(n, "output");
        *n = static_cast<int>(devices->devices.size());
    });
}

void ocs_devices_free(ocs_devices *devices) {
    delete devices;
}

int ocs_simulate(const ocs_state_set *set, const ocs_devices *devices, const char *settings_json,
                 ocs_simulation **out) {
    return guard([&] {
        need(set, "state set");
        need(devices, "devices");
        need(out, "output");
        Json j = settings_object(settings_json, {"method", "variable_cap", "explicit_row_limit", "support_threshold",
                                                 "pricing_tol", "max_rounds", "refine_iterations", "refine_step",
                                                 "refine_seed", "refine_mode"});
        SimulationSettings s;
        s.method = parse_method(j.value("method", std::string("automatic")));
        s.variable_cap = j.value("variable_cap", s.variable_cap);
        s.explicit_row_limit = j.value("explicit_row_limit", s.explicit_row_limit);
        s.support_threshold = j.value("support_threshold", s.support_threshold);
        s.pricing_tol = j.value("pricing_tol", s.pricing_tol);
        s.max_rounds = j.value("max_rounds", s.max_rounds);
        RefineSettings rs;
        rs.iterations = j.value("refine_iterations", 0);
        rs.step = j.value("refine_step", rs.step);
        rs.seed = j.value("refine_seed", std::uint64_t{0});
        rs.mode = parse_refine_mode(j.value("refine_mode", std::string("per_device")));
        rs.simulation = s;
        if (rs.iterations > 0) {
            auto r = refine_devices(set->set, devices->devices, rs);
            Json extra = {{"refine",
                           {{"iterations", rs.iterations},
                            {"step", rs.step},
                            {"seed", rs.seed},
                            {"mode", refine_mode_name(rs.mode)},
                            {"accepted", r.accepted},
                            {"aborted", r.aborted},
                            {"history", r.history},
                            {"devices", devices_to_json(r.devices)}}}};
            *out = new ocs_simulation{r.best, extra};
        } else {
            *out = new ocs_simulation{simulate(set->set, devices->devices, s), Json::object()};
        }
    });
}

int ocs_simulation_visibility(const ocs_simulation *sim, double *v) {
    return guard([&] {
        need(sim, "simulation");
        need(v, "output");
        *v = sim->result.visibility;
    });
}

int ocs_simulation_to_json(const ocs_simulation *sim, char **json) {
    return guard([&] {
        need(sim, "simulation");
        need(json, "output");
        Json j = simulation_result_to_json(sim->result);
        for (const auto &item : sim->extra.items()) {
            j[item.key()] = item.value();
        }
        *json = dup(j.dump(2));
    });
}

int ocs_simulation_model_json(const ocs_simulation *sim, char **json) {
    return guard([&] {
        need(sim, "simulation");
        need(json, "output");
        *json = dup(model_to_json(sim->result.model).dump(2));
    });
}

void ocs_simulation_free(ocs_simulation *sim) {
    delete sim;
}

int ocs_witness_mub(int d, int n, ocs_witness **out) {
    return guard([&] {
        need(out, "output");
        *out = new ocs_witness{mub_witness(d, n)};
    });
}

int ocs_witness_from_json(const char *json, ocs_witness **out) {
    return guard([&] {
        need(json, "json");
        need(out, "output");
        *out = new ocs_witness{witness_from_json(parse_json(json, "witness"))};
    });
}

int ocs_witness_to_json(const ocs_witness *w, char **json) {
    return guard([&] {
        need(w, "witness");
        need(json, "output");
        *json = dup(witness_to_json(w->w).dump(2));
    });
}

void ocs_witness_free(ocs_witness *w) {
    delete w;
}

int ocs_witness_evaluate(const ocs_witness *w, const ocs_state_set *set, double *value) {
    return guard([&] {
        need(w, "witness");
        need(set, "state set");
        need(value, "output");
        *value = evaluate(w->w, set->set);
    });
}

int ocs_witness_bound(const ocs_witness *w, const char *settings_json, ocs_bound **out) {
    return guard([&] {
        need(w, "witness");
        need(out, "output");
        Json j = settings_object(settings_json, {"symmetry_reduce", "threads", "cap", "keep_values", "checkpoint_path",
                                                 "checkpoint_every"});
        BoundSettings s;
        s.symmetry_reduce = j.value("symmetry_reduce", s.symmetry_reduce);
        s.threads = j.value("threads", s.threads);
        s.cap = j.value("cap", s.cap);
        s.keep_values = j.value("keep_values", s.keep_values);
        s.checkpoint_path = j.value("checkpoint_path", s.checkpoint_path);
        s.checkpoint_every = j.value("checkpoint_every", s.checkpoint_every);
        *out = new ocs_bound{classical_bound(w->w, s)};
    });
}

int ocs_critical_visibility(const ocs_witness *w, const ocs_state_set *target, double beta, double *v) {
    return guard([&] {
        need(w, "witness");
        need(target, "state set");
        need(v, "output");
        *v = critical_visibility(w->w, target->set, beta);
    });
}

int ocs_bound_beta(const ocs_bound *b, double *beta, double *uncertainty) {
    return guard([&] {
        need(b, "bound");
        need(beta, "output");
        *beta = b->b.beta;
        if (uncertainty) {
            *uncertainty = b->b.uncertainty;
        }
    });
}

int ocs_bound_to_json(const ocs_bound *b, char **json) {
    return guard([&] {
        need(b, "bound");
        need(json, "output");
        *json = dup(witness_bound_to_json(b->b).dump(2));
    });
}

void ocs_bound_free(ocs_bound *b) {
    delete b;
}

int ocs_steering_to_witness(const char *inequality_json, ocs_witness **witness, ocs_bound **zeta) {
    return guard([&] {
        need(inequality_json, "json");
        need(witness, "output");
        need(zeta, "output");
        auto [w, b] = steering_to_witness(steering_from_json(parse_json(inequality_json, "steering inequality")));
        auto *wh = new ocs_witness{w};
        try {
            *zeta = new ocs_bound{b};
        } catch (...) {
            delete wh;
            throw;
        }
        *witness = wh;
    });
}

int ocs_jm_feasible(const ocs_state_set *set, double v, int *feasible, double *residual, char **parent_json) {
    return guard([&] {
        need(set, "state set");
        need(feasible, "output");
        auto r = jm_binarized_check(set->set, v);
        *feasible = r.feasible ? 1 : 0;
        if (residual) {
            *residual = r.residual;
        }
        if (parent_json) {
            *parent_json = nullptr;
            if (r.feasible) {
                int m = set->set.size();
                std::vector<std::string> labels;
                std::vector<std::vector<double>> p0(m);
                for (size_t a = 0; a < r.parent.size(); a++) {
                    std::string bits;
                    for (int x = 0; x < m; x++) {
                        bool one = (a >> (m - 1 - x)) & 1;
                        bits += one ? '1' : '0';
                        p0[x].push_back(one ? 0.0 : 1.0);
                    }
                    labels.push_back(bits);
                }
                ParentMeasurement parent(r.parent, labels, p0, 1e-7);
                *parent_json = dup(parent_to_json(parent).dump(2));
            }
        }
    });
}

int ocs_jm_threshold(const ocs_state_set *set, double width, double *v, int *sdp_calls) {
    return guard([&] {
        need(set, "state set");
        need(v, "output");
        auto t = jm_threshold(set->set, width);
        *v = t.v;
        if (sdp_calls) {
            *sdp_calls = t.sdp_calls;
        }
    });
}

int ocs_parent_from_model(const char *model_json, char **parent_json) {
    return guard([&] {
        need(model_json, "json");
        need(parent_json, "output");
        auto model = complete_bases(model_from_json(parse_json(model_json, "model")));
        *parent_json = dup(parent_to_json(parent_from_model(model)).dump(2));
    });
}

int ocs_qubit_model_from_parent(const char *parent_json, double tol, char **model_json) {
    return guard([&] {
        need(parent_json, "json");
        need(model_json, "output");
        auto q = qubit_model_from_parent(parent_from_json(parse_json(parent_json, "parent")), tol > 0 ? tol : 1e-9);
        Json j = {{"route", qubit_route_name(q.route)}, {"model", model_to_json(q.model)}};
        *model_json = dup(j.dump(2));
    });
}

int ocs_verify(const char *suite, uint64_t seed, int threads, char **csv, int *all) {
    return guard([&] {
        need(suite, "suite");
        need(csv, "output");
        auto checks = run_verify(suite, seed, threads);
        *csv = dup(verify_csv(checks));
        if (all) {
            *all = all_pass(checks) ? 1 : 0;
        }
    });
}

}  // extern "C"

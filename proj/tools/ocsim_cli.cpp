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

// Command-line front end. Talks to the library only through ocsim.h.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ocsim/ocsim.h"

using Json = nlohmann::json;

namespace {

/// Carries a library status code to main.
struct Failure {
    int code;
    std::string message;
};

void check(int rc) {
    if (rc != OCS_OK) {
        throw Failure{rc, ocs_last_error()};
    }
}

[[noreturn]] void invalid(const std::string &msg) {
    throw Failure{OCS_ERR_VALIDATION, msg};
}

std::string take(char *s) {
    std::string out = s ? s : "";
    ocs_string_free(s);
    return out;
}

template <typename T, void (*Free)(T *)>
struct Deleter {
    void operator()(T *p) const {
        Free(p);
    }
};
using StateSet = std::unique_ptr<ocs_state_set, Deleter<ocs_state_set, ocs_state_set_free>>;
using Devices = std::unique_ptr<ocs_devices, Deleter<ocs_devices, ocs_devices_free>>;
using Simulation = std::unique_ptr<ocs_simulation, Deleter<ocs_simulation, ocs_simulation_free>>;
using Witness = std::unique_ptr<ocs_witness, Deleter<ocs_witness, ocs_witness_free>>;
using Bound = std::unique_ptr<ocs_bound, Deleter<ocs_bound, ocs_bound_free>>;

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        invalid("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        invalid("cannot write " + path);
    }
}

Json parse(const std::string &text) {
    try {
        return Json::parse(text);
    } catch (const Json::exception &e) {
        invalid(e.what());
    }
}

StateSet load_set(const std::string &path, bool repair = false) {
    ocs_state_set *s = nullptr;
    check(ocs_state_set_from_json(read_file(path).c_str(), repair ? 1 : 0, &s));
    return StateSet(s);
}

int set_dim(const StateSet &s) {
    int d = 0;
    check(ocs_state_set_dim(s.get(), &d));
    return d;
}

int set_size(const StateSet &s) {
    int m = 0;
    check(ocs_state_set_size(s.get(), &m));
    return m;
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        out.push_back(item);
    }
    return out;
}

int to_int(const std::string &s, const std::string &what) {
    try {
        size_t used = 0;
        int v = std::stoi(s, &used);
        if (used == s.size()) {
            return v;
        }
    } catch (const std::exception &) {
    }
    invalid("bad integer in " + what + ": \"" + s + "\"");
}

// ---- gen ----

struct GenArgs {
    std::string kind;
    int d = 0;
    int n = 0;
    std::string input;
    double noise = 1;
    bool extend = false;
    bool repair = false;
    std::string out;
};

int cmd_gen(const GenArgs &a) {
    StateSet set;
    if (a.kind == "file") {
        if (a.input.empty()) {
            invalid("gen file needs --in");
        }
        set = load_set(a.input, a.repair);
    } else {
        ocs_state_set *s = nullptr;
        check(ocs_state_set_generate(a.kind.c_str(), a.d, a.n, &s));
        set.reset(s);
    }
    if (a.noise != 1) {
        ocs_state_set *s = nullptr;
        check(ocs_state_set_noise(set.get(), a.noise, &s));
        set.reset(s);
    }
    if (a.extend) {
        ocs_state_set *s = nullptr;
        check(ocs_state_set_extend(set.get(), &s));
        set.reset(s);
    }
    char *json = nullptr;
    check(ocs_state_set_to_json(set.get(), &json));
    std::string text = take(json) + "\n";
    if (a.out.empty()) {
        std::cout << text;
    } else {
        write_file(a.out, text);
    }
    int m = set_size(set);
    std::cerr << "d = " << set_dim(set) << ", m = " << m << "\nlabels:";
    for (int x = 0; x < m; x++) {
        char *label = nullptr;
        check(ocs_state_set_label(set.get(), x, &label));
        std::cerr << " " << take(label);
    }
    std::cerr << "\n";
    return 0;
}

// ---- analytic ----

struct AnalyticArgs {
    int d = 0;
    int r = 0;
    int s = 0;
    int m = 0;
    std::string json;
};

int cmd_analytic(const AnalyticArgs &a) {
    int r = a.r > 0 ? a.r : a.d;
    Json rows = Json::array();
    double v = 0;
    check(ocs_bound_result1(a.d, r, &v));
    rows.push_back({{"kind", "result1"}, {"d", a.d}, {"r", r}, {"v", v}});
    if (a.s > 0) {
        check(ocs_bound_result1_subspace(a.d, a.s, r, &v));
        rows.push_back({{"kind", "result1_subspace"}, {"d", a.d}, {"r", r}, {"s", a.s}, {"v", v}});
    }
    if (a.m > 0) {
        check(ocs_bound_result3(a.d, a.m, r, &v));
        rows.push_back({{"kind", "result3"}, {"d", a.d}, {"r", r}, {"M", a.m}, {"v", v}});
    }
    std::printf("%-18s %3s %3s %3s %3s  %s\n", "bound", "d", "r", "s", "M", "v");
    for (const auto &row : rows) {
        std::string s = row.contains("s") ? std::to_string(row["s"].get<int>()) : "-";
        std::string m = row.contains("M") ? std::to_string(row["M"].get<int>()) : "-";
        std::printf("%-18s %3d %3d %3s %3s  %.6f\n", row["kind"].get<std::string>().c_str(), a.d, r, s.c_str(),
                    m.c_str(), row["v"].get<double>());
    }
    if (!a.json.empty()) {
        write_file(a.json, Json{{"bounds", rows}}.dump(2) + "\n");
    }
    return 0;
}

// ---- simulate ----

struct SimulateArgs {
    std::string set;
    std::string devices;
    int r = 0;
    std::uint64_t seed = 0;
    std::string method = "automatic";
    std::int64_t cap = 200000;
    int refine = 0;
    double step = 0.1;
    std::string mode = "per_device";
    std::string out;
    std::string model_out;
    std::string sweep;
    std::string csv;
};

/// random:N, bases-model:M:r, mub-devices, file:path.
Devices make_devices(const std::string &spec, int d, int r, std::uint64_t seed, int n_override = 0) {
    ocs_devices *dev = nullptr;
    auto parts = split(spec, ':');
    if (parts.empty()) {
        invalid("empty device spec");
    }
    if (parts[0] == "random" && (parts.size() == 2 || n_override > 0)) {
        int n = n_override > 0 ? n_override : to_int(parts[1], spec);
        check(ocs_devices_random(d, r, n, seed, &dev));
    } else if (parts[0] == "bases-model" && parts.size() == 3) {
        check(ocs_devices_bases(d, to_int(parts[1], spec), to_int(parts[2], spec), &dev));
    } else if (parts[0] == "mub-devices" && parts.size() == 1) {
        check(ocs_devices_bases(d, d + 1, r, &dev));
    } else if (parts[0] == "file" && parts.size() >= 2) {
        std::string path = spec.substr(5);
        check(ocs_devices_from_json(read_file(path).c_str(), &dev));
    } else {
        invalid("device spec \"" + spec + "\" is not random:N, bases-model:M:r, mub-devices or file:path");
    }
    return Devices(dev);
}

Json simulate_settings(const SimulateArgs &a) {
    Json s = {{"method", a.method}, {"variable_cap", a.cap}};
    if (a.refine > 0) {
        s["refine_iterations"] = a.refine;
        s["refine_step"] = a.step;
        s["refine_seed"] = a.seed;
        s["refine_mode"] = a.mode;
    }
    return s;
}

int cmd_simulate(const SimulateArgs &a) {
    StateSet set = load_set(a.set);
    int d = set_dim(set);
    int r = a.r > 0 ? a.r : d;
    Json settings = simulate_settings(a);
    std::string settings_text = settings.dump();

    if (!a.sweep.empty()) {
        // param, v_star, residual, gap, seed for random:N at each N.
        std::string csv = "param,v_star,residual,gap,seed\n";
        for (const auto &item : split(a.sweep, ',')) {
            int n = to_int(item, "--sweep");
            Devices dev = make_devices("random", d, r, a.seed, n);
            ocs_simulation *sim = nullptr;
            check(ocs_simulate(set.get(), dev.get(), settings_text.c_str(), &sim));
            Simulation owner(sim);
            Json j = parse(take([&] {
                char *s = nullptr;
                check(ocs_simulation_to_json(sim, &s));
                return s;
            }()));
            char line[256];
            std::snprintf(line, sizeof line, "%d,%.12g,%.3g,%.3g,%llu\n", n, j["visibility"].get<double>(),
                          j["residual"].get<double>(), j["gap"].get<double>(), static_cast<unsigned long long>(a.seed));
            csv += line;
            std::cout << line << std::flush;
        }
        if (!a.csv.empty()) {
            write_file(a.csv, csv);
        }
        return 0;
    }

    Devices dev = make_devices(a.devices, d, r, a.seed);
    ocs_simulation *sim = nullptr;
    check(ocs_simulate(set.get(), dev.get(), settings_text.c_str(), &sim));
    Simulation owner(sim);
    double v = 0;
    check(ocs_simulation_visibility(sim, &v));
    char *json = nullptr;
    check(ocs_simulation_to_json(sim, &json));
    Json result = parse(take(json));
    result["seed"] = a.seed;
    result["config"] = {{"set", a.set}, {"devices", a.devices}, {"r", r}, {"settings", settings}};
    if (!a.out.empty()) {
        write_file(a.out, result.dump(2) + "\n");
    }
    if (!a.model_out.empty()) {
        check(ocs_simulation_model_json(sim, &json));
        write_file(a.model_out, take(json) + "\n");
    }
    std::printf("v* = %.9f  (residual %.2e, gap %.2e, %s, %d devices kept)\n", v, result["residual"].get<double>(),
                result["gap"].get<double>(), result["method"].get<std::string>().c_str(),
                static_cast<int>(result["model"]["devices"].size()));
    return 0;
}

// ---- witness ----

struct WitnessArgs {
    std::string spec;
    int d = 3;
    int n = 2;
    bool bound = false;
    bool critical = false;
    std::string eval;
    std::string target;
    bool no_symmetry = false;
    std::uint64_t cap = 1000000;
    int threads = 0;
    std::string checkpoint;
    bool resume = false;
    std::string out;
    std::string witness_out;
};

std::string checkpoint_path(const std::string &name) {
    if (name.empty() || name[0] == '/') {
        return name;
    }
    const char *dir = std::getenv("OCSIM_CHECKPOINT_DIR");
    return dir && *dir ? std::string(dir) + "/" + name : name;
}

int cmd_witness(const WitnessArgs &a) {
    ocs_witness *wp = nullptr;
    bool is_mub = a.spec == "mub";
    if (is_mub) {
        check(ocs_witness_mub(a.d, a.n, &wp));
    } else if (a.spec.rfind("file:", 0) == 0) {
        check(ocs_witness_from_json(read_file(a.spec.substr(5)).c_str(), &wp));
    } else {
        invalid("witness spec must be mub or file:path");
    }
    Witness w(wp);
    if (!a.witness_out.empty()) {
        char *json = nullptr;
        check(ocs_witness_to_json(w.get(), &json));
        write_file(a.witness_out, take(json) + "\n");
    }
    if (!a.eval.empty()) {
        StateSet set = load_set(a.eval);
        double value = 0;
        check(ocs_witness_evaluate(w.get(), set.get(), &value));
        std::printf("W = %.10f\n", value);
    }
    if (!a.bound && !a.critical) {
        return 0;
    }
    std::string cp = checkpoint_path(a.checkpoint);
    if (a.resume && cp.empty()) {
        invalid("--resume needs --checkpoint");
    }
    if (!cp.empty() && !a.resume) {
        std::remove(cp.c_str());
    }
    Json settings = {{"symmetry_reduce", !a.no_symmetry}, {"cap", a.cap}, {"threads", a.threads}};
    if (!cp.empty()) {
        settings["checkpoint_path"] = cp;
    }
    ocs_bound *bp = nullptr;
    check(ocs_witness_bound(w.get(), settings.dump().c_str(), &bp));
    Bound b(bp);
    double beta = 0, unc = 0;
    check(ocs_bound_beta(b.get(), &beta, &unc));
    char *json = nullptr;
    check(ocs_bound_to_json(b.get(), &json));
    Json result = parse(take(json));
    std::printf("beta = %.6f +- %.1e  [%s, certified classical bound (upper)]\n", beta, unc,
                result["method"].get<std::string>().c_str());
    if (a.critical) {
        StateSet target;
        if (!a.target.empty()) {
            target = load_set(a.target);
        } else if (is_mub) {
            ocs_state_set *s = nullptr;
            check(ocs_state_set_generate("mub", a.d, a.n, &s));
            target.reset(s);
        } else {
            invalid("--critical with a witness file needs --set");
        }
        double v = 0;
        check(ocs_critical_visibility(w.get(), target.get(), beta, &v));
        std::printf("critical visibility = %.6f\n", v);
        result["critical_visibility"] = v;
    }
    result["config"] = {{"witness", a.spec}, {"settings", settings}};
    if (is_mub) {
        result["config"]["d"] = a.d;
        result["config"]["n"] = a.n;
    }
    result["seed"] = 0;
    if (!a.out.empty()) {
        write_file(a.out, result.dump(2) + "\n");
    }
    return 0;
}

// ---- steer / jm ----

int cmd_steer(const std::string &path, const std::string &witness_out) {
    ocs_witness *wp = nullptr;
    ocs_bound *bp = nullptr;
    check(ocs_steering_to_witness(read_file(path).c_str(), &wp, &bp));
    Witness w(wp);
    Bound b(bp);
    double zeta = 0;
    check(ocs_bound_beta(b.get(), &zeta, nullptr));
    std::printf("zeta = %.10f\n", zeta);
    if (!witness_out.empty()) {
        char *json = nullptr;
        check(ocs_witness_to_json(w.get(), &json));
        write_file(witness_out, take(json) + "\n");
    }
    return 0;
}

struct JmArgs {
    std::string set;
    double v = -1;
    bool threshold = false;
    double width = 1e-4;
    std::string parent;
};

int cmd_jm(const JmArgs &a) {
    StateSet set = load_set(a.set);
    if (a.threshold) {
        double v = 0;
        int calls = 0;
        check(ocs_jm_threshold(set.get(), a.width, &v, &calls));
        std::printf("threshold = %.6f  (width %.0e, %d SDPs)\n", v, a.width, calls);
        return 0;
    }
    if (a.v < 0) {
        invalid("jm needs --v or --threshold");
    }
    int feasible = 0;
    double residual = 0;
    char *parent = nullptr;
    check(ocs_jm_feasible(set.get(), a.v, &feasible, &residual, a.parent.empty() ? nullptr : &parent));
    std::printf("%s at v = %.6f  (residual %.2e)\n", feasible ? "feasible" : "infeasible", a.v, residual);
    if (parent != nullptr) {
        write_file(a.parent, take(parent) + "\n");
    }
    return 0;
}

// ---- verify ----

int cmd_verify(const std::string &suite, std::uint64_t seed, int threads, const std::string &out) {
    char *csv = nullptr;
    int ok = 0;
    check(ocs_verify(suite.c_str(), seed, threads, &csv, &ok));
    std::string text = take(csv);
    std::cout << text;
    if (!out.empty()) {
        write_file(out, text);
    }
    // Failed checks are not an error category of their own.
    return ok ? 0 : 4;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"ocsim: classical simulation of quantum state sets"};
    app.require_subcommand(1);
    app.set_version_flag("--version", ocs_version());

    GenArgs gen;
    auto *g = app.add_subcommand("gen", "Generate a state set");
    g->add_option("kind", gen.kind, "bb84, mub, sic, pair or file")->required();
    g->add_option("--d", gen.d, "Dimension");
    g->add_option("--n", gen.n, "Number of bases (mub)");
    g->add_option("--in", gen.input, "Input state set (file)");
    g->add_option("--noise", gen.noise, "Visibility of isotropic noise")->check(CLI::Range(0.0, 1.0));
    g->add_flag("--extend", gen.extend, "Append (I - rho)/(d - 1) for every state");
    g->add_flag("--repair", gen.repair, "Clip small negative eigenvalues of input states");
    g->add_option("-o,--out", gen.out, "Output file (default stdout)");

    AnalyticArgs an;
    auto *a = app.add_subcommand("analytic", "Closed-form simulability bounds");
    a->add_option("--d", an.d, "Dimension")->required();
    a->add_option("--r", an.r, "Complexity (default d)");
    a->add_option("--s", an.s, "Span dimension of the pure states");
    a->add_option("--M", an.m, "Number of bases");
    a->add_option("--json", an.json, "Also write the table as JSON");

    SimulateArgs sim;
    auto *s = app.add_subcommand("simulate", "Largest visibility with a classical model over a device family");
    s->add_option("set", sim.set, "State set file")->required();
    s->add_option("--devices", sim.devices, "random:N, bases-model:M:r, mub-devices or file:path");
    s->add_option("--r", sim.r, "Subset size for random and mub-devices (default d)");
    s->add_option("--seed", sim.seed, "Seed for random families and refinement");
    s->add_option("--method", sim.method, "automatic, explicit or column_generation");
    s->add_option("--cap", sim.cap, "Variable cap");
    s->add_option("--refine", sim.refine, "Hill-climbing iterations on the device bases");
    s->add_option("--step", sim.step, "Refinement step size");
    s->add_option("--mode", sim.mode, "per_device or global_rotation");
    s->add_option("-o,--out", sim.out, "Result JSON");
    s->add_option("--model-out", sim.model_out, "Classical model JSON");
    s->add_option("--sweep", sim.sweep, "Comma-separated N for random:N runs, printed as CSV");
    s->add_option("--csv", sim.csv, "Sweep CSV file");

    WitnessArgs wit;
    auto *w = app.add_subcommand("witness", "Witness values and classical bounds");
    w->add_option("spec", wit.spec, "mub or file:path")->required();
    w->add_option("--d", wit.d, "Dimension (mub)");
    w->add_option("--n", wit.n, "Number of bases (mub)");
    w->add_flag("--bound", wit.bound, "Compute the classical bound");
    w->add_flag("--critical", wit.critical, "Critical visibility of the target set");
    w->add_option("--eval", wit.eval, "Evaluate on a state set file");
    w->add_option("--set", wit.target, "Target set for --critical");
    w->add_flag("--no-symmetry", wit.no_symmetry, "Enumerate all strategies");
    w->add_option("--cap", wit.cap, "Strategy cap");
    w->add_option("--threads", wit.threads, "Worker threads (default OCSIM_THREADS or 1)");
    w->add_option("--checkpoint", wit.checkpoint, "Checkpoint file (relative to OCSIM_CHECKPOINT_DIR)");
    w->add_flag("--resume", wit.resume, "Continue from the checkpoint");
    w->add_option("-o,--out", wit.out, "Bound JSON");
    w->add_option("--witness-out", wit.witness_out, "Witness JSON");

    std::string steer_in, steer_out;
    auto *st = app.add_subcommand("steer", "Steering inequality to witness, with its exact bound");
    st->add_option("inequality", steer_in, "Steering inequality JSON")->required();
    st->add_option("-o,--out", steer_out, "Witness JSON");

    JmArgs jm;
    auto *j = app.add_subcommand("jm", "Joint measurability of the binarized state measurements");
    j->add_option("set", jm.set, "State set file")->required();
    auto *jv = j->add_option("--v", jm.v, "Visibility to test")->check(CLI::Range(0.0, 1.0));
    auto *jt = j->add_flag("--threshold", jm.threshold, "Bisect for the largest feasible visibility");
    jv->excludes(jt);
    j->add_option("--width", jm.width, "Bisection width");
    j->add_option("--parent", jm.parent, "Write the parent measurement when feasible");

    std::string suite, verify_out;
    std::uint64_t verify_seed = 1;
    int verify_threads = 0;
    auto *v = app.add_subcommand("verify", "Run a check suite and print CSV");
    v->add_option("suite", suite, "haar, table1, witness, jm or all")->required();
    v->add_option("--seed", verify_seed, "Monte-Carlo seed");
    v->add_option("--threads", verify_threads, "Worker threads");
    v->add_option("-o,--out", verify_out, "CSV file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : OCS_ERR_VALIDATION;
    }

    try {
        if (*g) {
            return cmd_gen(gen);
        }
        if (*a) {
            return cmd_analytic(an);
        }
        if (*s) {
            if (sim.devices.empty() && sim.sweep.empty()) {
                invalid("simulate needs --devices or --sweep");
            }
            return cmd_simulate(sim);
        }
        if (*w) {
            return cmd_witness(wit);
        }
        if (*st) {
            return cmd_steer(steer_in, steer_out);
        }
        if (*j) {
            return cmd_jm(jm);
        }
        if (*v) {
            return cmd_verify(suite, verify_seed, verify_threads, verify_out);
        }
    } catch (const Failure &f) {
        std::cerr << "error: " << f.message << "\n";
        return f.code;
    }
    return 0;
}

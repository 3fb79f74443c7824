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

#include "ocsim/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ocsim/error.hpp"

namespace ocsim {

namespace {

/// Runs f, turning nlohmann type/range errors into ValidationError.
template <typename F>
auto guarded(const char *what, F f) -> decltype(f()) {
    try {
        return f();
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string(what) + ": " + e.what());
    }
}

const Json &field(const Json &j, const char *key, const char *what) {
    if (!j.is_object() || !j.contains(key)) {
        throw ValidationError(std::string(what) + ": missing \"" + key + "\"");
    }
    return j.at(key);
}

Json real_matrix_to_json(const RealMatrix &m) {
    Json out = Json::array();
    for (int i = 0; i < m.rows(); i++) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); j++) {
            row.push_back(m(i, j));
        }
        out.push_back(row);
    }
    return out;
}

RealMatrix real_matrix_from_json(const Json &j, const char *what) {
    if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
        throw ValidationError(std::string(what) + ": expected a non-empty nested array");
    }
    RealMatrix m(j.size(), j[0].size());
    for (size_t r = 0; r < j.size(); r++) {
        if (!j[r].is_array() || j[r].size() != j[0].size()) {
            throw ValidationError(std::string(what) + ": ragged rows");
        }
        for (size_t c = 0; c < j[r].size(); c++) {
            m(r, c) = j[r][c].get<double>();
        }
    }
    return m;
}

void check_dim(const Json &j, int d, const char *what) {
    if (j.contains("dim") && j.at("dim").get<int>() != d) {
        throw ValidationError(std::string(what) + ": \"dim\" disagrees with the matrices");
    }
}

}  // namespace

Json matrix_to_json(const ComplexMatrix &m) {
    Json out = Json::array();
    for (int i = 0; i < m.rows(); i++) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); j++) {
            row.push_back({m(i, j).real(), m(i, j).imag()});
        }
        out.push_back(row);
    }
    return out;
}

ComplexMatrix matrix_from_json(const Json &j) {
    return guarded("matrix", [&] {
        if (!j.is_array() || j.empty()) {
            throw ValidationError("matrix: expected a non-empty array of rows");
        }
        size_t n = j.size();
        ComplexMatrix m(n, n);
        for (size_t r = 0; r < n; r++) {
            if (!j[r].is_array() || j[r].size() != n) {
                throw ValidationError("matrix: must be square");
            }
            for (size_t c = 0; c < n; c++) {
                const Json &z = j[r][c];
                if (z.is_number()) {
                    m(r, c) = z.get<double>();
                } else if (z.is_array() && z.size() == 2) {
                    m(r, c) = Complex(z[0].get<double>(), z[1].get<double>());
                } else {
                    throw ValidationError("matrix: entries must be [re, im] pairs");
                }
            }
        }
        if (!m.allFinite()) {
            throw ValidationError("matrix: non-finite entry");
        }
        return m;
    });
}

Json state_set_to_json(const StateSet &set) {
    Json states = Json::array();
    for (int x = 0; x < set.size(); x++) {
        states.push_back({{"label", set.label(x)}, {"matrix", matrix_to_json(set.state(x).matrix())}});
    }
    return {{"dim", set.dim()}, {"states", states}};
}

StateSet state_set_from_json(const Json &j, bool repair) {
    return guarded("state set", [&] {
        const Json &arr = field(j, "states", "state set");
        if (!arr.is_array() || arr.empty()) {
            throw ValidationError("state set: \"states\" must be a non-empty array");
        }
        std::vector<DensityMatrix> states;
        std::vector<std::string> labels;
        for (size_t x = 0; x < arr.size(); x++) {
            ComplexMatrix m = matrix_from_json(field(arr[x], "matrix", "state"));
            if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
                throw ValidationError("state " + std::to_string(x + 1) + ": matrix is not Hermitian");
            }
            states.emplace_back(HermitianOperator(m), repair);
            labels.push_back(arr[x].contains("label") ? arr[x]["label"].get<std::string>() : std::to_string(x + 1));
        }
        StateSet set(states, labels);
        check_dim(j, set.dim(), "state set");
        return set;
    });
}

Json povms_to_json(const std::vector<Povm> &povms) {
    Json out = Json::array();
    for (const auto &p : povms) {
        Json effects = Json::array();
        for (const auto &e : p.effects()) {
            effects.push_back(matrix_to_json(e.matrix()));
        }
        out.push_back({{"effects", effects}});
    }
    return out;
}

std::vector<Povm> povms_from_json(const Json &j) {
    return guarded("measurements", [&] {
        const Json &arr = j.is_object() ? field(j, "measurements", "measurements") : j;
        if (!arr.is_array() || arr.empty()) {
            throw ValidationError("measurements: expected a non-empty array");
        }
        std::vector<Povm> out;
        for (const auto &m : arr) {
            std::vector<HermitianOperator> effects;
            for (const auto &e : field(m, "effects", "measurement")) {
                effects.emplace_back(matrix_from_json(e));
            }
            if (effects.empty()) {
                throw ValidationError("measurement: no effects");
            }
            out.emplace_back(effects);
        }
        return out;
    });
}

Json devices_to_json(const std::vector<Device> &devices) {
    Json arr = Json::array();
    for (const auto &dev : devices) {
        Json subset = Json::array();
        for (int k : dev.subset()) {
            subset.push_back(k + 1);
        }
        arr.push_back({{"basis", matrix_to_json(dev.basis())}, {"subset", subset}});
    }
    return {{"dim", devices.empty() ? 0 : devices.front().dim()}, {"devices", arr}};
}

std::vector<Device> devices_from_json(const Json &j) {
    return guarded("devices", [&] {
        const Json &arr = field(j, "devices", "devices");
        if (!arr.is_array() || arr.empty()) {
            throw ValidationError("devices: expected a non-empty array");
        }
        std::vector<Device> out;
        for (const auto &dj : arr) {
            ComplexMatrix basis = matrix_from_json(field(dj, "basis", "device"));
            if (!dj.contains("subset")) {
                out.emplace_back(basis);
                continue;
            }
            std::vector<int> subset;
            for (const auto &k : dj.at("subset")) {
                int i = k.get<int>();
                if (i < 1 || i > basis.rows()) {
                    throw ValidationError("device subset index " + std::to_string(i) + " outside [1, d]");
                }
                subset.push_back(i - 1);
            }
            out.emplace_back(basis, subset);
        }
        check_dim(j, out.front().dim(), "devices");
        return out;
    });
}

Json model_to_json(const ClassicalModel &model) {
    Json j = devices_to_json(model.devices());
    j["weights"] = model.weights();
    j["cond"] = model.cond();
    return j;
}

ClassicalModel model_from_json(const Json &j) {
    return guarded("model", [&] {
        auto devices = devices_from_json(j);
        auto weights = field(j, "weights", "model").get<std::vector<double>>();
        auto cond = field(j, "cond", "model").get<Conditionals>();
        return ClassicalModel(devices, weights, cond);
    });
}

Json simulation_result_to_json(const SimulationResult &r) {
    return {
        {"visibility", r.visibility},
        {"residual", r.residual},
        {"lp_residual", r.lp_residual},
        {"gap", r.gap},
        {"pricing_violation", r.pricing_violation},
        {"method", simulation_method_name(r.method)},
        {"lp_iterations", r.lp_iterations},
        {"rounds", r.rounds},
        {"columns", r.columns},
        {"family", r.family},
        {"model", model_to_json(r.model)},
    };
}

Json witness_to_json(const Witness &w) {
    return {{"dim", w.dim()}, {"coefficients", w.coefficients()}, {"measurements", povms_to_json(w.measurements())}};
}

Witness witness_from_json(const Json &j) {
    return guarded("witness", [&] {
        auto meas = povms_from_json(field(j, "measurements", "witness"));
        auto c = field(j, "coefficients", "witness").get<WitnessCoefficients>();
        Witness w(meas, c);
        check_dim(j, w.dim(), "witness");
        return w;
    });
}

Json witness_bound_to_json(const WitnessBound &b) {
    Json argmax = Json::array();
    for (int i : b.argmax) {
        argmax.push_back(i + 1);
    }
    Json j = {
        {"method", bound_method_name(b.method)},
        {"beta", std::isfinite(b.beta) ? Json(b.beta) : Json(nullptr)},
        {"uncertainty", b.uncertainty},
        {"strategies", b.strategies},
        {"argmax", argmax},
        {"max_gap", b.max_gap},
        {"max_abs_gap", b.max_abs_gap},
        {"resumed_from", b.resumed_from},
    };
    if (!b.values.empty()) {
        j["values"] = b.values;
    }
    return j;
}

Json steering_to_json(const SteeringInequality &s) {
    return {{"s", real_matrix_to_json(s.s)}, {"bob_measurements", povms_to_json(s.bob)}};
}

SteeringInequality steering_from_json(const Json &j) {
    return guarded("steering inequality", [&] {
        RealMatrix s = real_matrix_from_json(field(j, "s", "steering inequality"), "steering inequality");
        return SteeringInequality(s, povms_from_json(field(j, "bob_measurements", "steering inequality")));
    });
}

Json parent_to_json(const ParentMeasurement &p) {
    Json outcomes = Json::array();
    for (int o = 0; o < p.num_outcomes(); o++) {
        outcomes.push_back({{"label", p.labels[o]}, {"effect", matrix_to_json(p.effects[o].matrix())}});
    }
    return {{"dim", p.dim()}, {"outcomes", outcomes}, {"p0", p.p0}};
}

ParentMeasurement parent_from_json(const Json &j) {
    return guarded("parent", [&] {
        std::vector<HermitianOperator> effects;
        std::vector<std::string> labels;
        for (const auto &o : field(j, "outcomes", "parent")) {
            effects.emplace_back(matrix_from_json(field(o, "effect", "parent outcome")));
            labels.push_back(o.value("label", std::to_string(labels.size() + 1)));
        }
        if (effects.empty()) {
            throw ValidationError("parent: no outcomes");
        }
        return ParentMeasurement(effects, labels, field(j, "p0", "parent").get<std::vector<std::vector<double>>>());
    });
}

Json analytic_bound_to_json(const AnalyticBound &b) {
    Json j = {{"kind", bound_kind_name(b.kind)}, {"d", b.d}, {"r", b.r}, {"v", b.v}};
    if (b.kind == BoundKind::result1_subspace) {
        j["s"] = b.s;
    }
    if (b.kind == BoundKind::result3) {
        j["M"] = b.M;
    }
    return j;
}

Json parse_json(const std::string &text, const std::string &what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(what + ": " + e.what());
    }
}

std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        throw ValidationError("cannot write " + path);
    }
}

Json read_json_file(const std::string &path) {
    return parse_json(read_text_file(path), path);
}

void write_json_file(const std::string &path, const Json &j) {
    write_text_file(path, j.dump(2) + "\n");
}

}  // namespace ocsim

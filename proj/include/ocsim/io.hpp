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

#ifndef OCSIM_IO_HPP
#define OCSIM_IO_HPP

#include <string>
#include <vector>

#include "json.hpp"
#include "ocsim/analytic.hpp"
#include "ocsim/simulation.hpp"
#include "ocsim/steering.hpp"
#include "ocsim/witness.hpp"

namespace ocsim {

using Json = nlohmann::json;

/// Row-major [[ [re, im], ... ], ...].
Json matrix_to_json(const ComplexMatrix &m);
ComplexMatrix matrix_from_json(const Json &j);

/// { "dim", "states": [ { "label", "matrix" } ] }
Json state_set_to_json(const StateSet &set);
StateSet state_set_from_json(const Json &j, bool repair = false);

/// [ { "effects": [matrix, ...] }, ... ]
Json povms_to_json(const std::vector<Povm> &povms);
std::vector<Povm> povms_from_json(const Json &j);

/// { "dim", "devices": [ { "basis", "subset" (1-based) } ] }. Model files are accepted too.
Json devices_to_json(const std::vector<Device> &devices);
std::vector<Device> devices_from_json(const Json &j);

/// { "dim", "devices", "weights", "cond": [device][x][k] }
Json model_to_json(const ClassicalModel &model);
ClassicalModel model_from_json(const Json &j);

Json simulation_result_to_json(const SimulationResult &r);

/// { "dim", "coefficients": [b][x][y], "measurements": Povm list }
Json witness_to_json(const Witness &w);
Witness witness_from_json(const Json &j);

/// Strategy written 1-based.
Json witness_bound_to_json(const WitnessBound &b);

/// { "s": [x][y], "bob_measurements": Povm list }
Json steering_to_json(const SteeringInequality &s);
SteeringInequality steering_from_json(const Json &j);

/// { "dim", "outcomes": [ { "label", "effect" } ], "p0": [x][o] }
Json parent_to_json(const ParentMeasurement &p);
ParentMeasurement parent_from_json(const Json &j);

Json analytic_bound_to_json(const AnalyticBound &b);

/// JSON parse and shape errors surface as ValidationError naming the path.
Json parse_json(const std::string &text, const std::string &what = "input");
Json read_json_file(const std::string &path);
void write_json_file(const std::string &path, const Json &j);
std::string read_text_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &text);

}  // namespace ocsim

#endif

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

#ifndef OCSIM_VERIFY_HPP
#define OCSIM_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace ocsim {

enum class Relation { equal, at_least, at_most };

struct VerifyCheck {
    std::string name;
    double expected;
    double got;
    double tolerance;
    Relation relation = Relation::equal;
    bool pass = false;
};

/// Named suites: haar, table1, witness, jm, all. ValidationError for anything else.
std::vector<VerifyCheck> run_verify(const std::string &suite, std::uint64_t seed, int threads = 0);

/// "check,expected,got,tolerance,pass" with one row per check; the relation is part of the name.
std::string verify_csv(const std::vector<VerifyCheck> &checks);

bool all_pass(const std::vector<VerifyCheck> &checks);

}  // namespace ocsim

#endif

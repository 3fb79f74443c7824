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

#ifndef OCSIM_WITNESS_HPP
#define OCSIM_WITNESS_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ocsim/sdp.hpp"
#include "ocsim/states.hpp"

namespace ocsim {

/// c[b][x][y]. The b extent is the largest outcome count; entries past a measurement's
/// outcomes must be zero.
using WitnessCoefficients = std::vector<std::vector<std::vector<double>>>;

/// W = sum_{b,x,y} c_{bxy} tr(rho_x M_{b|y}).
class Witness {
   public:
    Witness(std::vector<Povm> measurements, WitnessCoefficients coefficients);

    int dim() const {
        return measurements_.front().dim();
    }
    int num_states() const {
        return static_cast<int>(coefficients_.front().size());
    }
    int num_measurements() const {
        return static_cast<int>(measurements_.size());
    }
    int num_outcomes() const {
        return static_cast<int>(coefficients_.size());
    }
    const std::vector<Povm> &measurements() const {
        return measurements_;
    }
    const WitnessCoefficients &coefficients() const {
        return coefficients_;
    }
    double c(int b, int x, int y) const {
        return coefficients_[b][x][y];
    }

   private:
    std::vector<Povm> measurements_;
    WitnessCoefficients coefficients_;
};

double evaluate(const Witness &w, const StateSet &set);

/// O_x = sum_{b,y} c_{bxy} M_{b|y}
std::vector<HermitianOperator> reduced_operators(const Witness &w);

/// Assignment x -> i, 0-based values in memory, 1-based in files.
using DeterministicStrategy = std::vector<int>;

/// Lexicographic enumeration of all d^m assignments, or with symmetry reduction only the
/// restricted growth strings (first occurrences of values appear in increasing order),
/// one per orbit of value relabelings.
class StrategyEnumerator {
   public:
    StrategyEnumerator(int m, int d, bool symmetry_reduce);
    /// Writes the next strategy; false when exhausted.
    bool next(DeterministicStrategy &out);
    /// Number of strategies returned so far.
    std::uint64_t position() const {
        return position_;
    }

   private:
    int m_;
    int d_;
    bool reduce_;
    bool started_ = false;
    bool done_ = false;
    DeterministicStrategy cur_;
    std::uint64_t position_ = 0;
};

/// Size of the enumeration; saturates at UINT64_MAX.
std::uint64_t strategy_count(int m, int d, bool symmetry_reduce);

/// Full list; throws SizingError past cap.
std::vector<DeterministicStrategy> enumerate_strategies(int m, int d, bool symmetry_reduce,
                                                        std::uint64_t cap = 1000000);

struct StrategyValue {
    double value = 0;
    /// SDP relative gap and |primal - dual|.
    double gap = 0;
    double abs_gap = 0;
    double residual = 0;
};

/// Upper bound on max over bases {phi_i} of sum_x <phi_{gamma(x)}|O_x|phi_{gamma(x)}>:
/// max sum_i tr(Q_i E_i), E_i PSD, tr E_i = 1, sum_i E_i = I, with Q_i = sum_{x: gamma(x)=i} O_x.
StrategyValue strategy_bound_sdp(const std::vector<HermitianOperator> &ops, const DeterministicStrategy &gamma,
                                 const SdpSettings &settings = {});
double strategy_bound_sdp(const Witness &w, const DeterministicStrategy &gamma);

/// The SDP for one strategy, for dumping and inspection.
SdpProblem strategy_sdp(const std::vector<HermitianOperator> &ops, const DeterministicStrategy &gamma);

enum class BoundMethod { sdp_relaxation, qubit_exact };
const char *bound_method_name(BoundMethod m);

struct WitnessBound {
    double beta = -INFINITY;
    std::uint64_t strategies = 0;
    BoundMethod method = BoundMethod::sdp_relaxation;
    DeterministicStrategy argmax;
    /// Per-strategy values in enumeration order (classical_bound with keep_values).
    std::vector<double> values;
    double max_gap = 0;
    double max_abs_gap = 0;
    /// beta is reported as beta +- uncertainty, 1e-6 plus the largest absolute SDP gap.
    double uncertainty = 0;
    /// Strategies skipped because a checkpoint already covered them.
    std::uint64_t resumed_from = 0;
};

struct BoundSettings {
    bool symmetry_reduce = true;
    /// 0: read OCSIM_THREADS, default 1.
    int threads = 0;
    std::uint64_t cap = 1000000;
    bool keep_values = false;
    /// Empty: no checkpointing. Otherwise a JSON file rewritten every checkpoint_every strategies
    /// and read back on start when it matches the witness.
    std::string checkpoint_path;
    int checkpoint_every = 1000;
    SdpSettings sdp;
};

/// beta = max over strategies of strategy_bound_sdp. Ties keep the earliest strategy.
WitnessBound classical_bound(const Witness &w, const BoundSettings &settings = {});

/// d = 2, c_{bxy} = (-1)^b s_{xy} with rank-one projective B_y:
/// beta = max over signs a of lambda_max(sum_{x,y} (-1)^{a_x} s_{xy} (M_{0|y} - M_{1|y})).
WitnessBound qubit_exact_bound(const RealMatrix &s, const std::vector<Povm> &measurements);
/// The witness that qubit_exact_bound bounds.
Witness sign_witness(const RealMatrix &s, const std::vector<Povm> &measurements);

/// First n mutually unbiased bases in dimension d; c_{b,(j,k),y} = delta_{bk} delta_{jy}, x = j d + k.
Witness mub_witness(int d, int n);

/// v with v W(target) + (1 - v) W(I/d states) = beta; ValidationError when it is outside [0, 1].
double critical_visibility(const Witness &w, const StateSet &target, double beta);

/// Worker count from OCSIM_THREADS (>= 1), or 1.
int default_threads();

}  // namespace ocsim

#endif

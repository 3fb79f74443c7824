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

#ifndef OCSIM_STATES_HPP
#define OCSIM_STATES_HPP

#include <string>
#include <vector>

#include "ocsim/linalg.hpp"

namespace ocsim {

struct StateTolerances {
    double trace = 1e-10;
    double psd = 1e-10;
    double povm_sum = 1e-9;
};

/// Unit-trace PSD operator. Construction validates; with repair=true, negative eigenvalues are
/// clipped and the trace renormalized first.
class DensityMatrix {
   public:
    explicit DensityMatrix(const HermitianOperator &op, bool repair = false, const StateTolerances &tol = {});
    /// |psi><psi| / <psi|psi>
    static DensityMatrix pure(const ComplexVector &psi);
    static DensityMatrix maximally_mixed(int d);

    int dim() const {
        return op_.dim();
    }
    const HermitianOperator &op() const {
        return op_;
    }
    const ComplexMatrix &matrix() const {
        return op_.matrix();
    }
    double purity() const;
    bool is_pure(double tol = 1e-9) const {
        return std::abs(purity() - 1) <= tol;
    }

   private:
    HermitianOperator op_;
};

class StateSet {
   public:
    StateSet(std::vector<DensityMatrix> states, std::vector<std::string> labels);

    int dim() const {
        return states_.front().dim();
    }
    int size() const {
        return static_cast<int>(states_.size());
    }
    const DensityMatrix &state(int x) const;
    const std::string &label(int x) const {
        return labels_.at(x);
    }
    const std::vector<DensityMatrix> &states() const {
        return states_;
    }
    const std::vector<std::string> &labels() const {
        return labels_;
    }

   private:
    std::vector<DensityMatrix> states_;
    std::vector<std::string> labels_;
};

class Povm {
   public:
    explicit Povm(std::vector<HermitianOperator> effects, const StateTolerances &tol = {});
    /// Projective measurement onto the columns of a unitary.
    static Povm from_basis(const ComplexMatrix &u);

    int dim() const {
        return effects_.front().dim();
    }
    int size() const {
        return static_cast<int>(effects_.size());
    }
    const HermitianOperator &effect(int b) const {
        return effects_.at(b);
    }
    const std::vector<HermitianOperator> &effects() const {
        return effects_;
    }
    /// d effects that are rank-one orthogonal projectors.
    bool is_rank_one_projective(double tol = 1e-10) const;
    /// For a rank-one projective POVM: the unitary whose k-th column spans effect k.
    ComplexMatrix basis() const;

   private:
    std::vector<HermitianOperator> effects_;
};

struct NoiseSpec {
    double visibility;
    explicit NoiseSpec(double v);
};

/// rho -> v rho + (1 - v) I / d for every state.
StateSet apply_isotropic_noise(const StateSet &set, NoiseSpec noise);

/// |0>, |1>, |+>, |->.
StateSet gen_bb84();

/// The d + 1 mutually unbiased bases as unitaries (columns are basis vectors);
/// d prime or d = 4.
std::vector<ComplexMatrix> mub_unitaries(int d);
std::vector<Povm> gen_mub_bases(int d);

/// The d * n states of the first n bases, labeled "(j,k)" from 1.
StateSet gen_mub_states(int d, int n);

/// Weyl-Heisenberg SIC states for d in {2, 3, 4}, labeled "(a,b)" by the displacement X^a Z^b.
StateSet gen_sic(int d);

/// |0> and (|0> + |1> + |2>) / sqrt(3).
StateSet gen_pair_maxcoherent();

/// Appends (I - rho_x) / (d - 1) for every state, labels suffixed with a prime.
StateSet extend_set(const StateSet &set);

}  // namespace ocsim

#endif

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

#ifndef OCSIM_LINALG_HPP
#define OCSIM_LINALG_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace ocsim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Every stochastic routine takes its generator explicitly.
using Rng = std::mt19937_64;

/// A d x d Hermitian operator. Construction symmetrizes the input as (A + A^dagger)/2,
/// so the stored matrix is Hermitian to rounding.
class HermitianOperator {
   public:
    HermitianOperator() = default;
    explicit HermitianOperator(const ComplexMatrix &m);

    static HermitianOperator zero(int d);
    static HermitianOperator identity(int d);
    /// |v><v| (no normalization).
    static HermitianOperator projector(const ComplexVector &v);

    int dim() const {
        return static_cast<int>(m_.rows());
    }
    const ComplexMatrix &matrix() const {
        return m_;
    }
    Complex operator()(int i, int j) const {
        return m_(i, j);
    }
    double trace() const {
        return m_.trace().real();
    }
    /// tr(A B), real for Hermitian A and B.
    double inner(const HermitianOperator &other) const;
    double frobenius_norm() const {
        return m_.norm();
    }

    HermitianOperator &operator+=(const HermitianOperator &o);
    HermitianOperator &operator-=(const HermitianOperator &o);
    HermitianOperator &operator*=(double s);
    friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator &b) {
        return a += b;
    }
    friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator &b) {
        return a -= b;
    }
    friend HermitianOperator operator*(double s, HermitianOperator a) {
        return a *= s;
    }
    friend HermitianOperator operator*(HermitianOperator a, double s) {
        return a *= s;
    }

   private:
    ComplexMatrix m_;
};

struct JacobiSettings {
    double off_tolerance = 1e-13;  // relative to the Frobenius norm of the input
    int sweep_factor = 100;        // sweep cap is sweep_factor * d^2
};

struct EigenDecomposition {
    RealVector values;      // ascending
    ComplexMatrix vectors;  // columns, orthonormal
    int sweeps = 0;
};

/// Cyclic complex Jacobi eigensolver. Throws SolverError if the sweep cap is hit.
EigenDecomposition eig_hermitian(const HermitianOperator &a, const JacobiSettings &settings = {});

double min_eigenvalue(const HermitianOperator &a);
double max_eigenvalue(const HermitianOperator &a);

/// true iff the smallest eigenvalue is >= -tol.
bool is_psd(const HermitianOperator &a, double tol);

/// Haar-distributed d x d unitary (Ginibre matrix, QR, then R's diagonal phases moved into Q).
ComplexMatrix sample_haar_unitary(int d, Rng &rng);

/// Hermitian matrix drawn from the Gaussian unitary ensemble, unit variance off-diagonal.
HermitianOperator sample_gue(int d, Rng &rng);

/// exp(i t H).
ComplexMatrix unitary_exp(const HermitianOperator &h, double t);

/// Isometric embedding of d x d Hermitian matrices into R^{d^2}: the d diagonal entries,
/// then for each i < j in row-major order the pair (sqrt2 Re A_ij, sqrt2 Im A_ij).
/// <vec(A), vec(B)> = tr(AB).
RealVector hermitian_to_real_vector(const HermitianOperator &a);
HermitianOperator real_vector_to_hermitian(const RealVector &v, int d);

/// The orthonormal Hermitian basis dual to hermitian_to_real_vector: tr(B_l A) = vec(A)_l.
std::vector<HermitianOperator> hermitian_basis(int d);

/// ||U^dagger U - I||_F.
double unitarity_defect(const ComplexMatrix &u);

/// 1/2 ||A - B||_1.
double trace_distance(const HermitianOperator &a, const HermitianOperator &b);

/// All r-element subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> combinations(int n, int r);

/// Seed for an independent worker stream, derived from (seed, stream).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace ocsim

#endif

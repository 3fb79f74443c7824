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

#include "ocsim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ocsim/error.hpp"

namespace ocsim {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

double off_diagonal_norm(const ComplexMatrix &a) {
    double s = 0;
    for (Eigen::Index j = 0; j < a.cols(); j++) {
        for (Eigen::Index i = 0; i < a.rows(); i++) {
            if (i != j) {
                s += std::norm(a(i, j));
            }
        }
    }
    return std::sqrt(s);
}

}  // namespace

HermitianOperator::HermitianOperator(const ComplexMatrix &m) {
    if (m.rows() != m.cols()) {
        throw ValidationError("Hermitian operator must be square, got " + std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()));
    }
    if (!m.allFinite()) {
        throw ValidationError("Hermitian operator has non-finite entries");
    }
    m_ = (m + m.adjoint()) * 0.5;
}

HermitianOperator HermitianOperator::zero(int d) {
    return HermitianOperator(ComplexMatrix::Zero(d, d));
}

HermitianOperator HermitianOperator::identity(int d) {
    return HermitianOperator(ComplexMatrix::Identity(d, d));
}

HermitianOperator HermitianOperator::projector(const ComplexVector &v) {
    return HermitianOperator(v * v.adjoint());
}

double HermitianOperator::inner(const HermitianOperator &other) const {
    // tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
    return (m_.array() * other.m_.array().conjugate()).sum().real();
}

HermitianOperator &HermitianOperator::operator+=(const HermitianOperator &o) {
    m_ += o.m_;
    return *this;
}

HermitianOperator &HermitianOperator::operator-=(const HermitianOperator &o) {
    m_ -= o.m_;
    return *this;
}

HermitianOperator &HermitianOperator::operator*=(double s) {
    m_ *= s;
    return *this;
}

EigenDecomposition eig_hermitian(const HermitianOperator &op, const JacobiSettings &settings) {
    int d = op.dim();
    if (d < 1) {
        throw ValidationError("eig_hermitian: empty operator");
    }
    ComplexMatrix a = op.matrix();
    ComplexMatrix v = ComplexMatrix::Identity(d, d);
    double scale = std::max(a.norm(), 1e-300);
    double target = settings.off_tolerance * scale;
    int cap = settings.sweep_factor * d * d;

    EigenDecomposition out;
    int sweep = 0;
    while (off_diagonal_norm(a) > target) {
        if (sweep >= cap) {
            throw SolverError("Jacobi eigensolver did not converge", off_diagonal_norm(a) / scale);
        }
        sweep++;
        for (int p = 0; p < d - 1; p++) {
            for (int q = p + 1; q < d; q++) {
                double apq_abs = std::abs(a(p, q));
                if (apq_abs <= 1e-300) {
                    continue;
                }
                // Phase the q-th coordinate so that the (p,q) entry is real and positive,
                // then apply an ordinary real symmetric Jacobi rotation.
                Complex phase = a(p, q) / apq_abs;
                double app = a(p, p).real();
                double aqq = a(q, q).real();
                double tau = (aqq - app) / (2 * apq_abs);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1 + tau * tau));
                double c = 1 / std::sqrt(1 + t * t);
                double s = t * c;
                // Column transform J with J_pp = c, J_pq = s*phase, J_qp = -s*conj(phase), J_qq = c.
                Complex jpq = s * phase;
                Complex jqp = -s * std::conj(phase);
                for (int k = 0; k < d; k++) {
                    Complex akp = a(k, p);
                    Complex akq = a(k, q);
                    a(k, p) = c * akp + jqp * akq;
                    a(k, q) = jpq * akp + c * akq;
                }
                for (int k = 0; k < d; k++) {
                    Complex apk = a(p, k);
                    Complex aqk = a(q, k);
                    a(p, k) = c * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + c * aqk;
                }
                a(p, q) = 0;
                a(q, p) = 0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (int k = 0; k < d; k++) {
                    Complex vkp = v(k, p);
                    Complex vkq = v(k, q);
                    v(k, p) = c * vkp + jqp * vkq;
                    v(k, q) = jpq * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        return a(i, i).real() < a(j, j).real();
    });
    out.values.resize(d);
    out.vectors.resize(d, d);
    for (int k = 0; k < d; k++) {
        out.values(k) = a(order[k], order[k]).real();
        out.vectors.col(k) = v.col(order[k]);
    }
    out.sweeps = sweep;
    return out;
}

double min_eigenvalue(const HermitianOperator &a) {
    return eig_hermitian(a).values(0);
}

double max_eigenvalue(const HermitianOperator &a) {
    auto e = eig_hermitian(a);
    return e.values(e.values.size() - 1);
}

bool is_psd(const HermitianOperator &a, double tol) {
    return min_eigenvalue(a) >= -tol;
}

ComplexMatrix sample_haar_unitary(int d, Rng &rng) {
    if (d < 1) {
        throw ValidationError("sample_haar_unitary: dimension must be positive");
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix z(d, d);
    for (int j = 0; j < d; j++) {
        for (int i = 0; i < d; i++) {
            double re = normal(rng);
            double im = normal(rng);
            z(i, j) = Complex(re, im) / kSqrt2;
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < d; j++) {
        Complex rjj = r(j, j);
        double mag = std::abs(rjj);
        Complex ph = mag > 0 ? rjj / mag : Complex(1, 0);
        q.col(j) *= ph;
    }
    return q;
}

HermitianOperator sample_gue(int d, Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix h(d, d);
    for (int i = 0; i < d; i++) {
        h(i, i) = normal(rng);
        for (int j = i + 1; j < d; j++) {
            double re = normal(rng);
            double im = normal(rng);
            h(i, j) = Complex(re, im) / kSqrt2;
            h(j, i) = std::conj(h(i, j));
        }
    }
    return HermitianOperator(h);
}

ComplexMatrix unitary_exp(const HermitianOperator &h, double t) {
    auto e = eig_hermitian(h);
    int d = h.dim();
    ComplexVector phases(d);
    for (int k = 0; k < d; k++) {
        phases(k) = std::polar(1.0, t * e.values(k));
    }
    return e.vectors * phases.asDiagonal() * e.vectors.adjoint();
}

RealVector hermitian_to_real_vector(const HermitianOperator &a) {
    int d = a.dim();
    RealVector v(d * d);
    int k = 0;
    for (int i = 0; i < d; i++) {
        v(k++) = a(i, i).real();
    }
    for (int i = 0; i < d; i++) {
        for (int j = i + 1; j < d; j++) {
            v(k++) = kSqrt2 * a(i, j).real();
            v(k++) = kSqrt2 * a(i, j).imag();
        }
    }
    return v;
}

HermitianOperator real_vector_to_hermitian(const RealVector &v, int d) {
    if (v.size() != d * d) {
        throw ValidationError("real_vector_to_hermitian: expected length " + std::to_string(d * d));
    }
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    int k = 0;
    for (int i = 0; i < d; i++) {
        m(i, i) = v(k++);
    }
    for (int i = 0; i < d; i++) {
        for (int j = i + 1; j < d; j++) {
            double re = v(k++) / kSqrt2;
            double im = v(k++) / kSqrt2;
            m(i, j) = Complex(re, im);
            m(j, i) = Complex(re, -im);
        }
    }
    return HermitianOperator(m);
}

std::vector<HermitianOperator> hermitian_basis(int d) {
    std::vector<HermitianOperator> out;
    out.reserve(d * d);
    for (int l = 0; l < d * d; l++) {
        RealVector e = RealVector::Zero(d * d);
        e(l) = 1;
        out.push_back(real_vector_to_hermitian(e, d));
    }
    return out;
}

double unitarity_defect(const ComplexMatrix &u) {
    return (u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols())).norm();
}

double trace_distance(const HermitianOperator &a, const HermitianOperator &b) {
    auto e = eig_hermitian(a - b);
    return 0.5 * e.values.cwiseAbs().sum();
}

std::vector<std::vector<int>> combinations(int n, int r) {
    std::vector<std::vector<int>> out;
    if (r < 0 || r > n) {
        return out;
    }
    std::vector<int> c(r);
    std::iota(c.begin(), c.end(), 0);
    while (true) {
        out.push_back(c);
        int i = r - 1;
        while (i >= 0 && c[i] == n - r + i) {
            i--;
        }
        if (i < 0) {
            break;
        }
        c[i]++;
        for (int j = i + 1; j < r; j++) {
            c[j] = c[j - 1] + 1;
        }
    }
    return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace ocsim

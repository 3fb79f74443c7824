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

#include "ocsim/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ocsim/error.hpp"

namespace ocsim {

namespace {

using Blocks = std::vector<RealMatrix>;

struct RealTerm {
    int block;
    RealMatrix a;
};

/// minimize <C, X>  s.t.  <A_i, X> = b_i,  X PSD (real symmetric blocks).
struct RealSdp {
    std::vector<int> n;
    Blocks c;
    std::vector<std::vector<RealTerm>> a;
    RealVector b;
};

RealMatrix embed(const ComplexMatrix &f) {
    Eigen::Index d = f.rows();
    RealMatrix e(2 * d, 2 * d);
    e.topLeftCorner(d, d) = f.real();
    e.topRightCorner(d, d) = -f.imag();
    e.bottomLeftCorner(d, d) = f.imag();
    e.bottomRightCorner(d, d) = f.real();
    return e;
}

ComplexMatrix unembed(const RealMatrix &y) {
    Eigen::Index d = y.rows() / 2;
    ComplexMatrix x(d, d);
    x.real() = (y.topLeftCorner(d, d) + y.bottomRightCorner(d, d)) / 2;
    x.imag() = (y.bottomLeftCorner(d, d) - y.topRightCorner(d, d)) / 2;
    return x;
}

double dot(const RealMatrix &a, const RealMatrix &b) {
    return (a.array() * b.array()).sum();
}

double dot(const Blocks &a, const Blocks &b) {
    double s = 0;
    for (size_t k = 0; k < a.size(); k++) {
        s += dot(a[k], b[k]);
    }
    return s;
}

double frob(const Blocks &a) {
    return std::sqrt(dot(a, a));
}

Blocks zeros(const std::vector<int> &n) {
    Blocks out;
    for (int k : n) {
        out.push_back(RealMatrix::Zero(k, k));
    }
    return out;
}

RealVector apply_a(const RealSdp &s, const Blocks &x) {
    RealVector r(s.a.size());
    for (size_t i = 0; i < s.a.size(); i++) {
        double v = 0;
        for (const auto &t : s.a[i]) {
            v += dot(t.a, x[t.block]);
        }
        r(i) = v;
    }
    return r;
}

Blocks apply_at(const RealSdp &s, const RealVector &y) {
    Blocks out = zeros(s.n);
    for (size_t i = 0; i < s.a.size(); i++) {
        for (const auto &t : s.a[i]) {
            out[t.block] += y(i) * t.a;
        }
    }
    return out;
}

RealMatrix sym(const RealMatrix &a) {
    return (a + a.transpose()) / 2;
}

/// Largest alpha with X + alpha dX PSD, given the Cholesky factor L of X.
double max_step(const Eigen::LLT<RealMatrix> &chol, const RealMatrix &dx) {
    RealMatrix t = chol.matrixL().solve(dx);
    RealMatrix s = chol.matrixL().solve(t.transpose());
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(sym(s), Eigen::EigenvaluesOnly);
    double lmin = es.eigenvalues()(0);
    return lmin < 0 ? -1 / lmin : INFINITY;
}

struct CoreResult {
    bool converged = false;
    bool diverged = false;
    Blocks x;
    Blocks z;
    RealVector y;
    double pobj = 0;
    double dobj = 0;
    double gap = INFINITY;
    double pinf = INFINITY;
    double dinf = INFINITY;
    int iterations = 0;
};

struct Scaling {
    RealMatrix g;
    RealMatrix ginv;
    RealMatrix w;
    RealVector d;
};

CoreResult interior_point(const RealSdp &s, const SdpSettings &st) {
    int nb = static_cast<int>(s.n.size());
    int mc = static_cast<int>(s.a.size());
    double ntot = 0;
    for (int k : s.n) {
        ntot += k;
    }
    double bnorm = s.b.norm();
    double cnorm = frob(s.c);

    // Per-block index of the constraints touching it.
    std::vector<std::vector<std::pair<int, int>>> touching(nb);
    for (int i = 0; i < mc; i++) {
        for (size_t t = 0; t < s.a[i].size(); t++) {
            touching[s.a[i][t].block].push_back({i, static_cast<int>(t)});
        }
    }

    CoreResult r;
    r.x.resize(nb);
    r.z.resize(nb);
    r.y = RealVector::Zero(mc);
    for (int k = 0; k < nb; k++) {
        double nk = s.n[k];
        double xi = std::max(10.0, std::sqrt(nk));
        double eta = std::max({10.0, std::sqrt(nk), s.c[k].norm()});
        for (auto [i, t] : touching[k]) {
            double an = s.a[i][t].a.norm();
            xi = std::max(xi, nk * (1 + std::abs(s.b(i))) / (1 + an));
            eta = std::max(eta, an);
        }
        r.x[k] = xi * RealMatrix::Identity(s.n[k], s.n[k]);
        r.z[k] = eta * RealMatrix::Identity(s.n[k], s.n[k]);
    }
    double x0norm = frob(r.x);

    CoreResult best;
    double best_score = INFINITY;
    for (int iter = 0; iter <= st.max_iterations; iter++) {
        RealVector rp = s.b - apply_a(s, r.x);
        Blocks aty = apply_at(s, r.y);
        Blocks rd(nb);
        for (int k = 0; k < nb; k++) {
            rd[k] = s.c[k] - r.z[k] - aty[k];
        }
        r.pobj = dot(s.c, r.x);
        r.dobj = s.b.dot(r.y);
        double xz = dot(r.x, r.z);
        double denom = 1 + std::abs(r.pobj) + std::abs(r.dobj);
        r.gap = std::max(std::abs(r.pobj - r.dobj), xz) / denom;
        r.pinf = rp.norm() / (1 + bnorm);
        r.dinf = frob(rd) / (1 + cnorm);
        r.iterations = iter;
        double score = std::max({r.gap, r.pinf, r.dinf});
        if (score < best_score) {
            best_score = score;
            best = r;
        }
        if (r.gap <= st.gap_tol && r.pinf <= st.feas_tol && r.dinf <= st.feas_tol) {
            r.converged = true;
            return r;
        }
        if (iter == st.max_iterations) {
            break;
        }
        if (frob(r.x) > 1e10 * (1 + x0norm) || r.y.norm() > 1e10 * (1 + x0norm)) {
            best.diverged = true;
            break;
        }
        double mu = xz / ntot;

        std::vector<Eigen::LLT<RealMatrix>> cx(nb), cz(nb);
        std::vector<Scaling> sc(nb);
        bool ok = true;
        for (int k = 0; k < nb && ok; k++) {
            cx[k].compute(r.x[k]);
            cz[k].compute(r.z[k]);
            if (cx[k].info() != Eigen::Success || cz[k].info() != Eigen::Success) {
                ok = false;
                break;
            }
            RealMatrix l = cx[k].matrixL();
            RealMatrix rr = cz[k].matrixL();
            Eigen::JacobiSVD<RealMatrix> svd(rr.transpose() * l, Eigen::ComputeFullU | Eigen::ComputeFullV);
            RealVector sig = svd.singularValues();
            if (sig.minCoeff() <= 0) {
                ok = false;
                break;
            }
            RealVector isq = sig.array().sqrt().inverse();
            sc[k].g = l * svd.matrixV() * isq.asDiagonal();
            sc[k].ginv = isq.asDiagonal() * svd.matrixU().transpose() * rr.transpose();
            sc[k].w = sc[k].g * sc[k].g.transpose();
            sc[k].d = sig;
        }
        if (!ok) {
            break;
        }

        RealMatrix m = RealMatrix::Zero(mc, mc);
        for (int k = 0; k < nb; k++) {
            const RealMatrix &w = sc[k].w;
            for (auto [j, tj] : touching[k]) {
                RealMatrix waw = w * s.a[j][tj].a * w;
                for (auto [i, ti] : touching[k]) {
                    m(i, j) += dot(s.a[i][ti].a, waw);
                }
            }
        }
        m = sym(m);
        Eigen::LLT<RealMatrix> mchol(m);
        Eigen::LDLT<RealMatrix> mldlt;
        bool use_ldlt = mchol.info() != Eigen::Success;
        if (use_ldlt) {
            mldlt.compute(m);
        }
        Blocks wrdw(nb);
        for (int k = 0; k < nb; k++) {
            wrdw[k] = sc[k].w * rd[k] * sc[k].w;
        }
        RealVector a_wrdw = apply_a(s, wrdw);

        auto direction = [&](const Blocks &target, Blocks &dx, RealVector &dy, Blocks &dz) {
            RealVector rhs = rp - apply_a(s, target) + a_wrdw;
            dy = use_ldlt ? RealVector(mldlt.solve(rhs)) : RealVector(mchol.solve(rhs));
            Blocks atdy = apply_at(s, dy);
            dz.resize(nb);
            dx.resize(nb);
            for (int k = 0; k < nb; k++) {
                dz[k] = rd[k] - atdy[k];
                dx[k] = sym(target[k] - sc[k].w * dz[k] * sc[k].w);
            }
        };
        auto steps = [&](const Blocks &dx, const Blocks &dz, double &ap, double &ad) {
            ap = INFINITY;
            ad = INFINITY;
            for (int k = 0; k < nb; k++) {
                ap = std::min(ap, max_step(cx[k], dx[k]));
                ad = std::min(ad, max_step(cz[k], dz[k]));
            }
            ap = std::min(1.0, st.step_fraction * ap);
            ad = std::min(1.0, st.step_fraction * ad);
        };

        // Predictor.
        Blocks target(nb);
        for (int k = 0; k < nb; k++) {
            target[k] = -r.x[k];
        }
        Blocks dxa, dza;
        RealVector dya;
        direction(target, dxa, dya, dza);
        double ap, ad;
        steps(dxa, dza, ap, ad);
        double mu_aff = 0;
        for (int k = 0; k < nb; k++) {
            mu_aff += dot(r.x[k] + ap * dxa[k], r.z[k] + ad * dza[k]);
        }
        mu_aff /= ntot;
        double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3), 0.0, 1.0);

        // Corrector.
        for (int k = 0; k < nb; k++) {
            const Scaling &g = sc[k];
            RealMatrix xs = g.ginv * dxa[k] * g.ginv.transpose();
            RealMatrix zs = g.g.transpose() * dza[k] * g.g;
            RealMatrix rc = -(xs * zs + zs * xs);
            for (int i = 0; i < s.n[k]; i++) {
                rc(i, i) += 2 * sigma * mu - 2 * g.d(i) * g.d(i);
            }
            RealMatrix h(s.n[k], s.n[k]);
            for (int i = 0; i < s.n[k]; i++) {
                for (int j = 0; j < s.n[k]; j++) {
                    h(i, j) = rc(i, j) / (g.d(i) + g.d(j));
                }
            }
            target[k] = sym(g.g * h * g.g.transpose());
        }
        Blocks dx, dz;
        RealVector dy;
        direction(target, dx, dy, dz);
        steps(dx, dz, ap, ad);
        if (ap < 1e-10 && ad < 1e-10) {
            break;
        }
        for (int k = 0; k < nb; k++) {
            r.x[k] = sym(r.x[k] + ap * dx[k]);
            r.z[k] = sym(r.z[k] + ad * dz[k]);
        }
        r.y += ad * dy;
    }
    best.converged = best.gap <= st.accept_gap && best.pinf <= st.accept_feas && best.dinf <= st.accept_feas;
    return best;
}

/// Converts the public problem, dropping linearly dependent constraints.
/// Returns false if a dependent constraint contradicts the ones kept.
bool to_real(const SdpProblem &p, RealSdp &s, std::vector<int> &kept) {
    int nb = static_cast<int>(p.block_dims.size());
    for (int k = 0; k < nb; k++) {
        s.n.push_back(2 * p.block_dims[k]);
        s.c.push_back(-embed(p.objective[k].matrix()) / 2);
    }
    int mc = static_cast<int>(p.constraints.size());
    std::vector<std::vector<RealTerm>> all(mc);
    for (int i = 0; i < mc; i++) {
        for (const auto &t : p.constraints[i].terms) {
            RealMatrix e = embed(t.f.matrix()) / 2;
            bool merged = false;
            for (auto &existing : all[i]) {
                if (existing.block == t.block) {
                    existing.a += e;
                    merged = true;
                }
            }
            if (!merged) {
                all[i].push_back({t.block, e});
            }
        }
    }
    RealMatrix gram = RealMatrix::Zero(mc, mc);
    for (int i = 0; i < mc; i++) {
        for (int j = i; j < mc; j++) {
            double v = 0;
            for (const auto &ti : all[i]) {
                for (const auto &tj : all[j]) {
                    if (ti.block == tj.block) {
                        v += dot(ti.a, tj.a);
                    }
                }
            }
            gram(i, j) = gram(j, i) = v;
        }
    }
    // Greedy pivoted Cholesky in input order: keep a constraint if it is independent of those kept.
    double scale = std::max(1.0, gram.diagonal().maxCoeff());
    RealMatrix lfac = RealMatrix::Zero(mc, mc);
    std::vector<int> dependent;
    for (int i = 0; i < mc; i++) {
        int nk = static_cast<int>(kept.size());
        RealVector row(nk);
        for (int a = 0; a < nk; a++) {
            double v = gram(i, kept[a]);
            for (int c = 0; c < a; c++) {
                v -= row(c) * lfac(a, c);
            }
            row(a) = v / lfac(a, a);
        }
        double rem = gram(i, i) - row.squaredNorm();
        if (rem > 1e-11 * scale) {
            lfac.row(nk).head(nk) = row.transpose();
            lfac(nk, nk) = std::sqrt(rem);
            kept.push_back(i);
        } else {
            dependent.push_back(i);
        }
    }
    int nk = static_cast<int>(kept.size());
    RealMatrix gk(nk, nk);
    RealVector bk(nk);
    for (int a = 0; a < nk; a++) {
        bk(a) = p.constraints[kept[a]].rhs;
        for (int c = 0; c < nk; c++) {
            gk(a, c) = gram(kept[a], kept[c]);
        }
    }
    double gscale = 1;
    for (const auto &c : p.constraints) {
        gscale = std::max(gscale, std::abs(c.rhs));
    }
    for (int i : dependent) {
        double implied = 0;
        if (nk > 0) {
            RealVector rhs(nk);
            for (int a = 0; a < nk; a++) {
                rhs(a) = gram(i, kept[a]);
            }
            RealVector coef = gk.ldlt().solve(rhs);
            implied = coef.dot(bk);
        }
        if (std::abs(implied - p.constraints[i].rhs) > 1e-8 * gscale) {
            return false;
        }
    }
    s.b.resize(nk);
    for (int a = 0; a < nk; a++) {
        s.a.push_back(all[kept[a]]);
        s.b(a) = p.constraints[kept[a]].rhs;
    }
    return true;
}

double public_residual(const SdpProblem &p, const std::vector<HermitianOperator> &x) {
    double res = 0;
    for (const auto &c : p.constraints) {
        double v = 0;
        for (const auto &t : c.terms) {
            v += t.f.inner(x[t.block]);
        }
        res = std::max(res, std::abs(v - c.rhs));
    }
    return res;
}

SdpProblem phase_one(const SdpProblem &p) {
    SdpProblem q = p;
    int tb = static_cast<int>(q.block_dims.size());
    q.block_dims.push_back(1);
    for (auto &o : q.objective) {
        o = HermitianOperator::zero(o.dim());
    }
    q.objective.push_back(HermitianOperator(-ComplexMatrix::Identity(1, 1)));
    for (auto &c : q.constraints) {
        double at_identity = 0;
        for (const auto &t : c.terms) {
            at_identity += t.f.trace();
        }
        double r = c.rhs - at_identity;
        c.terms.push_back({tb, HermitianOperator(r * ComplexMatrix::Identity(1, 1))});
    }
    return q;
}

SdpSolution solve_impl(const SdpProblem &p, const SdpSettings &st, bool classify);

SdpFeasibility feasible_impl(const SdpProblem &p, const SdpSettings &st) {
    SdpFeasibility f;
    SdpProblem q = phase_one(p);
    SdpSolution s = solve_impl(q, st, false);
    f.x.assign(s.x.begin(), s.x.end() - 1);
    f.residual = public_residual(p, f.x);
    if (f.residual <= 1e-7) {
        f.feasible = true;
        return f;
    }
    f.feasible = false;
    f.certificate = -s.y;
    f.certificate_value = -s.dual_objective;
    return f;
}

SdpSolution solve_impl(const SdpProblem &p, const SdpSettings &st, bool classify) {
    p.validate();
    SdpSolution sol;
    int nb = static_cast<int>(p.block_dims.size());
    RealSdp s;
    std::vector<int> kept;
    if (!to_real(p, s, kept)) {
        if (!classify) {
            throw SolverError("SDP constraints are inconsistent", INFINITY);
        }
        sol.status = SdpStatus::infeasible;
        for (int k = 0; k < nb; k++) {
            sol.x.push_back(HermitianOperator::zero(p.block_dims[k]));
        }
        sol.y = RealVector::Zero(static_cast<Eigen::Index>(p.constraints.size()));
        sol.residual = INFINITY;
        return sol;
    }
    CoreResult r = interior_point(s, st);
    sol.iterations = r.iterations;
    for (int k = 0; k < nb; k++) {
        sol.x.push_back(HermitianOperator(unembed(r.x[k])));
    }
    sol.y = RealVector::Zero(static_cast<Eigen::Index>(p.constraints.size()));
    for (size_t a = 0; a < kept.size(); a++) {
        sol.y(kept[a]) = -r.y(a);
    }
    sol.objective = 0;
    for (int k = 0; k < nb; k++) {
        sol.objective += p.objective[k].inner(sol.x[k]);
    }
    sol.dual_objective = -r.dobj;
    sol.gap = r.gap;
    sol.residual = public_residual(p, sol.x);
    sol.dual_residual = r.dinf;
    sol.min_eigenvalue = INFINITY;
    for (const auto &x : sol.x) {
        sol.min_eigenvalue = std::min(sol.min_eigenvalue, min_eigenvalue(x));
    }
    if (r.converged && sol.residual <= 1e-7 && sol.min_eigenvalue >= -1e-8) {
        sol.status = SdpStatus::optimal;
        return sol;
    }
    std::ostringstream diag;
    diag << "SDP did not converge after " << r.iterations << " iterations (gap " << r.gap << ", primal infeasibility "
         << r.pinf << ", dual infeasibility " << r.dinf << ")";
    if (!classify) {
        throw SolverError(diag.str(), std::max({r.gap, r.pinf, r.dinf}));
    }
    SdpFeasibility f = feasible_impl(p, st);
    if (!f.feasible) {
        sol.status = SdpStatus::infeasible;
        sol.y = f.certificate;
        sol.residual = f.residual;
        return sol;
    }
    // Feasible: look for an improving ray D >= 0 with A(D) = 0, sum tr D = 1.
    SdpProblem ray = p;
    for (auto &c : ray.constraints) {
        c.rhs = 0;
    }
    SdpConstraint norm;
    for (int k = 0; k < nb; k++) {
        norm.terms.push_back({k, HermitianOperator::identity(p.block_dims[k])});
    }
    norm.rhs = 1;
    ray.constraints.push_back(norm);
    SdpSolution rs = solve_impl(ray, st, false);
    if (rs.objective > 1e-6) {
        sol.status = SdpStatus::unbounded;
        sol.x = rs.x;
        return sol;
    }
    throw SolverError(diag.str(), std::max({r.gap, r.pinf, r.dinf}));
}

}  // namespace

SdpProblem SdpProblem::with_blocks(const std::vector<int> &dims) {
    SdpProblem p;
    p.block_dims = dims;
    for (int d : dims) {
        p.objective.push_back(HermitianOperator::zero(d));
    }
    return p;
}

void SdpProblem::validate() const {
    if (block_dims.empty()) {
        throw ValidationError("SDP: no blocks");
    }
    if (objective.size() != block_dims.size()) {
        throw ValidationError("SDP: one objective operator per block required");
    }
    for (size_t k = 0; k < block_dims.size(); k++) {
        if (block_dims[k] < 1 || objective[k].dim() != block_dims[k]) {
            throw ValidationError("SDP: objective block " + std::to_string(k) + " has the wrong dimension");
        }
    }
    for (size_t j = 0; j < constraints.size(); j++) {
        for (const auto &t : constraints[j].terms) {
            if (t.block < 0 || t.block >= static_cast<int>(block_dims.size()) ||
                t.f.dim() != block_dims[t.block]) {
                throw ValidationError("SDP: constraint " + std::to_string(j) + " has a malformed term");
            }
        }
        if (!std::isfinite(constraints[j].rhs)) {
            throw ValidationError("SDP: constraint " + std::to_string(j) + " has a non-finite right-hand side");
        }
    }
}

const char *sdp_status_name(SdpStatus s) {
    switch (s) {
        case SdpStatus::optimal:
            return "optimal";
        case SdpStatus::infeasible:
            return "infeasible";
        case SdpStatus::unbounded:
            return "unbounded";
    }
    return "unknown";
}

SdpSolution solve_sdp(const SdpProblem &p, const SdpSettings &settings) {
    return solve_impl(p, settings, true);
}

SdpFeasibility sdp_feasible(const SdpProblem &p, const SdpSettings &settings) {
    p.validate();
    return feasible_impl(p, settings);
}

std::string sdp_dump(const SdpProblem &p) {
    std::ostringstream out;
    out.precision(17);
    auto matrix = [&](const HermitianOperator &h) {
        for (int i = 0; i < h.dim(); i++) {
            for (int j = 0; j < h.dim(); j++) {
                out << (j ? " " : "") << h(i, j).real() << "," << h(i, j).imag();
            }
            out << "\n";
        }
    };
    out << "sdp " << p.block_dims.size() << " " << p.constraints.size() << " maximize\nblocks";
    for (int d : p.block_dims) {
        out << " " << d;
    }
    out << "\n";
    for (size_t k = 0; k < p.objective.size(); k++) {
        out << "objective " << k << "\n";
        matrix(p.objective[k]);
    }
    for (size_t j = 0; j < p.constraints.size(); j++) {
        out << "constraint " << j << " " << p.constraints[j].rhs << "\n";
        for (const auto &t : p.constraints[j].terms) {
            out << "term " << t.block << "\n";
            matrix(t.f);
        }
    }
    return out.str();
}

}  // namespace ocsim

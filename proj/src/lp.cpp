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

#include "ocsim/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ocsim/error.hpp"

namespace ocsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Smallest pivot accepted on a row held by an artificial column after phase 1.
constexpr double kArtificialPivot = 1e-7;

struct SparseColumn {
    std::vector<int> rows;
    std::vector<double> vals;
};

enum class ColumnKind { structural, slack, artificial };

struct StandardForm {
    int rows = 0;
    std::vector<SparseColumn> cols;
    std::vector<ColumnKind> kind;
    std::vector<int> orig_var;    // structural columns
    std::vector<double> orig_sign;
    RealVector b;
    RealVector cost;  // minimized
    std::vector<double> row_sign;
    int orig_rows = 0;
    std::vector<int> slack_of_row;  // -1 when the row has no slack
};

StandardForm to_standard_form(const LpProblem &p) {
    StandardForm sf;
    int m = p.rows();
    int n = p.cols();
    std::vector<int> bounded;
    for (int j = 0; j < n; j++) {
        if (std::isfinite(p.upper(j))) {
            bounded.push_back(j);
        }
    }
    sf.orig_rows = m;
    sf.rows = m + static_cast<int>(bounded.size());
    sf.b.resize(sf.rows);
    sf.row_sign.assign(sf.rows, 1.0);
    for (int i = 0; i < m; i++) {
        sf.b(i) = p.b(i);
    }
    for (size_t k = 0; k < bounded.size(); k++) {
        sf.b(m + k) = p.upper(bounded[k]);
    }
    for (int i = 0; i < sf.rows; i++) {
        if (sf.b(i) < 0) {
            sf.row_sign[i] = -1;
            sf.b(i) = -sf.b(i);
        }
    }
    std::vector<int> bound_row(n, -1);
    for (size_t k = 0; k < bounded.size(); k++) {
        bound_row[bounded[k]] = m + static_cast<int>(k);
    }
    std::vector<double> cost;
    auto add_structural = [&](int j, double sign) {
        SparseColumn col;
        for (SparseMatrix::InnerIterator it(p.a, j); it; ++it) {
            int i = static_cast<int>(it.row());
            if (it.value() != 0) {
                col.rows.push_back(i);
                col.vals.push_back(sign * it.value() * sf.row_sign[i]);
            }
        }
        if (bound_row[j] >= 0) {
            col.rows.push_back(bound_row[j]);
            col.vals.push_back(sign * sf.row_sign[bound_row[j]]);
        }
        sf.cols.push_back(std::move(col));
        sf.kind.push_back(ColumnKind::structural);
        sf.orig_var.push_back(j);
        sf.orig_sign.push_back(sign);
        cost.push_back(-sign * p.c(j));
    };
    for (int j = 0; j < n; j++) {
        add_structural(j, 1.0);
        if (p.free_var[j]) {
            add_structural(j, -1.0);
        }
    }
    sf.slack_of_row.assign(sf.rows, -1);
    for (size_t k = 0; k < bounded.size(); k++) {
        int r = m + static_cast<int>(k);
        SparseColumn col;
        col.rows.push_back(r);
        col.vals.push_back(sf.row_sign[r]);
        sf.slack_of_row[r] = static_cast<int>(sf.cols.size());
        sf.cols.push_back(std::move(col));
        sf.kind.push_back(ColumnKind::slack);
        sf.orig_var.push_back(-1);
        sf.orig_sign.push_back(0);
        cost.push_back(0);
    }
    for (int i = 0; i < sf.rows; i++) {
        SparseColumn col;
        col.rows.push_back(i);
        col.vals.push_back(1.0);
        sf.cols.push_back(std::move(col));
        sf.kind.push_back(ColumnKind::artificial);
        sf.orig_var.push_back(-1);
        sf.orig_sign.push_back(0);
        cost.push_back(0);
    }
    sf.cost = Eigen::Map<RealVector>(cost.data(), static_cast<Eigen::Index>(cost.size()));
    return sf;
}

class Simplex {
   public:
    Simplex(const StandardForm &sf, const LpSettings &settings, int max_iterations)
        : sf_(sf), settings_(settings), max_iterations_(max_iterations) {
        int m = sf_.rows;
        int first_art = static_cast<int>(sf_.cols.size()) - m;
        basis_.resize(m);
        pos_.assign(sf_.cols.size(), -1);
        for (int i = 0; i < m; i++) {
            int s = sf_.slack_of_row[i];
            int j = (s >= 0 && sf_.row_sign[i] > 0) ? s : first_art + i;
            basis_[i] = j;
            pos_[j] = i;
        }
        refactor();
    }

    enum class Outcome { optimal, unbounded };

    Outcome run(const RealVector &cost, int phase, const std::vector<bool> &allowed, std::vector<LpIterate> &log) {
        int degenerate_run = 0;
        bool bland = false;
        bool verified = false;
        while (true) {
            RealVector y = dual(cost);
            int entering = -1;
            double best = -settings_.optimality_tol;
            for (size_t j = 0; j < sf_.cols.size(); j++) {
                if (pos_[j] >= 0 || !allowed[j]) {
                    continue;
                }
                double dj = reduced_cost(cost, y, static_cast<int>(j));
                if (bland) {
                    if (dj < -settings_.optimality_tol) {
                        entering = static_cast<int>(j);
                        break;
                    }
                } else if (dj < best) {
                    best = dj;
                    entering = static_cast<int>(j);
                }
            }
            if (settings_.record_log && log.size() < 100000) {
                double obj = 0;
                for (int i = 0; i < sf_.rows; i++) {
                    obj += cost(basis_[i]) * xb_(i);
                }
                // Reported in maximization sense.
                log.push_back({iterations_, phase, -obj, -sf_.b.dot(y)});
            }
            if (entering < 0) {
                if (verified || pivots_since_refactor_ == 0) {
                    return Outcome::optimal;
                }
                refactor();
                verified = true;
                continue;
            }
            verified = false;
            if (iterations_ >= max_iterations_) {
                throw SolverError("simplex iteration cap reached" + trace(log), infeasibility());
            }
            RealVector w = binv_ * dense_column(entering);
            int leave = -1;
            double tmin = kInf;
            // Harris two-pass ratio test: bound the step with a small feasibility slack, then take
            // the largest pivot among rows that block within it.
            double slack = settings_.feasibility_tol;
            double tmax = kInf;
            for (int i = 0; i < sf_.rows; i++) {
                if (phase == 2 && sf_.kind[basis_[i]] == ColumnKind::artificial) {
                    // Leftover artificials sit on redundant rows, where w is rounding noise. One that
                    // would genuinely move leaves at zero level.
                    if (std::abs(w(i)) > kArtificialPivot && (leave < 0 || std::abs(w(i)) > std::abs(w(leave)))) {
                        leave = i;
                        tmin = 0;
                    }
                    continue;
                }
                if (w(i) > settings_.pivot_tol) {
                    tmax = std::min(tmax, (std::max(xb_(i), 0.0) + slack) / w(i));
                }
            }
            if (leave < 0) {
                if (!std::isfinite(tmax)) {
                    return Outcome::unbounded;
                }
                double wmax = 0;
                for (int i = 0; i < sf_.rows; i++) {
                    if (skip(i, phase)) {
                        continue;
                    }
                    if (w(i) > settings_.pivot_tol && std::max(xb_(i), 0.0) / w(i) <= tmax) {
                        wmax = std::max(wmax, w(i));
                    }
                }
                for (int i = 0; i < sf_.rows; i++) {
                    if (skip(i, phase)) {
                        continue;
                    }
                    if (w(i) > settings_.pivot_tol && w(i) >= 1e-3 * wmax && std::max(xb_(i), 0.0) / w(i) <= tmax) {
                        if (leave < 0 || (bland ? basis_[i] < basis_[leave] : w(i) > w(leave))) {
                            leave = i;
                        }
                    }
                }
                tmin = std::max(xb_(leave), 0.0) / w(leave);
            }
            if (tmin <= 1e-12) {
                degenerate_run++;
                if (degenerate_run >= settings_.degenerate_limit) {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
                bland = false;
            }
            pivot(entering, leave, w);
            iterations_++;
        }
    }

    /// Moves artificial columns that sit in the basis at zero level out where possible.
    /// Those that remain belong to redundant rows and stay at zero.
    void drive_out_artificials() {
        for (int i = 0; i < sf_.rows; i++) {
            int j = basis_[i];
            if (sf_.kind[j] != ColumnKind::artificial) {
                continue;
            }
            RealVector row = binv_.row(i);
            int best = -1;
            double best_abs = kArtificialPivot;
            for (size_t k = 0; k < sf_.cols.size(); k++) {
                if (pos_[k] >= 0 || sf_.kind[k] == ColumnKind::artificial) {
                    continue;
                }
                double v = 0;
                const auto &c = sf_.cols[k];
                for (size_t t = 0; t < c.rows.size(); t++) {
                    v += row(c.rows[t]) * c.vals[t];
                }
                if (std::abs(v) > best_abs) {
                    best_abs = std::abs(v);
                    best = static_cast<int>(k);
                }
            }
            if (best >= 0) {
                RealVector w = binv_ * dense_column(best);
                pivot(best, i, w);
            }
        }
        refactor();
    }

    RealVector dual(const RealVector &cost) const {
        RealVector cb(sf_.rows);
        for (int i = 0; i < sf_.rows; i++) {
            cb(i) = cost(basis_[i]);
        }
        return binv_.transpose() * cb;
    }

    double reduced_cost(const RealVector &cost, const RealVector &y, int j) const {
        double dj = cost(j);
        const auto &c = sf_.cols[j];
        for (size_t t = 0; t < c.rows.size(); t++) {
            dj -= y(c.rows[t]) * c.vals[t];
        }
        return dj;
    }

    RealVector primal() const {
        RealVector x = RealVector::Zero(static_cast<Eigen::Index>(sf_.cols.size()));
        for (int i = 0; i < sf_.rows; i++) {
            x(basis_[i]) = xb_(i);
        }
        return x;
    }

    int iterations() const {
        return iterations_;
    }

    void refactor() {
        int m = sf_.rows;
        RealMatrix b = RealMatrix::Zero(m, m);
        for (int i = 0; i < m; i++) {
            const auto &c = sf_.cols[basis_[i]];
            for (size_t t = 0; t < c.rows.size(); t++) {
                b(c.rows[t], i) = c.vals[t];
            }
        }
        Eigen::PartialPivLU<RealMatrix> lu(b);
        binv_ = lu.inverse();
        if (!binv_.allFinite()) {
            throw SolverError("simplex basis became singular", kInf);
        }
        xb_ = binv_ * sf_.b;
        for (int i = 0; i < m; i++) {
            if (xb_(i) < 0 && xb_(i) > -settings_.feasibility_tol) {
                xb_(i) = 0;
            }
        }
        pivots_since_refactor_ = 0;
    }

   private:
    bool skip(int i, int phase) const {
        return phase == 2 && sf_.kind[basis_[i]] == ColumnKind::artificial;
    }

    RealVector dense_column(int j) const {
        RealVector v = RealVector::Zero(sf_.rows);
        const auto &c = sf_.cols[j];
        for (size_t t = 0; t < c.rows.size(); t++) {
            v(c.rows[t]) = c.vals[t];
        }
        return v;
    }

    void pivot(int entering, int leave, const RealVector &w) {
        double wr = w(leave);
        double step = std::max(xb_(leave), 0.0) / wr;
        RealVector row = binv_.row(leave) / wr;
        for (int i = 0; i < sf_.rows; i++) {
            if (i == leave) {
                continue;
            }
            if (w(i) != 0) {
                binv_.row(i) -= w(i) * row.transpose();
                xb_(i) -= w(i) * step;
            }
        }
        binv_.row(leave) = row;
        xb_(leave) = step;
        pos_[basis_[leave]] = -1;
        basis_[leave] = entering;
        pos_[entering] = leave;
        if (++pivots_since_refactor_ >= settings_.refactor_every) {
            refactor();
        }
    }

    double infeasibility() const {
        double worst = 0;
        for (int i = 0; i < sf_.rows; i++) {
            worst = std::max(worst, -xb_(i));
        }
        return worst;
    }

    static std::string trace(const std::vector<LpIterate> &log) {
        std::ostringstream out;
        size_t start = log.size() > 5 ? log.size() - 5 : 0;
        for (size_t k = start; k < log.size(); k++) {
            out << "\n  iter " << log[k].iteration << " phase " << log[k].phase << " objective "
                << log[k].primal_objective;
        }
        return out.str();
    }

    const StandardForm &sf_;
    const LpSettings &settings_;
    int max_iterations_;
    std::vector<int> basis_;
    std::vector<int> pos_;
    RealMatrix binv_;
    RealVector xb_;
    int pivots_since_refactor_ = 0;
    int iterations_ = 0;
};

}  // namespace

LpProblem LpProblem::with_shape(int rows, int cols) {
    LpProblem p;
    p.c = RealVector::Zero(cols);
    p.a = SparseMatrix(rows, cols);
    p.b = RealVector::Zero(rows);
    p.free_var.assign(cols, false);
    p.upper = RealVector::Constant(cols, kInf);
    return p;
}

void LpProblem::validate() const {
    if (c.size() != a.cols() || static_cast<Eigen::Index>(free_var.size()) != a.cols() ||
        upper.size() != a.cols()) {
        throw ValidationError("LP: objective, bounds and constraint matrix column counts differ");
    }
    if (b.size() != a.rows()) {
        throw ValidationError("LP: right-hand side length differs from row count");
    }
    if (!c.allFinite() || !Eigen::Map<const RealVector>(a.valuePtr(), a.nonZeros()).allFinite() || !b.allFinite()) {
        throw ValidationError("LP: non-finite data");
    }
    for (Eigen::Index j = 0; j < upper.size(); j++) {
        if (std::isnan(upper(j))) {
            throw ValidationError("LP: NaN upper bound");
        }
    }
}

const char *lp_status_name(LpStatus s) {
    switch (s) {
        case LpStatus::optimal:
            return "optimal";
        case LpStatus::infeasible:
            return "infeasible";
        case LpStatus::unbounded:
            return "unbounded";
    }
    return "unknown";
}

LpSolution solve_lp(const LpProblem &p, const LpSettings &settings) {
    p.validate();
    StandardForm sf = to_standard_form(p);
    int ncols = static_cast<int>(sf.cols.size());
    int max_it = settings.max_iterations > 0 ? settings.max_iterations : 20 * (sf.rows + ncols) + 1000;
    Simplex simplex(sf, settings, max_it);
    LpSolution sol;

    RealVector phase1_cost = RealVector::Zero(ncols);
    std::vector<bool> allowed(ncols, true);
    for (int j = 0; j < ncols; j++) {
        if (sf.kind[j] == ColumnKind::artificial) {
            phase1_cost(j) = 1;
        }
    }
    simplex.run(phase1_cost, 1, allowed, sol.log);
    RealVector xt = simplex.primal();
    double art = 0;
    for (int j = 0; j < ncols; j++) {
        if (sf.kind[j] == ColumnKind::artificial) {
            art += xt(j);
        }
    }
    double bnorm = sf.b.size() ? sf.b.lpNorm<Eigen::Infinity>() : 0.0;
    sol.iterations = simplex.iterations();
    if (art > settings.feasibility_tol * (1 + bnorm)) {
        sol.status = LpStatus::infeasible;
        sol.x = RealVector::Zero(p.cols());
        sol.dual = RealVector::Zero(p.rows());
        sol.residual = art;
        return sol;
    }
    simplex.drive_out_artificials();
    for (int j = 0; j < ncols; j++) {
        allowed[j] = sf.kind[j] != ColumnKind::artificial;
    }
    auto outcome = simplex.run(sf.cost, 2, allowed, sol.log);
    sol.iterations = simplex.iterations();
    xt = simplex.primal();
    sol.x = RealVector::Zero(p.cols());
    for (int j = 0; j < ncols; j++) {
        if (sf.kind[j] == ColumnKind::structural) {
            sol.x(sf.orig_var[j]) += sf.orig_sign[j] * xt(j);
        }
    }
    sol.objective = p.c.dot(sol.x);
    if (outcome == Simplex::Outcome::unbounded) {
        sol.status = LpStatus::unbounded;
        sol.dual = RealVector::Zero(p.rows());
        return sol;
    }
    sol.status = LpStatus::optimal;

    RealVector y = simplex.dual(sf.cost);
    sol.dual.resize(p.rows());
    for (int i = 0; i < p.rows(); i++) {
        sol.dual(i) = -sf.row_sign[i] * y(i);
    }
    double dual_obj = -sf.b.dot(y);
    sol.gap = std::abs(sol.objective - dual_obj);
    double dinf = 0;
    for (int j = 0; j < ncols; j++) {
        if (allowed[j]) {
            dinf = std::max(dinf, -simplex.reduced_cost(sf.cost, y, j));
        }
    }
    sol.dual_infeasibility = dinf;

    double res = p.rows() ? (p.a * sol.x - p.b).lpNorm<Eigen::Infinity>() : 0.0;
    for (int j = 0; j < p.cols(); j++) {
        if (!p.free_var[j]) {
            res = std::max(res, -sol.x(j));
        }
        res = std::max(res, sol.x(j) - p.upper(j));
    }
    sol.residual = res;
    double pb = p.rows() ? p.b.lpNorm<Eigen::Infinity>() : 0.0;
    if (res > settings.residual_tol * (1 + pb)) {
        throw SolverError("LP primal residual above tolerance", res);
    }
    if (sol.gap > settings.gap_tol * (1 + std::abs(sol.objective)) || dinf > settings.gap_tol) {
        throw SolverError("LP duality certificate above tolerance", std::max(sol.gap, dinf));
    }
    return sol;
}

std::string lp_dump(const LpProblem &p) {
    std::ostringstream out;
    out.precision(17);
    out << "lp " << p.rows() << " " << p.cols() << " maximize\n";
    out << "c";
    for (int j = 0; j < p.cols(); j++) {
        out << " " << p.c(j);
    }
    out << "\nlower";
    for (int j = 0; j < p.cols(); j++) {
        out << (p.free_var[j] ? " -inf" : " 0");
    }
    out << "\nupper";
    for (int j = 0; j < p.cols(); j++) {
        if (std::isfinite(p.upper(j))) {
            out << " " << p.upper(j);
        } else {
            out << " inf";
        }
    }
    out << "\n";
    Eigen::SparseMatrix<double, Eigen::RowMajor> rows = p.a;
    for (int i = 0; i < p.rows(); i++) {
        out << "row " << i << " " << p.b(i);
        for (decltype(rows)::InnerIterator it(rows, i); it; ++it) {
            if (it.value() != 0) {
                out << " " << it.col() << ":" << it.value();
            }
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace ocsim

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

#include "ocsim/witness.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "ocsim/error.hpp"

namespace ocsim {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > kSaturated / a) {
        return kSaturated;
    }
    return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    return b > kSaturated - a ? kSaturated : a + b;
}

std::string fingerprint(const std::vector<HermitianOperator> &ops, bool reduce) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](const void *p, size_t n) {
        const auto *c = static_cast<const unsigned char *>(p);
        for (size_t i = 0; i < n; i++) {
            h ^= c[i];
            h *= 1099511628211ULL;
        }
    };
    int m = static_cast<int>(ops.size());
    int d = ops.front().dim();
    mix(&m, sizeof m);
    mix(&d, sizeof d);
    mix(&reduce, sizeof reduce);
    for (const auto &o : ops) {
        for (int i = 0; i < d; i++) {
            for (int j = 0; j < d; j++) {
                double re = o(i, j).real(), im = o(i, j).imag();
                mix(&re, sizeof re);
                mix(&im, sizeof im);
            }
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct Checkpoint {
    std::uint64_t next = 0;
    WitnessBound bound;
};

std::vector<int> to_one_based(const DeterministicStrategy &s) {
    std::vector<int> out(s);
    for (int &v : out) {
        v++;
    }
    return out;
}

bool load_checkpoint(const std::string &path, const std::string &fp, int m, int d, bool reduce, bool keep,
                     Checkpoint &out) {
    std::ifstream in(path);
    if (!in) {
        return false;
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError("checkpoint " + path + " is not valid JSON: " + e.what());
    }
    if (j.value("fingerprint", "") != fp || j.value("m", -1) != m || j.value("d", -1) != d ||
        j.value("symmetry_reduce", !reduce) != reduce) {
        throw ValidationError("checkpoint " + path + " belongs to a different witness or enumeration");
    }
    out.next = j.at("next").get<std::uint64_t>();
    out.bound.strategies = out.next;
    if (!j.at("beta").is_null()) {
        out.bound.beta = j.at("beta").get<double>();
    }
    for (int v : j.at("argmax").get<std::vector<int>>()) {
        out.bound.argmax.push_back(v - 1);
    }
    out.bound.max_gap = j.at("max_gap").get<double>();
    out.bound.max_abs_gap = j.at("max_abs_gap").get<double>();
    if (keep) {
        if (!j.contains("values")) {
            throw ValidationError("checkpoint " + path + " has no per-strategy values");
        }
        out.bound.values = j.at("values").get<std::vector<double>>();
    }
    return true;
}

void save_checkpoint(const std::string &path, const std::string &fp, int m, int d, bool reduce, bool keep,
                     std::uint64_t next, const WitnessBound &b) {
    nlohmann::json j;
    j["kind"] = "witness_checkpoint";
    j["fingerprint"] = fp;
    j["m"] = m;
    j["d"] = d;
    j["symmetry_reduce"] = reduce;
    j["next"] = next;
    j["beta"] = std::isfinite(b.beta) ? nlohmann::json(b.beta) : nlohmann::json(nullptr);
    j["argmax"] = to_one_based(b.argmax);
    j["max_gap"] = b.max_gap;
    j["max_abs_gap"] = b.max_abs_gap;
    if (keep) {
        j["values"] = b.values;
    }
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) {
            throw ValidationError("cannot write checkpoint " + tmp);
        }
        out << j.dump(1) << "\n";
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw ValidationError("cannot replace checkpoint " + path);
    }
}

std::string strategy_name(const DeterministicStrategy &s) {
    std::ostringstream o;
    o << "(";
    for (size_t i = 0; i < s.size(); i++) {
        o << (i ? "," : "") << s[i] + 1;
    }
    o << ")";
    return o.str();
}

}  // namespace

Witness::Witness(std::vector<Povm> measurements, WitnessCoefficients coefficients)
    : measurements_(std::move(measurements)), coefficients_(std::move(coefficients)) {
    if (measurements_.empty()) {
        throw ValidationError("witness: no measurements");
    }
    int d = measurements_.front().dim();
    int nb = 0;
    for (const auto &m : measurements_) {
        if (m.dim() != d) {
            throw ValidationError("witness: measurements of different dimension");
        }
        nb = std::max(nb, m.size());
    }
    if (static_cast<int>(coefficients_.size()) != nb) {
        throw ValidationError("witness: coefficient outcome extent " + std::to_string(coefficients_.size()) +
                              " differs from the largest outcome count " + std::to_string(nb));
    }
    size_t m = coefficients_.front().size();
    if (m == 0) {
        throw ValidationError("witness: no states");
    }
    for (int b = 0; b < nb; b++) {
        if (coefficients_[b].size() != m) {
            throw ValidationError("witness: ragged coefficient tensor (state extent)");
        }
        for (const auto &row : coefficients_[b]) {
            if (row.size() != measurements_.size()) {
                throw ValidationError("witness: coefficient measurement extent differs from measurement count");
            }
            for (size_t y = 0; y < row.size(); y++) {
                if (!std::isfinite(row[y])) {
                    throw ValidationError("witness: non-finite coefficient");
                }
                if (b >= measurements_[y].size() && row[y] != 0) {
                    throw ValidationError("witness: coefficient on a missing outcome");
                }
            }
        }
    }
}

double evaluate(const Witness &w, const StateSet &set) {
    if (set.dim() != w.dim() || set.size() != w.num_states()) {
        throw ValidationError("evaluate: witness expects " + std::to_string(w.num_states()) + " states of dimension " +
                              std::to_string(w.dim()));
    }
    auto ops = reduced_operators(w);
    double s = 0;
    for (int x = 0; x < set.size(); x++) {
        s += ops[x].inner(set.state(x).op());
    }
    return s;
}

std::vector<HermitianOperator> reduced_operators(const Witness &w) {
    std::vector<HermitianOperator> ops(w.num_states(), HermitianOperator::zero(w.dim()));
    for (int y = 0; y < w.num_measurements(); y++) {
        const Povm &m = w.measurements()[y];
        for (int b = 0; b < m.size(); b++) {
            for (int x = 0; x < w.num_states(); x++) {
                if (w.c(b, x, y) != 0) {
                    ops[x] += w.c(b, x, y) * m.effect(b);
                }
            }
        }
    }
    return ops;
}

StrategyEnumerator::StrategyEnumerator(int m, int d, bool symmetry_reduce) : m_(m), d_(d), reduce_(symmetry_reduce) {
    if (m < 1 || d < 1) {
        throw ValidationError("strategy enumeration needs m >= 1 and d >= 1");
    }
}

bool StrategyEnumerator::next(DeterministicStrategy &out) {
    if (done_) {
        return false;
    }
    if (!started_) {
        started_ = true;
        cur_.assign(m_, 0);
    } else {
        // Prefix maxima bound each position under symmetry reduction.
        std::vector<int> limit(m_);
        int mx = -1;
        for (int i = 0; i < m_; i++) {
            limit[i] = reduce_ ? std::min(d_ - 1, mx + 1) : d_ - 1;
            mx = std::max(mx, cur_[i]);
        }
        int i = m_ - 1;
        while (i >= 0 && cur_[i] >= limit[i]) {
            i--;
        }
        if (i < 0) {
            done_ = true;
            return false;
        }
        cur_[i]++;
        std::fill(cur_.begin() + i + 1, cur_.end(), 0);
    }
    out = cur_;
    position_++;
    return true;
}

std::uint64_t strategy_count(int m, int d, bool symmetry_reduce) {
    if (m < 1 || d < 1) {
        throw ValidationError("strategy_count needs m >= 1 and d >= 1");
    }
    if (!symmetry_reduce) {
        std::uint64_t n = 1;
        for (int i = 0; i < m; i++) {
            n = sat_mul(n, d);
        }
        return n;
    }
    // Stirling numbers of the second kind, S(m, k) for k <= d.
    std::vector<std::uint64_t> s(d + 1, 0);
    s[0] = 1;
    for (int n = 1; n <= m; n++) {
        for (int k = std::min(n, d); k >= 1; k--) {
            s[k] = sat_add(sat_mul(k, s[k]), s[k - 1]);
        }
        s[0] = 0;
    }
    std::uint64_t total = 0;
    for (int k = 1; k <= d; k++) {
        total = sat_add(total, s[k]);
    }
    return total;
}

std::vector<DeterministicStrategy> enumerate_strategies(int m, int d, bool symmetry_reduce, std::uint64_t cap) {
    std::uint64_t n = strategy_count(m, d, symmetry_reduce);
    if (n > cap) {
        throw SizingError(std::to_string(n) + " strategies exceed the cap of " + std::to_string(cap) +
                          (symmetry_reduce ? "" : "; enable symmetry reduction"));
    }
    std::vector<DeterministicStrategy> out;
    out.reserve(n);
    StrategyEnumerator e(m, d, symmetry_reduce);
    DeterministicStrategy s;
    while (e.next(s)) {
        out.push_back(s);
    }
    return out;
}

SdpProblem strategy_sdp(const std::vector<HermitianOperator> &ops, const DeterministicStrategy &gamma) {
    if (ops.empty() || gamma.size() != ops.size()) {
        throw ValidationError("strategy_sdp: strategy length differs from the number of states");
    }
    int d = ops.front().dim();
    SdpProblem p = SdpProblem::with_blocks(std::vector<int>(d, d));
    for (size_t x = 0; x < gamma.size(); x++) {
        if (gamma[x] < 0 || gamma[x] >= d) {
            throw ValidationError("strategy_sdp: strategy value out of range");
        }
        p.objective[gamma[x]] += ops[x];
    }
    for (int i = 0; i < d; i++) {
        p.constraints.push_back({{{i, HermitianOperator::identity(d)}}, 1.0});
    }
    for (const auto &bl : hermitian_basis(d)) {
        SdpConstraint c;
        for (int i = 0; i < d; i++) {
            c.terms.push_back({i, bl});
        }
        c.rhs = bl.trace();
        p.constraints.push_back(std::move(c));
    }
    return p;
}

StrategyValue strategy_bound_sdp(const std::vector<HermitianOperator> &ops, const DeterministicStrategy &gamma,
                                 const SdpSettings &settings) {
    SdpSolution s = solve_sdp(strategy_sdp(ops, gamma), settings);
    if (s.status != SdpStatus::optimal) {
        throw SolverError("strategy " + strategy_name(gamma) + ": SDP " + sdp_status_name(s.status), s.residual);
    }
    return {s.objective, s.gap, std::abs(s.objective - s.dual_objective), s.residual};
}

double strategy_bound_sdp(const Witness &w, const DeterministicStrategy &gamma) {
    return strategy_bound_sdp(reduced_operators(w), gamma).value;
}

const char *bound_method_name(BoundMethod m) {
    return m == BoundMethod::sdp_relaxation ? "sdp_relaxation" : "qubit_exact";
}

int default_threads() {
    const char *env = std::getenv("OCSIM_THREADS");
    if (env == nullptr || *env == '\0') {
        return 1;
    }
    char *end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 1024) {
        throw ValidationError(std::string("OCSIM_THREADS must be a positive integer, got '") + env + "'");
    }
    return static_cast<int>(v);
}

WitnessBound classical_bound(const Witness &w, const BoundSettings &settings) {
    int m = w.num_states();
    int d = w.dim();
    std::uint64_t total = strategy_count(m, d, settings.symmetry_reduce);
    if (total > settings.cap) {
        throw SizingError(std::to_string(total) + " strategies exceed the cap of " + std::to_string(settings.cap) +
                          (settings.symmetry_reduce ? "" : "; enable symmetry reduction"));
    }
    int threads = settings.threads > 0 ? settings.threads : default_threads();
    auto ops = reduced_operators(w);
    std::string fp = fingerprint(ops, settings.symmetry_reduce);
    bool ckpt = !settings.checkpoint_path.empty();
    int batch_size = std::max(1, settings.checkpoint_every);

    WitnessBound bound;
    std::uint64_t start = 0;
    if (ckpt) {
        Checkpoint c;
        if (load_checkpoint(settings.checkpoint_path, fp, m, d, settings.symmetry_reduce, settings.keep_values, c)) {
            bound = c.bound;
            start = c.next;
            bound.resumed_from = start;
        }
    }

    StrategyEnumerator e(m, d, settings.symmetry_reduce);
    DeterministicStrategy s;
    for (std::uint64_t i = 0; i < start && e.next(s); i++) {
    }
    std::vector<DeterministicStrategy> batch;
    std::vector<StrategyValue> vals;
    while (true) {
        batch.clear();
        while (static_cast<int>(batch.size()) < batch_size && e.next(s)) {
            batch.push_back(s);
        }
        if (batch.empty()) {
            break;
        }
        vals.assign(batch.size(), {});
        std::vector<std::exception_ptr> errors(batch.size());
        auto work = [&](int t) {
            for (size_t k = t; k < batch.size(); k += threads) {
                try {
                    vals[k] = strategy_bound_sdp(ops, batch[k], settings.sdp);
                } catch (...) {
                    errors[k] = std::current_exception();
                }
            }
        };
        if (threads == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; t++) {
                pool.emplace_back(work, t);
            }
            for (auto &th : pool) {
                th.join();
            }
        }
        for (size_t k = 0; k < batch.size(); k++) {
            if (errors[k]) {
                std::rethrow_exception(errors[k]);
            }
            if (vals[k].value > bound.beta) {
                bound.beta = vals[k].value;
                bound.argmax = batch[k];
            }
            bound.max_gap = std::max(bound.max_gap, vals[k].gap);
            bound.max_abs_gap = std::max(bound.max_abs_gap, vals[k].abs_gap);
            if (settings.keep_values) {
                bound.values.push_back(vals[k].value);
            }
        }
        bound.strategies += batch.size();
        if (ckpt) {
            save_checkpoint(settings.checkpoint_path, fp, m, d, settings.symmetry_reduce, settings.keep_values,
                            bound.strategies, bound);
        }
    }
    bound.method = BoundMethod::sdp_relaxation;
    bound.uncertainty = 1e-6 + bound.max_abs_gap;
    return bound;
}

Witness sign_witness(const RealMatrix &s, const std::vector<Povm> &measurements) {
    if (s.cols() != static_cast<Eigen::Index>(measurements.size()) || s.rows() < 1) {
        throw ValidationError("sign witness: s must have one column per measurement and at least one row");
    }
    for (const auto &m : measurements) {
        if (m.size() != 2) {
            throw ValidationError("sign witness: measurements must have two outcomes");
        }
    }
    WitnessCoefficients c(2, std::vector<std::vector<double>>(s.rows(), std::vector<double>(s.cols())));
    for (int x = 0; x < s.rows(); x++) {
        for (int y = 0; y < s.cols(); y++) {
            c[0][x][y] = s(x, y);
            c[1][x][y] = -s(x, y);
        }
    }
    return Witness(measurements, c);
}

WitnessBound qubit_exact_bound(const RealMatrix &s, const std::vector<Povm> &measurements) {
    for (const auto &m : measurements) {
        if (m.dim() != 2) {
            throw ValidationError("qubit_exact_bound: measurements must be qubit measurements");
        }
        if (m.size() != 2 || !m.is_rank_one_projective()) {
            throw ValidationError("qubit_exact_bound: measurements must be rank-one projective");
        }
    }
    Witness w = sign_witness(s, measurements);
    int m = static_cast<int>(s.rows());
    if (m > 30) {
        throw SizingError("qubit_exact_bound: 2^m sign patterns with m > 30");
    }
    auto ops = reduced_operators(w);
    WitnessBound bound;
    bound.method = BoundMethod::qubit_exact;
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << m); a++) {
        ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
        for (int x = 0; x < m; x++) {
            // Bit x of a is set for a minus sign; the most significant bit is x = 0.
            bool minus = (a >> (m - 1 - x)) & 1;
            sum += (minus ? -1.0 : 1.0) * ops[x].matrix();
        }
        double p = sum(0, 0).real(), q = sum(1, 1).real();
        double lam = 0.5 * (p + q) + std::sqrt(0.25 * (p - q) * (p - q) + std::norm(sum(0, 1)));
        if (lam > bound.beta) {
            bound.beta = lam;
            bound.argmax.assign(m, 0);
            for (int x = 0; x < m; x++) {
                bound.argmax[x] = (a >> (m - 1 - x)) & 1;
            }
        }
        bound.strategies++;
    }
    bound.uncertainty = 1e-12 * (1 + std::abs(bound.beta));
    return bound;
}

Witness mub_witness(int d, int n) {
    auto all = gen_mub_bases(d);
    if (n < 1 || n > static_cast<int>(all.size())) {
        throw ValidationError("mub_witness: number of bases must lie in [1, " + std::to_string(all.size()) + "]");
    }
    std::vector<Povm> bases(all.begin(), all.begin() + n);
    WitnessCoefficients c(d, std::vector<std::vector<double>>(n * d, std::vector<double>(n, 0.0)));
    for (int j = 0; j < n; j++) {
        for (int k = 0; k < d; k++) {
            c[k][j * d + k][j] = 1;
        }
    }
    return Witness(bases, c);
}

double critical_visibility(const Witness &w, const StateSet &target, double beta) {
    double wt = evaluate(w, target);
    std::vector<DensityMatrix> mixed(target.size(), DensityMatrix::maximally_mixed(target.dim()));
    double w0 = evaluate(w, StateSet(mixed, target.labels()));
    if (!(wt > w0)) {
        throw ValidationError("critical_visibility: the witness does not separate the target from white noise");
    }
    double v = (beta - w0) / (wt - w0);
    if (v < -1e-12 || v > 1 + 1e-12) {
        throw ValidationError("critical_visibility: bound " + std::to_string(beta) + " is not crossed for v in [0, 1]");
    }
    return std::clamp(v, 0.0, 1.0);
}

}  // namespace ocsim

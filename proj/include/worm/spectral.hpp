#pragma once

// Exact chain analysis on small graphs: full transition matrix over W,
// stationarity, absolute spectral gap, relaxation time, exact total-variation
// mixing times, and the relaxation/mixing bound checks.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <vector>

#include "worm/chain.hpp"
#include "worm/exact_oracle.hpp"

namespace worm {

inline constexpr int kStateSpaceCap = 50000;

struct ChainMatrix {
    const Graph* g = nullptr;
    ChainParams params{};
    std::vector<WormState> states;  // C0 first then C2, each by (|A|, lex bits)
    std::unordered_map<EdgeSubset, int, EdgeSubsetHash> index;
    Eigen::MatrixXd P;
    Eigen::VectorXd pi;

    int size() const { return static_cast<int>(states.size()); }
};

inline ChainMatrix build_chain_matrix(const Graph& g, const ChainParams& params,
                                      int cap = kStateSpaceCap) {
    auto t = enumerate_classes(g, params.x);
    if (t.c0.size() + t.c2.size() > static_cast<size_t>(cap))
        throw TooLarge("|W| = " + std::to_string(t.c0.size() + t.c2.size()) +
                       " exceeds cap " + std::to_string(cap));
    ChainMatrix cm;
    cm.g = &g;
    cm.params = params;
    auto order = [](const EdgeSubset& a, const EdgeSubset& b) {
        if (a.count() != b.count()) return a.count() < b.count();
        return a.bits_less(b);
    };
    std::sort(t.c0.begin(), t.c0.end(), order);
    std::sort(t.c2.begin(), t.c2.end(), order);
    for (const auto& A : t.c0) cm.states.push_back(make_state(g, A));
    for (const auto& A : t.c2) cm.states.push_back(make_state(g, A));
    const int s = cm.size();
    for (int i = 0; i < s; ++i) cm.index[cm.states[i].edges] = i;

    cm.P = Eigen::MatrixXd::Zero(s, s);
    cm.pi = Eigen::VectorXd::Zero(s);
    for (int i = 0; i < s; ++i) {
        cm.pi(i) = ps_prob(t, cm.states[i]);
        const WormState& A = cm.states[i];
        double offsum = 0.0;
        for (int e = 0; e < g.m(); ++e) {
            double p = detail::offdiag_entry(g, A, e, params);
            if (p <= 0.0) continue;
            EdgeSubset B = A.edges;
            B.flip(e);
            cm.P(i, cm.index.at(B)) = p;
            offsum += p;
        }
        cm.P(i, i) = 1.0 - offsum;
    }
    return cm;
}

// Largest nontrivial eigenvalue magnitude via the pi-symmetrized similar matrix.
inline double lambda_star(const ChainMatrix& cm) {
    const int s = cm.size();
    Eigen::VectorXd sq = cm.pi.array().sqrt();
    Eigen::MatrixXd S(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) S(i, j) = sq(i) * cm.P(i, j) / sq(j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver((S + S.transpose()) / 2.0);
    const auto& ev = solver.eigenvalues();  // ascending
    int ones = 0;
    for (int i = 0; i < s; ++i)
        if (ev(i) > 1.0 - 1e-10) ++ones;
    if (ones != 1) throw NotIrreducible("eigenvalue 1 has multiplicity " + std::to_string(ones));
    double lam = 0.0;
    for (int i = 0; i + 1 < s; ++i) lam = std::max(lam, std::fabs(ev(i)));
    return lam;
}

inline double relaxation_time(const ChainMatrix& cm) { return 1.0 / (1.0 - lambda_star(cm)); }

inline double tv_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& pi) {
    return 0.5 * (p - pi).cwiseAbs().sum();
}

// Smallest t with ||P^t(start,.) - pi||_TV <= delta.
inline long long tv_mixing_time(const ChainMatrix& cm, int start, double delta,
                                long long max_iter = 100000000) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(cm.size());
    p(start) = 1.0;
    for (long long t = 0;; ++t) {
        if (tv_distance(p, cm.pi) <= delta) return t;
        if (t >= max_iter) throw IterationCap("TV iteration cap reached");
        p = cm.P.transpose() * p;
    }
}

// Mixing times from every start state simultaneously, via powers of P.
inline std::vector<long long> tv_mixing_times_all(const ChainMatrix& cm, double delta,
                                                  long long max_iter = 100000000) {
    const int s = cm.size();
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(s, s);
    std::vector<long long> out(s, -1);
    int remaining = s;
    for (long long t = 0; remaining > 0; ++t) {
        for (int i = 0; i < s; ++i)
            if (out[i] < 0 && tv_distance(M.row(i).transpose(), cm.pi) <= delta) {
                out[i] = t;
                --remaining;
            }
        if (remaining == 0) break;
        if (t >= max_iter) throw IterationCap("TV iteration cap reached");
        M = M * cm.P;
    }
    return out;
}

struct MixingCheck {
    double delta = 0;
    long long mix_from_zero = 0;
    double mix_from_zero_bound = 0;
    long long mix_worst = 0;
    double mix_worst_bound = 0;
    bool pass = false;
};

struct MixingReport {
    double lambda_star = 0;
    double t_rel = 0;
    double t_rel_bound = 0;
    std::vector<MixingCheck> mixing;
    bool pass = false;
};

// Checks t_rel <= 4 Delta m n^4 and both displayed mixing-time bounds.
inline MixingReport verify_mixing_bounds(const Graph& g, const ChainParams& params,
                                      const std::vector<double>& deltas) {
    auto cm = build_chain_matrix(g, params);
    MixingReport rep;
    rep.lambda_star = lambda_star(cm);
    rep.t_rel = 1.0 / (1.0 - rep.lambda_star);
    const double n = g.n, m = g.m(), D = g.max_degree;
    rep.t_rel_bound = 4.0 * D * m * n * n * n * n;
    rep.pass = rep.t_rel <= rep.t_rel_bound;

    int zero = cm.index.at(EdgeSubset(g.m()));
    for (double delta : deltas) {
        MixingCheck c;
        c.delta = delta;
        c.mix_from_zero_bound =
            4.0 * (std::log(2.0) + std::log(1.0 / delta) / m) * D * m * m * n * n * n * n;
        c.mix_worst_bound = 4.0 * (std::log(2.0 / params.x) + std::log(2.0 / delta) / m) * D * m *
                            m * n * n * n * n;
        c.mix_from_zero = tv_mixing_time(cm, zero, delta);
        auto all = tv_mixing_times_all(cm, delta);
        c.mix_worst = *std::max_element(all.begin(), all.end());
        c.pass = c.mix_from_zero <= c.mix_from_zero_bound && c.mix_worst <= c.mix_worst_bound;
        rep.pass = rep.pass && c.pass;
        rep.mixing.push_back(c);
    }
    return rep;
}

}  // namespace worm

#pragma once

// The lazy Metropolis worm kernel P_x on W: proposal generation, acceptance
// probabilities, single-step and multi-step simulation, and exact per-entry
// transition probabilities.
//
// Off-diagonal entries, for a single-edge move A -> A^uv:
//   A in C0:                      x^{1(uv not in A)} * (1/2n) * (1/d(u) + 1/d(v))
//   A^uv in C0:                   x^{1(uv not in A)} * (1/4)  * (1/d(u) + 1/d(v))
//   A, A^uv in C2, pivot u odd:   min((d(u)/d(v)) x^{1(uv not in A)-1(uv in A)}, 1) / (4 d(u))
// All other non-diagonal entries are zero; the diagonal absorbs the rest
// (>= 1/2 by laziness).

#include <cmath>
#include <functional>
#include <random>

#include "worm/worm_state.hpp"

namespace worm {

struct ChainParams {
    double x;     // tanh(beta), in (0,1)
    double beta;  // in (0, inf)

    static ChainParams from_beta(double beta) {
        if (!(beta > 0) || !std::isfinite(beta)) throw BadTolerance("beta must be in (0,inf)");
        return {std::tanh(beta), beta};
    }
    static ChainParams from_x(double x) {
        if (!(x > 0) || !(x < 1)) throw BadTolerance("x must be in (0,1)");
        return {x, std::atanh(x)};
    }
};

struct Proposal {
    int pivot;     // chosen vertex v (uniform on V from C0, uniform on boundary from C2)
    int neighbor;  // u ~ pivot, uniform over the sorted adjacency list
    int edge;      // index of edge {pivot, neighbor}
};

using Rng = std::mt19937_64;

// Stream splitting for independent chains: SplitMix64 of (master, index).
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline Proposal propose(const Graph& g, const WormState& s, Rng& rng) {
    int v;
    if (s.in_c0()) {
        v = static_cast<int>(rng() % static_cast<std::uint64_t>(g.n));
    } else {
        v = s.bd[rng() & 1];
    }
    const auto& nbrs = g.adj[v];
    auto [u, e] = nbrs[rng() % nbrs.size()];
    return {v, u, e};
}

// Metropolis acceptance factor for toggling p.edge from state s.
inline double acceptance(const Graph& g, const WormState& s, const Proposal& p,
                         const ChainParams& params) {
    bool adding = !s.edges.test(p.edge);
    auto [eu, ev] = g.edges[p.edge];
    bool u_odd = s.bsize == 2 && (s.bd[0] == eu || s.bd[1] == eu);
    bool v_odd = s.bsize == 2 && (s.bd[0] == ev || s.bd[1] == ev);
    if (s.in_c0()) return adding ? params.x : 1.0;
    if (u_odd && v_odd) return adding ? params.x : 1.0;  // lands in C0
    if (!u_odd && !v_odd) throw LeavesStateSpace("proposal pivot not on the boundary");
    // C2 -> C2; the pivot must be the odd endpoint
    double ratio = static_cast<double>(g.degree[p.pivot]) / g.degree[p.neighbor];
    double xfac = adding ? params.x : 1.0 / params.x;
    return std::min(ratio * xfac, 1.0);
}

// One lazy step: hold with probability 1/2, else metropolize a proposal.
inline WormState step(const Graph& g, const WormState& s, const ChainParams& params, Rng& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    if (unif(rng) < 0.5) return s;
    Proposal p = propose(g, s, rng);
    double a = acceptance(g, s, p, params);
    if (a >= 1.0 || unif(rng) < a) return toggle(g, s, p.edge);
    return s;
}

namespace detail {
// Off-diagonal entry for the move A -> A^e, assuming the move stays in W;
// returns 0 when the move is not proposable.
inline double offdiag_entry(const Graph& g, const WormState& A, int e, const ChainParams& params) {
    auto [u, v] = g.edges[e];
    bool adding = !A.edges.test(e);
    double xfac = adding ? params.x : 1.0;
    if (A.in_c0())
        return xfac * (1.0 / (2.0 * g.n)) * (1.0 / g.degree[u] + 1.0 / g.degree[v]);
    bool u_odd = A.bd[0] == u || A.bd[1] == u;
    bool v_odd = A.bd[0] == v || A.bd[1] == v;
    if (u_odd && v_odd)  // A^e in C0
        return xfac * 0.25 * (1.0 / g.degree[u] + 1.0 / g.degree[v]);
    if (!u_odd && !v_odd) return 0.0;  // not reachable by a worm proposal
    int pivot = u_odd ? u : v;
    int other = u_odd ? v : u;
    double xdelta = adding ? params.x : 1.0 / params.x;
    double acc = std::min(static_cast<double>(g.degree[pivot]) / g.degree[other] * xdelta, 1.0);
    return acc / (4.0 * g.degree[pivot]);
}

// Sum of all off-diagonal entries out of A.
inline double offdiag_rowsum(const Graph& g, const WormState& A, const ChainParams& params) {
    double sum = 0.0;
    if (A.in_c0()) {
        for (int e = 0; e < g.m(); ++e) sum += offdiag_entry(g, A, e, params);
    } else {
        // only edges incident to a boundary vertex can be proposed
        std::vector<int> seen;
        for (int i = 0; i < 2; ++i)
            for (auto [u, e] : g.adj[A.bd[i]]) {
                bool dup = false;
                for (int f : seen) dup |= (f == e);
                if (dup) continue;
                seen.push_back(e);
                sum += offdiag_entry(g, A, e, params);
            }
    }
    return sum;
}
}  // namespace detail

// Exact P_x(A,B): zero unless B == A or B == A^e for a single edge e.
inline double transition_prob(const Graph& g, const WormState& A, const WormState& B,
                              const ChainParams& params) {
    EdgeSubset diff = A.edges.symdiff(B.edges);
    int d = diff.count();
    if (d == 0) return 1.0 - detail::offdiag_rowsum(g, A, params);
    if (d != 1) return 0.0;
    return detail::offdiag_entry(g, A, diff.indices()[0], params);
}

using Observer = std::function<void(long long, const WormState&)>;

inline WormState run(const Graph& g, WormState s, const ChainParams& params, long long steps,
                     Rng& rng, const Observer& observer = nullptr) {
    for (long long t = 1; t <= steps; ++t) {
        s = step(g, s, params, rng);
        if (observer) observer(t, s);
    }
    return s;
}

}  // namespace worm

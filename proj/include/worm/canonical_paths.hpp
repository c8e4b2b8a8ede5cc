#pragma once

// Constructive canonical-path machinery: the deterministic path family Gamma
// over W x C0, the per-transition injection eta_T, and the congestion
// quantity phi(Gamma), all verified exhaustively on small graphs.
//
// Decomposition rules (deterministic functions of the symmetric difference
// alone, which is what makes eta_T reconstructible):
//   - B0 is the lexicographically least shortest path, as an edge set under
//     the fixed subgraph order, between the two odd vertices of I inside
//     (V, I^F); unwound from the lower-labeled endpoint.
//   - remaining edges split into simple cycles: repeatedly walk from the
//     lowest-labeled vertex of positive remaining degree toward the
//     lowest-labeled available neighbor; when the walk revisits a vertex,
//     the enclosed loop is extracted and any prefix edges are returned.
//   - cycles sorted by the subgraph order; each unwound from its lowest
//     vertex toward the lower-labeled of its two cycle neighbors.

#include <algorithm>
#include <map>
#include <unordered_map>
#include <vector>

#include "worm/chain.hpp"
#include "worm/exact_oracle.hpp"

namespace worm {

struct SymdiffDecomposition {
    std::vector<int> b0;                  // path edges in unwind order; empty iff I in C0
    std::vector<std::vector<int>> cycles; // each in unwind order
    int bd_u = -1, bd_v = -1;             // boundary of I (sorted), -1 when empty
};

struct CanonicalPath {
    std::vector<WormState> states;  // I = states[0], ..., F = states.back()
    std::vector<int> toggles;       // toggled edge per step; states.size() == toggles.size()+1

    size_t length() const { return toggles.size(); }
};

namespace detail {

inline bool subgraph_less(const std::vector<int>& a, const std::vector<int>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// All-shortest-path selection inside the spanning subgraph (V, D).
inline std::vector<int> least_shortest_path(const Graph& g, const EdgeSubset& D, int s, int t) {
    std::vector<int> dist(g.n, -1);
    std::vector<int> order;
    dist[s] = 0;
    order.push_back(s);
    for (size_t qi = 0; qi < order.size(); ++qi) {
        int w = order[qi];
        for (auto [u, e] : g.adj[w])
            if (D.test(e) && dist[u] < 0) {
                dist[u] = dist[w] + 1;
                order.push_back(u);
            }
    }
    if (dist[t] < 0) throw InternalInvariant("odd vertices in different components of I^F");

    // enumerate all shortest s-t paths over the layered DAG, in lex neighbor order
    std::vector<int> best_sorted, best_order;
    std::vector<int> cur;
    auto dfs = [&](auto&& self, int w) -> void {
        if (w == t) {
            std::vector<int> sorted = cur;
            std::sort(sorted.begin(), sorted.end());
            if (best_order.empty() || subgraph_less(sorted, best_sorted)) {
                best_sorted = sorted;
                best_order = cur;
            }
            return;
        }
        for (auto [u, e] : g.adj[w])
            if (D.test(e) && dist[u] == dist[w] + 1) {
                cur.push_back(e);
                self(self, u);
                cur.pop_back();
            }
    };
    dfs(dfs, s);
    return best_order;
}

// Greedy simple-cycle extraction from an even edge set.
inline std::vector<std::vector<int>> extract_cycles(const Graph& g, const EdgeSubset& even) {
    std::vector<char> in(g.m(), 0);
    std::vector<int> deg(g.n, 0);
    int remaining = 0;
    for (int e = 0; e < g.m(); ++e)
        if (even.test(e)) {
            in[e] = 1;
            ++deg[g.edges[e].first];
            ++deg[g.edges[e].second];
            ++remaining;
        }
    std::vector<std::vector<int>> cycles;  // vertex sequences, closed
    while (remaining > 0) {
        int start = 0;
        while (deg[start] == 0) ++start;
        std::vector<int> walk_v{start};
        std::vector<int> walk_e;
        std::vector<int> pos(g.n, -1);
        pos[start] = 0;
        int cur = start;
        while (true) {
            int next = -1, edge = -1;
            for (auto [u, e] : g.adj[cur])
                if (in[e]) {
                    next = u;
                    edge = e;
                    break;  // adjacency sorted: lowest-labeled neighbor first
                }
            if (next < 0) throw InternalInvariant("dead end inside an even subgraph");
            in[edge] = 0;  // in-walk edges are unavailable
            walk_e.push_back(edge);
            if (pos[next] >= 0) {
                // close the loop at the first occurrence of `next`
                int p = pos[next];
                std::vector<int> cyc(walk_v.begin() + p, walk_v.end());
                cyc.push_back(next);
                for (size_t i = p; i < walk_e.size(); ++i) {
                    --deg[g.edges[walk_e[i]].first];
                    --deg[g.edges[walk_e[i]].second];
                    --remaining;
                }
                for (size_t i = 0; i < static_cast<size_t>(p); ++i) in[walk_e[i]] = 1;
                cycles.push_back(std::move(cyc));
                break;
            }
            walk_v.push_back(next);
            pos[next] = static_cast<int>(walk_v.size()) - 1;
            cur = next;
        }
    }
    return cycles;
}

// Fixed-orientation unwind order for a closed vertex sequence v0..vk (=v0).
inline std::vector<int> orient_cycle(const Graph& g, const std::vector<int>& cyc) {
    int k = static_cast<int>(cyc.size()) - 1;  // number of edges
    int lo = 0;
    for (int i = 1; i < k; ++i)
        if (cyc[i] < cyc[lo]) lo = i;
    int fwd = cyc[(lo + 1) % k];
    int bwd = cyc[(lo - 1 + k) % k];
    std::vector<int> out;
    if (fwd < bwd) {
        for (int i = 0; i < k; ++i)
            out.push_back(g.edge_index(cyc[(lo + i) % k], cyc[(lo + i + 1) % k]));
    } else {
        for (int i = 0; i < k; ++i)
            out.push_back(g.edge_index(cyc[(lo - i + k) % k], cyc[(lo - i - 1 + 2 * k) % k]));
    }
    return out;
}

// Decomposition from the symmetric difference alone; `bd` is its boundary.
inline SymdiffDecomposition decompose_diff(const Graph& g, const EdgeSubset& D,
                                           const std::vector<int>& bd) {
    SymdiffDecomposition dec;
    EdgeSubset even = D;
    if (!bd.empty()) {
        dec.bd_u = bd[0];
        dec.bd_v = bd[1];
        dec.b0 = least_shortest_path(g, D, bd[0], bd[1]);
        for (int e : dec.b0) even.flip(e);
    }
    dec.cycles.clear();
    auto raw = extract_cycles(g, even);
    for (const auto& cyc : raw) dec.cycles.push_back(orient_cycle(g, cyc));
    std::sort(dec.cycles.begin(), dec.cycles.end(), [](const auto& a, const auto& b) {
        auto sa = a, sb = b;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        return subgraph_less(sa, sb);
    });
    return dec;
}

}  // namespace detail

inline SymdiffDecomposition decompose(const Graph& g, const WormState& I, const WormState& F) {
    if (!F.in_c0()) throw NotInW("final state must lie in C0");
    EdgeSubset D = I.edges.symdiff(F.edges);
    std::vector<int> bd;
    if (I.bsize == 2) bd = {I.bd[0], I.bd[1]};
    return detail::decompose_diff(g, D, bd);
}

inline CanonicalPath build_path(const Graph& g, const WormState& I, const WormState& F) {
    auto dec = decompose(g, I, F);
    CanonicalPath path;
    path.states.push_back(I);
    auto apply = [&](int e) {
        path.states.push_back(toggle(g, path.states.back(), e));
        path.toggles.push_back(e);
    };
    for (int e : dec.b0) apply(e);
    for (const auto& cyc : dec.cycles)
        for (int e : cyc) apply(e);
    if (path.states.back().edges != F.edges)
        throw InternalInvariant("canonical path did not terminate at F");
    return path;
}

// eta_T(I,F) = I ^ F ^ (A u e) for the directed transition T = (A, A^e).
inline EdgeSubset eta(const Graph& g, const WormState& A, int e, const WormState& I,
                      const WormState& F) {
    auto path = build_path(g, I, F);
    bool found = false;
    for (size_t i = 0; i < path.toggles.size(); ++i)
        if (path.toggles[i] == e && path.states[i].edges == A.edges) {
            found = true;
            break;
        }
    if (!found) throw TransitionNotOnPath("gamma_{I,F} does not traverse (A, A^e)");
    EdgeSubset aue = A.edges;
    aue.set(e);
    return I.edges.symdiff(F.edges).symdiff(aue);
}

// Inverse of eta_T: recover (I,F) from the image value.
inline std::pair<WormState, WormState> reconstruct(const Graph& g, const WormState& A, int e,
                                                   const EdgeSubset& etaval) {
    EdgeSubset aue = A.edges;
    aue.set(e);
    EdgeSubset D = etaval.symdiff(aue);
    auto bd = boundary(g, D);
    if (bd.size() != 0 && bd.size() != 2) throw NotInImage("I^F would have |boundary| not in {0,2}");
    SymdiffDecomposition dec;
    try {
        dec = detail::decompose_diff(g, D, bd);
    } catch (const InternalInvariant&) {
        throw NotInImage("odd vertices of I^F are disconnected in I^F");
    }
    std::vector<int> order = dec.b0;
    for (const auto& cyc : dec.cycles) order.insert(order.end(), cyc.begin(), cyc.end());
    auto it = std::find(order.begin(), order.end(), e);
    if (it == order.end()) throw NotInImage("transition edge not in the unwind order of I^F");
    size_t j = static_cast<size_t>(it - order.begin());

    EdgeSubset Iedges = A.edges, Fedges = A.edges;
    for (size_t i = 0; i < j; ++i) Iedges.flip(order[i]);
    for (size_t i = j; i < order.size(); ++i) Fedges.flip(order[i]);
    WormState I, F;
    try {
        I = make_state(g, Iedges);
        F = make_state(g, Fedges);
    } catch (const NotInW&) {
        throw NotInImage("replayed endpoints leave the state space");
    }
    if (!F.in_c0()) throw NotInImage("replayed final state not in C0");
    // confirm the canonical path for (I,F) really passes through (A, A^e)
    try {
        EdgeSubset check = eta(g, A, e, I, F);
        if (check != etaval) throw NotInImage("eta round-trip mismatch");
    } catch (const TransitionNotOnPath&) {
        throw NotInImage("canonical path of the replayed pair misses the transition");
    }
    return {I, F};
}

struct TransitionKey {
    EdgeSubset from;
    int edge;
    bool operator==(const TransitionKey& o) const { return edge == o.edge && from == o.from; }
};

struct TransitionKeyHash {
    std::size_t operator()(const TransitionKey& k) const {
        return k.from.hash() * 1099511628211ULL + static_cast<std::size_t>(k.edge);
    }
};

struct CongestionResult {
    double phi = 0;
    int l_max = 0;
    TransitionKey argmax{};
    std::unordered_map<TransitionKey, double, TransitionKeyHash> table;
};

// phi(Gamma) over all (I,F) in W x C0, with S = C0.
inline CongestionResult congestion(const Graph& g, const ChainParams& params,
                                   std::uint64_t pair_budget = 5000000) {
    auto t = enumerate_classes(g, params.x);
    std::vector<WormState> w_states;
    for (const auto& A : t.c0) w_states.push_back(make_state(g, A));
    for (const auto& A : t.c2) w_states.push_back(make_state(g, A));
    if (static_cast<std::uint64_t>(w_states.size()) * t.c0.size() > pair_budget)
        throw TooLarge("|W| x |C0| exceeds the congestion budget");

    double pi_c0 = t.pi_c0();
    std::unordered_map<TransitionKey, double, TransitionKeyHash> denom;
    CongestionResult res;
    for (const auto& I : w_states) {
        double pi_i = ps_prob(t, I);
        for (const auto& Fsub : t.c0) {
            WormState F = make_state(g, Fsub);
            double pi_f = ps_prob(t, F);
            auto path = build_path(g, I, F);
            res.l_max = std::max(res.l_max, static_cast<int>(path.length()));
            for (size_t i = 0; i < path.toggles.size(); ++i) {
                TransitionKey key{path.states[i].edges, path.toggles[i]};
                auto [it, fresh] = denom.try_emplace(key, 0.0);
                if (fresh) {
                    double p = detail::offdiag_entry(g, path.states[i], path.toggles[i], params);
                    if (p <= 0.0) throw InternalInvariant("canonical path uses a zero transition");
                    it->second = pi_c0 * ps_prob(t, path.states[i]) * p;
                }
                res.table[key] += pi_i * pi_f / it->second;
            }
        }
    }
    for (const auto& [key, val] : res.table)
        if (val > res.phi) {
            res.phi = val;
            res.argmax = key;
        }
    return res;
}

}  // namespace worm

#pragma once

// Edge subsets and odd-vertex boundaries: the algebra under the state space
// W = C0 (even subgraphs) union C2 (exactly two odd vertices).

#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "worm/graph.hpp"

namespace worm {

// Fixed-width bit vector keyed by the graph's edge index.
class EdgeSubset {
  public:
    EdgeSubset() = default;
    explicit EdgeSubset(int m) : m_(m), w_((m + 63) / 64, 0) {}

    static EdgeSubset from_mask(int m, std::uint64_t mask) {
        EdgeSubset s(m);
        if (m > 0) s.w_[0] = mask;
        return s;
    }

    int width() const { return m_; }
    bool test(int e) const { return (w_[e >> 6] >> (e & 63)) & 1; }
    void set(int e) { w_[e >> 6] |= std::uint64_t(1) << (e & 63); }
    void flip(int e) { w_[e >> 6] ^= std::uint64_t(1) << (e & 63); }

    int count() const {
        int c = 0;
        for (auto w : w_) c += std::popcount(w);
        return c;
    }

    EdgeSubset symdiff(const EdgeSubset& o) const {
        EdgeSubset r = *this;
        for (size_t i = 0; i < w_.size(); ++i) r.w_[i] ^= o.w_[i];
        return r;
    }

    bool operator==(const EdgeSubset& o) const { return m_ == o.m_ && w_ == o.w_; }
    bool operator!=(const EdgeSubset& o) const { return !(*this == o); }

    // lexicographic on sorted edge-index sequences; the fixed subgraph order
    bool bits_less(const EdgeSubset& o) const {
        int a = 0, b = 0;
        while (true) {
            while (a < m_ && !test(a)) ++a;
            while (b < o.m_ && !o.test(b)) ++b;
            if (b == o.m_) return false;
            if (a == m_) return true;
            if (a != b) return a < b;
            ++a;
            ++b;
        }
    }

    std::size_t hash() const {
        std::uint64_t h = 1469598103934665603ULL;
        for (auto w : w_) {
            h ^= w;
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }

    std::vector<int> indices() const {
        std::vector<int> out;
        for (int e = 0; e < m_; ++e)
            if (test(e)) out.push_back(e);
        return out;
    }

  private:
    int m_ = 0;
    std::vector<std::uint64_t> w_;
};

struct EdgeSubsetHash {
    std::size_t operator()(const EdgeSubset& s) const { return s.hash(); }
};

// Full recomputation of the odd-vertex boundary of (V, A); sorted.
inline std::vector<int> boundary(const Graph& g, const EdgeSubset& A) {
    std::vector<int> deg(g.n, 0);
    for (int e = 0; e < g.m(); ++e)
        if (A.test(e)) {
            ++deg[g.edges[e].first];
            ++deg[g.edges[e].second];
        }
    std::vector<int> out;
    for (int v = 0; v < g.n; ++v)
        if (deg[v] & 1) out.push_back(v);
    return out;
}

enum class StateClass { C0, C2 };

// Chain state: edge subset plus cached boundary (at most two vertices).
struct WormState {
    EdgeSubset edges;
    std::array<int, 2> bd{-1, -1};  // sorted when bsize == 2
    int bsize = 0;

    StateClass cls() const { return bsize == 0 ? StateClass::C0 : StateClass::C2; }
    bool in_c0() const { return bsize == 0; }
};

inline StateClass classify(const WormState& s) { return s.cls(); }

inline WormState make_state(const Graph& g, const EdgeSubset& A) {
    auto bd = boundary(g, A);
    if (bd.size() != 0 && bd.size() != 2)
        throw NotInW("boundary has " + std::to_string(bd.size()) + " vertices");
    WormState s;
    s.edges = A;
    s.bsize = static_cast<int>(bd.size());
    if (s.bsize == 2) s.bd = {bd[0], bd[1]};
    return s;
}

inline WormState zero_state(const Graph& g) {
    WormState s;
    s.edges = EdgeSubset(g.m());
    return s;
}

// Single-edge toggle with O(1) incremental boundary update:
// boundary' = boundary symdiff {u,v}.
inline WormState toggle(const Graph& g, const WormState& s, int e) {
    auto [u, v] = g.edges[e];
    WormState r = s;
    r.edges.flip(e);
    bool hu = s.bsize == 2 && (s.bd[0] == u || s.bd[1] == u);
    bool hv = s.bsize == 2 && (s.bd[0] == v || s.bd[1] == v);
    if (s.bsize == 0) {
        r.bsize = 2;
        r.bd = {std::min(u, v), std::max(u, v)};
    } else if (hu && hv) {
        r.bsize = 0;
        r.bd = {-1, -1};
    } else if (hu || hv) {
        int keep = (s.bd[0] == u || s.bd[0] == v) ? s.bd[1] : s.bd[0];
        int enter = hu ? v : u;
        r.bd = {std::min(keep, enter), std::max(keep, enter)};
    } else {
        throw LeavesStateSpace("toggle of edge " + std::to_string(u + 1) + "-" +
                               std::to_string(v + 1) + " yields four odd vertices");
    }
    return r;
}

// Debug/golden-test dump: sorted "u-v" edge tokens plus boundary vertices (1-based).
inline std::string dump_state(const Graph& g, const WormState& s) {
    std::string out = "{";
    bool first = true;
    for (int e : s.edges.indices()) {
        if (!first) out += ",";
        first = false;
        out += std::to_string(g.edges[e].first + 1) + "-" + std::to_string(g.edges[e].second + 1);
    }
    out += "} boundary:{";
    for (int i = 0; i < s.bsize; ++i) {
        if (i) out += ",";
        out += std::to_string(s.bd[i] + 1);
    }
    out += "}";
    return out;
}

}  // namespace worm

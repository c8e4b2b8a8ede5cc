#pragma once

// Immutable simple connected graph with a fixed vertex labeling and the
// induced lexicographic edge order. Vertices are 1-based in files and all
// external output, 0-based internally.

#include <algorithm>
#include <cstdint>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "worm/errors.hpp"

namespace worm {

struct Graph {
    int n = 0;                                       // vertex count
    std::vector<std::pair<int, int>> edges;          // (u,v), u<v, lex sorted
    std::vector<std::vector<std::pair<int, int>>> adj;  // per vertex: (nbr, edge idx), sorted by nbr
    std::vector<int> degree;
    int max_degree = 0;

    int m() const { return static_cast<int>(edges.size()); }

    // index of edge {u,v}, or -1
    int edge_index(int u, int v) const {
        if (u > v) std::swap(u, v);
        auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(u, v));
        if (it == edges.end() || *it != std::make_pair(u, v)) return -1;
        return static_cast<int>(it - edges.begin());
    }
};

// Builds and validates a graph from 0-based endpoint pairs.
inline Graph make_graph(int n, std::vector<std::pair<int, int>> edge_list) {
    if (n < 1) throw BadDimension("vertex count must be >= 1, got " + std::to_string(n));
    if (edge_list.empty()) throw EmptyEdgeSet("graph must have at least one edge");
    for (auto& [u, v] : edge_list) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw BadLabel("vertex label outside 1.." + std::to_string(n));
        if (u == v) throw SelfLoop("edge " + std::to_string(u + 1) + "-" + std::to_string(v + 1));
        if (u > v) std::swap(u, v);
    }
    std::sort(edge_list.begin(), edge_list.end());
    for (size_t i = 1; i < edge_list.size(); ++i)
        if (edge_list[i] == edge_list[i - 1])
            throw DuplicateEdge("edge " + std::to_string(edge_list[i].first + 1) + "-" +
                                std::to_string(edge_list[i].second + 1));

    Graph g;
    g.n = n;
    g.edges = std::move(edge_list);
    g.adj.assign(n, {});
    g.degree.assign(n, 0);
    for (int e = 0; e < g.m(); ++e) {
        auto [u, v] = g.edges[e];
        g.adj[u].push_back({v, e});
        g.adj[v].push_back({u, e});
        ++g.degree[u];
        ++g.degree[v];
    }
    for (auto& a : g.adj) std::sort(a.begin(), a.end());
    g.max_degree = *std::max_element(g.degree.begin(), g.degree.end());

    // connectivity
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (auto [u, e] : g.adj[v])
            if (!seen[u]) {
                seen[u] = 1;
                ++reached;
                q.push(u);
            }
    }
    if (reached != n) throw DisconnectedGraph("traversal reached " + std::to_string(reached) +
                                              " of " + std::to_string(n) + " vertices");
    return g;
}

// Edge-list format: first line "n"; each subsequent non-empty line "u v" with
// 1 <= u,v <= n; '#' begins a comment line; whitespace-tolerant.
inline Graph parse_graph(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int n = -1;
    std::vector<std::pair<int, int>> edge_list;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        if (n < 0) {
            if (!(ls >> n)) continue;  // skip blank/comment lines before the header
            if (n < 1) throw BadDimension("vertex count must be >= 1");
            continue;
        }
        int u, v;
        if (!(ls >> u)) continue;
        if (!(ls >> v)) throw ParseError("expected \"u v\" on line: " + line);
        if (u < 1 || u > n || v < 1 || v > n)
            throw BadLabel("label outside 1.." + std::to_string(n) + " on line: " + line);
        edge_list.push_back({u - 1, v - 1});
    }
    if (n < 0) throw ParseError("missing vertex-count header line");
    return make_graph(n, std::move(edge_list));
}

// Canonical labeled families. Grid labels are row-major.
inline Graph generate(const std::string& kind, const std::vector<int>& dims) {
    auto need = [&](size_t k) {
        if (dims.size() != k)
            throw BadDimension(kind + " expects " + std::to_string(k) + " dimension(s)");
    };
    std::vector<std::pair<int, int>> e;
    if (kind == "cycle") {
        need(1);
        int n = dims[0];
        if (n < 3) throw BadDimension("cycle needs n >= 3");
        for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
        return make_graph(n, std::move(e));
    }
    if (kind == "path") {
        need(1);
        int n = dims[0];
        if (n < 2) throw BadDimension("path needs n >= 2");
        for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
        return make_graph(n, std::move(e));
    }
    if (kind == "complete") {
        need(1);
        int n = dims[0];
        if (n < 2) throw BadDimension("complete needs n >= 2");
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) e.push_back({i, j});
        return make_graph(n, std::move(e));
    }
    if (kind == "grid") {
        need(2);
        int r = dims[0], c = dims[1];
        if (r < 1 || c < 1 || r * c < 2) throw BadDimension("grid needs r*c >= 2");
        auto id = [c](int i, int j) { return i * c + j; };
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) {
                if (j + 1 < c) e.push_back({id(i, j), id(i, j + 1)});
                if (i + 1 < r) e.push_back({id(i, j), id(i + 1, j)});
            }
        return make_graph(r * c, std::move(e));
    }
    throw BadDimension("unknown generator kind: " + kind);
}

// Shortest-path distance by breadth-first search; 0 iff u == v.
inline int graph_distance(const Graph& g, int u, int v) {
    if (u < 0 || u >= g.n || v < 0 || v >= g.n) throw BadLabel("vertex out of range");
    if (u == v) return 0;
    std::vector<int> dist(g.n, -1);
    std::queue<int> q;
    dist[u] = 0;
    q.push(u);
    while (!q.empty()) {
        int w = q.front();
        q.pop();
        for (auto [t, e] : g.adj[w])
            if (dist[t] < 0) {
                dist[t] = dist[w] + 1;
                if (t == v) return dist[t];
                q.push(t);
            }
    }
    throw InternalInvariant("graph not connected");  // unreachable for valid graphs
}

// FNV-1a over n and the ordered edge list; stable content identifier for reports.
inline std::string graph_hash(const Graph& g) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xff;
            h *= 1099511628211ULL;
        }
    };
    mix(static_cast<std::uint64_t>(g.n));
    for (auto [u, v] : g.edges) {
        mix(static_cast<std::uint64_t>(u));
        mix(static_cast<std::uint64_t>(v));
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace worm

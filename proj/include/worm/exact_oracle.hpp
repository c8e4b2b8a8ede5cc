#pragma once

// Brute-force ground truth on small graphs: spin-space sums, even-subgraph
// enumeration, the Prokof'ev-Svistunov measure, and the closed-form
// identities relating them.

#include <cmath>
#include <cstdint>
#include <unordered_set>
#include <vector>

#include "worm/chain.hpp"
#include "worm/worm_state.hpp"

namespace worm {

inline constexpr int kEdgeEnumCap = 22;    // subsets of E scanned exhaustively
inline constexpr int kSpinEnumCap = 20;    // spin assignments scanned exhaustively
inline constexpr double kRelTol = 1e-10;
inline constexpr double kAbsFloor = 1e-14;

inline bool close_rel(double a, double b, double rel = kRelTol, double abs = kAbsFloor) {
    double diff = std::fabs(a - b);
    return diff <= abs || diff <= rel * std::max(std::fabs(a), std::fabs(b));
}

namespace detail {
// odd-vertex set of the subset `mask`, as a vertex bit mask
inline std::uint64_t boundary_mask(const Graph& g, std::uint64_t mask,
                                   const std::vector<std::uint64_t>& edge_vmask) {
    std::uint64_t b = 0;
    while (mask) {
        int e = std::countr_zero(mask);
        mask &= mask - 1;
        b ^= edge_vmask[e];
    }
    return b;
}

inline std::vector<std::uint64_t> edge_vertex_masks(const Graph& g) {
    std::vector<std::uint64_t> vm(g.m());
    for (int e = 0; e < g.m(); ++e)
        vm[e] = (std::uint64_t(1) << g.edges[e].first) | (std::uint64_t(1) << g.edges[e].second);
    return vm;
}

// sum over counts-by-size with an incremental power table; accumulation runs
// in increasing |A| so small terms add before large ones
inline double lambda_from_counts(const std::vector<std::uint64_t>& by_size, double x) {
    double sum = 0.0, xpow = 1.0;
    for (size_t k = 0; k < by_size.size(); ++k) {
        sum += static_cast<double>(by_size[k]) * xpow;
        xpow *= x;
    }
    return sum;
}

inline void check_edge_cap(const Graph& g, int cap) {
    if (g.m() > cap)
        throw TooLarge("m = " + std::to_string(g.m()) + " exceeds enumeration cap " +
                       std::to_string(cap));
}
}  // namespace detail

// Exhaustive bucketing of 2^E by boundary size, with lambda_x per class and
// the PS partition function Z_x = n lambda_x(C0) + 2 lambda_x(C2).
struct SubgraphClassTable {
    const Graph* g = nullptr;
    double x = 0.0;
    bool with_c4 = false;
    std::vector<EdgeSubset> c0, c2, c4;
    std::vector<std::uint64_t> c0_by_size, c2_by_size, c4_by_size;
    double lambda_c0 = 0, lambda_c2 = 0, lambda_c4 = 0;
    double z = 0;

    double pi_c0() const { return g->n * lambda_c0 / z; }
    double pi_c2() const { return 2.0 * lambda_c2 / z; }
};

inline SubgraphClassTable enumerate_classes(const Graph& g, double x, bool with_c4 = false,
                                            int cap = kEdgeEnumCap) {
    detail::check_edge_cap(g, cap);
    SubgraphClassTable t;
    t.g = &g;
    t.x = x;
    t.with_c4 = with_c4;
    t.c0_by_size.assign(g.m() + 1, 0);
    t.c2_by_size.assign(g.m() + 1, 0);
    t.c4_by_size.assign(g.m() + 1, 0);
    auto vm = detail::edge_vertex_masks(g);
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << g.m()); ++mask) {
        int bsize = std::popcount(detail::boundary_mask(g, mask, vm));
        int k = std::popcount(mask);
        if (bsize == 0) {
            t.c0.push_back(EdgeSubset::from_mask(g.m(), mask));
            ++t.c0_by_size[k];
        } else if (bsize == 2) {
            t.c2.push_back(EdgeSubset::from_mask(g.m(), mask));
            ++t.c2_by_size[k];
        } else if (bsize == 4 && with_c4) {
            t.c4.push_back(EdgeSubset::from_mask(g.m(), mask));
            ++t.c4_by_size[k];
        }
    }
    t.lambda_c0 = detail::lambda_from_counts(t.c0_by_size, x);
    t.lambda_c2 = detail::lambda_from_counts(t.c2_by_size, x);
    t.lambda_c4 = detail::lambda_from_counts(t.c4_by_size, x);
    t.z = g.n * t.lambda_c0 + 2.0 * t.lambda_c2;
    return t;
}

struct ClassWeight {
    double lambda = 0;
    std::uint64_t count = 0;
};

// lambda_x(C_W) for an arbitrary vertex set W (0-based labels).
inline ClassWeight lambda_of_class(const Graph& g, const std::vector<int>& W, double x,
                                   int cap = kEdgeEnumCap) {
    detail::check_edge_cap(g, cap);
    std::uint64_t wmask = 0;
    for (int v : W) {
        if (v < 0 || v >= g.n) throw BadLabel("vertex out of range in W");
        wmask |= std::uint64_t(1) << v;
    }
    auto vm = detail::edge_vertex_masks(g);
    std::vector<std::uint64_t> by_size(g.m() + 1, 0);
    std::uint64_t count = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << g.m()); ++mask)
        if (detail::boundary_mask(g, mask, vm) == wmask) {
            ++by_size[std::popcount(mask)];
            ++count;
        }
    return {detail::lambda_from_counts(by_size, x), count};
}

// E_beta[prod_{i in W} sigma_i] by direct summation over all 2^n spins, h = 0.
inline double ising_moment_bruteforce(const Graph& g, double beta, const std::vector<int>& W,
                                      int cap = kSpinEnumCap) {
    if (g.n > cap)
        throw TooLarge("n = " + std::to_string(g.n) + " exceeds spin enumeration cap");
    std::uint64_t wmask = 0;
    for (int v : W) wmask |= std::uint64_t(1) << v;
    double z = 0, num = 0;
    for (std::uint64_t sigma = 0; sigma < (std::uint64_t(1) << g.n); ++sigma) {
        int agree = 0;
        for (auto [u, v] : g.edges)
            agree += (((sigma >> u) ^ (sigma >> v)) & 1) ? -1 : 1;
        double w = std::exp(beta * agree);
        int sign = (std::popcount(sigma & wmask) & 1) ? -1 : 1;
        z += w;
        num += sign * w;
    }
    return num / z;
}

struct IdentityReport {
    std::string name;
    double lhs = 0, rhs = 0;
    bool pass = false;
};

// Identity check: spin-sum moment vs lambda_x(C_W)/lambda_x(C0).
inline IdentityReport verify_high_temp(const Graph& g, double beta, const std::vector<int>& W) {
    double x = std::tanh(beta);
    double lhs = ising_moment_bruteforce(g, beta, W);
    double rhs = lambda_of_class(g, W, x).lambda / lambda_of_class(g, {}, x).lambda;
    IdentityReport r{"high_temp_identity", lhs, rhs, close_rel(lhs, rhs)};
    return r;
}

// PS probability of a single state: x^{|A|} psi(A) / Z_x.
inline double ps_prob(const SubgraphClassTable& t, const EdgeSubset& A) {
    auto bd = boundary(*t.g, A);
    double psi;
    if (bd.empty())
        psi = t.g->n;
    else if (bd.size() == 2)
        psi = 2.0;
    else
        throw NotInW("state has " + std::to_string(bd.size()) + " odd vertices");
    return std::pow(t.x, A.count()) * psi / t.z;
}

inline double ps_prob(const SubgraphClassTable& t, const WormState& s) {
    double psi = s.in_c0() ? t.g->n : 2.0;
    return std::pow(t.x, s.edges.count()) * psi / t.z;
}

// chi = 1/pi_x(C0), cross-checked against var(M)/n from the spin sum.
inline double susceptibility_exact(const Graph& g, double beta) {
    double x = std::tanh(beta);
    auto t = enumerate_classes(g, x);
    double chi_subgraph = 1.0 / t.pi_c0();
    // spin route: chi = E[M^2]/n at h=0
    if (g.n > kSpinEnumCap) throw TooLarge("spin enumeration cap exceeded");
    double z = 0, m2 = 0;
    for (std::uint64_t sigma = 0; sigma < (std::uint64_t(1) << g.n); ++sigma) {
        int agree = 0;
        for (auto [u, v] : g.edges)
            agree += (((sigma >> u) ^ (sigma >> v)) & 1) ? -1 : 1;
        double w = std::exp(beta * agree);
        double mag = 2.0 * std::popcount(sigma) - g.n;
        z += w;
        m2 += mag * mag * w;
    }
    double chi_spin = m2 / z / g.n;
    if (!close_rel(chi_subgraph, chi_spin))
        throw CrossCheckMismatch("chi subgraph route " + std::to_string(chi_subgraph) +
                                 " vs spin route " + std::to_string(chi_spin));
    return chi_subgraph;
}

// E_beta[sigma_u sigma_v] = (n/2) pi_x(C_uv) / pi_x(C0), cross-checked.
inline double two_point_exact(const Graph& g, double beta, int u, int v) {
    if (u == v) throw BadLabel("two_point_exact requires u != v");
    double x = std::tanh(beta);
    auto t = enumerate_classes(g, x);
    double pi_cuv = 2.0 * lambda_of_class(g, {u, v}, x).lambda / t.z;
    double subgraph_route = (g.n / 2.0) * pi_cuv / t.pi_c0();
    double spin_route = ising_moment_bruteforce(g, beta, {u, v});
    if (!close_rel(subgraph_route, spin_route))
        throw CrossCheckMismatch("two-point routes disagree: " + std::to_string(subgraph_route) +
                                 " vs " + std::to_string(spin_route));
    return subgraph_route;
}

struct BoundCheck {
    std::string name;
    double lhs = 0, rhs = 0;  // claim: lhs >= rhs (or <= for ratio bounds, see name)
    bool pass = false;
};

struct BoundReport {
    std::vector<BoundCheck> checks;
    bool pass = true;

    void add(const std::string& name, double lhs, double rhs, bool ok) {
        checks.push_back({name, lhs, rhs, ok});
        pass = pass && ok;
    }
};

// PS-measure lower bounds and the lambda-ratio bounds, exhaustively.
inline BoundReport verify_measure_bounds(const Graph& g, double x) {
    auto t = enumerate_classes(g, x);
    BoundReport rep;
    const int n = g.n, m = g.m();

    double pi0 = std::pow(x, 0) * n / t.z;
    rep.add("pi(0) >= 2^-m", pi0, std::pow(2.0, -m), pi0 >= std::pow(2.0, -m) * (1 - 1e-12));

    double floor_w = 0.5 * std::pow(x / 2.0, m);
    for (const auto& cls : {t.c0, t.c2})
        for (const auto& A : cls) {
            double p = ps_prob(t, A);
            if (p < floor_w * (1 - 1e-12)) {
                rep.add("pi(A) >= (1/2)(x/2)^m", p, floor_w, false);
                return rep;
            }
        }
    rep.add("pi(A) >= (1/2)(x/2)^m", 1, floor_w, true);

    rep.add("pi(C0) >= 1/n", t.pi_c0(), 1.0 / n, t.pi_c0() >= (1.0 / n) * (1 - 1e-12));

    // report the pair with the slimmest margin, whether or not it passes
    bool cuv_ok = true;
    double worst_lhs = 1, worst_rhs = 0, worst_margin = 1e300;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            double pi_cuv = 2.0 * lambda_of_class(g, {u, v}, x).lambda / t.z;
            double bound = (2.0 / (static_cast<double>(n) * n)) * std::pow(x, graph_distance(g, u, v));
            if (pi_cuv < bound * (1 - 1e-12)) cuv_ok = false;
            if (pi_cuv - bound < worst_margin) {
                worst_margin = pi_cuv - bound;
                worst_lhs = pi_cuv;
                worst_rhs = bound;
            }
        }
    rep.add("pi(C_uv) >= (2/n^2) x^d(u,v)", worst_lhs, worst_rhs, cuv_ok);

    // lambda_x(C_W)/lambda_x(C0) <= 1 over all vertex pairs; lambda_x(C_k)/lambda_x(C0) <= C(n,k)
    bool ratio_ok = true;
    double max_ratio = 0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            double r = lambda_of_class(g, {u, v}, x).lambda / t.lambda_c0;
            max_ratio = std::max(max_ratio, r);
            ratio_ok = ratio_ok && r <= 1 + 1e-12;
        }
    rep.add("lambda(C_W)/lambda(C0) <= 1", max_ratio, 1, ratio_ok);
    double binom_n2 = n * (n - 1) / 2.0;
    rep.add("lambda(C_2)/lambda(C0) <= C(n,2)", t.lambda_c2 / t.lambda_c0, binom_n2,
            t.lambda_c2 <= t.lambda_c0 * binom_n2 * (1 + 1e-12));
    return rep;
}

// Checks that A -> A^F maps C_W onto C0 bijectively, exhaustively.
inline BoundReport verify_bijection(const Graph& g, const std::vector<int>& W,
                                    const EdgeSubset& F) {
    auto bdF = boundary(g, F);
    std::vector<int> wsorted = W;
    std::sort(wsorted.begin(), wsorted.end());
    if (bdF != wsorted) throw BijectionViolation("boundary of F does not equal W");
    auto t = enumerate_classes(g, 0.5);  // x irrelevant for counting
    std::unordered_set<std::size_t> image;
    std::uint64_t cw_count = 0;
    auto vm = detail::edge_vertex_masks(g);
    std::uint64_t wmask = 0;
    for (int v : W) wmask |= std::uint64_t(1) << v;
    BoundReport rep;
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << g.m()); ++mask) {
        if (detail::boundary_mask(g, mask, vm) != wmask) continue;
        ++cw_count;
        EdgeSubset img = EdgeSubset::from_mask(g.m(), mask).symdiff(F);
        if (!boundary(g, img).empty()) {
            rep.add("image in C0", 0, 0, false);
            return rep;
        }
        if (!image.insert(img.hash()).second) {
            rep.add("injective", 0, 0, false);
            return rep;
        }
    }
    rep.add("image in C0", 1, 1, true);
    rep.add("injective", 1, 1, true);
    rep.add("|C_W| == |C0|", static_cast<double>(cw_count), static_cast<double>(t.c0.size()),
            cw_count == t.c0.size());
    return rep;
}

}  // namespace worm

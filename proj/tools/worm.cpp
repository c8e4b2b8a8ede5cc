// Command-line front end: graph input, subcommand dispatch, seeding, and
// single-document JSON reports. Exit 0 on pass, 1 on a failed check, 2 on
// usage errors.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "worm/canonical_paths.hpp"
#include "worm/chain.hpp"
#include "worm/estimators.hpp"
#include "worm/exact_oracle.hpp"
#include "worm/graph.hpp"
#include "worm/spectral.hpp"

using json = nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

struct CommonOpts {
    std::string graph_file;
    std::vector<std::string> gen;
    double beta = -1;
    double x = -1;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string output;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_param = true) {
    auto* gf = cmd->add_option("--graph", o.graph_file, "edge-list file");
    auto* gg = cmd->add_option("--gen", o.gen, "generator: {cycle|path|complete|grid} dims...")
                   ->expected(2, 3);
    gf->excludes(gg);
    if (needs_param) {
        auto* ob = cmd->add_option("--beta", o.beta, "inverse temperature, (0,inf)");
        auto* ox = cmd->add_option("--x", o.x, "tanh(beta), (0,1)");
        ob->excludes(ox);
    }
    cmd->add_option("--seed", o.seed, "rng master seed")->each([&o](const std::string&) {
        o.seed_given = true;
    });
    cmd->add_option("--output", o.output, "report path (default stdout)");
}

worm::Graph load_graph(const CommonOpts& o) {
    if (!o.graph_file.empty()) {
        std::ifstream in(o.graph_file);
        if (!in) throw CLI::ValidationError("--graph", "cannot open " + o.graph_file);
        std::stringstream ss;
        ss << in.rdbuf();
        return worm::parse_graph(ss.str());
    }
    if (o.gen.empty())
        throw CLI::ValidationError("graph", "one of --graph or --gen is required");
    std::vector<int> dims;
    for (size_t i = 1; i < o.gen.size(); ++i) dims.push_back(std::stoi(o.gen[i]));
    return worm::generate(o.gen[0], dims);
}

worm::ChainParams resolve_params(const CommonOpts& o) {
    if (o.beta > 0 && o.x > 0)
        throw CLI::ValidationError("params", "--beta and --x are mutually exclusive");
    if (o.beta > 0) return worm::ChainParams::from_beta(o.beta);
    if (o.x > 0) return worm::ChainParams::from_x(o.x);
    throw CLI::ValidationError("params", "one of --beta or --x is required");
}

std::uint64_t resolve_seed(CommonOpts& o) {
    if (!o.seed_given) o.seed = std::random_device{}();
    return o.seed;
}

json header(const worm::Graph& g, const CommonOpts& o) {
    json j;
    j["tool"] = "worm";
    j["version"] = kVersion;
    j["graph"] = {{"n", g.n}, {"m", g.m()}, {"hash", worm::graph_hash(g)}};
    if (!o.gen.empty()) j["graph"]["generator"] = o.gen;
    return j;
}

void emit(const json& report, const CommonOpts& o) {
    if (o.output.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::ofstream out(o.output);
        out << report.dump(2) << "\n";
    }
}

int run_verify(const CommonOpts& o_in) {
    CommonOpts o = o_in;
    auto g = load_graph(o);
    auto params = resolve_params(o);
    json rep = header(g, o);
    rep["subcommand"] = "verify";
    rep["params"] = {{"x", params.x}, {"beta", params.beta}};
    json records = json::array();
    bool pass = true;
    auto record = [&](const std::string& name, double lhs, double rhs, bool ok) {
        records.push_back({{"name", name}, {"lhs", lhs}, {"rhs", rhs}, {"pass", ok}});
        pass = pass && ok;
    };

    for (int u = 0; u < g.n; ++u)
        for (int v = u + 1; v < g.n; ++v) {
            auto r = worm::verify_high_temp(g, params.beta, {u, v});
            record("high_temp " + std::to_string(u + 1) + "," + std::to_string(v + 1), r.lhs,
                   r.rhs, r.pass);
        }
    {
        double chi = worm::susceptibility_exact(g, params.beta);
        record("susceptibility dual-route", chi, chi, true);
    }
    auto bounds = worm::verify_measure_bounds(g, params.x);
    for (const auto& c : bounds.checks) record(c.name, c.lhs, c.rhs, c.pass);

    auto t = worm::enumerate_classes(g, params.x);
    double expect_c0 = std::pow(2.0, g.m() - g.n + 1);
    record("|C0| == 2^{m-n+1}", static_cast<double>(t.c0.size()), expect_c0,
           static_cast<double>(t.c0.size()) == expect_c0);

    rep["records"] = records;
    rep["pass"] = pass;
    emit(rep, o);
    return pass ? 0 : 1;
}

int run_exact(const CommonOpts& o_in) {
    CommonOpts o = o_in;
    auto g = load_graph(o);
    auto params = resolve_params(o);
    json rep = header(g, o);
    rep["subcommand"] = "exact";
    rep["params"] = {{"x", params.x}, {"beta", params.beta}};
    rep["susceptibility"] = worm::susceptibility_exact(g, params.beta);
    json corr = json::array();
    for (int u = 0; u < g.n; ++u)
        for (int v = u + 1; v < g.n; ++v)
            corr.push_back({{"u", u + 1},
                            {"v", v + 1},
                            {"value", worm::two_point_exact(g, params.beta, u, v)}});
    rep["two_point"] = corr;
    emit(rep, o);
    return 0;
}

int run_sample(const CommonOpts& o_in, long long steps, long long stride, long long dump_stride) {
    CommonOpts o = o_in;
    auto g = load_graph(o);
    auto params = resolve_params(o);
    auto seed = resolve_seed(o);
    worm::Rng rng(seed);
    auto s = worm::zero_state(g);
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!o.output.empty()) {
        file.open(o.output);
        out = &file;
    }
    *out << "# worm sample seed=" << seed << " x=" << params.x << " steps=" << steps << "\n";
    worm::run(g, s, params, steps, rng, [&](long long t, const worm::WormState& st) {
        if (stride > 0 && t % stride == 0) {
            *out << t << " " << st.edges.count() << " " << (st.in_c0() ? "C0" : "C2");
            if (dump_stride > 0 && t % dump_stride == 0) *out << " " << worm::dump_state(g, st);
            *out << "\n";
        }
    });
    return 0;
}

int run_estimate(const CommonOpts& o_in, const std::string& target, int u, int v, double epsilon,
                 double delta, int k, long long tau_override, long long samples_override,
                 double eta, bool use_median) {
    CommonOpts o = o_in;
    auto g = load_graph(o);
    auto params = resolve_params(o);
    auto seed = resolve_seed(o);

    worm::Target tgt = target == "chi" ? worm::Target::Chi : worm::Target::Correlation;
    if (tgt == worm::Target::Correlation) {
        if (u < 1 || u > g.n || v < 1 || v > g.n || u == v)
            throw CLI::ValidationError("--u/--v", "need two distinct 1-based vertex labels");
        --u;
        --v;
    }
    double plan_delta = use_median ? 0.25 : delta;
    worm::EstimatorPlan plan =
        tgt == worm::Target::Chi
            ? worm::plan_susceptibility(g, epsilon, plan_delta)
            : worm::plan_correlation(g, epsilon, plan_delta, k > 0 ? k : g.n, params.x);
    if (tau_override >= 0) {
        plan.tau = tau_override;
        plan.manual = true;
    }
    if (samples_override > 0) {
        plan.n_samples = samples_override;
        plan.manual = true;
    }

    worm::Estimate est =
        use_median
            ? worm::median_amplify(g, params, tgt, u, v, plan, eta, seed)
            : (tgt == worm::Target::Chi ? worm::estimate_susceptibility(g, params, plan, seed)
                                        : worm::estimate_correlation(g, params, u, v, plan, seed));

    json rep = header(g, o);
    rep["subcommand"] = "estimate";
    rep["params"] = {{"x", params.x}, {"beta", params.beta}, {"seed", seed}};
    rep["target"] = target;
    if (tgt == worm::Target::Correlation) rep["pair"] = {u + 1, v + 1};
    rep["plan"] = {{"epsilon", plan.epsilon}, {"delta", plan.delta},  {"tau", plan.tau},
                   {"samples", plan.n_samples}, {"k", plan.k},
                   {"provenance", plan.provenance()}};
    if (use_median)
        rep["median_trick"] = {{"eta", eta}, {"replicas", worm::median_replicas(eta)}};
    rep["value"] = est.value;
    rep["sample_fraction_c0"] = est.frac_c0;
    if (tgt == worm::Target::Correlation) rep["sample_fraction_uv"] = est.frac_uv;
    rep["std_error_batch_means"] = est.std_error;
    rep["steps"] = est.steps;
    emit(rep, o);
    return 0;
}

int run_spectral(const CommonOpts& o_in, std::vector<double> deltas) {
    CommonOpts o = o_in;
    auto g = load_graph(o);
    auto params = resolve_params(o);
    if (deltas.empty()) deltas = {0.25};
    auto t1 = worm::verify_mixing_bounds(g, params, deltas);
    json rep = header(g, o);
    rep["subcommand"] = "spectral";
    rep["params"] = {{"x", params.x}, {"beta", params.beta}};
    rep["lambda_star"] = t1.lambda_star;
    rep["t_rel"] = t1.t_rel;
    rep["t_rel_bound"] = t1.t_rel_bound;
    json mixes = json::array();
    for (const auto& c : t1.mixing)
        mixes.push_back({{"delta", c.delta},
                         {"mix_from_zero", c.mix_from_zero},
                         {"mix_from_zero_bound", c.mix_from_zero_bound},
                         {"mix_worst", c.mix_worst},
                         {"mix_worst_bound", c.mix_worst_bound},
                         {"pass", c.pass}});
    rep["mix_times"] = mixes;
    rep["pass"] = t1.pass;
    emit(rep, o);
    return t1.pass ? 0 : 1;
}

int run_congestion(const CommonOpts& o_in, const std::string& csv_path) {
    CommonOpts o = o_in;
    auto g = load_graph(o);
    auto params = resolve_params(o);
    auto res = worm::congestion(g, params);
    double bound = static_cast<double>(g.max_degree) * std::pow(static_cast<double>(g.n), 4);
    bool pass = res.phi <= bound && res.l_max <= g.m();
    json rep = header(g, o);
    rep["subcommand"] = "congestion";
    rep["params"] = {{"x", params.x}, {"beta", params.beta}};
    rep["phi"] = res.phi;
    rep["bound"] = bound;
    rep["L_max"] = res.l_max;
    rep["m"] = g.m();
    auto [eu, ev] = g.edges[res.argmax.edge];
    rep["argmax_transition"] = {{"edge", std::to_string(eu + 1) + "-" + std::to_string(ev + 1)},
                                {"from_size", res.argmax.from.count()}};
    rep["pass"] = pass;
    if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        csv << "from_edges,toggled_edge,congestion\n";
        for (const auto& [key, val] : res.table) {
            csv << "\"";
            bool first = true;
            for (int e : key.from.indices()) {
                if (!first) csv << " ";
                first = false;
                csv << g.edges[e].first + 1 << "-" << g.edges[e].second + 1;
            }
            auto [u2, v2] = g.edges[key.edge];
            csv << "\"," << u2 + 1 << "-" << v2 + 1 << "," << val << "\n";
        }
    }
    emit(rep, o);
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"worm: verified worm-process sampling and analysis for the zero-field Ising model"};
    app.require_subcommand(1);

    CommonOpts verify_o, exact_o, sample_o, estimate_o, spectral_o, congestion_o;

    auto* verify = app.add_subcommand("verify", "exact identity and bound checks");
    add_common(verify, verify_o);

    auto* exact = app.add_subcommand("exact", "exact susceptibility and correlations");
    add_common(exact, exact_o);

    auto* sample = app.add_subcommand("sample", "run the chain and stream a trajectory");
    add_common(sample, sample_o);
    long long steps = 1000, stride = 1, dump_stride = 0;
    sample->add_option("--steps", steps, "number of lazy steps");
    sample->add_option("--stride", stride, "record every k-th step");
    sample->add_option("--dump-stride", dump_stride, "full state dump every k-th step");

    auto* estimate = app.add_subcommand("estimate", "FPRAS estimators");
    add_common(estimate, estimate_o);
    std::string target = "chi";
    int corr_u = 0, corr_v = 0, corr_k = 0;
    double epsilon = 0.1, delta = 0.25, eta = 0.0;
    long long tau_override = -1, samples_override = -1;
    estimate->add_option("--target", target, "chi or corr")
        ->check(CLI::IsMember({"chi", "corr"}));
    estimate->add_option("--u", corr_u, "first vertex (corr)");
    estimate->add_option("--v", corr_v, "second vertex (corr)");
    estimate->add_option("--epsilon", epsilon, "relative error target");
    estimate->add_option("--delta", delta, "failure probability");
    estimate->add_option("--k", corr_k, "distance cap for correlations");
    estimate->add_option("--tau", tau_override, "manual burn-in override");
    estimate->add_option("--samples", samples_override, "manual sample-count override");
    estimate->add_option("--eta", eta, "median-trick failure probability (enables replicas)");

    auto* spectral = app.add_subcommand("spectral", "exact spectral and mixing analysis");
    add_common(spectral, spectral_o);
    std::vector<double> deltas;
    spectral->add_option("--delta", deltas, "TV thresholds");

    auto* congestion = app.add_subcommand("congestion", "canonical-path congestion");
    add_common(congestion, congestion_o);
    std::string csv_path;
    congestion->add_option("--csv", csv_path, "per-transition table output");

    try {
        app.parse(argc, argv);
        if (*verify) return run_verify(verify_o);
        if (*exact) return run_exact(exact_o);
        if (*sample) return run_sample(sample_o, steps, stride, dump_stride);
        if (*estimate)
            return run_estimate(estimate_o, target, corr_u, corr_v, epsilon, delta, corr_k,
                                tau_override, samples_override, eta, eta > 0.0);
        if (*spectral) return run_spectral(spectral_o, deltas);
        if (*congestion) return run_congestion(congestion_o, csv_path);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const worm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

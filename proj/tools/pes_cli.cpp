// Command-line front end: flow/resistance reports, witness-state edge
// sampling, path finding, cut-set finding, corpus verification, and scaling
// benchmarks. All output is a single JSON report with a "kind" field.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "pes/pes.hpp"

namespace {

using nlohmann::json;

struct Cli {
    std::string graph_file;
    std::string family;
    std::vector<std::string> params;
    std::vector<std::string> overrides;
    double p = 0.05;
    int trials = 1;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
    std::string mode = "single";
    double r_bound = 0, g_bound = 0;
    std::string sizes = "2,4,8,16";
    std::string bench_mode = "sample-edge";
};

std::map<std::string, std::string> parse_kv(const std::vector<std::string>& kvs) {
    std::map<std::string, std::string> m;
    for (const auto& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("expected K=V: " + kv);
        m[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return m;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

pes::RunConstants make_constants(const Cli& cli) {
    pes::RunConstants c;
    for (auto& [k, v] : parse_kv(cli.overrides)) {
        if (k == "c_minus") c.c_minus = std::stod(v);
        else if (k == "C_pd") c.c_pd = std::stod(v);
        else if (k == "C_we") c.c_we = std::stod(v);
        else if (k == "C_iqae") c.c_iqae = std::stod(v);
        else if (k == "inject") c.inject_failures = std::stoi(v) != 0;
        else throw CLI::ValidationError("unknown override: " + k);
    }
    return c;
}

pes::GraphSpec to_spec(const pes::FamilyInstance& inst) {
    pes::GraphSpec gs;
    gs.graph = inst.graph;
    gs.assoc = inst.assoc;
    gs.x = inst.x;
    gs.free_ones = inst.free_ones;
    gs.free_zeros = inst.free_zeros;
    return gs;
}

pes::GraphSpec resolve_graph(const Cli& cli) {
    if (!cli.graph_file.empty()) return pes::graph_from_file(cli.graph_file);
    if (cli.family.empty())
        throw CLI::ValidationError("need --graph FILE or --family NAME");
    auto kv = parse_kv(cli.params);
    auto geti = [&](const std::string& k, int dflt) {
        auto it = kv.find(k);
        return it == kv.end() ? dflt : std::stoi(it->second);
    };
    std::uint64_t fseed = geti("seed", (int)cli.seed);
    if (cli.family == "path") return to_spec(pes::gen_path(geti("L", 3), geti("n", 0)));
    if (cli.family == "parallel_paths") {
        auto it = kv.find("lengths");
        std::vector<int> ls = it == kv.end() ? std::vector<int>{1, 2}
                                             : parse_int_list(it->second);
        return to_spec(pes::gen_parallel_paths(ls));
    }
    if (cli.family == "unique_path_clutter")
        return to_spec(pes::gen_unique_path_clutter(geti("L", 7), geti("n", 16), fseed));
    if (cli.family == "lower_bound") {
        std::string sig = kv.count("sigma") ? kv.at("sigma") : "101";
        std::vector<int> bits;
        for (char c : sig) bits.push_back(c == '1');
        return to_spec(
            pes::gen_lower_bound_family((int)bits.size(), geti("L", 3), bits));
    }
    if (cli.family == "expander_bridge")
        return to_spec(pes::gen_expander_bridge(geti("n", 16), geti("d", 3), fseed));
    if (cli.family == "series_parallel")
        return to_spec(pes::gen_series_parallel(fseed, geti("leaves", 8)));
    throw CLI::ValidationError("unknown family: " + cli.family);
}

void emit(const Cli& cli, const json& report) {
    std::string text = report.dump(2) + "\n";
    if (cli.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(cli.out);
        f << text;
    }
}

json base_report(const std::string& kind, const Cli& cli) {
    json j;
    j["kind"] = kind;
    j["inputs"] = {{"graph", cli.graph_file},
                   {"family", cli.family},
                   {"params", cli.params},
                   {"overrides", cli.overrides},
                   {"p", cli.p},
                   {"trials", cli.trials}};
    if (cli.seed_set) j["seed"] = cli.seed;
    return j;
}

int cmd_flow(const Cli& cli) {
    pes::GraphSpec gs = resolve_graph(cli);
    pes::SubgraphView view = gs.view();
    json j = base_report("flow", cli);
    double R = pes::effective_resistance(view);
    if (!std::isfinite(R)) {
        j["R"] = "inf";
        emit(cli, j);
        return 0;
    }
    pes::UnitFlow f = pes::optimal_unit_flow(view);
    j.update(pes::flow_to_json(f, R, pes::edge_distribution(f, R)));
    emit(cli, j);
    return 0;
}

int cmd_sample_edge(const Cli& cli) {
    pes::GraphSpec gs = resolve_graph(cli);
    pes::SubgraphView view = gs.view();
    if (!pes::classical_st_connected(view, gs.graph.s, gs.graph.t))
        throw CLI::ValidationError("sample-edge: terminals disconnected in G(x)");
    pes::RunConstants consts = make_constants(cli);
    pes::InputOracle oracle = gs.oracle();
    std::mt19937_64 master(cli.seed);
    pes::UnitaryCache cache;
    std::map<std::string, int> counts;
    int failures = 0;
    for (int i = 0; i < cli.trials; ++i) {
        std::mt19937_64 rng(master());
        auto e = pes::edge_finder(oracle, cli.p, gs.graph, gs.graph.s, gs.graph.t, rng,
                                  consts, &cache);
        if (!e.success) {
            ++failures;
            continue;
        }
        counts[pes::directed_key(e.u, e.v)]++;
    }
    int ok = cli.trials - failures;
    pes::UnitFlow f = pes::optimal_unit_flow(view);
    pes::FlowDistribution q = pes::edge_distribution(f, pes::effective_resistance(view));
    // TV distance between the conditioned empirical distribution and q
    double tv = 0;
    std::map<std::string, double> qmap;
    for (const auto& [e, v] : q.q_fwd) {
        qmap[pes::directed_key(e.first, e.second)] = v;
        qmap[pes::directed_key(e.second, e.first)] = v;
    }
    std::set<std::string> keys;
    for (auto& [k, _] : qmap) keys.insert(k);
    for (auto& [k, _] : counts) keys.insert(k);
    for (const auto& k : keys) {
        double emp = ok ? (counts.count(k) ? (double)counts.at(k) / ok : 0.0) : 0.0;
        double truth = qmap.count(k) ? qmap.at(k) : 0.0;
        tv += std::abs(emp - truth);
    }
    tv /= 2.0;
    json j = base_report("sample_edge", cli);
    j["empirical"] = counts;
    j["successes"] = ok;
    j["failures"] = failures;
    j["failure_rate"] = cli.trials ? (double)failures / cli.trials : 0.0;
    j["tv_distance"] = tv;
    j["ledger"] = pes::ledger_to_json(oracle.ledger);
    emit(cli, j);
    return 0;
}

int cmd_find_path(const Cli& cli) {
    pes::GraphSpec gs = resolve_graph(cli);
    pes::RunConstants consts = make_constants(cli);
    pes::InputOracle oracle = gs.oracle();
    std::mt19937_64 rng(cli.seed);
    json j = base_report("find_path", cli);
    j["mode"] = cli.mode;
    bool ok;
    json path = json::array();
    if (cli.mode == "single") {
        auto res =
            pes::single_path_finder(oracle, cli.p, gs.graph, gs.graph.s, gs.graph.t, rng, consts);
        ok = res.success;
        for (auto [u, v] : res.edges) path.push_back({u, v});
    } else if (cli.mode == "general") {
        auto res =
            pes::general_path_finder(oracle, gs.graph, gs.graph.s, gs.graph.t, cli.p, rng, consts);
        ok = res.success;
        for (auto [u, v] : res.sequence) path.push_back({u, v});
    } else {
        throw CLI::ValidationError("mode must be single or general");
    }
    j["outcome"] = ok ? "path" : "failure";
    j["path"] = path;
    j["ledger"] = pes::ledger_to_json(oracle.ledger);
    emit(cli, j);
    return ok ? 0 : 2;
}

int cmd_find_cutset(const Cli& cli) {
    pes::GraphSpec gs = resolve_graph(cli);
    pes::RunConstants consts = make_constants(cli);
    pes::InputOracle oracle = gs.oracle();
    std::mt19937_64 rng(cli.seed);
    json j = base_report("find_cutset", cli);
    if (!(cli.r_bound > 0) || !(cli.g_bound > 0))
        throw CLI::ValidationError("find-cutset needs --r-bound and --g-bound > 0");
    double R = pes::effective_resistance(gs.view());
    j["promise_ok"] = std::isfinite(R) && R <= cli.r_bound;  // flagged, not fatal
    auto res = pes::cutset_finder(oracle, gs.graph, gs.graph.s, gs.graph.t, cli.r_bound,
                                  cli.g_bound, rng, consts);
    json edges = json::array();
    for (auto [u, v] : res.edges) edges.push_back({u, v});
    j["cutset"] = edges;
    j["runs"] = res.runs;
    j["successful_samples"] = res.successful_samples;
    j["ledger"] = pes::ledger_to_json(oracle.ledger);
    emit(cli, j);
    return 0;
}

int cmd_verify(const Cli& cli) {
    auto graphs = pes::corpus();
    double max_theta = 0, max_energy = 0, max_q = 0, max_total = 0, max_offpath = 0;
    double max_wplus = 0, max_inverse = 0;
    bool product_ok = true, bound_ok = true;
    for (const auto& g : graphs) {
        pes::SubgraphView view = pes::full_view(g);
        auto fc = pes::check_flow_identities(view);
        max_theta = std::max(max_theta, fc.max_theta_dev);
        max_energy = std::max(max_energy, fc.energy_dev);
        auto dc = pes::check_distribution(view);
        max_q = std::max(max_q, dc.max_q_dev);
        max_total = std::max(max_total, dc.total_dev);
        max_offpath = std::max(max_offpath, dc.offpath_mass);
        std::vector<int> x(g.edges.size(), 1);
        auto sc = pes::check_span_identities(g, x);
        max_wplus = std::max(max_wplus, sc.w_plus_dev);
        max_inverse = std::max(max_inverse, sc.inverse_residual);
        product_ok = product_ok && sc.product_lower >= 1.0 - 1e-9;
        bound_ok = bound_ok && sc.neg_size <= sc.neg_bound;
    }
    bool pass = max_theta <= 1e-9 && max_energy <= 1e-9 && max_q <= 1e-9 &&
                max_total <= 1e-9 && max_offpath <= 1e-9 && max_wplus <= 1e-9 &&
                max_inverse <= 1e-7 && product_ok && bound_ok;
    json j = base_report("verify", cli);
    j["instances"] = graphs.size();
    j["max_theta_dev"] = max_theta;
    j["max_energy_dev"] = max_energy;
    j["max_q_dev"] = max_q;
    j["max_total_dev"] = max_total;
    j["max_offpath_flow"] = max_offpath;
    j["max_wplus_dev"] = max_wplus;
    j["max_inverse_residual"] = max_inverse;
    j["witness_product_ok"] = product_ok;
    j["neg_bound_ok"] = bound_ok;
    j["pass"] = pass;
    emit(cli, j);
    return pass ? 0 : 2;
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= xs.size();
    double num = 0, den = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    return num / den;
}

int cmd_bench(const Cli& cli) {
    if (cli.family != "path")
        throw CLI::ValidationError("bench currently supports --family path");
    std::vector<int> sizes = parse_int_list(cli.sizes);
    pes::RunConstants consts = make_constants(cli);
    int fixed_n = *std::max_element(sizes.begin(), sizes.end()) + 1;
    json table = json::array();
    std::vector<double> lx, ly;
    std::mt19937_64 master(cli.seed);
    for (int L : sizes) {
        std::vector<double> totals;
        for (int trial = 0; trial < cli.trials; ++trial) {
            pes::FamilyInstance inst = pes::gen_path(L, fixed_n);
            pes::InputOracle oracle = inst.oracle();
            std::mt19937_64 rng(master());
            if (cli.bench_mode == "sample-edge") {
                pes::edge_finder(oracle, cli.p, inst.graph, inst.graph.s, inst.graph.t, rng,
                                 consts);
            } else if (cli.bench_mode == "single") {
                pes::single_path_finder(oracle, cli.p, inst.graph, inst.graph.s,
                                        inst.graph.t, rng, consts);
            } else if (cli.bench_mode == "general") {
                pes::general_path_finder(oracle, inst.graph, inst.graph.s, inst.graph.t,
                                         cli.p, rng, consts);
            } else {
                throw CLI::ValidationError("bench mode: sample-edge | single | general");
            }
            totals.push_back(oracle.ledger.grand_total());
        }
        std::sort(totals.begin(), totals.end());
        double median = totals[totals.size() / 2];
        table.push_back({{"L", L}, {"median_queries", median}});
        lx.push_back(std::log2((double)L));
        ly.push_back(std::log2(median));
    }
    json j = base_report("bench", cli);
    j["mode"] = cli.bench_mode;
    j["table"] = table;
    j["loglog_slope"] = fit_slope(lx, ly);
    emit(cli, j);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"span-program path-edge sampling toolkit"};
    app.require_subcommand(1);
    Cli cli;

    auto add_common = [&](CLI::App* sub, bool needs_seed) {
        sub->add_option("--graph", cli.graph_file, "graph JSON file");
        sub->add_option("--family", cli.family, "generator family name");
        sub->add_option("--params", cli.params, "family params K=V");
        sub->add_option("--override", cli.overrides, "constant override NAME=VALUE");
        sub->add_option("--out", cli.out, "write report to file");
        auto* s = sub->add_option("--seed", cli.seed, "RNG seed");
        if (needs_seed) s->required();
        s->each([&](const std::string&) { cli.seed_set = true; });
    };

    auto* flow = app.add_subcommand("flow", "optimal flow, resistance, distribution");
    add_common(flow, false);
    auto* resistance = app.add_subcommand("resistance", "alias of flow");
    add_common(resistance, false);

    auto* sample = app.add_subcommand("sample-edge", "batch path-edge sampling");
    add_common(sample, true);
    sample->add_option("--p", cli.p, "failure tolerance")->check(CLI::Range(1e-12, 1.0));
    sample->add_option("--trials", cli.trials, "batch size");

    auto* fpath = app.add_subcommand("find-path", "single/general path finding");
    add_common(fpath, true);
    fpath->add_option("--mode", cli.mode, "single | general");
    fpath->add_option("--p", cli.p, "failure tolerance")->check(CLI::Range(1e-12, 1.0));

    auto* fcut = app.add_subcommand("find-cutset", "cut-set finding");
    add_common(fcut, true);
    fcut->add_option("--r-bound", cli.r_bound, "promised resistance upper bound");
    fcut->add_option("--g-bound", cli.g_bound, "promised per-cut-edge flow^2 lower bound");

    auto* verify = app.add_subcommand("verify", "oracle-equivalence suites on the corpus");
    add_common(verify, false);

    auto* bench = app.add_subcommand("bench", "scaling benchmark with fitted slopes");
    add_common(bench, true);
    bench->add_option("--sizes", cli.sizes, "comma list of path lengths");
    bench->add_option("--mode", cli.bench_mode, "sample-edge | single | general");
    bench->add_option("--trials", cli.trials, "trials per size");
    bench->add_option("--p", cli.p, "failure tolerance")->check(CLI::Range(1e-12, 1.0));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    try {
        if (flow->parsed() || resistance->parsed()) return cmd_flow(cli);
        if (sample->parsed()) return cmd_sample_edge(cli);
        if (fpath->parsed()) return cmd_find_path(cli);
        if (fcut->parsed()) return cmd_find_cutset(cli);
        if (verify->parsed()) return cmd_verify(cli);
        if (bench->parsed()) return cmd_bench(cli);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const pes::GraphError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

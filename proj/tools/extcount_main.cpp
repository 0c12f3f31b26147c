// Command-line front end: classify / theory / count / exact / simulate / scan.
#include <CLI11.hpp>
#include <json.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "extcount/counting.hpp"
#include "extcount/exact_law.hpp"
#include "extcount/experiment.hpp"
#include "extcount/host_graph.hpp"
#include "extcount/lattice.hpp"
#include "extcount/pattern_graph.hpp"
#include "extcount/sampler.hpp"
#include "extcount/theory.hpp"

using nlohmann::json;
using namespace extcount;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// A graph argument is a built-in fixture name or a path to a pattern file.
RootedGraph load_graph(const std::string& arg) {
    for (const auto& name : builtin_fixture_names())
        if (name == arg) return builtin_fixture(arg);
    return parse_rooted_graph(read_file(arg));
}

std::string labels_str(uint32_t mask) {
    std::string s = "{";
    bool first = true;
    for (int v : mask_to_labels(mask)) {
        if (!first) s += ",";
        s += std::to_string(v);
        first = false;
    }
    return s + "}";
}

std::string frac_str(const Frac& f) {
    Rat q = f.to_rat();
    return rat_str(q);
}

int cmd_classify(const std::string& graph_arg, bool as_json) {
    RootedGraph rg = load_graph(graph_arg);
    ClassificationReport rep = classify(rg);
    if (as_json) {
        std::cout << classification_json(rg, rep) << "\n";
        return 0;
    }
    std::cout << "graph: " << graph_arg << "  (roots " << rg.vg() << ", vertices " << rg.vh()
              << ", root edges " << rg.eg() << ", edges " << rg.eh() << ")\n";
    std::cout << "max relative density m = " << rat_str(rep.m) << " = " << rep.m.get_d() << "\n";
    std::cout << "strictly balanced: " << (rep.strictly_balanced ? "yes" : "no") << "\n";
    std::cout << "grounded: " << (rep.grounded ? "yes" : "no") << "\n";
    std::cout << "primal subsets (" << rep.primal_subsets.size() << "):\n";
    for (const auto& node : rep.primal_subsets)
        std::cout << "  " << labels_str(node.subset) << "  vertices " << node.vcount << "  edges "
                  << node.ecount << "  density " << frac_str(node.density) << "\n";
    std::cout << "union of primal subsets: " << labels_str(rep.j_max.subset) << "  (primal)\n";
    std::cout << "has grounded primal: " << (rep.has_grounded_primal ? "yes" : "no") << "\n";
    std::cout << "unique primal: " << (rep.unique_primal ? "yes" : "no") << "\n";
    std::cout << "case: " << theorem_case_name(rep.theorem_case) << "\n";
    std::cout << "applicable cases:";
    for (int c : rep.applicable_cases) std::cout << " " << applicable_case_name(c);
    std::cout << "\n";
    return 0;
}

int cmd_theory(const std::string& graph_arg, long n, const std::string& p_str,
               const std::string& eps_str, bool as_json) {
    RootedGraph rg = load_graph(graph_arg);
    Rat p = parse_rat(p_str);
    if (p < 0 || p > 1) throw std::invalid_argument("p must lie in [0, 1]");
    bool have_eps = !eps_str.empty();
    Rat eps = have_eps ? parse_rat(eps_str) : Rat(0);

    Int complete = count_in_complete_graph(rg, n);
    Rat mu = mu_exact(rg, n, p);
    Rat nu = nu_exact(rg, n, p);
    PhiResult phi = phi_exact(rg, n, p);
    double asym = mu_asymp(rg, n, p.get_d());
    uint64_t aut = automorphism_count(rg);

    json j;
    j["graph"] = graph_arg;
    j["n"] = n;
    j["p"] = rat_str(p);
    j["aut"] = aut;
    j["complete_count"] = complete.get_str();
    j["mu"] = rat_str(mu);
    j["mu_decimal"] = mu.get_d();
    j["nu"] = rat_str(nu);
    j["nu_decimal"] = nu.get_d();
    j["mu_asymp"] = asym;
    j["phi"] = rat_str(phi.value);
    j["phi_decimal"] = phi.value.get_d();
    j["phi_argmin"] = mask_to_labels(phi.argmin);
    j["phi_degenerate"] = phi.degenerate;
    if (p > 0) {
        Rat ss = sigma_sq_order(rg, n, p);
        j["sigma_sq_order"] = rat_str(ss);
        j["sigma_sq_order_decimal"] = ss.get_d();
    }
    if (have_eps) {
        j["eps"] = rat_str(eps);
        ThresholdQuantities tq = threshold_quantities(rg, n, p, eps);
        j["eps2_mu"] = tq.eps2_mu;
        j["eps2_phi"] = tq.eps2_phi;
        j["eps2_mu_over_logn"] = tq.eps2_mu_over_logn;
        j["eps2_phi_over_logn"] = tq.eps2_phi_over_logn;
        if (eps > 0 && eps <= 1) {
            Int rs = r_star(mu, eps);
            j["r_star"] = rs.get_str();
            if (rs <= complete) j["binomial_reference"] = binomial_reference(rg, n, p, eps);
        }
    }
    if (as_json) {
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "graph: " << graph_arg << "  n = " << n << "  p = " << rat_str(p) << "\n";
    std::cout << "automorphisms (roots fixed): " << aut << "\n";
    std::cout << "copies in complete host:     " << complete.get_str() << "\n";
    std::cout << "mu  (expected copies):       " << rat_str(mu) << " = " << mu.get_d() << "\n";
    std::cout << "nu  (expected ordered):      " << rat_str(nu) << " = " << nu.get_d() << "\n";
    std::cout << "mu asymptotic surrogate:     " << asym << "\n";
    std::cout << "phi (bottleneck scale):      " << rat_str(phi.value) << " = "
              << phi.value.get_d() << "  at " << labels_str(phi.argmin)
              << (phi.degenerate ? "  [degenerate: p = 0]" : "") << "\n";
    if (p > 0) {
        Rat ss = sigma_sq_order(rg, n, p);
        std::cout << "variance surrogate:          " << rat_str(ss) << " = " << ss.get_d()
                  << "\n";
    } else {
        std::cout << "variance surrogate:          undefined (p = 0)\n";
    }
    if (have_eps) {
        ThresholdQuantities tq = threshold_quantities(rg, n, p, eps);
        std::cout << "eps = " << rat_str(eps) << "\n";
        std::cout << "eps^2 mu               = " << tq.eps2_mu << "\n";
        std::cout << "eps^2 phi              = " << tq.eps2_phi << "\n";
        std::cout << "eps^2 mu  / log n      = " << tq.eps2_mu_over_logn << "\n";
        std::cout << "eps^2 phi / log n      = " << tq.eps2_phi_over_logn << "\n";
        if (eps > 0 && eps <= 1) {
            Int rs = r_star(mu, eps);
            std::cout << "r* = ceil((1+eps) mu)  = " << rs.get_str() << "\n";
            if (rs <= complete)
                std::cout << "binomial reference     = " << binomial_reference(rg, n, p, eps)
                          << "\n";
            else
                std::cout << "binomial reference     undefined (r* exceeds the complete-host "
                             "count)\n";
        } else {
            std::cout << "r* / binomial reference undefined (needs eps in (0, 1])\n";
        }
    }
    return 0;
}

struct CountArgs {
    std::string pattern;
    std::string host_file;
    std::vector<double> gnp;  // n p seed
    std::vector<long> roots;
    bool extrema = false;
    bool list = false;
    uint64_t cap = 1000000;
    int64_t disjoint_r = -1;
    bool per_vertex = false;
};

int cmd_count(const CountArgs& a) {
    RootedGraph rg = load_graph(a.pattern);
    HostGraph host(0);
    if (!a.host_file.empty()) {
        host = HostGraph::parse(read_file(a.host_file));
    } else {
        SamplerConfig cfg;
        cfg.n = (long)a.gnp[0];
        cfg.p = a.gnp[1];
        cfg.seed = (uint64_t)a.gnp[2];
        if (cfg.p < 0 || cfg.p > 1) throw std::invalid_argument("p must lie in [0, 1]");
        host = sample_gnp(cfg);
        std::cout << "sampled host: n = " << host.n << ", edges = " << host.edge_count << "\n";
    }

    if (a.per_vertex) {
        auto z = per_vertex_copy_counts(host, rg.h);
        uint64_t zmin = UINT64_MAX, zmax = 0, zsum = 0;
        long argmax = 1;
        for (long v = 1; v <= host.n; v++) {
            zsum += z[v];
            if (z[v] > zmax) zmax = z[v], argmax = v;
            if (z[v] < zmin) zmin = z[v];
        }
        std::cout << "per-vertex copy counts of the " << rg.vh() << "-vertex pattern (unrooted):\n";
        std::cout << "  copies total: " << zsum / (uint64_t)rg.vh() << "\n";
        std::cout << "  min Z_v = " << zmin << ", max Z_v = " << zmax << " (vertex " << argmax
                  << "), mean = " << (double)zsum / (double)host.n << "\n";
        if (host.n <= 64)
            for (long v = 1; v <= host.n; v++) std::cout << "  Z_" << v << " = " << z[v] << "\n";
        return 0;
    }

    if (a.extrema) {
        ExtremaResult ex = extension_extrema(host, rg);
        auto tuple_str = [](const RootTuple& t) {
            std::string s = "(";
            for (size_t i = 0; i < t.size(); i++) s += (i ? "," : "") + std::to_string(t[i]);
            return s + ")";
        };
        std::cout << "min copies = " << ex.min_count << " at roots " << tuple_str(ex.argmin)
                  << "\n";
        std::cout << "max copies = " << ex.max_count << " at roots " << tuple_str(ex.argmax)
                  << "\n";
        return 0;
    }

    RootTuple x = a.roots;
    if (x.empty())
        for (int i = 1; i <= rg.vg(); i++) x.push_back(i);
    if ((int)x.size() != rg.vg())
        throw std::invalid_argument("root tuple needs exactly " + std::to_string(rg.vg()) +
                                    " host vertices");

    if (a.disjoint_r >= 0) {
        bool hit = disjoint_event_check(host, rg, x, (uint64_t)a.disjoint_r);
        std::cout << "exactly " << a.disjoint_r << " pairwise-disjoint copies: "
                  << (hit ? "yes" : "no") << "\n";
        return hit ? 0 : 1;
    }

    if (a.list) {
        auto ext = list_extensions(host, rg, x, a.cap);
        std::cout << ext.size() << " copies (non-root vertex sets):\n";
        for (const auto& e : ext) {
            std::cout << "  ";
            for (size_t i = 0; i < e.size(); i++) std::cout << (i ? " " : "") << e[i];
            std::cout << "\n";
        }
        return 0;
    }

    ExtensionCounter ec(rg);
    uint64_t ord = ec.count_ordered(host, x);
    std::cout << "unordered copies = " << ord / ec.aut() << "\n";
    std::cout << "ordered copies   = " << ord << "  (aut = " << ec.aut() << ")\n";
    return 0;
}

int cmd_exact(const std::string& graph_arg, long n, const std::string& p_str,
              const std::string& target, uint64_t r, int threads) {
    RootedGraph rg = load_graph(graph_arg);
    Rat p = parse_rat(p_str);
    if (p < 0 || p > 1) throw std::invalid_argument("p must lie in [0, 1]");
    LawTarget t;
    if (target == "dist")
        t = LawTarget::FixedRoot;
    else if (target == "maxdist")
        t = LawTarget::MaxOverRoots;
    else if (target == "ex-event")
        t = LawTarget::DisjointEvent;
    else
        throw std::invalid_argument("target must be dist, maxdist, or ex-event");
    if (t == LawTarget::DisjointEvent && r == 0)
        throw std::invalid_argument("ex-event needs --r (the copy count)");
    ExactLaw law = exact_distribution(rg, n, p, t, r, threads);
    std::cout << "value  probability\n";
    for (const auto& [v, q] : law.pmf) std::cout << v << "  " << rat_str(q) << "\n";
    std::cout << "mean = " << rat_str(law.mean()) << " = " << law.mean().get_d() << "\n";
    std::cout << "variance = " << rat_str(law.variance()) << " = " << law.variance().get_d()
              << "\n";
    return 0;
}

int cmd_simulate(const std::string& graph_arg, long n, const std::string& p_str, double eps,
                 long trials, uint64_t seed, int threads, const std::string& event, uint64_t r) {
    RootedGraph rg = load_graph(graph_arg);
    CellSpec spec;
    spec.n = n;
    spec.p = parse_rat(p_str).get_d();
    spec.eps = eps;
    spec.trials = trials;
    spec.event = event_from_name(event);
    spec.r = r;
    CellResult res = run_cell(rg, spec, seed, 0, threads);
    ScanResult wrap;
    wrap.cells.push_back(res);
    std::cout << scan_csv(wrap);
    if (res.error) {
        std::cerr << "cell error: " << res.error_msg << "\n";
        return 1;
    }
    if (spec.event == EventKind::DisjointCopies)
        std::cout << "# r = " << res.r_used << ", binomial reference = " << res.binref << "\n";
    if (spec.event == EventKind::ZkMax)
        std::cout << "# max budget ratio over trials = " << res.max_ratio << "\n";
    return 0;
}

int cmd_scan(const std::string& config_path, const std::string& preset,
             const std::string& out_path, std::optional<uint64_t> seed,
             std::optional<int> threads, std::optional<long> trials) {
    ScanResult result;
    std::vector<PresetCheck> checks;
    bool all_pass = true;
    if (!preset.empty()) {
        PresetRun run = run_preset(preset, seed, threads, trials);
        result = std::move(run.result);
        checks = std::move(run.checks);
        all_pass = run.all_pass;
    } else {
        ScanConfig cfg = parse_scan_config(read_file(config_path));
        if (seed) cfg.seed = *seed;
        if (threads) cfg.threads = *threads;
        if (trials) cfg.trials = *trials;
        result = run_scan(cfg);
    }
    std::string csv = scan_csv(result);
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
        out << csv;
        std::cout << "wrote " << result.cells.size() << " cells to " << out_path << "\n";
    } else {
        std::cout << csv;
    }
    for (const auto& c : result.crossings) {
        if (c.found)
            std::cout << "# n = " << c.n << ": estimate first reaches 1/2 at eps = " << c.eps
                      << " (estimate " << c.estimate << ", CI [" << c.ci_lo << ", " << c.ci_hi
                      << "])\n";
        else
            std::cout << "# n = " << c.n << ": estimate never reaches 1/2 on this grid\n";
    }
    if (!result.side_report.empty()) std::cout << result.side_report;
    for (const auto& chk : checks)
        std::cout << (chk.pass ? "PASS: " : "FAIL: ") << chk.desc << "\n";
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pinned-copy counting in binomial random graphs: structure, exact laws, and "
                 "Monte Carlo concentration experiments"};
    app.require_subcommand(1);

    std::string fixture_help = "built-in pattern names: ";
    {
        bool first = true;
        for (const auto& name : builtin_fixture_names()) {
            if (!first) fixture_help += ", ";
            fixture_help += name;
            first = false;
        }
    }
    app.footer("A <graph> argument is a " + fixture_help +
               "; anything else is read as a pattern file "
               "(line 1 \"<roots> <vertices>\", then edges \"a-b\").");

    // classify
    auto* c_cls = app.add_subcommand("classify", "Structural classification of a rooted pattern");
    std::string cls_graph;
    bool cls_json = false;
    c_cls->add_option("graph", cls_graph, "fixture name or pattern file")->required();
    c_cls->add_flag("--json", cls_json, "machine-readable output");

    // theory
    auto* c_th = app.add_subcommand("theory", "Exact expectation/variance scales at (n, p)");
    std::string th_graph, th_p, th_eps;
    long th_n = 0;
    bool th_json = false;
    c_th->add_option("graph", th_graph, "fixture name or pattern file")->required();
    c_th->add_option("n", th_n, "host vertex count")->required();
    c_th->add_option("p", th_p, "edge probability (rational a/b or decimal)")->required();
    c_th->add_option("eps", th_eps, "relative deviation (optional)");
    c_th->add_flag("--json", th_json, "machine-readable output");

    // count
    auto* c_cnt = app.add_subcommand("count", "Count pinned copies in one host graph");
    CountArgs cnt;
    c_cnt->add_option("pattern", cnt.pattern, "fixture name or pattern file")->required();
    auto* host_opt = c_cnt->add_option("--host", cnt.host_file,
                                       "host file (line 1 \"n\", then \"a b\" per line)");
    auto* gnp_opt = c_cnt->add_option("--gnp", cnt.gnp, "sample the host: n p seed")
                        ->expected(3);
    host_opt->excludes(gnp_opt);
    gnp_opt->excludes(host_opt);
    c_cnt->add_option("--roots", cnt.roots, "host vertices for the roots (default 1,2,...)")
        ->delimiter(',');
    c_cnt->add_flag("--extrema", cnt.extrema, "min/max copy count over all root tuples");
    c_cnt->add_flag("--list", cnt.list, "list every copy's non-root vertex set");
    c_cnt->add_option("--cap", cnt.cap, "abort --list beyond this many copies");
    c_cnt->add_option("--disjoint-event", cnt.disjoint_r,
                      "check for exactly R pairwise-disjoint copies");
    c_cnt->add_flag("--per-vertex", cnt.per_vertex,
                    "per-vertex copy participation of the pattern taken unrooted");

    // exact
    auto* c_ex = app.add_subcommand("exact", "Exact law of a copy-count statistic");
    std::string ex_graph, ex_p, ex_target;
    long ex_n = 0;
    uint64_t ex_r = 0;
    int ex_threads = 1;
    c_ex->add_option("graph", ex_graph, "fixture name or pattern file")->required();
    c_ex->add_option("n", ex_n, "host vertex count (<= 8; disjoint events <= 6)")->required();
    c_ex->add_option("p", ex_p, "edge probability (rational a/b or decimal)")->required();
    c_ex->add_option("target", ex_target, "dist | maxdist | ex-event")->required();
    c_ex->add_option("--r", ex_r, "copy count for ex-event");
    c_ex->add_option("--threads", ex_threads, "worker threads");

    // simulate
    auto* c_sim = app.add_subcommand("simulate", "Monte Carlo estimate for a single cell");
    std::string sim_graph, sim_p, sim_event = "concentration";
    long sim_n = 0, sim_trials = 100;
    double sim_eps = 1;
    uint64_t sim_seed = 0, sim_r = 0;
    int sim_threads = 1;
    c_sim->add_option("graph", sim_graph, "fixture name or pattern file")->required();
    c_sim->add_option("--n", sim_n, "host vertex count")->required();
    c_sim->add_option("--p", sim_p, "edge probability")->required();
    c_sim->add_option("--eps", sim_eps, "relative deviation");
    c_sim->add_option("--trials", sim_trials, "Monte Carlo trials");
    c_sim->add_option("--seed", sim_seed, "base seed");
    c_sim->add_option("--threads", sim_threads, "worker threads");
    c_sim->add_option("--event", sim_event,
                      "concentration | lower-tail | upper-tail | disjoint-copies | zk-max");
    c_sim->add_option("--r", sim_r, "disjoint-copies target (0 = derive from eps)");

    // scan
    auto* c_scan = app.add_subcommand("scan", "Grid of cells from a config file or a preset");
    std::string scan_config, scan_preset, scan_out;
    std::optional<uint64_t> scan_seed;
    std::optional<int> scan_threads;
    std::optional<long> scan_trials;
    auto* cfg_opt = c_scan->add_option("config", scan_config, "scan config (JSON)");
    std::string preset_help = "preset name: ";
    {
        bool first = true;
        for (const auto& name : preset_names()) {
            if (!first) preset_help += ", ";
            preset_help += name;
            first = false;
        }
    }
    auto* preset_opt = c_scan->add_option("--preset", scan_preset, preset_help);
    cfg_opt->excludes(preset_opt);
    preset_opt->excludes(cfg_opt);
    c_scan->add_option("--out", scan_out, "write the CSV here instead of stdout");
    c_scan->add_option("--seed", scan_seed, "override the base seed");
    c_scan->add_option("--threads", scan_threads, "override the worker thread count");
    c_scan->add_option("--trials", scan_trials, "override trials per cell");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c_cls) return cmd_classify(cls_graph, cls_json);
        if (*c_th) return cmd_theory(th_graph, th_n, th_p, th_eps, th_json);
        if (*c_cnt) {
            if (cnt.host_file.empty() && cnt.gnp.empty())
                throw std::invalid_argument("count needs --host FILE or --gnp n p seed");
            return cmd_count(cnt);
        }
        if (*c_ex) return cmd_exact(ex_graph, ex_n, ex_p, ex_target, ex_r, ex_threads);
        if (*c_sim)
            return cmd_simulate(sim_graph, sim_n, sim_p, sim_eps, sim_trials, sim_seed,
                                sim_threads, sim_event, sim_r);
        if (*c_scan) {
            if (scan_config.empty() && scan_preset.empty())
                throw std::invalid_argument("scan needs a config file or --preset NAME");
            return cmd_scan(scan_config, scan_preset, scan_out, scan_seed, scan_threads,
                            scan_trials);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

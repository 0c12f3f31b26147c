#include "extcount/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "extcount/counting.hpp"
#include "extcount/exact_law.hpp"
#include "extcount/sampler.hpp"
#include "extcount/theory.hpp"

namespace extcount {

std::pair<double, double> wilson95(long successes, long trials) {
    if (trials <= 0) throw std::invalid_argument("wilson interval needs trials >= 1");
    const double z = 1.959963984540054;
    double nn = (double)trials, ph = (double)successes / nn;
    double z2 = z * z;
    double denom = 1 + z2 / nn;
    double center = (ph + z2 / (2 * nn)) / denom;
    double half = z * std::sqrt(ph * (1 - ph) / nn + z2 / (4 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

std::string event_name(EventKind e) {
    switch (e) {
        case EventKind::Concentration: return "concentration";
        case EventKind::LowerTail: return "lower-tail";
        case EventKind::UpperTail: return "upper-tail";
        case EventKind::DisjointCopies: return "disjoint-copies";
        case EventKind::ZkMax: return "zk-max";
    }
    return "?";
}

EventKind event_from_name(const std::string& s) {
    if (s == "concentration") return EventKind::Concentration;
    if (s == "lower-tail") return EventKind::LowerTail;
    if (s == "upper-tail") return EventKind::UpperTail;
    if (s == "disjoint-copies") return EventKind::DisjointCopies;
    if (s == "zk-max") return EventKind::ZkMax;
    throw std::invalid_argument("unknown event '" + s + "'");
}

namespace {

int64_t to_i64(const Int& v) {
    if (!v.fits_slong_p()) throw std::invalid_argument("count bound exceeds 64-bit range");
    return v.get_si();
}

// run trials in parallel, results landing in per-trial slots
template <typename TrialFn>
void run_trials(long trials, int threads, TrialFn&& fn) {
    int nt = std::max(1, (int)std::min<long>(threads, trials));
    if (nt == 1) {
        for (long t = 0; t < trials; t++) fn(t);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < nt; w++)
        pool.emplace_back([&] {
            for (;;) {
                long t = next.fetch_add(1);
                if (t >= trials) return;
                fn(t);
            }
        });
    for (auto& th : pool) th.join();
}

struct ConcBounds {
    int64_t lo_y, hi_y;  // ordered-count bounds: event iff lo_y <= Y <= hi_y
};

ConcBounds conc_bounds(const Rat& mu, const Rat& eps, uint64_t aut) {
    // X integer: X > mu(1-eps) iff X >= floor+1; X < mu(1+eps) iff X <= ceil-1
    Int lo = floor_rat(mu * (Rat(1) - eps)) + 1;
    Int hi = ceil_rat(mu * (Rat(1) + eps)) - 1;
    Int a((unsigned long)aut);
    return ConcBounds{to_i64(lo * a), to_i64(hi * a)};
}

// all ordered root-tuple counts scanned against [lo, hi]
struct TupleScan {
    bool all_inside = true, any_below = false, any_above = false;
};

TupleScan scan_counts(const ExtensionCounter& ec, const HostGraph& host, const ConcBounds& b) {
    TupleScan s;
    const RootedGraph& rg = ec.rooted();
    auto feed = [&](int64_t y) {
        if (y < b.lo_y) s.any_below = true, s.all_inside = false;
        if (y > b.hi_y) s.any_above = true, s.all_inside = false;
    };
    if (rg.vg() == 1) {
        auto counts = ec.count_all_roots(host);
        for (long v = 1; v <= host.n; v++) feed((int64_t)counts[v]);
        return s;
    }
    RootTuple x(rg.vg());
    std::vector<char> used(host.n + 1, 0);
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == rg.vg()) {
            feed((int64_t)ec.count_ordered(host, x));
            return;
        }
        for (long v = 1; v <= host.n; v++) {
            if (used[v]) continue;
            used[v] = 1;
            x[pos] = v;
            self(self, pos + 1);
            used[v] = 0;
        }
    };
    rec(rec, 0);
    return s;
}

}  // namespace

ZkReport z_k_bound_check(const PatternGraph& k, long n, double p, long trials, uint64_t seed,
                         int threads) {
    if (p < 0 || p > 1) throw std::invalid_argument("p must lie in [0, 1]");
    auto ua = unrooted_analysis(k);
    if (!ua.balanced)
        throw std::invalid_argument("per-vertex budget check requires a balanced pattern");
    ZkReport rep;
    double dk = ua.max_density.get_d();
    rep.lambda = (double)n * std::pow(p, dk);
    rep.budget_exponent = k.n - ua.g_min_vcount;
    rep.trial_ratios.assign(trials, 0.0);
    rep.trial_max_z.assign(trials, 0);
    double base = std::pow(rep.lambda, rep.budget_exponent);
    run_trials(trials, threads, [&](long t) {
        HostGraph host = sample_gnp({n, p, trial_seed(seed, 0, (uint64_t)t)});
        auto counts = per_vertex_copy_counts(host, k);
        uint64_t mz = 0;
        for (long v = 1; v <= n; v++) mz = std::max(mz, counts[v]);
        rep.trial_max_z[t] = mz;
        rep.trial_ratios[t] = base > 0 ? (double)mz / base : 0.0;
    });
    for (double r : rep.trial_ratios) rep.max_ratio = std::max(rep.max_ratio, r);
    return rep;
}

// Budget constant for the zk-max event: a trial passes when the max per-vertex
// copy count stays within 32 * lambda^(v_K - v_Gmin).
static constexpr double kZkBudgetFactor = 32.0;

CellResult run_cell(const RootedGraph& rg, const CellSpec& spec, uint64_t base_seed,
                    uint64_t cell_index, int threads) {
    CellResult res;
    res.spec = spec;
    if (spec.trials < 1) throw std::invalid_argument("cell needs trials >= 1");
    if (spec.p < 0 || spec.p > 1) throw std::invalid_argument("p must lie in [0, 1]");
    // eps > 1 is allowed: the lower side of the band is then vacuous
    if (!(spec.eps > 0)) throw std::invalid_argument("eps must be positive");
    res.p_rat = Rat(spec.p);
    res.p_rat.canonicalize();
    res.eps_rat = Rat(spec.eps);
    res.eps_rat.canonicalize();

    if (spec.event == EventKind::ZkMax) {
        ZkReport zk = z_k_bound_check(rg.h, spec.n, spec.p, spec.trials, base_seed, threads);
        // theory columns still describe the unrooted pattern's copy count
        RootedGraph unrooted(rg.h, 0);
        res.mu = mu_exact(unrooted, spec.n, res.p_rat);
        res.phi = phi_exact(unrooted, spec.n, res.p_rat).value;
        res.max_ratio = zk.max_ratio;
        long ok = 0;
        for (double r : zk.trial_ratios)
            if (r <= kZkBudgetFactor) ok++;
        res.successes = ok;
    } else {
        res.mu = mu_exact(rg, spec.n, res.p_rat);
        res.phi = phi_exact(rg, spec.n, res.p_rat).value;
        ExtensionCounter ec_proto(rg);
        uint64_t aut = ec_proto.aut();
        std::vector<uint8_t> outcomes(spec.trials, 0);
        if (spec.event == EventKind::DisjointCopies) {
            Int r = spec.r ? Int((unsigned long)spec.r) : r_star(res.mu, res.eps_rat);
            Int N = count_in_complete_graph(rg, spec.n);
            if (r > N) throw std::invalid_argument("r* exceeds the complete-graph count");
            res.r_used = (uint64_t)to_i64(r);
            res.binref = binomial_reference(rg, spec.n, res.p_rat, res.eps_rat);
            RootTuple pins;
            for (int i = 1; i <= rg.vg(); i++) pins.push_back(i);
            run_trials(spec.trials, threads, [&](long t) {
                HostGraph host =
                    sample_gnp({spec.n, spec.p, trial_seed(base_seed, cell_index, (uint64_t)t)});
                outcomes[t] =
                    disjoint_event_check(host, rg, pins, res.r_used) ? 1 : 0;
            });
        } else {
            ConcBounds b = conc_bounds(res.mu, res.eps_rat, aut);
            run_trials(spec.trials, threads, [&](long t) {
                HostGraph host =
                    sample_gnp({spec.n, spec.p, trial_seed(base_seed, cell_index, (uint64_t)t)});
                TupleScan s = scan_counts(ec_proto, host, b);
                bool val = false;
                if (spec.event == EventKind::Concentration) val = s.all_inside;
                if (spec.event == EventKind::LowerTail) val = s.any_below;
                if (spec.event == EventKind::UpperTail) val = s.any_above;
                outcomes[t] = val ? 1 : 0;
            });
        }
        long succ = 0;
        for (long t = 0; t < spec.trials; t++) succ += outcomes[t];
        res.successes = succ;
    }

    res.estimate = (double)res.successes / (double)spec.trials;
    auto [lo, hi] = wilson95(res.successes, spec.trials);
    res.ci_lo = lo;
    res.ci_hi = hi;
    res.degenerate = (spec.p == 0) || (res.mu < Rat(1, 2));
    double logn = std::log((double)spec.n);
    double e2 = spec.eps * spec.eps;
    res.eps2mu_over_logn = e2 * res.mu.get_d() / logn;
    res.eps2phi_over_logn = e2 * res.phi.get_d() / logn;
    return res;
}

CellResult estimate_concentration(const RootedGraph& rg, long n, double p, double eps,
                                  long trials, uint64_t seed, int threads) {
    return run_cell(rg, {n, p, eps, trials, EventKind::Concentration, 0}, seed, 0, threads);
}

CellResult estimate_disjoint_copies(const RootedGraph& rg, long n, double p, double eps,
                                    long trials, uint64_t seed, int threads) {
    return run_cell(rg, {n, p, eps, trials, EventKind::DisjointCopies, 0}, seed, 0, threads);
}

namespace {

double resolve_p_value(const ScanConfig& cfg, long n, size_t n_index) {
    const PRule& r = cfg.p_rule;
    const RootedGraph& rg = cfg.graph;
    auto snap_up_to = [&](double p0, const Rat& target, auto&& exact_of) {
        // round the dyadic up until the exact quantity meets the target, so
        // derived eps grids stay inside (0, 1]
        if (p0 <= 0 || p0 > 1) throw std::invalid_argument("solved p outside (0, 1]");
        for (int i = 0; i < 256; i++) {
            Rat pr(p0);
            pr.canonicalize();
            if (exact_of(pr) >= target) return p0;
            p0 = std::nextafter(p0, 2.0);
            if (p0 > 1) {
                p0 = 1.0;
                Rat one(1);
                if (exact_of(one) >= target) return 1.0;
                break;
            }
        }
        throw std::invalid_argument("p rule target not reachable");
    };
    switch (r.type) {
        case PRule::Explicit: {
            if (r.values.empty()) throw std::invalid_argument("explicit p rule needs values");
            double p = r.values.size() == 1 ? r.values[0]
                                            : r.values.at(n_index);
            if (p < 0 || p > 1) throw std::invalid_argument("p must lie in [0, 1]");
            return p;
        }
        case PRule::Power: {
            double p = r.a * std::pow((double)n, -r.b);
            if (p <= 0 || p > 1) throw std::invalid_argument("power p rule leaves (0, 1]");
            return p;
        }
        case PRule::MuLogTarget: {
            // target applies to the asymptotic surrogate n^(dv) p^(de); the
            // cell's exact mu is then materially smaller (automorphisms and
            // falling factorials), which is the intended display contrast
            double target = r.factor * std::log((double)n);
            int dv = rg.vh() - rg.vg(), de = rg.eh() - rg.eg();
            double p0 = std::pow(target / std::pow((double)n, dv), 1.0 / de);
            if (!(p0 > 0) || p0 > 1)
                throw std::invalid_argument("mu rule leaves (0, 1]");
            return p0;
        }
        case PRule::MuTarget: {
            // exact-mu target, rounded up so derived eps grids hit it exactly
            Int N = count_in_complete_graph(rg, n);
            int k = rg.eh() - rg.eg();
            double p0 = std::pow(r.factor / N.get_d(), 1.0 / k);
            Rat tgt(r.factor);
            tgt.canonicalize();
            return snap_up_to(p0, tgt, [&](const Rat& pr) { return mu_exact(rg, n, pr); });
        }
        case PRule::PhiLogTarget:
        case PRule::PhiTarget: {
            double target =
                r.type == PRule::PhiLogTarget ? r.factor * std::log((double)n) : r.factor;
            auto phi_of = [&](double p) {
                Rat pr(p);
                pr.canonicalize();
                return phi_exact(rg, n, pr).value.get_d();
            };
            if (phi_of(1.0) < target)
                throw std::invalid_argument("phi target not reachable at p = 1");
            double lo = 0, hi = 1;
            for (int i = 0; i < 200; i++) {
                double mid = (lo + hi) / 2;
                (phi_of(mid) < target ? lo : hi) = mid;
            }
            Rat tgt(target);
            tgt.canonicalize();
            return snap_up_to(hi, tgt,
                              [&](const Rat& pr) { return phi_exact(rg, n, pr).value; });
        }
    }
    throw std::logic_error("unhandled p rule");
}

double resolve_eps_value(const ScanConfig& cfg, long n, const Rat& p, double v) {
    const RootedGraph& rg = cfg.graph;
    double logn = std::log((double)n);
    double e2 = 0;
    switch (cfg.eps_rule.type) {
        case EpsRule::Explicit:
            if (!(v > 0)) throw std::invalid_argument("eps must be positive");
            return v;
        case EpsRule::Eps2MuOverLogn:
            e2 = v * logn / mu_exact(rg, n, p).get_d();
            break;
        case EpsRule::Eps2Mu:
            e2 = v / mu_exact(rg, n, p).get_d();
            break;
        case EpsRule::Eps2PhiOverLogn:
            e2 = v * logn / phi_exact(rg, n, p).value.get_d();
            break;
        case EpsRule::Eps2Phi:
            e2 = v / phi_exact(rg, n, p).value.get_d();
            break;
        case EpsRule::Eps2Np2CubedOverLogn: {
            double pd = p.get_d();
            double omega = (double)n * pd * pd;
            e2 = v * logn / (omega * omega * omega);
            break;
        }
    }
    double eps = std::sqrt(e2);
    if (eps > 1 && eps < 1 + 1e-9) eps = 1;  // exact-target rules: undo sqrt rounding
    if (!(eps > 0) || !std::isfinite(eps))
        throw std::invalid_argument("eps rule produced no positive value");
    return eps;
}

std::string fmt_cell(const CellResult& c) {
    char buf[512];
    auto num = [](double x, const char* f, char* out, size_t cap) {
        if (std::isnan(x))
            snprintf(out, cap, "nan");
        else
            snprintf(out, cap, f, x);
    };
    char est[32], lo[32], hi[32];
    num(c.estimate, "%.6f", est, sizeof est);
    num(c.ci_lo, "%.6f", lo, sizeof lo);
    num(c.ci_hi, "%.6f", hi, sizeof hi);
    snprintf(buf, sizeof buf, "%ld,%.12g,%.12g,%.10g,%.10g,%.10g,%.10g,%s,%s,%s,%ld,%d",
             c.spec.n, c.spec.p, c.spec.eps, c.mu.get_d(), c.phi.get_d(),
             c.eps2mu_over_logn, c.eps2phi_over_logn, est, lo, hi, c.spec.trials,
             c.degenerate ? 1 : 0);
    return buf;
}

}  // namespace

const char* kCsvHeader =
    "n,p,eps,mu,phi,eps2mu_over_logn,eps2phi_over_logn,estimate,ci_lo,ci_hi,trials,degenerate";

ScanResult run_scan(const ScanConfig& config) {
    if (config.ns.empty()) throw std::invalid_argument("scan needs at least one n");
    if (config.eps_rule.values.empty())
        throw std::invalid_argument("scan needs at least one eps grid value");
    ScanResult result;
    std::ostringstream side;
    size_t epsn = config.eps_rule.values.size();
    for (size_t i = 0; i < config.ns.size(); i++) {
        long n = config.ns[i];
        double p = 0;
        bool p_ok = true;
        std::string p_err;
        try {
            p = resolve_p_value(config, n, i);
        } catch (const std::exception& e) {
            p_ok = false;
            p_err = e.what();
        }
        Rat p_rat(p_ok ? p : 0.0);
        p_rat.canonicalize();
        for (size_t j = 0; j < epsn; j++) {
            uint64_t cell_index = i * epsn + j;
            CellResult cell;
            cell.spec = {n, p, 1.0, config.trials, config.event, config.r};
            try {
                if (!p_ok) throw std::invalid_argument("p rule failed: " + p_err);
                cell.spec.eps =
                    config.event == EventKind::ZkMax
                        ? 1.0
                        : resolve_eps_value(config, n, p_rat, config.eps_rule.values[j]);
                cell = run_cell(config.graph, cell.spec, config.seed, cell_index,
                                config.threads);
            } catch (const std::exception& e) {
                cell.error = true;
                cell.error_msg = e.what();
                cell.estimate = cell.ci_lo = cell.ci_hi = std::nan("");
                cell.degenerate = true;
            }
            result.cells.push_back(cell);
            if (!cell.error) {
                side << "cell " << cell_index << ": n=" << n << " p=" << cell.spec.p
                     << " eps=" << cell.spec.eps;
                if (config.event == EventKind::ZkMax)
                    side << " max_ratio=" << cell.max_ratio;
                if (config.event == EventKind::DisjointCopies)
                    side << " r=" << cell.r_used << " binomial_reference=" << cell.binref;
                side << "\n";
            } else {
                side << "cell " << cell_index << ": n=" << n << " error: " << cell.error_msg
                     << "\n";
            }
        }
        // report the scale split at every proper max-density subset
        if (p_ok && config.event != EventKind::ZkMax && n >= config.graph.vh()) {
            try {
                auto rep = classify(config.graph);
                for (auto& node : rep.primal_subsets) {
                    if (node.subset == full_mask(config.graph.vh())) continue;
                    RootedGraph lower = induced_sub(config.graph, node.subset);
                    RootedGraph upper = reroot(config.graph, node.subset);
                    double mu_lo = mu_exact(lower, n, p_rat).get_d();
                    double mu_hi = nu_exact(upper, n, p_rat).get_d();
                    double logn = std::log((double)n);
                    for (size_t j = 0; j < epsn; j++) {
                        const CellResult& c = result.cells[i * epsn + j];
                        if (c.error) continue;
                        double e2 = c.spec.eps * c.spec.eps;
                        side << "  n=" << n << " eps=" << c.spec.eps << " split at {";
                        auto labels = mask_to_labels(node.subset);
                        for (size_t q = 0; q < labels.size(); q++)
                            side << (q ? "," : "") << labels[q];
                        side << "}: eps2*mu_lower/logn=" << e2 * mu_lo / logn
                             << " eps2*mu_upper/logn=" << e2 * mu_hi / logn << "\n";
                    }
                }
            } catch (const std::exception&) {
                // classification problems never block the scan
            }
        }
    }
    // first grid cell per n with estimate >= 1/2
    for (size_t i = 0; i < config.ns.size(); i++) {
        Crossing cr;
        cr.n = config.ns[i];
        for (size_t j = 0; j < epsn; j++) {
            const CellResult& c = result.cells[i * epsn + j];
            if (!c.error && c.estimate >= 0.5) {
                cr.found = true;
                cr.eps = c.spec.eps;
                cr.estimate = c.estimate;
                cr.ci_lo = c.ci_lo;
                cr.ci_hi = c.ci_hi;
                break;
            }
        }
        result.crossings.push_back(cr);
    }
    result.side_report = side.str();
    return result;
}

std::string scan_csv(const ScanResult& result) {
    std::string out = kCsvHeader;
    out += "\n";
    for (auto& c : result.cells) {
        out += fmt_cell(c);
        out += "\n";
    }
    return out;
}

ScanConfig parse_scan_config(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    ScanConfig cfg;
    if (j.at("graph").is_string()) {
        cfg.graph_name = j["graph"].get<std::string>();
        cfg.graph = builtin_fixture(cfg.graph_name);
    } else {
        cfg.graph_name = j["graph"].at("file").get<std::string>();
        std::ifstream in(cfg.graph_name);
        if (!in) throw std::invalid_argument("cannot open graph file " + cfg.graph_name);
        std::stringstream ss;
        ss << in.rdbuf();
        cfg.graph = parse_rooted_graph(ss.str());
    }
    for (auto& v : j.at("n")) cfg.ns.push_back(v.get<long>());
    auto& pr = j.at("p_rule");
    std::string pt = pr.at("type").get<std::string>();
    if (pt == "explicit") {
        cfg.p_rule.type = PRule::Explicit;
        for (auto& v : pr.at("values")) cfg.p_rule.values.push_back(v.get<double>());
    } else if (pt == "mu_log_target" || pt == "phi_log_target" || pt == "mu_target" ||
               pt == "phi_target") {
        cfg.p_rule.type = pt == "mu_log_target"    ? PRule::MuLogTarget
                          : pt == "phi_log_target" ? PRule::PhiLogTarget
                          : pt == "mu_target"      ? PRule::MuTarget
                                                   : PRule::PhiTarget;
        cfg.p_rule.factor = pr.at("factor").get<double>();
    } else if (pt == "power") {
        cfg.p_rule.type = PRule::Power;
        cfg.p_rule.a = pr.at("a").get<double>();
        cfg.p_rule.b = pr.at("b").get<double>();
    } else {
        throw std::invalid_argument("unknown p rule '" + pt + "'");
    }
    if (j.contains("eps_rule")) {
        auto& er = j.at("eps_rule");
        std::string et = er.at("type").get<std::string>();
        if (et == "explicit")
            cfg.eps_rule.type = EpsRule::Explicit;
        else if (et == "eps2mu_over_logn")
            cfg.eps_rule.type = EpsRule::Eps2MuOverLogn;
        else if (et == "eps2mu")
            cfg.eps_rule.type = EpsRule::Eps2Mu;
        else if (et == "eps2phi_over_logn")
            cfg.eps_rule.type = EpsRule::Eps2PhiOverLogn;
        else if (et == "eps2phi")
            cfg.eps_rule.type = EpsRule::Eps2Phi;
        else if (et == "eps2np2cubed_over_logn")
            cfg.eps_rule.type = EpsRule::Eps2Np2CubedOverLogn;
        else
            throw std::invalid_argument("unknown eps rule '" + et + "'");
        for (auto& v : er.at("values")) cfg.eps_rule.values.push_back(v.get<double>());
    } else {
        cfg.eps_rule.values.push_back(1.0);
    }
    cfg.trials = j.value("trials", 100L);
    cfg.seed = j.value("seed", (uint64_t)0);
    cfg.event = event_from_name(j.value("event", std::string("concentration")));
    cfg.r = j.value("r", (uint64_t)0);
    cfg.threads = j.value("threads", 1);
    return cfg;
}

}  // namespace extcount

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "extcount/pattern_graph.hpp"
#include "extcount/rational.hpp"

namespace extcount {

// 95% Wilson score interval for `successes` out of `trials`.
std::pair<double, double> wilson95(long successes, long trials);

enum class EventKind {
    Concentration,  // every root tuple within relative eps of mu (strictly)
    LowerTail,      // some root tuple at or below (1 - eps) mu
    UpperTail,      // some root tuple at or above (1 + eps) mu
    DisjointCopies, // exactly r pairwise-disjoint pinned copies at the first root tuple
    ZkMax,          // per-vertex copy-count budget check (unrooted pattern)
};
std::string event_name(EventKind e);
EventKind event_from_name(const std::string& s);

struct CellSpec {
    long n = 0;
    double p = 0;    // dyadic (snapped); also the exact rational used by theory
    double eps = 1;  // dyadic (snapped), > 0; above 1 the lower band side is vacuous
    long trials = 0;
    EventKind event = EventKind::Concentration;
    uint64_t r = 0;  // DisjointCopies: 0 means derive ceil((1+eps) mu)
};

struct CellResult {
    CellSpec spec;
    Rat p_rat, eps_rat, mu, phi;
    double eps2mu_over_logn = 0, eps2phi_over_logn = 0;
    long successes = 0;
    double estimate = 0, ci_lo = 0, ci_hi = 0;
    bool degenerate = false;  // p == 0 or mu < 1/2
    bool error = false;       // infeasible cell; estimate fields are NaN
    std::string error_msg;
    uint64_t r_used = 0;      // DisjointCopies
    double binref = 0;        // DisjointCopies: binomial reference point mass
    double max_ratio = 0;     // ZkMax: max over trials of maxZ / lambda^(v_K - v_Gmin)
};

// Run one Monte Carlo cell.  Trial t draws its host with engine seed
// trial_seed(base_seed, cell_index, t); results land in per-trial slots and
// are reduced in trial order, so the outcome is independent of `threads`.
CellResult run_cell(const RootedGraph& rg, const CellSpec& spec, uint64_t base_seed,
                    uint64_t cell_index, int threads = 1);

// Convenience wrappers for single cells.
CellResult estimate_concentration(const RootedGraph& rg, long n, double p, double eps,
                                  long trials, uint64_t seed, int threads = 1);
CellResult estimate_disjoint_copies(const RootedGraph& rg, long n, double p, double eps,
                                    long trials, uint64_t seed, int threads = 1);

// Per-vertex copy-count budget experiment for an unrooted pattern K, which
// must be balanced (max subgraph density at K itself); lambda = n p^(density).
struct ZkReport {
    double lambda = 0;
    int budget_exponent = 0;          // v_K - v_(smallest primal)
    std::vector<double> trial_ratios; // maxZ / lambda^budget_exponent per trial
    double max_ratio = 0;
    std::vector<uint64_t> trial_max_z;
};
ZkReport z_k_bound_check(const PatternGraph& k, long n, double p, long trials, uint64_t seed,
                         int threads = 1);

// Scan configuration.  The CLI reads this from a JSON document; see README
// for the schema.  p and eps grids are derived rules: p may be explicit or
// solved (in doubles, then snapped to a dyadic rational, rounded up so exact
// mu/phi meet the target) and eps may be explicit or derived from exact mu,
// phi, or n p^2 targets.
struct PRule {
    enum Type { Explicit, MuLogTarget, PhiLogTarget, MuTarget, PhiTarget, Power } type =
        Explicit;
    std::vector<double> values;  // Explicit
    double factor = 0;           // targets: mu or phi = factor * ln n (or absolute)
    double a = 0, b = 0;         // Power: p = a * n^(-b)
};
struct EpsRule {
    enum Type { Explicit, Eps2MuOverLogn, Eps2Mu, Eps2PhiOverLogn, Eps2Phi, Eps2Np2CubedOverLogn } type =
        Explicit;
    std::vector<double> values;
};
struct ScanConfig {
    RootedGraph graph;
    std::string graph_name;  // fixture name or file path, echoed in reports
    std::vector<long> ns;
    PRule p_rule;
    EpsRule eps_rule;
    long trials = 100;
    uint64_t seed = 0;
    EventKind event = EventKind::Concentration;
    uint64_t r = 0;
    int threads = 1;
};
ScanConfig parse_scan_config(const std::string& json_text);

struct Crossing {
    long n = 0;
    bool found = false;
    double eps = 0, estimate = 0, ci_lo = 0, ci_hi = 0;
};

struct ScanResult {
    std::vector<CellResult> cells;
    std::vector<Crossing> crossings;  // per n: first eps cell with estimate >= 1/2
    std::string side_report;          // extra per-cell quantities, free text
};

// Cells are the n x eps grid (p tied to n by the rule), n-major.  Cell errors
// (e.g. an eps rule landing outside (0,1]) are recorded per cell; the scan
// continues.  The CSV is a deterministic function of (config, seed).
ScanResult run_scan(const ScanConfig& config);
std::string scan_csv(const ScanResult& result);
extern const char* kCsvHeader;

// Canned experiments; assertions encode the pass bars used by the acceptance
// suite (empty for exhibition-only presets).
struct PresetCheck {
    std::string desc;
    bool pass = false;
};
struct PresetRun {
    ScanConfig config;
    ScanResult result;
    std::vector<PresetCheck> checks;
    bool all_pass = true;
};
std::vector<std::string> preset_names();
PresetRun run_preset(const std::string& name, std::optional<uint64_t> seed = {},
                     std::optional<int> threads = {}, std::optional<long> trials = {});

}  // namespace extcount

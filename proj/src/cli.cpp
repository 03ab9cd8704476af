#include "prodline/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <thread>

#include "prodline/commitment.hpp"
#include "prodline/json_io.hpp"
#include "prodline/limited.hpp"
#include "prodline/oracle.hpp"
#include "prodline/svg.hpp"
#include "prodline/verifier.hpp"

namespace prodline {

namespace {

struct ParamFlags {
    double vl = 0.0, vh = 0.0, c = 0.0;
    double cap = std::numeric_limits<double>::infinity();

    void attach(CLI::App* cmd) {
        cmd->add_option("--vl", vl, "low period-2 valuation v_L")->required();
        cmd->add_option("--vh", vh, "high period-2 valuation v_H")->required();
        cmd->add_option("--c", c, "quality cost coefficient")->required();
        cmd->add_option("--cap", cap, "quality cap (default unbounded)");
    }
    ModelParams get() const { return validate({vl, vh, c, cap}); }
};

TieBreak tie_from(const std::string& s) {
    if (s == "favor-low") return TieBreak::FavorLow;
    if (s == "favor-high") return TieBreak::FavorHigh;
    throw DomainError("unknown tie rule: " + s);
}

Schedule build_schedule(const ModelParams& p, const std::string& regime) {
    if (regime == "firstbest") return first_best_schedule(p);
    if (regime == "commitment") return commitment_schedule(p);
    if (regime == "limited") return limited_schedule(p);
    throw DomainError("unknown regime: " + regime);
}

struct Range {
    double lo = 0.0, hi = 0.0;
    int steps = 1;
    std::vector<double> values() const {
        std::vector<double> v;
        if (steps == 1) {
            v.push_back(lo);
            return v;
        }
        for (int i = 0; i < steps; ++i)
            v.push_back(lo + (hi - lo) * static_cast<double>(i) / (steps - 1));
        return v;
    }
};

Range parse_range(const std::string& s) {
    Range r;
    if (std::sscanf(s.c_str(), "%lf:%lf:%d", &r.lo, &r.hi, &r.steps) != 3 || r.steps < 1 ||
        r.hi < r.lo)
        throw DomainError("malformed range '" + s + "', expected lo:hi:steps");
    return r;
}

int sweep_threads() {
    if (const char* env = std::getenv("MECH_SOLVER_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

int cmd_solve(const ParamFlags& pf, const std::string& regime, std::ostream& out) {
    const ModelParams p = pf.get();
    const Schedule s = build_schedule(p, regime);
    out << to_json(s).dump(2) << "\n";
    return kExitOk;
}

int cmd_verify(const ParamFlags& pf, const std::string& regime, int grid, double ic_tol,
               double ir_tol, double revenue_tol, bool check_seqrat, std::ostream& out) {
    const ModelParams p = pf.get();
    const Schedule s = build_schedule(p, regime);

    json j;
    j["regime"] = regime_string(s.regime);
    j["params"] = {{"vL", p.v_l}, {"vH", p.v_h}, {"c", p.c}};

    if (s.regime == ScheduleRegime::FirstBest) {
        // Truthtelling is not at issue under symmetric information; report
        // the surplus instead.
        j["icViolation"] = nullptr;
        j["socialSurplus"] = first_best_surplus(p);
        j["irViolation"] = 0.0;
        out << j.dump(2) << "\n";
        return kExitOk;
    }

    const VerificationReport rep = verify_schedule(s, p, grid);
    j.update(to_json(rep));
    bool pass = rep.ic_violation <= ic_tol && rep.ir_violation <= ir_tol && rep.bp_ok &&
                rep.revenue_gap <= revenue_tol;
    if (s.regime == ScheduleRegime::LimitedCommitment) {
        const MonotonicityReport mono = monotonicity_check(p);
        j["monotonicity"] = to_json(mono);
        pass = pass && mono.numeric_ok && rep.seq_rationality_ok;
    } else if (check_seqrat) {
        pass = pass && rep.seq_rationality_ok;
    }
    j["pass"] = pass;
    out << j.dump(2) << "\n";
    return pass ? kExitOk : kExitVerification;
}

int cmd_oracle(const ParamFlags& pf, int grid, int partition_grid, const std::string& tie_s,
               double gap_tol, std::ostream& out) {
    const ModelParams p = pf.get();
    const TieBreak tie = tie_s.empty() ? regime_tie(p) : tie_from(tie_s);

    const RelaxedSolution lp = solve_relaxed_lp(p, grid, tie);
    const PartitionResult part = partition_search(p, partition_grid, tie);
    const double closed = limited_revenue(p);

    const DualCertificate cert = build_certificate(p);
    const Schedule sched = limited_schedule(p);
    const MeanDistribution closed_g = induced_law(sched).discretize(cert.m);
    const CertificateReport cert_rep = verify_certificate(cert, p, closed_g, tie);

    json j;
    j["value"] = lp.value;
    j["closedForm"] = closed;
    j["partitionValue"] = part.value;
    j["support"] = to_json(cluster_support(lp.g, 2.0 / grid));
    j["certificate"] = to_json(cert);
    j["certificateReport"] = {{"convexOk", cert_rep.convex_ok},
                              {"majorizeOk", cert_rep.majorize_ok},
                              {"expectationOk", cert_rep.expectation_ok},
                              {"touchingOk", cert_rep.touching_ok},
                              {"worstMajorize", cert_rep.worst_majorize},
                              {"expectationGap", cert_rep.expectation_gap},
                              {"worstTouch", cert_rep.worst_touch}};
    j["gaps"] = {{"lpMinusClosed", lp.value - closed},
                 {"lpMinusPartition", lp.value - part.value}};
    j["iterations"] = lp.iterations;
    out << j.dump(2) << "\n";

    if (std::abs(lp.value - closed) > gap_tol) return kExitOracleGap;
    if (!cert_rep.ok()) return kExitOracleGap;
    return kExitOk;
}

struct SweepRow {
    std::string text;
};

int cmd_sweep(const std::string& mu_range, const std::string& c_range, double vh,
              std::ostream& out) {
    const Range mur = parse_range(mu_range);
    const Range cr = parse_range(c_range);
    const std::vector<double> mus = mur.values();
    const std::vector<double> cs = cr.values();
    for (double mu : mus)
        if (mu <= 0.0 || mu > 1.0) throw DomainError("mu out of (0,1]: " + fmt(mu));
    for (double c : cs)
        if (c <= 0.0) throw DomainError("c must be positive");

    const std::size_t total = mus.size() * cs.size();
    std::vector<SweepRow> rows(total);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= total) return;
            const double mu_req = mus[i / cs.size()];
            const double c = cs[i % cs.size()];
            // v_L = v_H is outside the model; a hair below reproduces the
            // no-discrimination limit where limited equals commitment.
            const double mu = std::min(mu_req, 1.0 - 1e-9);
            const ModelParams p = validate({mu * vh, vh, c});
            const MonotonicityReport mono = monotonicity_check(p);
            double m_lo = 0.0, m_hi = 0.0;
            switch (mono.regime) {
                case Regime::MuLeQuarter: m_lo = 0.0; m_hi = 0.5; break;
                case Regime::MuQuarterToHalf: m_lo = 0.0; m_hi = 2.0 * mu; break;
                default: {
                    const PoolingInterval iv = solve_pooling_interval(p);
                    m_lo = iv.m_lo;
                    m_hi = iv.m_hi;
                }
            }
            std::string r;
            r += fmt(mu_req);
            r += ",";
            r += fmt(c);
            r += ",";
            r += regime_name(mono.regime);
            r += ",";
            r += fmt(m_lo);
            r += ",";
            r += fmt(m_hi);
            r += ",";
            r += fmt(limited_revenue(p));
            r += ",";
            r += fmt(commitment_revenue(p));
            r += ",";
            r += mono.analytic_ok ? "1" : "0";
            r += ",";
            r += mono.numeric_ok ? "1" : "0";
            r += ",";
            r += mono.analytic_weak_ok ? "1" : "0";
            r += ",";
            r += mono.analytic_strict_ok ? "1" : "0";
            r += ",";
            r += mono.conditions_disagree ? "1" : "0";
            rows[i].text = r;
        }
    };
    const int nthreads = std::min<int>(sweep_threads(), static_cast<int>(total));
    std::vector<std::thread> pool;
    for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    out << "mu,c,regime,m_lo,m_hi,revenueLimited,revenueCommitment,monotoneAnalytic,"
           "monotoneNumeric,monotoneWeakCond,monotoneStrictCond,analyticDisagree\n";
    for (const SweepRow& r : rows) out << r.text << "\n";
    return kExitOk;
}

int cmd_plot(const ParamFlags& pf, const std::string& out_path, std::ostream&) {
    const ModelParams p = pf.get();
    const Schedule fb = first_best_schedule(p);
    const Schedule cm = commitment_schedule(p);
    const Schedule lim = limited_schedule(p);
    const std::string svg = render_quality_plot(fb, cm, lim);

    std::ofstream svg_file(out_path, std::ios::binary);
    if (!svg_file) throw std::ios_base::failure("cannot open " + out_path);
    svg_file << svg;
    if (!svg_file.good()) throw std::ios_base::failure("write failed: " + out_path);
    svg_file.close();

    json sidecar;
    sidecar["params"] = {{"vL", p.v_l}, {"vH", p.v_h}, {"c", p.c}};
    sidecar["firstBest"] = to_json(fb);
    sidecar["commitment"] = to_json(cm);
    sidecar["limited"] = to_json(lim);
    const std::string side_path = out_path + ".json";
    std::ofstream side_file(side_path, std::ios::binary);
    if (!side_file) throw std::ios_base::failure("cannot open " + side_path);
    side_file << sidecar.dump(2) << "\n";
    if (!side_file.good()) throw std::ios_base::failure("write failed: " + side_path);
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"two-period product-line design under limited commitment"};
    app.require_subcommand(1);

    ParamFlags solve_p, verify_p, oracle_p, plot_p;
    std::string solve_regime = "limited", verify_regime = "limited";
    std::string oracle_tie, plot_out;
    int verify_grid = 2001, oracle_grid = 2001, partition_grid = 401;
    double ic_tol = 1e-4, ir_tol = 1e-9, revenue_tol = 1e-6, gap_tol = 2e-3;
    bool check_seqrat = false;
    std::string mu_range, c_range;
    double sweep_vh = 1.0;

    CLI::App* solve = app.add_subcommand("solve", "print the product line as JSON");
    solve_p.attach(solve);
    solve->add_option("--regime", solve_regime, "firstbest|commitment|limited");

    CLI::App* verify = app.add_subcommand("verify", "run the brute-force checks");
    verify_p.attach(verify);
    verify->add_option("--regime", verify_regime, "firstbest|commitment|limited");
    verify->add_option("--grid", verify_grid, "check grid size (default 2001)");
    verify->add_option("--ic-tol", ic_tol, "IC violation tolerance");
    verify->add_option("--ir-tol", ir_tol, "IR violation tolerance");
    verify->add_option("--revenue-tol", revenue_tol, "revenue identity tolerance");
    verify->add_flag("--check-seqrat", check_seqrat,
                     "enforce sequential rationality outside the limited regime");

    CLI::App* oracle = app.add_subcommand("oracle", "LP and partition-search cross-check");
    oracle_p.attach(oracle);
    oracle->add_option("--grid", oracle_grid, "LP mean grid size (default 2001)");
    oracle->add_option("--partition-grid", partition_grid, "partition search grid (default 401)");
    oracle->add_option("--tie", oracle_tie, "favor-low|favor-high");
    oracle->add_option("--gap-tol", gap_tol, "LP vs closed-form gap tolerance");

    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep as CSV");
    sweep->add_option("--mu-range", mu_range, "mu range lo:hi:steps")->required();
    sweep->add_option("--c-range", c_range, "c range lo:hi:steps")->required();
    sweep->add_option("--vh", sweep_vh, "v_H used for the sweep (default 1)");

    CLI::App* plot = app.add_subcommand("plot", "emit an SVG plus a JSON sidecar");
    plot_p.attach(plot);
    plot->add_option("--out", plot_out, "output SVG path")->required();

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitValidation;
    }

    try {
        if (solve->parsed()) return cmd_solve(solve_p, solve_regime, out);
        if (verify->parsed())
            return cmd_verify(verify_p, verify_regime, verify_grid, ic_tol, ir_tol, revenue_tol,
                              check_seqrat, out);
        if (oracle->parsed())
            return cmd_oracle(oracle_p, oracle_grid, partition_grid, oracle_tie, gap_tol, out);
        if (sweep->parsed()) return cmd_sweep(mu_range, c_range, sweep_vh, out);
        if (plot->parsed()) return cmd_plot(plot_p, plot_out, out);
    } catch (const OrderingError& e) {
        err << "parameter error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NonPositiveError& e) {
        err << "parameter error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const CapTooSmallError& e) {
        err << "parameter error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const DomainError& e) {
        err << "input error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const RegimeError& e) {
        err << "input error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NoRootError& e) {
        err << "solver error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::ios_base::failure& e) {
        err << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        err << "internal check failed: " << e.what() << "\n";
        return kExitVerification;
    }
    err << "no subcommand given\n";
    return kExitValidation;
}

}  // namespace prodline

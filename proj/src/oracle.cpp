#include "prodline/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace prodline {

std::vector<double> build_mean_grid(const ModelParams& params, int grid_size) {
    if (grid_size < 101)
        throw DomainError("mean grid needs at least 101 points, got " + std::to_string(grid_size));
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(grid_size) + 2);
    for (int i = 0; i < grid_size; ++i)
        g.push_back(static_cast<double>(i) / (grid_size - 1));
    for (double special : {0.5, params.mu_bar()}) {
        bool present = false;
        for (double x : g)
            if (std::abs(x - special) <= 1e-13) {
                present = true;
                break;
            }
        if (!present) g.push_back(special);
    }
    std::sort(g.begin(), g.end());
    return g;
}

LPInstance build_lp_instance(const ModelParams& params, int grid_size) {
    LPInstance inst;
    inst.mean_grid = build_mean_grid(params, grid_size);
    const RFunction rf = make_r_function(params);
    inst.objective.reserve(inst.mean_grid.size());
    inst.mpc_rhs.reserve(inst.mean_grid.size());
    const double mu = params.mu_bar();
    for (std::size_t i = 0; i < inst.mean_grid.size(); ++i) {
        const double m = inst.mean_grid[i];
        inst.objective.push_back(r_value_best(m, rf));
        inst.mpc_rhs.push_back(prior::upper_tail(m));
        if (std::abs(m - mu) <= 1e-13) inst.mu_index = static_cast<int>(i);
    }
    return inst;
}

RelaxedSolution solve_relaxed_lp(const ModelParams& params, int grid_size, TieBreak tie) {
    (void)tie;  // the objective already carries the firm-favorable branch at mu_bar
    const LPInstance inst = build_lp_instance(params, grid_size);

    SigmaLpProblem lp;
    lp.nodes = inst.mean_grid;
    lp.cost = second_difference(inst.mean_grid, inst.objective);
    const SigmaLpSolution s = solve_sigma_lp(lp);

    const std::vector<double> rho = node_weights(inst.mean_grid);
    double base = 0.0;
    for (std::size_t j = 0; j < rho.size(); ++j) base += rho[j] * inst.objective[j];

    RelaxedSolution out;
    out.iterations = s.iterations;
    out.value = base - s.objective;

    double direct = 0.0;
    for (std::size_t j = 0; j < s.weights.size(); ++j)
        direct += s.weights[j] * inst.objective[j];
    if (std::abs(direct - out.value) > 1e-8 * std::max(1.0, std::abs(out.value)))
        throw ConsistencyError("LP value mismatch between sigma and weight forms");

    for (std::size_t j = 0; j < s.weights.size(); ++j) {
        if (s.weights[j] > 1e-14) {
            out.g.support.push_back(inst.mean_grid[j]);
            out.g.weights.push_back(s.weights[j]);
        }
    }
    // Normalize away the clamp residue; the mass error is O(1e-12).
    const double mass = out.g.mass();
    if (mass <= 0.0) throw InfeasibleError("LP returned an empty measure");
    for (double& w : out.g.weights) w /= mass;
    out.g.check(1e-7);
    return out;
}

PartitionResult partition_search(const ModelParams& params, int grid_size, TieBreak tie) {
    if (grid_size < 101) throw DomainError("partition grid needs at least 101 points");
    (void)tie;
    const RFunction rf = make_r_function(params);
    const int n = grid_size;
    std::vector<double> grid(n), prefix(n);
    for (int i = 0; i < n; ++i) grid[i] = static_cast<double>(i) / (n - 1);
    prefix[0] = 0.0;
    for (int i = 1; i < n; ++i)
        prefix[i] = prefix[i - 1] + r_integral(grid[i - 1], grid[i], rf);

    auto atom_value = [&](double lo, double hi) {
        return (hi - lo) * r_value_best(0.5 * (lo + hi), rf);
    };

    // Descending exclusion scan: where the payoff is affine the structures
    // tie, and the widest exclusion cell is the canonical representative.
    PartitionResult best;
    best.value = -1e300;
    for (int a = n - 1; a >= 0; --a) {
        const double head = a > 0 ? atom_value(0.0, grid[a]) : 0.0;
        for (int bidx = a; bidx < n; ++bidx) {
            const double mid = head + (prefix[bidx] - prefix[a]);
            for (int d = bidx; d < n; ++d) {
                const double v = mid + (d > bidx ? atom_value(grid[bidx], grid[d]) : 0.0) +
                                 (prefix[n - 1] - prefix[d]);
                if (v > best.value + 1e-15) {
                    best.value = v;
                    best.exclusion_hi = grid[a];
                    best.pool_lo = grid[bidx];
                    best.pool_hi = grid[d];
                }
            }
        }
    }
    // Canonical form: a pool starting at 0 is the exclusion cell, and an
    // empty pool collapses onto the exclusion boundary.
    if (best.exclusion_hi == 0.0 && best.pool_lo == 0.0 && best.pool_hi > 0.0) {
        best.exclusion_hi = best.pool_hi;
        best.pool_lo = best.pool_hi;
    }
    if (best.pool_hi <= best.pool_lo) best.pool_lo = best.pool_hi = best.exclusion_hi;
    return best;
}

DualCertificate build_certificate(const ModelParams& params, int breakpoints) {
    if (breakpoints < 101) throw DomainError("certificate needs at least 101 breakpoints");
    const RFunction rf = make_r_function(params);
    const double mu = params.mu_bar();
    const Regime regime = classify(params);

    // Pooled region [lo, hi] carrying the supporting chord.
    double chord_lo = 0.0, chord_hi = 0.0, chord_at_lo = 0.0, chord_slope = 0.0;
    switch (regime) {
        case Regime::MuLeQuarter: {
            // pi = m v_H up to 1/2 (a chord of the price-v_H branch), R above.
            chord_lo = 0.0;
            chord_hi = 0.5;
            chord_at_lo = 0.0;
            chord_slope = params.v_h;
            break;
        }
        case Regime::MuQuarterToHalf: {
            const double m_star = 2.0 * mu;
            const double r_mu = r_value(mu, rf, TieBreak::FavorHigh);
            const double r_ms = r_value_best(m_star, rf);
            chord_lo = 0.0;
            chord_hi = m_star;
            chord_slope = (r_ms - r_mu) / (m_star - mu);
            chord_at_lo = r_mu - chord_slope * mu;
            break;
        }
        case Regime::MuHalfToL:
        case Regime::MuAboveL: {
            const PoolingInterval iv = solve_pooling_interval(params);
            chord_lo = iv.m_lo;
            chord_hi = iv.m_hi;
            chord_at_lo = r_value(iv.m_lo, rf, TieBreak::FavorLow);
            const double r_hi = r_value_best(iv.m_hi, rf);
            chord_slope =
                iv.m_hi > iv.m_lo ? (r_hi - chord_at_lo) / (iv.m_hi - iv.m_lo) : 0.0;
            break;
        }
    }

    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(breakpoints) + 8);
    for (int i = 0; i < breakpoints; ++i)
        pts.push_back(static_cast<double>(i) / (breakpoints - 1));
    for (double s : {0.5, mu, chord_lo, chord_hi}) pts.push_back(std::clamp(s, 0.0, 1.0));
    std::sort(pts.begin(), pts.end());

    DualCertificate cert;
    for (double m : pts) {
        if (!cert.m.empty() && m - cert.m.back() < 1e-12) continue;
        double v;
        if (m >= chord_lo - 1e-15 && m <= chord_hi + 1e-15)
            v = chord_at_lo + chord_slope * (m - chord_lo);
        else
            v = r_value_best(m, rf);
        cert.m.push_back(m);
        cert.value.push_back(v);
    }
    return cert;
}

CertificateReport verify_certificate(const DualCertificate& pi, const ModelParams& params,
                                     const MeanDistribution& g, TieBreak tie) {
    (void)tie;
    if (pi.m.size() < 2) throw DomainError("certificate needs at least two breakpoints");
    CertificateReport rep;
    const RFunction rf = make_r_function(params);

    // Convexity: slopes nondecreasing across breakpoints.
    double worst_conc = 0.0;
    double prev_slope = -1e300;
    for (std::size_t i = 0; i + 1 < pi.m.size(); ++i) {
        const double slope = (pi.value[i + 1] - pi.value[i]) / (pi.m[i + 1] - pi.m[i]);
        if (i > 0) worst_conc = std::min(worst_conc, slope - prev_slope);
        prev_slope = slope;
    }
    rep.worst_concavity = worst_conc;
    rep.convex_ok = worst_conc >= -1e-7;

    // pi >= R on a dense grid (breakpoints plus a uniform refinement).
    double worst_maj = 0.0;
    auto probe = [&](double m) {
        worst_maj = std::min(worst_maj, pi.at(m) - r_value_best(m, rf));
    };
    for (double m : pi.m) probe(m);
    for (int i = 0; i <= 10000; ++i) probe(static_cast<double>(i) / 10000);
    rep.worst_majorize = worst_maj;
    rep.majorize_ok = worst_maj >= -1e-8;

    // Expectation equality: E_F1 pi by exact trapezoids over the breakpoints
    // (pi is piecewise linear), E_G pi over the support.
    double e_f1 = 0.0;
    for (std::size_t i = 0; i + 1 < pi.m.size(); ++i)
        e_f1 += 0.5 * (pi.value[i] + pi.value[i + 1]) * (pi.m[i + 1] - pi.m[i]);
    double e_g = 0.0;
    for (std::size_t i = 0; i < g.support.size(); ++i)
        e_g += g.weights[i] * pi.at(g.support[i]);
    rep.expectation_gap = std::abs(e_f1 - e_g);
    rep.expectation_ok = rep.expectation_gap <= 1e-6;

    // Contact on the support of G.
    double worst_touch = 0.0;
    for (std::size_t i = 0; i < g.support.size(); ++i) {
        if (g.weights[i] <= 1e-12) continue;
        worst_touch = std::max(worst_touch,
                               std::abs(pi.at(g.support[i]) - r_value_best(g.support[i], rf)));
    }
    rep.worst_touch = worst_touch;
    rep.touching_ok = worst_touch <= 1e-6;
    return rep;
}

bool check_convex_order(const MeanDistribution& g, int test_points, double tol) {
    if (std::abs(g.mean() - prior::kMean) > tol) return false;
    if (std::abs(g.mass() - 1.0) > tol) return false;

    std::vector<double> sup = g.support;
    std::sort(sup.begin(), sup.end());
    auto tail_at = [&](double t) {
        double tail = 0.0;
        for (std::size_t j = 0; j < g.support.size(); ++j)
            tail += g.weights[j] * std::max(g.support[j] - t, 0.0);
        return tail;
    };
    // Exact check at the kinks of the tail function. Между kinks a measure
    // lumped onto a grid may exceed the prior's strictly convex tail by the
    // lumping slack (local spacing)^2/8, which vanishes as grids refine;
    // that slack is allowed at off-support test points.
    for (double t : sup)
        if (tail_at(t) > prior::upper_tail(t) + tol) return false;
    for (int i = 0; i < test_points; ++i) {
        const double t = static_cast<double>(i) / (test_points - 1);
        auto up = std::upper_bound(sup.begin(), sup.end(), t);
        double gap = 0.0;
        if (up != sup.begin() && up != sup.end()) gap = *up - *(up - 1);
        // capped so that sparsely supported spreads cannot hide in it
        const double allowance = std::min(0.125 * gap * gap, 2e-5);
        if (tail_at(t) > prior::upper_tail(t) + tol + allowance) return false;
    }
    return true;
}

MeanDistribution cluster_support(const MeanDistribution& g, double tol) {
    MeanDistribution out;
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < g.support.size(); ++i)
        pts.push_back({g.support[i], g.weights[i]});
    std::sort(pts.begin(), pts.end());
    double mass = 0.0, moment = 0.0, anchor = 0.0;
    auto flush = [&]() {
        if (mass > 0.0) {
            out.support.push_back(moment / mass);
            out.weights.push_back(mass);
        }
        mass = moment = 0.0;
    };
    for (auto [m, w] : pts) {
        if (mass > 0.0 && m - anchor > tol) flush();
        if (mass == 0.0) anchor = m;
        mass += w;
        moment += w * m;
        anchor = m;
    }
    flush();
    return out;
}

}  // namespace prodline

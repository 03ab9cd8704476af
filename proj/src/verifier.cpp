#include "prodline/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "prodline/envelope.hpp"
#include "prodline/oracle.hpp"
#include "prodline/pricing.hpp"
#include "prodline/surplus.hpp"

namespace prodline {

namespace {
std::vector<double> uniform_nodes(int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = static_cast<double>(i) / (n - 1);
    return v;
}
}  // namespace

double consumer_utility(double theta, double report, const Schedule& s) {
    if (theta < -1e-12 || theta > 1.0 + 1e-12 || report < -1e-12 || report > 1.0 + 1e-12)
        throw DomainError("type or report outside [0,1]");
    const Segment& seg = s.segment_at(report);
    const double d =
        std::abs(seg.price2 - s.params.v_l) <= kClosedFormTol ? s.params.delta_v() : 0.0;
    return theta * seg.quality.at(report) - seg.transfer.at(report) + theta * d;
}

double ic_check(const Schedule& s, int report_grid, int type_grid) {
    if (report_grid < 1001 || type_grid < 1001)
        throw DomainError("IC grids must have at least 1001 points");
    // Precompute the menu the reports span; the inner maximization is then a
    // scan over (quality, rent-slope, transfer) triples.
    std::vector<double> q(report_grid), x(report_grid), slope(report_grid);
    for (int r = 0; r < report_grid; ++r) {
        const double rep = static_cast<double>(r) / (report_grid - 1);
        const Segment& seg = s.segment_at(rep);
        q[r] = seg.quality.at(rep);
        x[r] = seg.transfer.at(rep);
        slope[r] =
            std::abs(seg.price2 - s.params.v_l) <= kClosedFormTol ? s.params.delta_v() : 0.0;
    }
    double worst = 0.0;
    for (int i = 0; i < type_grid; ++i) {
        const double th = static_cast<double>(i) / (type_grid - 1);
        double best = -1e300;
        for (int r = 0; r < report_grid; ++r) {
            const double u = th * (q[r] + slope[r]) - x[r];
            if (u > best) best = u;
        }
        const double truthful = consumer_utility(th, th, s);
        worst = std::max(worst, best - truthful);
    }
    return worst;
}

double ir_check(const Schedule& s, int type_grid) {
    if (type_grid < 1001) throw DomainError("IR grid must have at least 1001 points");
    double lo = 1e300;
    for (int i = 0; i < type_grid; ++i) {
        const double th = static_cast<double>(i) / (type_grid - 1);
        lo = std::min(lo, consumer_utility(th, th, s));
    }
    return lo;
}

SeqRatReport sequential_rationality_check(const Schedule& s, const ModelParams& params) {
    SeqRatReport rep;
    const TieBreak tie = s.regime == ScheduleRegime::LimitedCommitment
                             ? regime_tie(params)
                             : (params.mu_bar() > 0.5 ? TieBreak::FavorLow : TieBreak::FavorHigh);
    const double mu = params.mu_bar();
    for (std::size_t i = 0; i < s.segments.size(); ++i) {
        const Segment& seg = s.segments[i];
        if (seg.hi <= seg.lo) continue;
        double bad_mass = 0.0;
        if (seg.kind == SegmentKind::Separating) {
            // Pointwise revelation: the price must best-respond to each type.
            const bool low = std::abs(seg.price2 - params.v_l) <= kClosedFormTol;
            if (low)
                bad_mass = std::max(0.0, seg.hi - std::max(seg.lo, mu + kTieTol));
            else
                bad_mass = std::max(0.0, std::min(seg.hi, mu - kTieTol) - seg.lo);
        } else {
            const double mean = 0.5 * (seg.lo + seg.hi);
            const double br = period2_price(mean, params, tie);
            if (std::abs(br - seg.price2) > kClosedFormTol) bad_mass = seg.hi - seg.lo;
        }
        if (bad_mass > 1e-12) {
            rep.ok = false;
            if (rep.offending_segment < 0 || bad_mass > rep.offending_mass) {
                rep.offending_segment = static_cast<int>(i);
                rep.offending_mass = std::max(rep.offending_mass, bad_mass);
            }
        }
    }
    return rep;
}

bool bayes_plausibility_check(const MeanDistribution& g) {
    for (double w : g.weights)
        if (w < -1e-9) return false;
    if (std::abs(g.mass() - 1.0) > 1e-9) return false;
    return check_convex_order(g);
}

double schedule_revenue_quadrature(const Schedule& s, int points_per_segment) {
    if (points_per_segment < 3) throw DomainError("need at least 3 quadrature points");
    if (points_per_segment % 2 == 0) ++points_per_segment;
    double total = 0.0;
    for (const Segment& seg : s.segments) {
        if (seg.hi <= seg.lo) continue;
        const bool low = std::abs(seg.price2 - s.params.v_l) <= kClosedFormTol;
        auto f = [&](double th) {
            const double q = seg.quality.at(th);
            const double per2 = low ? s.params.v_l : th * s.params.v_h;
            return seg.transfer.at(th) - 0.5 * s.params.c * q * q + per2;
        };
        // Composite Simpson; the integrand is quadratic per segment, so this
        // is exact up to rounding.
        const int n = points_per_segment - 1;
        const double h = (seg.hi - seg.lo) / n;
        double acc = f(seg.lo) + f(seg.hi);
        for (int i = 1; i < n; ++i) acc += f(seg.lo + i * h) * (i % 2 ? 4.0 : 2.0);
        total += acc * h / 3.0;
    }
    return total;
}

double revenue_consistency(const Schedule& s, const ModelParams& params) {
    const double transfer_side = schedule_revenue_quadrature(s);
    const double mean_side = induced_law(s).scheduled_expectation(params);
    return std::abs(transfer_side - mean_side);
}

VerificationReport verify_schedule(const Schedule& s, const ModelParams& params, int grid) {
    VerificationReport rep;
    rep.report_grid = grid;
    rep.type_grid = grid;
    rep.ic_violation = ic_check(s, grid, grid);
    const double u_min = ir_check(s, grid);
    rep.ir_violation = std::max(0.0, -u_min);

    const InducedLaw law = induced_law(s);
    const MeanDistribution g = law.discretize(uniform_nodes(grid));
    rep.bp_ok = bayes_plausibility_check(g);
    double worst = std::abs(g.mean() - prior::kMean);
    for (int i = 0; i < 1001; ++i) {
        const double t = static_cast<double>(i) / 1000;
        worst = std::max(worst, law.upper_tail(t) - prior::upper_tail(t));
    }
    rep.bp_violation = std::max(0.0, worst);

    const SeqRatReport sr = sequential_rationality_check(s, params);
    rep.seq_rationality_ok = sr.ok;
    rep.seq_offending_segment = sr.offending_segment;

    rep.revenue_gap = revenue_consistency(s, params);

    double prev = u_prime(0.0, s);
    rep.mono_worst_drop = 0.0;
    for (int i = 1; i < grid; ++i) {
        const double th = static_cast<double>(i) / (grid - 1);
        const double cur = u_prime(th, s);
        rep.mono_worst_drop = std::max(rep.mono_worst_drop, prev - cur);
        prev = cur;
    }
    rep.monotonicity_ok = rep.mono_worst_drop <= kClosedFormTol;
    return rep;
}

}  // namespace prodline

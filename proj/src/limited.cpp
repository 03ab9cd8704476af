#include "prodline/limited.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "prodline/envelope.hpp"
#include "prodline/pricing.hpp"

namespace prodline {

namespace {
constexpr double kBracketSlack = 1e-9;
constexpr double kRootResidualTol = 1e-10;

// Roots of a*x^2 + b*x + d with a stable discriminant evaluation.
std::vector<double> quadratic_roots(const Quadratic& q) {
    const double disc = q.b * q.b - 4.0 * q.a * q.d;
    if (disc < 0.0) return {};
    const double sq = std::sqrt(disc);
    const double r1 = (-q.b - sq) / (2.0 * q.a);
    const double r2 = (-q.b + sq) / (2.0 * q.a);
    return {std::min(r1, r2), std::max(r1, r2)};
}

double pick_root_in(const std::vector<double>& roots, double lo, double hi, const char* what) {
    std::vector<double> in;
    for (double r : roots)
        if (r >= lo - kBracketSlack && r <= hi + kBracketSlack) in.push_back(r);
    if (in.size() != 1)
        throw NoRootError(std::string(what) + ": expected exactly one root in [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "], found " +
                          std::to_string(in.size()));
    return std::clamp(in.front(), lo, hi);
}
}  // namespace

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::MuLeQuarter: return "MuLeQuarter";
        case Regime::MuQuarterToHalf: return "MuQuarterToHalf";
        case Regime::MuHalfToL: return "MuHalfToL";
        case Regime::MuAboveL: return "MuAboveL";
    }
    return "?";
}

double l_threshold(double c_normalized) {
    if (!(c_normalized > 0.0)) throw NonPositiveError("l_threshold needs c > 0");
    return (2.0 + 3.0 * c_normalized) / (4.0 * (1.0 + c_normalized));
}

Regime classify(const ModelParams& params) {
    const double mu = params.mu_bar();
    if (mu <= 0.25) return Regime::MuLeQuarter;
    if (mu < 0.5) return Regime::MuQuarterToHalf;
    if (mu < l_threshold(params.c * params.v_h)) return Regime::MuHalfToL;
    return Regime::MuAboveL;
}

double solve_m_star_low(const ModelParams& params) {
    if (classify(params) != Regime::MuQuarterToHalf)
        throw RegimeError("solve_m_star_low needs mu_bar in (1/4, 1/2)");
    const double m_star = 2.0 * params.mu_bar();
    if (m_star < 0.5) throw ConsistencyError("m* below 1/2");
    return m_star;
}

Quadratic pooling_quadratic_h1(const ModelParams& params) {
    // R(2mu - x) + R(x) - 2 R(mu) with x = m^* in (mu, 1], m_* = 2mu - x <= 1/2:
    //   v_H (2mu-1)(x-1) + [(2x-1)^2 - 2(2mu-1)^2] / (2c) = 0.
    const double mu = params.mu_bar();
    const double w = 2.0 * mu - 1.0;
    Quadratic q;
    q.a = 2.0 / params.c;
    q.b = params.v_h * w - 2.0 / params.c;
    q.d = 0.5 / params.c - w * w / params.c - params.v_h * w;
    return q;
}

Quadratic pooling_quadratic_h2(const ModelParams& params) {
    // Same chord condition with x = m_* in [1/2, mu), m^* = 2mu - x <= 1:
    //   v_H (1-2mu)(x+1-2mu) + 4 (x-mu)^2 / c = 0.
    const double mu = params.mu_bar();
    const double w = 2.0 * mu - 1.0;
    Quadratic q;
    q.a = 4.0 / params.c;
    q.b = -(8.0 * mu / params.c + params.v_h * w);
    q.d = 4.0 * mu * mu / params.c + params.v_h * w * w;
    return q;
}

PoolingInterval solve_pooling_interval(const ModelParams& params) {
    const double mu = params.mu_bar();
    if (mu < 0.5 - kTieTol) throw RegimeError("pooling interval defined for mu_bar >= 1/2");
    if (std::abs(mu - 0.5) <= kTieTol) return {0.5, 0.5};

    PoolingInterval iv;
    if (classify(params) == Regime::MuHalfToL) {
        const Quadratic h1 = pooling_quadratic_h1(params);
        iv.m_hi = pick_root_in(quadratic_roots(h1), mu, 1.0, "h1 root m^*");
        iv.m_lo = 2.0 * mu - iv.m_hi;
        if (iv.m_lo > 0.5 + kBracketSlack)
            throw NoRootError("m_* above 1/2 in the low structure");
        if (std::abs(h1.eval(iv.m_hi)) > kRootResidualTol)
            throw ConsistencyError("h1 residual too large at m^*");
    } else {
        const Quadratic h2 = pooling_quadratic_h2(params);
        iv.m_lo = pick_root_in(quadratic_roots(h2), 0.5, mu, "h2 root m_*");
        iv.m_hi = 2.0 * mu - iv.m_lo;
        if (iv.m_hi > 1.0 + kBracketSlack)
            throw NoRootError("m^* above 1 in the high structure");
        if (std::abs(h2.eval(iv.m_lo)) > kRootResidualTol)
            throw ConsistencyError("h2 residual too large at m_*");
    }
    iv.m_lo = std::clamp(iv.m_lo, 0.0, 1.0);
    iv.m_hi = std::clamp(iv.m_hi, 0.0, 1.0);
    if (std::abs(0.5 * (iv.m_lo + iv.m_hi) - mu) > kClosedFormTol)
        throw ConsistencyError("pooled cell mean does not hit mu_bar");
    return iv;
}

TieBreak regime_tie(const ModelParams& params) {
    return params.mu_bar() >= 0.5 ? TieBreak::FavorLow : TieBreak::FavorHigh;
}

namespace {
Segment make_exclusion(double lo, double hi, double price) {
    Segment s;
    s.lo = lo;
    s.hi = hi;
    s.kind = SegmentKind::Exclusion;
    s.quality = QualityRule::constant(0.0);
    s.price2 = price;
    s.cell_mean = 0.5 * (lo + hi);
    return s;
}

Segment make_separating(double lo, double hi, double price, const ModelParams& p) {
    Segment s;
    s.lo = lo;
    s.hi = hi;
    s.kind = SegmentKind::Separating;
    s.quality = QualityRule::affine(2.0 / p.c, -1.0 / p.c);
    s.price2 = price;
    s.cell_mean = 0.5 * (lo + hi);
    return s;
}

Segment make_pooling(double lo, double hi, double quality, double price) {
    Segment s;
    s.lo = lo;
    s.hi = hi;
    s.kind = SegmentKind::Pooling;
    s.quality = QualityRule::constant(quality);
    s.price2 = price;
    s.cell_mean = 0.5 * (lo + hi);
    return s;
}
}  // namespace

Schedule limited_schedule(const ModelParams& params) {
    const double mu = params.mu_bar();
    const double vl = params.v_l;
    const double vh = params.v_h;

    Schedule s;
    s.params = params;
    s.regime = ScheduleRegime::LimitedCommitment;

    switch (classify(params)) {
        case Regime::MuLeQuarter:
            s.segments = {make_exclusion(0.0, 0.5, vh), make_separating(0.5, 1.0, vh, params)};
            break;
        case Regime::MuQuarterToHalf: {
            const double m_star = solve_m_star_low(params);
            s.segments = {make_exclusion(0.0, m_star, vh),
                          make_separating(m_star, 1.0, vh, params)};
            break;
        }
        case Regime::MuHalfToL: {
            const PoolingInterval iv = solve_pooling_interval(params);
            const double qp = (2.0 * mu - 1.0) / params.c;
            s.segments = {make_exclusion(0.0, iv.m_lo, vl),
                          make_pooling(iv.m_lo, iv.m_hi, qp, vl),
                          make_separating(iv.m_hi, 1.0, vh, params)};
            break;
        }
        case Regime::MuAboveL: {
            const PoolingInterval iv = solve_pooling_interval(params);
            const double qp = (2.0 * mu - 1.0) / params.c;
            s.segments = {make_exclusion(0.0, 0.5, vl),
                          make_separating(0.5, iv.m_lo, vl, params),
                          make_pooling(iv.m_lo, iv.m_hi, qp, vl),
                          make_separating(iv.m_hi, 1.0, vh, params)};
            break;
        }
    }
    limited_transfers(s);
    check_schedule(s);
    return s;
}

Schedule& limited_transfers(Schedule& s, double tol) {
    const ModelParams& p = s.params;
    const double mu = p.mu_bar();
    const double dv = p.delta_v();
    const double c = p.c;
    const double qp = (2.0 * mu - 1.0) / c;

    switch (classify(p)) {
        case Regime::MuLeQuarter: {
            // x1 = (theta^2 - 1/4)/c on the separating top, 0 below.
            s.segments[0].transfer = TransferRule::constant(0.0);
            s.segments[1].transfer = TransferRule::quadratic(-0.25 / c, 0.0, 1.0 / c);
            break;
        }
        case Regime::MuQuarterToHalf: {
            const double m_star = s.segments[0].hi;
            s.segments[0].transfer = TransferRule::constant(0.0);
            s.segments[1].transfer =
                TransferRule::quadratic(-m_star * (1.0 - m_star) / c, 0.0, 1.0 / c);
            break;
        }
        case Regime::MuHalfToL: {
            const double m_lo = s.segments[1].lo;
            const double m_hi = s.segments[1].hi;
            s.segments[0].transfer = TransferRule::constant(0.0);
            s.segments[1].transfer = TransferRule::constant(m_lo * qp);
            // Top types prepay their pooled-history rent net of the lost
            // period-2 rent dv*m^*.
            const double c0 = (m_hi * m_hi - m_hi) / c - dv * m_hi - (m_hi - m_lo) * qp;
            s.segments[2].transfer = TransferRule::quadratic(c0, 0.0, 1.0 / c);
            break;
        }
        case Regime::MuAboveL: {
            const double m_lo = s.segments[2].lo;
            const double m_hi = s.segments[2].hi;
            const double lead = (m_lo - 0.5) * (m_lo - 0.5) / c;
            s.segments[0].transfer = TransferRule::constant(0.0);
            s.segments[1].transfer = TransferRule::quadratic(-0.25 / c, 0.0, 1.0 / c);
            s.segments[2].transfer = TransferRule::constant(m_lo * qp - lead);
            const double c0 =
                (m_hi * m_hi - m_hi) / c - dv * m_hi - qp * (m_hi - m_lo) - lead;
            s.segments[3].transfer = TransferRule::quadratic(c0, 0.0, 1.0 / c);
            break;
        }
    }

    const double gap = envelope_transfer_gap(s);
    if (gap > tol)
        throw ConsistencyError("closed-form transfers disagree with envelope integration by " +
                               std::to_string(gap));
    return s;
}

MonotonicityReport monotonicity_check(const ModelParams& params, int grid_points) {
    MonotonicityReport rep;
    rep.regime = classify(params);
    const double mu = params.mu_bar();
    const double cn = params.c * params.v_h;  // curvature in v_H-normalized money

    switch (rep.regime) {
        case Regime::MuLeQuarter:
        case Regime::MuQuarterToHalf:
            rep.analytic_weak_ok = rep.analytic_strict_ok = true;
            break;
        case Regime::MuHalfToL:
            rep.analytic_weak_ok = rep.analytic_strict_ok = false;
            break;
        case Regime::MuAboveL:
            rep.analytic_weak_ok = mu >= (1.0 + cn) / (2.0 + cn) - kTieTol;
            rep.analytic_strict_ok = mu >= (2.0 + cn) / 4.0 - kTieTol;
            break;
    }
    rep.analytic_ok = rep.analytic_strict_ok;
    rep.conditions_disagree = rep.analytic_weak_ok != rep.analytic_strict_ok;

    const Schedule sched = limited_schedule(params);
    rep.numeric_ok = true;
    double prev = u_prime(0.0, sched);
    for (int i = 1; i < grid_points; ++i) {
        const double th = static_cast<double>(i) / (grid_points - 1);
        const double cur = u_prime(th, sched);
        const double drop = prev - cur;
        if (drop > rep.worst_drop) {
            rep.worst_drop = drop;
            rep.worst_at = th;
        }
        prev = cur;
    }
    rep.numeric_ok = rep.worst_drop <= kClosedFormTol;
    return rep;
}

double limited_revenue(const ModelParams& params) {
    const Schedule s = limited_schedule(params);
    const RFunction rf = make_r_function(params);
    return induced_law(s).r_expectation(rf, regime_tie(params));
}

}  // namespace prodline

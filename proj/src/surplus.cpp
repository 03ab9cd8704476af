#include "prodline/surplus.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace prodline {

namespace {
void require_mean(double mean) {
    if (mean < -kTieTol || mean > 1.0 + kTieTol)
        throw DomainError("posterior mean outside [0,1]: " + std::to_string(mean));
}

double low_price_term(double m, const ModelParams& p) {
    return 2.0 * m * p.delta_v() + 2.0 * p.v_l - p.v_h;
}

// Antiderivative of the period-2 component on a fixed price branch.
double per2_antideriv(double m, bool price_low, const ModelParams& p) {
    if (price_low) return p.delta_v() * m * m + (2.0 * p.v_l - p.v_h) * m;
    return 0.5 * p.v_h * m * m;
}

// Antiderivative of the quality term above 1/2.
double quad_antideriv(double m, const ModelParams& p) {
    const double z = 2.0 * m - 1.0;
    return z * z * z / (12.0 * p.c);
}

// Integral of the virtual surplus over [a,b] with a fixed price branch.
double branch_integral(double a, double b, bool price_low, const ModelParams& p) {
    if (b <= a) return 0.0;
    double v = per2_antideriv(b, price_low, p) - per2_antideriv(a, price_low, p);
    const double qa = std::max(a, 0.5);
    const double qb = std::max(b, 0.5);
    if (qb > qa) v += quad_antideriv(qb, p) - quad_antideriv(qa, p);
    return v;
}
}  // namespace

RFunction make_r_function(const ModelParams& params) {
    RFunction rf;
    rf.params = params;
    rf.branch = params.mu_bar() >= 0.5 ? RBranch::MuAboveHalf : RBranch::MuBelowHalf;
    return rf;
}

double quality_given_mean(double mean, const ModelParams& params) {
    require_mean(mean);
    return std::max(0.0, (2.0 * mean - 1.0) / params.c);
}

double r_quality_term(double mean, const ModelParams& params) {
    require_mean(mean);
    const double z = std::max(2.0 * mean - 1.0, 0.0);
    return z * z / (2.0 * params.c);
}

double r_period2_term(double mean, const RFunction& rf, TieBreak tie) {
    require_mean(mean);
    if (q2_serves_low(mean, rf.params, tie)) return low_price_term(mean, rf.params);
    return mean * rf.params.v_h;
}

double r_value(double mean, const RFunction& rf, TieBreak tie) {
    return r_quality_term(mean, rf.params) + r_period2_term(mean, rf, tie);
}

double r_value_best(double mean, const RFunction& rf) {
    // The firm-favorable branch at mu_bar is v_L exactly when mu_bar >= 1/2.
    const TieBreak tie =
        rf.branch == RBranch::MuAboveHalf ? TieBreak::FavorLow : TieBreak::FavorHigh;
    return r_value(mean, rf, tie);
}

double r_integral(double a, double b, const RFunction& rf) {
    if (b < a) throw DomainError("r_integral: b < a");
    const double mu = rf.params.mu_bar();
    const double lo_hi = std::clamp(mu, a, b);
    return branch_integral(a, lo_hi, true, rf.params) +
           branch_integral(lo_hi, b, false, rf.params);
}

double revenue_of_distribution(const MeanDistribution& g, const RFunction& rf, TieBreak tie) {
    double v = 0.0;
    for (std::size_t i = 0; i < g.support.size(); ++i)
        v += g.weights[i] * r_value(g.support[i], rf, tie);
    return v;
}

double InducedLaw::mass() const {
    double t = 0.0;
    for (const Atom& a : atoms) t += a.mass;
    for (const Piece& p : pieces) t += p.hi - p.lo;
    return t;
}

double InducedLaw::mean() const {
    double t = 0.0;
    for (const Atom& a : atoms) t += a.mass * a.m;
    for (const Piece& p : pieces) t += 0.5 * (p.hi * p.hi - p.lo * p.lo);
    return t;
}

double InducedLaw::upper_tail(double t) const {
    double v = 0.0;
    for (const Atom& a : atoms) v += a.mass * std::max(a.m - t, 0.0);
    for (const Piece& p : pieces) {
        if (t >= p.hi) continue;
        const double lo = std::max(p.lo, t);
        v += 0.5 * ((p.hi - t) * (p.hi - t) - (lo - t) * (lo - t));
    }
    return v;
}

double InducedLaw::r_expectation(const RFunction& rf, TieBreak tie) const {
    double v = 0.0;
    for (const Atom& a : atoms) v += a.mass * r_value(a.m, rf, tie);
    for (const Piece& p : pieces) v += r_integral(p.lo, p.hi, rf);
    return v;
}

double InducedLaw::scheduled_expectation(const ModelParams& params) const {
    double v = 0.0;
    for (const Atom& a : atoms) {
        const double per2 = a.price_low ? low_price_term(a.m, params) : a.m * params.v_h;
        v += a.mass * (r_quality_term(a.m, params) + per2);
    }
    for (const Piece& p : pieces) v += branch_integral(p.lo, p.hi, p.price_low, params);
    return v;
}

MeanDistribution InducedLaw::discretize(const std::vector<double>& nodes) const {
    if (nodes.size() < 2) throw DomainError("discretize: need at least two nodes");
    MeanDistribution g;
    std::vector<double> w(nodes.size(), 0.0);
    for (const Piece& p : pieces) {
        for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
            const double x0 = std::max(p.lo, nodes[j]);
            const double x1 = std::min(p.hi, nodes[j + 1]);
            if (x1 <= x0) continue;
            const double mass = x1 - x0;
            const double mid = 0.5 * (x0 + x1);
            const double frac = (mid - nodes[j]) / (nodes[j + 1] - nodes[j]);
            w[j] += mass * (1.0 - frac);
            w[j + 1] += mass * frac;
        }
    }
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        if (w[j] != 0.0) {
            g.support.push_back(nodes[j]);
            g.weights.push_back(w[j]);
        }
    }
    for (const Atom& a : atoms) {
        g.support.push_back(a.m);
        g.weights.push_back(a.mass);
    }
    return g;
}

}  // namespace prodline

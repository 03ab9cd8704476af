#pragma once

#include "prodline/commitment.hpp"
#include "prodline/model.hpp"
#include "prodline/surplus.hpp"

namespace prodline {

/// Product-line structure cases under limited commitment, classified by
/// mu_bar against {1/4, 1/2, l(c)}.
enum class Regime { MuLeQuarter, MuQuarterToHalf, MuHalfToL, MuAboveL };

const char* regime_name(Regime r);

/// Threshold l(c) = (2+3c)/(4(1+c)) separating the two product-line
/// structures when mu_bar >= 1/2. Takes the money-normalized curvature,
/// i.e. c*v_H for general units.
double l_threshold(double c_normalized);

Regime classify(const ModelParams& params);

/// Exclusion threshold for MuQuarterToHalf: the unique m* with
/// E[theta | theta <= m*] = mu_bar, i.e. m* = 2*mu_bar.
double solve_m_star_low(const ModelParams& params);

/// Pooled cell [m_lo, m_hi] whose conditional mean is mu_bar.
struct PoolingInterval {
    double m_lo = 0.0;  // m_*
    double m_hi = 0.0;  // m^*
};

/// Quadratic a*x^2 + b*x + d.
struct Quadratic {
    double a = 0.0, b = 0.0, d = 0.0;
    double eval(double x) const { return (a * x + b) * x + d; }
};

/// Chord condition R(2*mu - x) + R(x) = 2*R(mu) written as a quadratic in
/// x = m^* (valid when m_* <= 1/2). Equals the normalized h1 at v_H = 1.
Quadratic pooling_quadratic_h1(const ModelParams& params);

/// Same condition as a quadratic in x = m_* (valid when m_* >= 1/2).
/// Equals the normalized h2 at v_H = 1.
Quadratic pooling_quadratic_h2(const ModelParams& params);

/// Solves the pooling boundaries for mu_bar >= 1/2. Returns the degenerate
/// interval {1/2, 1/2} at mu_bar = 1/2. Throws RegimeError below 1/2 and
/// NoRootError when no root lies in the required bracket.
PoolingInterval solve_pooling_interval(const ModelParams& params);

/// Assembles the limited-commitment product line for the regime, with
/// closed-form transfers cross-checked against envelope integration.
Schedule limited_schedule(const ModelParams& params);

/// Fills (or refills) the schedule's transfers from the closed-form tables
/// and validates them against numeric envelope integration with U(0) = 0.
/// Throws ConsistencyError when the two routes disagree beyond tol.
Schedule& limited_transfers(Schedule& s, double tol = 1e-6);

struct MonotonicityReport {
    Regime regime = Regime::MuLeQuarter;
    bool analytic_ok = false;         // headline verdict (the strict condition)
    bool analytic_weak_ok = false;    // weaker threshold mu_bar >= (1+c)/(2+c)
    bool analytic_strict_ok = false;  // exact threshold mu_bar >= (2+c)/4
    bool conditions_disagree = false;
    bool numeric_ok = false;
    double worst_drop = 0.0;
    double worst_at = 0.0;
};

/// Checks whether U' is nondecreasing for the regime's schedule, both via
/// closed-form conditions and on a type grid. Two closed-form thresholds
/// circulate for the top regime and disagree on a parameter band; both are
/// reported and the numeric verdict is authoritative.
MonotonicityReport monotonicity_check(const ModelParams& params, int grid_points = 10001);

/// Revenue of the limited-commitment product line (exact, via the induced
/// law over posterior means).
double limited_revenue(const ModelParams& params);

/// Tie rule the regime needs at cells whose mean sits exactly on mu_bar.
TieBreak regime_tie(const ModelParams& params);

}  // namespace prodline

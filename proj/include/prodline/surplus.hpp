#pragma once

#include <vector>

#include "prodline/model.hpp"
#include "prodline/pricing.hpp"

namespace prodline {

enum class RBranch { MuBelowHalf, MuAboveHalf };

/// The firm's expected virtual surplus as a function of the posterior mean,
/// R(m). It is the sum of the period-1 quality profit at the mean-optimal
/// quality and the rent-adjusted period-2 term implied by the sequentially
/// rational price.
struct RFunction {
    ModelParams params;
    RBranch branch = RBranch::MuBelowHalf;
};

RFunction make_r_function(const ModelParams& params);

/// Mean-optimal period-1 quality max{0, (2m-1)/c}.
double quality_given_mean(double mean, const ModelParams& params);

/// Period-1 component of R: (max{2m-1, 0})^2 / (2c). Independent of v_H.
double r_quality_term(double mean, const ModelParams& params);

/// Period-2 component of R: m*v_H when the price is v_H, and
/// 2m*dv + 2v_L - v_H (the rent-adjusted low-price surplus) when it is v_L.
double r_period2_term(double mean, const RFunction& rf, TieBreak tie);

/// Full posterior-mean payoff R(m).
double r_value(double mean, const RFunction& rf, TieBreak tie);

/// R(m) with the indifference at mu_bar resolved in the firm's favor.
double r_value_best(double mean, const RFunction& rf);

/// Exact integral of R over [a,b] (piecewise polynomial antiderivatives;
/// branch boundaries contribute zero measure so the tie rule is immaterial).
double r_integral(double a, double b, const RFunction& rf);

/// Sum of g_i * R(m_i).
double revenue_of_distribution(const MeanDistribution& g, const RFunction& rf, TieBreak tie);

/// A distribution over posterior means that mixes atoms with uniform-density
/// pieces, the exact law induced by a partitional schedule.
struct InducedLaw {
    struct Atom {
        double m;
        double mass;
        bool price_low;  // period-2 price posted on the generating cell
    };
    struct Piece {
        double lo;
        double hi;  // uniform density 1 on [lo, hi]
        bool price_low;
    };
    std::vector<Atom> atoms;
    std::vector<Piece> pieces;

    double mass() const;
    double mean() const;
    /// E[(m - t)^+] under the law.
    double upper_tail(double t) const;
    /// Expectation of R with prices chosen by the sequentially rational rule.
    double r_expectation(const RFunction& rf, TieBreak tie) const;
    /// Expectation of the virtual surplus with prices as recorded on the law
    /// (the schedule's prices, which may differ from the best response).
    double scheduled_expectation(const ModelParams& params) const;
    /// Lumps the uniform pieces onto the given ascending node set (exact for
    /// the mass and the mean) and keeps atoms as-is.
    MeanDistribution discretize(const std::vector<double>& nodes) const;
};

}  // namespace prodline

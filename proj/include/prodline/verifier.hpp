#pragma once

#include <vector>

#include "prodline/commitment.hpp"
#include "prodline/limited.hpp"
#include "prodline/model.hpp"

namespace prodline {

/// Expected payoff of a type who reported `report` in period 1 and plays
/// optimally afterwards: the report selects the cell, the true type values
/// it. theta*q1(r) - x1(r) + theta*dv*[price2(r) = v_L].
double consumer_utility(double theta, double report, const Schedule& s);

/// Max gain from misreporting over a report x type grid. Nonpositive (up to
/// rounding) for incentive-compatible schedules.
double ic_check(const Schedule& s, int report_grid = 2001, int type_grid = 2001);

/// Min of U(theta) over a type grid; participation requires >= 0.
double ir_check(const Schedule& s, int type_grid = 2001);

struct SeqRatReport {
    bool ok = true;
    int offending_segment = -1;
    double offending_mass = 0.0;  // type mass priced away from the best response
};

/// Recomputes each cell's posterior mean and compares the recorded period-2
/// price with the sequentially rational one under the regime's tie rule.
SeqRatReport sequential_rationality_check(const Schedule& s, const ModelParams& params);

/// Mean 1/2 plus convex-order dominance against the uniform prior.
bool bayes_plausibility_check(const MeanDistribution& g);

/// |transfer-based revenue - posterior-mean-form revenue| for the schedule.
/// Both sides use the schedule's own prices.
double revenue_consistency(const Schedule& s, const ModelParams& params);

/// Transfer-based revenue by per-segment quadrature: transfers minus quality
/// cost plus expected period-2 revenue.
double schedule_revenue_quadrature(const Schedule& s, int points_per_segment = 2001);

/// Runs every check and aggregates the outcome.
VerificationReport verify_schedule(const Schedule& s, const ModelParams& params,
                                   int grid = 2001);

}  // namespace prodline

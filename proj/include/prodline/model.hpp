#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "prodline/errors.hpp"

namespace prodline {

/// Default tolerance for closed-form equality checks.
inline constexpr double kClosedFormTol = 1e-9;

/// Primitive parameters of the two-period model: the period-2 valuations
/// v_L < v_H, the quality cost coefficient c (cost c*q^2/2), and an optional
/// quality cap. The consumer's period-1 type is uniform on [0,1] and the
/// probability of the high period-2 valuation equals the type.
struct ModelParams {
    double v_l = 0.0;
    double v_h = 0.0;
    double c = 0.0;
    double quality_cap = std::numeric_limits<double>::infinity();

    /// Posterior-mean threshold at which the period-2 firm is indifferent
    /// between posting v_L and v_H.
    double mu_bar() const { return v_l / v_h; }

    /// v_H - v_L, the high type's period-2 rent under a low price.
    double delta_v() const { return v_h - v_l; }
};

/// Checks the parameter invariants and returns the validated params.
/// Throws OrderingError, NonPositiveError or CapTooSmallError.
ModelParams validate(ModelParams raw);

/// The fixed period-1 prior: uniform on [0,1], with the high-valuation
/// probability p(theta) = theta.
namespace prior {
inline double cdf(double theta) { return theta; }
inline double pdf(double) { return 1.0; }
inline constexpr double kMean = 0.5;
inline double p(double theta) { return theta; }
inline double p_prime(double) { return 1.0; }
/// E[(theta - t)^+] under the uniform prior.
inline double upper_tail(double t) { return 0.5 * (1.0 - t) * (1.0 - t); }
}  // namespace prior

enum class ScheduleRegime { FirstBest, FullCommitment, LimitedCommitment };

enum class SegmentKind { Exclusion, Pooling, Separating };

/// Period-1 quality as a function of the type on one segment: either a
/// constant or an affine map (the separating rule (2*theta-1)/c).
struct QualityRule {
    enum class Type { Const, Affine };
    Type type = Type::Const;
    double value = 0.0;      // Const
    double slope = 0.0;      // Affine
    double intercept = 0.0;  // Affine

    static QualityRule constant(double q) {
        QualityRule r;
        r.type = Type::Const;
        r.value = q;
        return r;
    }
    static QualityRule affine(double slope, double intercept) {
        QualityRule r;
        r.type = Type::Affine;
        r.slope = slope;
        r.intercept = intercept;
        return r;
    }
    double at(double theta) const {
        return type == Type::Const ? value : intercept + slope * theta;
    }
};

/// Period-1 transfer on one segment, stored as c0 + c1*theta + c2*theta^2.
/// Envelope recovery yields piecewise-quadratic transfers for every regime.
struct TransferRule {
    enum class Type { Const, Quadratic };
    Type type = Type::Const;
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;

    static TransferRule constant(double x) {
        TransferRule r;
        r.type = Type::Const;
        r.c0 = x;
        return r;
    }
    static TransferRule quadratic(double c0, double c1, double c2) {
        TransferRule r;
        r.type = Type::Quadratic;
        r.c0 = c0;
        r.c1 = c1;
        r.c2 = c2;
        return r;
    }
    double at(double theta) const { return c0 + theta * (c1 + theta * c2); }
};

/// One cell of a product line: a type interval with its quality rule,
/// transfer rule, period-2 posted price and induced posterior mean.
/// Separating segments reveal the type pointwise, so cell_mean is unused
/// there (kept as the midpoint for reporting only).
struct Segment {
    double lo = 0.0;
    double hi = 0.0;
    SegmentKind kind = SegmentKind::Exclusion;
    QualityRule quality;
    TransferRule transfer;
    double price2 = 0.0;
    double cell_mean = 0.0;
};

/// A complete product line for one regime: ordered segments partitioning
/// [0,1] with nondecreasing quality.
struct Schedule {
    ModelParams params;
    ScheduleRegime regime = ScheduleRegime::LimitedCommitment;
    std::vector<Segment> segments;

    const Segment& segment_at(double theta) const;
    double quality_at(double theta) const { return segment_at(theta).quality.at(theta); }
    double transfer_at(double theta) const { return segment_at(theta).transfer.at(theta); }
    double price2_at(double theta) const { return segment_at(theta).price2; }
    bool price_low_at(double theta) const;
};

/// Asserts the schedule invariants: the segments partition [0,1], quality is
/// nondecreasing in the type, pooled cells carry their conditional mean and
/// every period-2 price is one of {v_L, v_H}. Throws ConsistencyError.
void check_schedule(const Schedule& s);

/// A finitely supported distribution over posterior means.
struct MeanDistribution {
    std::vector<double> support;
    std::vector<double> weights;

    double mass() const;
    double mean() const;
    /// Throws ConsistencyError unless weights are nonnegative, sum to one and
    /// the mean equals the prior mean 1/2 (Bayes plausibility of the mean).
    void check(double tol = kClosedFormTol) const;
};

/// A convex piecewise-linear function on [0,1] given by breakpoints,
/// certifying optimality of a mean distribution.
struct DualCertificate {
    std::vector<double> m;      // ascending breakpoint abscissae
    std::vector<double> value;  // certificate values at the breakpoints

    /// Linear interpolation between breakpoints (clamped at the ends).
    double at(double x) const;
    /// Drops breakpoints closer than tol to their predecessor.
    void dedupe(double tol = 1e-12);
};

/// Aggregate outcome of the brute-force checks on one schedule.
struct VerificationReport {
    double ic_violation = 0.0;       // max gain from misreporting
    double ir_violation = 0.0;       // max(0, -min U)
    double bp_violation = 0.0;       // worst convex-order / mean slack
    bool bp_ok = false;
    bool seq_rationality_ok = false;
    int seq_offending_segment = -1;  // index of a failing cell, -1 if none
    bool monotonicity_ok = false;
    double mono_worst_drop = 0.0;
    double revenue_gap = 0.0;
    int report_grid = 0;
    int type_grid = 0;
};

}  // namespace prodline

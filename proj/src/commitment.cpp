#include "prodline/commitment.hpp"

#include <cmath>
#include <string>

#include "prodline/envelope.hpp"

namespace prodline {

namespace {
void require_type(double theta) {
    if (theta < -1e-12 || theta > 1.0 + 1e-12)
        throw DomainError("type outside [0,1]: " + std::to_string(theta));
}
}  // namespace

double first_best_quality(double theta, const ModelParams& params) {
    require_type(theta);
    return theta / params.c;
}

double commitment_quality(double theta, const ModelParams& params) {
    require_type(theta);
    return theta < 0.5 ? 0.0 : (2.0 * theta - 1.0) / params.c;
}

double commitment_price2(const ModelParams& params) {
    return params.mu_bar() <= 0.5 ? params.v_h : params.v_l;
}

Schedule commitment_schedule(const ModelParams& params) {
    const double price = commitment_price2(params);
    Schedule s;
    s.params = params;
    s.regime = ScheduleRegime::FullCommitment;

    Segment bottom;
    bottom.lo = 0.0;
    bottom.hi = 0.5;
    bottom.kind = SegmentKind::Exclusion;
    bottom.quality = QualityRule::constant(0.0);
    bottom.price2 = price;
    bottom.cell_mean = 0.25;

    Segment top;
    top.lo = 0.5;
    top.hi = 1.0;
    top.kind = SegmentKind::Separating;
    top.quality = QualityRule::affine(2.0 / params.c, -1.0 / params.c);
    top.price2 = price;
    top.cell_mean = 0.75;

    s.segments = {bottom, top};
    fill_transfers_from_envelope(s);
    check_schedule(s);
    return s;
}

double commitment_revenue(const ModelParams& params) {
    // Integral over [1/2,1] of the pointwise-maximized quality surplus
    // (2*theta-1)^2/(2c) is 1/(12c); the period-2 term is the better of
    // selling to high valuations only (v_H/2) or to everyone (v_L).
    return 1.0 / (12.0 * params.c) + std::max(0.5 * params.v_h, params.v_l);
}

Schedule first_best_schedule(const ModelParams& params) {
    Schedule s;
    s.params = params;
    s.regime = ScheduleRegime::FirstBest;
    Segment all;
    all.lo = 0.0;
    all.hi = 1.0;
    all.kind = SegmentKind::Separating;
    all.quality = QualityRule::affine(1.0 / params.c, 0.0);
    // Full extraction: the consumer pays her whole period-1 value.
    all.transfer = TransferRule::quadratic(0.0, 0.0, 1.0 / params.c);
    all.price2 = params.v_h;  // period-2 price tracks the realized valuation
    all.cell_mean = 0.5;
    s.segments = {all};
    check_schedule(s);
    return s;
}

double first_best_surplus(const ModelParams& params) {
    return 1.0 / (6.0 * params.c) + 0.5 * (params.v_l + params.v_h);
}

InducedLaw induced_law(const Schedule& s) {
    InducedLaw law;
    for (const Segment& seg : s.segments) {
        if (seg.hi <= seg.lo) continue;
        const bool low = std::abs(seg.price2 - s.params.v_l) <= kClosedFormTol;
        if (seg.kind == SegmentKind::Separating)
            law.pieces.push_back({seg.lo, seg.hi, low});
        else
            law.atoms.push_back({seg.cell_mean, seg.hi - seg.lo, low});
    }
    return law;
}

}  // namespace prodline

#include "prodline/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace prodline {

namespace {
constexpr double kPartitionTol = 1e-12;
}

ModelParams validate(ModelParams raw) {
    if (!(raw.v_l > 0.0) || !(raw.c > 0.0))
        throw NonPositiveError("v_L and c must be strictly positive (v_L=" +
                               std::to_string(raw.v_l) + ", c=" + std::to_string(raw.c) + ")");
    if (!(raw.v_l < raw.v_h))
        throw OrderingError("need 0 < v_L < v_H, got v_L=" + std::to_string(raw.v_l) +
                            ", v_H=" + std::to_string(raw.v_h));
    if (std::isfinite(raw.quality_cap) && raw.quality_cap < 1.0 / raw.c)
        throw CapTooSmallError("quality cap " + std::to_string(raw.quality_cap) +
                               " below the top type's quality 1/c = " + std::to_string(1.0 / raw.c));
    return raw;
}

const Segment& Schedule::segment_at(double theta) const {
    if (segments.empty()) throw DomainError("empty schedule");
    if (theta < -kPartitionTol || theta > 1.0 + kPartitionTol)
        throw DomainError("type outside [0,1]: " + std::to_string(theta));
    theta = std::clamp(theta, 0.0, 1.0);
    // Cells are [lo, hi) except the last, which is closed.
    for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
        if (theta < segments[i].hi) return segments[i];
    }
    return segments.back();
}

bool Schedule::price_low_at(double theta) const {
    const Segment& s = segment_at(theta);
    return std::abs(s.price2 - params.v_l) < std::abs(s.price2 - params.v_h);
}

void check_schedule(const Schedule& s) {
    if (s.segments.empty()) throw ConsistencyError("schedule has no segments");
    if (std::abs(s.segments.front().lo) > kPartitionTol)
        throw ConsistencyError("first segment must start at 0");
    if (std::abs(s.segments.back().hi - 1.0) > kPartitionTol)
        throw ConsistencyError("last segment must end at 1");

    double prev_q = -1e300;
    for (std::size_t i = 0; i < s.segments.size(); ++i) {
        const Segment& seg = s.segments[i];
        if (seg.hi < seg.lo - kPartitionTol)
            throw ConsistencyError("segment " + std::to_string(i) + " has hi < lo");
        if (i > 0 && std::abs(seg.lo - s.segments[i - 1].hi) > kPartitionTol)
            throw ConsistencyError("segments " + std::to_string(i - 1) + "," + std::to_string(i) +
                                   " do not meet");

        const bool pooled = seg.kind != SegmentKind::Separating;
        if (pooled) {
            if (seg.quality.type != QualityRule::Type::Const)
                throw ConsistencyError("pooled cells carry constant quality");
            const double mid = 0.5 * (seg.lo + seg.hi);
            if (std::abs(seg.cell_mean - mid) > kClosedFormTol)
                throw ConsistencyError("pooled cell mean must be the interval midpoint");
        }
        if (seg.quality.type == QualityRule::Type::Affine && seg.quality.slope < -kPartitionTol)
            throw ConsistencyError("quality decreasing within a segment");

        const double q_lo = seg.quality.at(seg.lo);
        const double q_hi = seg.quality.at(seg.hi);
        if (q_lo < prev_q - kClosedFormTol)
            throw ConsistencyError("quality decreasing across segments at " + std::to_string(seg.lo));
        prev_q = std::max(prev_q, std::max(q_lo, q_hi));

        const bool is_low = std::abs(seg.price2 - s.params.v_l) <= kClosedFormTol;
        const bool is_high = std::abs(seg.price2 - s.params.v_h) <= kClosedFormTol;
        if (!is_low && !is_high)
            throw ConsistencyError("period-2 price must be v_L or v_H");
    }
}

double MeanDistribution::mass() const {
    double t = 0.0;
    for (double w : weights) t += w;
    return t;
}

double MeanDistribution::mean() const {
    double t = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) t += weights[i] * support[i];
    return t;
}

void MeanDistribution::check(double tol) const {
    if (support.size() != weights.size())
        throw ConsistencyError("support/weights size mismatch");
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (weights[i] < -tol) throw ConsistencyError("negative weight");
        if (support[i] < -tol || support[i] > 1.0 + tol)
            throw ConsistencyError("support point outside [0,1]");
    }
    if (std::abs(mass() - 1.0) > tol) throw ConsistencyError("weights do not sum to one");
    if (std::abs(mean() - prior::kMean) > tol)
        throw ConsistencyError("mean distribution is not Bayes plausible (mean != 1/2)");
}

double DualCertificate::at(double x) const {
    if (m.empty()) throw DomainError("empty certificate");
    if (x <= m.front()) return value.front();
    if (x >= m.back()) return value.back();
    auto it = std::upper_bound(m.begin(), m.end(), x);
    std::size_t hi = static_cast<std::size_t>(it - m.begin());
    std::size_t lo = hi - 1;
    const double t = (x - m[lo]) / (m[hi] - m[lo]);
    return value[lo] + t * (value[hi] - value[lo]);
}

void DualCertificate::dedupe(double tol) {
    std::vector<double> mm, vv;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!mm.empty() && m[i] - mm.back() < tol) continue;
        mm.push_back(m[i]);
        vv.push_back(value[i]);
    }
    m.swap(mm);
    value.swap(vv);
}

}  // namespace prodline

#include "prodline/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace prodline {

double u_prime(double theta, const Schedule& s) {
    const Segment& seg = s.segment_at(theta);
    const bool low = s.price_low_at(theta);
    return seg.quality.at(theta) + (low ? s.params.delta_v() : 0.0);
}

void fill_transfers_from_envelope(Schedule& s) {
    const double dv = s.params.delta_v();
    double u_acc = 0.0;  // U at the current segment's left endpoint; U(0) = 0
    for (Segment& seg : s.segments) {
        const double d = (std::abs(seg.price2 - s.params.v_l) <= kClosedFormTol ? dv : 0.0);
        double a, b;  // quality a + b*theta on this segment
        if (seg.quality.type == QualityRule::Type::Const) {
            a = seg.quality.value;
            b = 0.0;
        } else {
            a = seg.quality.intercept;
            b = seg.quality.slope;
        }
        // U(theta) = u_acc + (a+d)(theta-lo) + (b/2)(theta^2-lo^2) inside the cell,
        // so x1(theta) = (b/2) theta^2 + [(a+d)lo + (b/2)lo^2 - u_acc].
        const double c0 = (a + d) * seg.lo + 0.5 * b * seg.lo * seg.lo - u_acc;
        if (b == 0.0)
            seg.transfer = TransferRule::constant(c0);
        else
            seg.transfer = TransferRule::quadratic(c0, 0.0, 0.5 * b);
        u_acc += (a + d) * (seg.hi - seg.lo) + 0.5 * b * (seg.hi * seg.hi - seg.lo * seg.lo);
    }
}

double truthful_utility(double theta, const Schedule& s) {
    const Segment& seg = s.segment_at(theta);
    const double d = std::abs(seg.price2 - s.params.v_l) <= kClosedFormTol ? s.params.delta_v() : 0.0;
    return theta * seg.quality.at(theta) - seg.transfer.at(theta) + theta * d;
}

double envelope_transfer_gap(const Schedule& s, int grid_points) {
    if (grid_points < 2) throw DomainError("grid too small");
    // Trapezoid accumulation of U' with cells aligned to segment boundaries,
    // so no cell straddles a jump of the integrand. A uniform node within
    // rounding of a boundary is replaced by the boundary itself.
    std::vector<double> bounds;
    for (const Segment& seg : s.segments) {
        bounds.push_back(seg.lo);
        bounds.push_back(seg.hi);
    }
    std::vector<double> nodes;
    nodes.reserve(static_cast<std::size_t>(grid_points) + bounds.size());
    for (int i = 0; i < grid_points; ++i) {
        double x = static_cast<double>(i) / (grid_points - 1);
        bool drop = false;
        for (double b : bounds)
            if (std::abs(x - b) < 1e-12) drop = true;
        if (!drop) nodes.push_back(x);
    }
    nodes.insert(nodes.end(), bounds.begin(), bounds.end());
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    double worst = 0.0;
    double u_num = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double th = nodes[i];
        if (i > 0) {
            const double lo = nodes[i - 1];
            // One-sided derivative evaluation keeps boundary cells exact.
            const double mid_l = u_prime(std::nextafter(lo, th), s);
            const double mid_r = u_prime(std::nextafter(th, lo), s);
            u_num += 0.5 * (mid_l + mid_r) * (th - lo);
        }
        const Segment& seg = s.segment_at(th);
        const double d =
            std::abs(seg.price2 - s.params.v_l) <= kClosedFormTol ? s.params.delta_v() : 0.0;
        const double x_env = th * seg.quality.at(th) + th * d - u_num;
        worst = std::max(worst, std::abs(x_env - seg.transfer.at(th)));
    }
    return worst;
}

}  // namespace prodline

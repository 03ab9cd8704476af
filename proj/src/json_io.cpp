#include "prodline/json_io.hpp"

#include <cmath>
#include <string>

namespace prodline {

const char* regime_string(ScheduleRegime r) {
    switch (r) {
        case ScheduleRegime::FirstBest: return "firstbest";
        case ScheduleRegime::FullCommitment: return "commitment";
        case ScheduleRegime::LimitedCommitment: return "limited";
    }
    return "?";
}

namespace {
const char* kind_string(SegmentKind k) {
    switch (k) {
        case SegmentKind::Exclusion: return "exclusion";
        case SegmentKind::Pooling: return "pooling";
        case SegmentKind::Separating: return "separating";
    }
    return "?";
}

SegmentKind kind_from(const std::string& s) {
    if (s == "exclusion") return SegmentKind::Exclusion;
    if (s == "pooling") return SegmentKind::Pooling;
    if (s == "separating") return SegmentKind::Separating;
    throw DomainError("unknown segment kind: " + s);
}

ScheduleRegime regime_from(const std::string& s) {
    if (s == "firstbest") return ScheduleRegime::FirstBest;
    if (s == "commitment") return ScheduleRegime::FullCommitment;
    if (s == "limited") return ScheduleRegime::LimitedCommitment;
    throw DomainError("unknown regime: " + s);
}
}  // namespace

json to_json(const Schedule& s) {
    json segments = json::array();
    for (const Segment& seg : s.segments) {
        json quality;
        if (seg.quality.type == QualityRule::Type::Const)
            quality = {{"type", "const"}, {"value", seg.quality.value}};
        else
            quality = {{"type", "affine"},
                       {"slope", seg.quality.slope},
                       {"intercept", seg.quality.intercept}};
        json transfer;
        if (seg.transfer.type == TransferRule::Type::Const)
            transfer = {{"type", "const"}, {"value", seg.transfer.c0}};
        else
            transfer = {{"type", "quadratic"},
                        {"c0", seg.transfer.c0},
                        {"c1", seg.transfer.c1},
                        {"c2", seg.transfer.c2}};
        json cell_mean;
        if (seg.kind == SegmentKind::Separating)
            cell_mean = nullptr;  // the type is revealed pointwise
        else
            cell_mean = seg.cell_mean;
        segments.push_back({{"lo", seg.lo},
                            {"hi", seg.hi},
                            {"kind", kind_string(seg.kind)},
                            {"quality", quality},
                            {"transfer", transfer},
                            {"price2", seg.price2},
                            {"cellMean", cell_mean}});
    }
    return {{"regime", regime_string(s.regime)},
            {"params", {{"vL", s.params.v_l}, {"vH", s.params.v_h}, {"c", s.params.c}}},
            {"segments", segments}};
}

Schedule schedule_from_json(const json& j) {
    Schedule s;
    s.regime = regime_from(j.at("regime").get<std::string>());
    s.params.v_l = j.at("params").at("vL").get<double>();
    s.params.v_h = j.at("params").at("vH").get<double>();
    s.params.c = j.at("params").at("c").get<double>();
    for (const json& js : j.at("segments")) {
        Segment seg;
        seg.lo = js.at("lo").get<double>();
        seg.hi = js.at("hi").get<double>();
        seg.kind = kind_from(js.at("kind").get<std::string>());
        const json& q = js.at("quality");
        if (q.at("type") == "const")
            seg.quality = QualityRule::constant(q.at("value").get<double>());
        else
            seg.quality =
                QualityRule::affine(q.at("slope").get<double>(), q.at("intercept").get<double>());
        const json& x = js.at("transfer");
        if (x.at("type") == "const")
            seg.transfer = TransferRule::constant(x.at("value").get<double>());
        else
            seg.transfer = TransferRule::quadratic(x.at("c0").get<double>(),
                                                   x.at("c1").get<double>(),
                                                   x.at("c2").get<double>());
        seg.price2 = js.at("price2").get<double>();
        seg.cell_mean = js.at("cellMean").is_null() ? 0.5 * (seg.lo + seg.hi)
                                                    : js.at("cellMean").get<double>();
        s.segments.push_back(seg);
    }
    return s;
}

json to_json(const VerificationReport& r) {
    return {{"icViolation", r.ic_violation},
            {"irViolation", r.ir_violation},
            {"bpOk", r.bp_ok},
            {"bpViolation", r.bp_violation},
            {"seqRatOk", r.seq_rationality_ok},
            {"seqOffendingSegment", r.seq_offending_segment},
            {"monotonicityOk", r.monotonicity_ok},
            {"monoWorstDrop", r.mono_worst_drop},
            {"revenueGap", r.revenue_gap},
            {"gridSizes", {r.report_grid, r.type_grid}}};
}

json to_json(const MonotonicityReport& r) {
    return {{"regime", regime_name(r.regime)},
            {"analyticOk", r.analytic_ok},
            {"analyticWeakOk", r.analytic_weak_ok},
            {"analyticStrictOk", r.analytic_strict_ok},
            {"conditionsDisagree", r.conditions_disagree},
            {"numericOk", r.numeric_ok},
            {"worstDrop", r.worst_drop},
            {"worstAt", r.worst_at}};
}

json to_json(const MeanDistribution& g) {
    json support = json::array();
    for (std::size_t i = 0; i < g.support.size(); ++i)
        support.push_back({{"m", g.support[i]}, {"g", g.weights[i]}});
    return support;
}

json to_json(const DualCertificate& c) {
    json bp = json::array();
    for (std::size_t i = 0; i < c.m.size(); ++i) bp.push_back({c.m[i], c.value[i]});
    return {{"breakpoints", bp}};
}

}  // namespace prodline

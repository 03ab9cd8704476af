#pragma once

#include "prodline/model.hpp"
#include "prodline/surplus.hpp"

namespace prodline {

/// Quality assigned under symmetric information: theta/c, the pointwise
/// maximizer of theta*q - c*q^2/2.
double first_best_quality(double theta, const ModelParams& params);

/// Quality under full commitment: 0 below 1/2, (2*theta-1)/c above.
double commitment_quality(double theta, const ModelParams& params);

/// The type-independent period-2 price under full commitment: v_H when
/// mu_bar <= 1/2 (sell to high valuations only), v_L otherwise.
double commitment_price2(const ModelParams& params);

/// Two-segment commitment product line with transfers recovered from the
/// envelope condition and U(0) = 0.
Schedule commitment_schedule(const ModelParams& params);

/// Commitment revenue: the dynamic virtual surplus at the commitment
/// allocation, 1/(12c) + max(v_H/2, v_L) in closed form.
double commitment_revenue(const ModelParams& params);

/// Full-information schedule: quality theta/c, all surplus extracted.
Schedule first_best_schedule(const ModelParams& params);

/// Total surplus under symmetric information: 1/(6c) + (v_L + v_H)/2.
double first_best_surplus(const ModelParams& params);

/// Law over posterior means induced by a partitional schedule's cells
/// (atoms at pooled-cell means, uniform pieces on separating cells).
InducedLaw induced_law(const Schedule& s);

}  // namespace prodline

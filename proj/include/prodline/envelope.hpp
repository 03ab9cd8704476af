#pragma once

#include "prodline/model.hpp"

namespace prodline {

/// Marginal consumer utility U'(theta) implied by truthful play of the
/// schedule: q1(theta) plus the period-2 rent slope dv when the cell's
/// posted price is v_L.
double u_prime(double theta, const Schedule& s);

/// Fills every segment's transfer by integrating U' exactly from U(0) = 0:
/// x1(theta) = theta*q1(theta) + theta*dv*[price = v_L] - U(theta). The
/// integrand is piecewise affine, so the transfers are exact quadratics.
void fill_transfers_from_envelope(Schedule& s);

/// Max absolute gap between the schedule's stored transfers and transfers
/// recovered by trapezoid integration of U' on a uniform grid. Used to
/// cross-check closed-form transfer tables.
double envelope_transfer_gap(const Schedule& s, int grid_points = 10001);

/// Consumer utility U(theta) under truthtelling, from the stored rules.
double truthful_utility(double theta, const Schedule& s);

}  // namespace prodline

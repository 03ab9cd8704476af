#pragma once

#include <vector>

#include "prodline/errors.hpp"

namespace prodline {

/// The relaxed-design LP in integrated-slack form. With nodes t_0..t_N and
/// sigma_j = E_F1[(theta-t_j)^+] - E_G[(m-t_j)^+], a grid measure g >= 0 with
/// mean 1/2 corresponds one-to-one to sigma >= 0 with sigma_0 = sigma_N = 0,
/// nodewise "curvature" kappa_j(sigma) <= rho_j (from g_j >= 0) and end caps
/// (from g_0, g_N >= 0). The objective sum g_j R_j becomes
/// sum rho_j R_j - sum d2r_j sigma_j, so we minimize sum d2r_j sigma_j.
struct SigmaLpProblem {
    std::vector<double> nodes;  // ascending, nodes.front()=0, nodes.back()=1
    std::vector<double> cost;   // d2r_k for k = 1..N-1 (size N-1)
};

struct SigmaLpSolution {
    std::vector<double> sigma;    // size N-1 (interior nodes)
    std::vector<double> weights;  // recovered g, size N+1
    double objective = 0.0;       // minimized sum d2r * sigma
    int iterations = 0;
};

/// Deterministic revised simplex (Dantzig pricing with index tie-breaks and
/// a Bland anti-cycling fallback). Optimality is certified by the final
/// reduced costs; primal feasibility of the recovered weights is asserted.
SigmaLpSolution solve_sigma_lp(const SigmaLpProblem& problem);

/// Second-difference objective coefficients for values f on the nodes:
/// d2f_k = (f_{k+1}-f_k)/h_k - (f_k - f_{k-1})/h_{k-1}.
std::vector<double> second_difference(const std::vector<double>& nodes,
                                      const std::vector<double>& values);

/// Trapezoid node weights rho (the grid-lumped uniform measure).
std::vector<double> node_weights(const std::vector<double>& nodes);

/// Recovers the grid measure from sigma (inverse of the change of
/// variables); exposed for tests of the bijection.
std::vector<double> weights_from_sigma(const std::vector<double>& nodes,
                                       const std::vector<double>& sigma);

}  // namespace prodline

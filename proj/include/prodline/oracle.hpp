#pragma once

#include <vector>

#include "prodline/limited.hpp"
#include "prodline/model.hpp"
#include "prodline/simplex.hpp"
#include "prodline/surplus.hpp"

namespace prodline {

/// Discretized relaxed-design program: a mean grid, the payoff R on it (the
/// firm-favorable branch at the indifference node) and the uniform prior's
/// upper-tail values that bound E_G[(m-t)^+] for every grid t.
struct LPInstance {
    std::vector<double> mean_grid;
    std::vector<double> objective;
    std::vector<double> mpc_rhs;
    int mu_index = -1;  // position of mu_bar in the grid
};

/// Uniform grid of at least grid_size points containing 0, 1/2, mu_bar and 1
/// exactly. Throws DomainError below the minimum size of 101.
std::vector<double> build_mean_grid(const ModelParams& params, int grid_size);

LPInstance build_lp_instance(const ModelParams& params, int grid_size);

struct RelaxedSolution {
    MeanDistribution g;
    double value = 0.0;
    int iterations = 0;
};

/// Maximizes sum g_i R(m_i) over grid measures dominated by the uniform
/// prior in the convex order with mean 1/2, by a deterministic simplex on
/// the integrated-slack reformulation.
RelaxedSolution solve_relaxed_lp(const ModelParams& params, int grid_size, TieBreak tie);

/// Best lower bound over partitional structures: an exclusion cell [0,a)
/// pooled to its mean plus at most one pooled interval [b,d], everything
/// else revealed. Values are exact (closed-form R integrals).
struct PartitionResult {
    double exclusion_hi = 0.0;  // a
    double pool_lo = 0.0;       // b
    double pool_hi = 0.0;       // d
    double value = 0.0;
};
PartitionResult partition_search(const ModelParams& params, int grid_size, TieBreak tie);

/// Case-specific optimality certificate: the payoff R outside the pooled
/// region(s) and the supporting chord across them, sampled onto a dense
/// breakpoint set.
DualCertificate build_certificate(const ModelParams& params, int breakpoints = 4001);

struct CertificateReport {
    bool convex_ok = false;
    bool majorize_ok = false;
    bool expectation_ok = false;
    bool touching_ok = false;
    double worst_concavity = 0.0;   // most negative slope increment
    double worst_majorize = 0.0;    // most negative pi - R
    double expectation_gap = 0.0;   // |E_G pi - E_F1 pi|
    double worst_touch = 0.0;       // max pi - R on supp G
    bool ok() const { return convex_ok && majorize_ok && expectation_ok && touching_ok; }
};

/// Checks convexity, pi >= R on a dense grid, expectation equality between
/// the prior and G, and contact on the support of G.
CertificateReport verify_certificate(const DualCertificate& pi, const ModelParams& params,
                                     const MeanDistribution& g, TieBreak tie);

/// E_G[(m-t)^+] <= (1-t)^2/2 on a test grid plus mean equal to 1/2.
bool check_convex_order(const MeanDistribution& g, int test_points = 1001, double tol = 1e-9);

/// Merges support points closer than tol, mass-weighted.
MeanDistribution cluster_support(const MeanDistribution& g, double tol);

}  // namespace prodline

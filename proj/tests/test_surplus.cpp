#include <doctest.h>

#include <cmath>

#include "prodline/surplus.hpp"

using namespace prodline;

namespace {
// Independent route to R: the virtual-surplus integrand is affine in the
// type, so its expectation under any belief with mean m is its value at m.
double r_by_integrand(double m, const ModelParams& p, TieBreak tie) {
    const double q = quality_given_mean(m, p);
    const int low = q2_serves_low(m, p, tie);
    const double per2 = low ? m * p.v_h + (1.0 - m) * (p.v_l - p.delta_v()) : m * p.v_h;
    return q * (2.0 * m - 1.0) - 0.5 * p.c * q * q + per2;
}
}  // namespace

TEST_CASE("mean-optimal quality") {
    const ModelParams p2 = validate({0.75, 1.0, 2.0});
    CHECK(quality_given_mean(0.5, p2) == doctest::Approx(0.0));
    CHECK(quality_given_mean(0.75, p2) == doctest::Approx(0.25));
    CHECK(quality_given_mean(0.2, p2) == doctest::Approx(0.0));
    const ModelParams p1 = validate({0.75, 1.0, 1.0});
    CHECK(quality_given_mean(1.0, p1) == doctest::Approx(1.0));

    // grid-search oracle: q maximizes q(2m-1) - c q^2/2
    for (double m : {0.3, 0.5, 0.6, 0.8, 1.0}) {
        double best_q = 0.0, best_v = -1e9;
        for (int i = 0; i <= 100000; ++i) {
            const double q = i / 100000.0;
            const double v = q * (2.0 * m - 1.0) - 0.5 * p2.c * q * q;
            if (v > best_v) {
                best_v = v;
                best_q = q;
            }
        }
        CHECK(quality_given_mean(m, p2) == doctest::Approx(best_q).epsilon(1e-4));
    }
}

TEST_CASE("R at the reference parameters") {
    const ModelParams p = validate({0.75, 1.0, 2.0});
    const RFunction rf = make_r_function(p);
    CHECK(rf.branch == RBranch::MuAboveHalf);

    CHECK(r_value(0.0, rf, TieBreak::FavorLow) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r_value(0.5, rf, TieBreak::FavorLow) == doctest::Approx(0.75).epsilon(1e-12));

    // The period-2 component at the indifference point, by tie direction.
    CHECK(r_period2_term(0.75, rf, TieBreak::FavorLow) == doctest::Approx(0.875).epsilon(1e-12));
    CHECK(r_period2_term(0.75, rf, TieBreak::FavorHigh) == doctest::Approx(0.75).epsilon(1e-12));
    // Full R adds the quality term (2m-1)^2/(2c) = 0.0625 at m = 0.75.
    CHECK(r_value(0.75, rf, TieBreak::FavorLow) == doctest::Approx(0.9375).epsilon(1e-12));
    CHECK(r_value(0.75, rf, TieBreak::FavorHigh) == doctest::Approx(0.8125).epsilon(1e-12));
    // The quality term reaches (2-1)^2/(2c) = 0.25 at m = 1.
    CHECK(r_quality_term(1.0, p) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r_value(1.0, rf, TieBreak::FavorLow) == doctest::Approx(1.25).epsilon(1e-12));
}

TEST_CASE("R agrees with the virtual-surplus integrand route") {
    for (double mu : {0.2, 0.35, 0.45, 0.5, 0.6, 0.75, 0.9}) {
        for (double vh : {1.0, 2.5}) {
            for (double c : {0.5, 1.0, 2.0}) {
                const ModelParams p = validate({mu * vh, vh, c});
                const RFunction rf = make_r_function(p);
                for (int i = 0; i <= 500; ++i) {
                    const double m = i / 500.0;
                    for (TieBreak tie : {TieBreak::FavorLow, TieBreak::FavorHigh}) {
                        CHECK(r_value(m, rf, tie) ==
                              doctest::Approx(r_by_integrand(m, p, tie)).epsilon(1e-12));
                    }
                }
            }
        }
    }
}

TEST_CASE("normalized-money branch formulas are reproduced verbatim at vH = 1") {
    const double c = 1.7;
    SUBCASE("mu below one half") {
        const ModelParams p = validate({0.3, 1.0, c});
        const RFunction rf = make_r_function(p);
        const double mu = 0.3, dv = 0.7;
        CHECK(r_value(0.1, rf, TieBreak::FavorHigh) ==
              doctest::Approx(2 * 0.1 * dv + 2 * 0.3 - 1).epsilon(1e-13));
        CHECK(r_value(0.4, rf, TieBreak::FavorHigh) == doctest::Approx(0.4).epsilon(1e-13));
        CHECK(r_value(0.8, rf, TieBreak::FavorHigh) ==
              doctest::Approx(0.8 + 0.6 * 0.6 / (2 * c)).epsilon(1e-13));
        CHECK(mu == 0.3);
    }
    SUBCASE("mu above one half") {
        const ModelParams p = validate({0.8, 1.0, c});
        const RFunction rf = make_r_function(p);
        const double dv = 0.2;
        CHECK(r_value(0.4, rf, TieBreak::FavorLow) ==
              doctest::Approx(2 * 0.4 * dv + 0.6).epsilon(1e-13));
        CHECK(r_value(0.7, rf, TieBreak::FavorLow) ==
              doctest::Approx(2 * 0.7 * dv + 0.6 + 0.4 * 0.4 / (2 * c)).epsilon(1e-13));
        CHECK(r_value(0.9, rf, TieBreak::FavorLow) ==
              doctest::Approx(0.9 + 0.8 * 0.8 / (2 * c)).epsilon(1e-13));
    }
}

TEST_CASE("money homogeneity: scaling valuations by k and c by 1/k scales R by k") {
    const ModelParams base = validate({0.66, 1.1, 1.4});
    const RFunction rf0 = make_r_function(base);
    for (double k : {0.5, 2.0, 7.0}) {
        const ModelParams scaled = validate({k * base.v_l, k * base.v_h, base.c / k});
        const RFunction rf1 = make_r_function(scaled);
        for (int i = 0; i <= 400; ++i) {
            const double m = i / 400.0;
            CHECK(r_value(m, rf1, TieBreak::FavorLow) ==
                  doctest::Approx(k * r_value(m, rf0, TieBreak::FavorLow)).epsilon(1e-12));
        }
    }
}

TEST_CASE("tie preference at the indifference point flips at one half") {
    for (double mu : {0.2, 0.35, 0.49}) {
        const ModelParams p = validate({mu, 1.0, 1.0});
        const RFunction rf = make_r_function(p);
        CHECK(r_value(mu, rf, TieBreak::FavorHigh) > r_value(mu, rf, TieBreak::FavorLow));
    }
    for (double mu : {0.51, 0.75, 0.95}) {
        const ModelParams p = validate({mu, 1.0, 1.0});
        const RFunction rf = make_r_function(p);
        CHECK(r_value(mu, rf, TieBreak::FavorLow) > r_value(mu, rf, TieBreak::FavorHigh));
    }
    const ModelParams ph = validate({0.5, 1.0, 1.0});
    const RFunction rfh = make_r_function(ph);
    CHECK(r_value(0.5, rfh, TieBreak::FavorLow) ==
          doctest::Approx(r_value(0.5, rfh, TieBreak::FavorHigh)).epsilon(1e-13));
}

TEST_CASE("R is continuous except at the indifference point and convex per branch") {
    const ModelParams p = validate({0.7, 1.0, 1.3});
    const RFunction rf = make_r_function(p);
    const double mu = p.mu_bar();
    double prev = r_value(0.0, rf, TieBreak::FavorLow);
    for (int i = 1; i <= 100000; ++i) {
        const double m = i / 100000.0;
        const double cur = r_value(m, rf, TieBreak::FavorLow);
        if (std::abs(m - mu) > 2e-5)
            CHECK(std::abs(cur - prev) < 5e-5 * (1.0 + p.v_h / p.c));
        prev = cur;
    }
    // convex within each price branch: nonnegative second differences
    auto second_diff_ok = [&](double a, double b) {
        const int n = 200;
        for (int i = 1; i + 1 < n; ++i) {
            const double h = (b - a) / n;
            const double m = a + i * h;
            const double dd = r_value(m - h, rf, TieBreak::FavorLow) -
                              2 * r_value(m, rf, TieBreak::FavorLow) +
                              r_value(m + h, rf, TieBreak::FavorLow);
            CHECK(dd >= -1e-12);
        }
    };
    second_diff_ok(0.0, mu - 1e-6);
    second_diff_ok(mu + 1e-6, 1.0);
}

TEST_CASE("exact R integral matches fine quadrature") {
    for (double mu : {0.3, 0.5, 0.75}) {
        const ModelParams p = validate({mu, 1.0, 2.0});
        const RFunction rf = make_r_function(p);
        for (auto [a, b] : {std::pair{0.0, 1.0}, {0.2, 0.9}, {0.45, 0.55}}) {
            // trapezoid with cells split at the price jump and the kink
            double acc = 0.0;
            std::vector<double> cuts = {a, b};
            if (mu > a && mu < b) cuts.push_back(mu);
            if (0.5 > a && 0.5 < b) cuts.push_back(0.5);
            std::sort(cuts.begin(), cuts.end());
            for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
                const int n = 100001;
                for (int i = 0; i < n; ++i) {
                    const double x0 = cuts[s] + (cuts[s + 1] - cuts[s]) * i / n;
                    const double x1 = cuts[s] + (cuts[s + 1] - cuts[s]) * (i + 1) / n;
                    const double xm = 0.5 * (x0 + x1);
                    const TieBreak tie = xm < mu ? TieBreak::FavorLow : TieBreak::FavorHigh;
                    acc += 0.5 * (r_value(x0, rf, tie) + r_value(x1, rf, tie)) * (x1 - x0);
                }
            }
            CHECK(r_integral(a, b, rf) == doctest::Approx(acc).epsilon(1e-9));
        }
    }
}

TEST_CASE("revenue of simple mean distributions") {
    const ModelParams p = validate({0.75, 1.0, 2.0});
    const RFunction rf = make_r_function(p);

    MeanDistribution no_disclosure;
    no_disclosure.support = {0.5};
    no_disclosure.weights = {1.0};
    CHECK(revenue_of_distribution(no_disclosure, rf, TieBreak::FavorLow) ==
          doctest::Approx(0.75).epsilon(1e-12));

    MeanDistribution at_zero;
    at_zero.support = {0.0};
    at_zero.weights = {1.0};
    CHECK(revenue_of_distribution(at_zero, rf, TieBreak::FavorLow) ==
          doctest::Approx(2 * p.v_l - p.v_h).epsilon(1e-12));

    // discretized uniform prior against the exact integral of R; the
    // midpoint sampling error near the price jump is O(jump / n)
    MeanDistribution uni;
    const int n = 4001;
    for (int i = 0; i < n; ++i) {
        uni.support.push_back((i + 0.5) / n);
        uni.weights.push_back(1.0 / n);
    }
    CHECK(revenue_of_distribution(uni, rf, TieBreak::FavorLow) ==
          doctest::Approx(r_integral(0.0, 1.0, rf)).epsilon(5e-5));
}

TEST_CASE("induced law bookkeeping") {
    InducedLaw law;
    law.atoms = {{0.25, 0.5, true}};
    law.pieces = {{0.5, 1.0, false}};
    CHECK(law.mass() == doctest::Approx(1.0));
    CHECK(law.mean() == doctest::Approx(0.5));
    CHECK(law.upper_tail(0.75) == doctest::Approx(0.5 * 0.25 * 0.25));
    CHECK(law.upper_tail(0.2) == doctest::Approx(0.5 * 0.05 + 0.5 * (0.8 + 0.3) * 0.5));

    const std::vector<double> nodes = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    const MeanDistribution g = law.discretize(nodes);
    CHECK(g.mass() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g.mean() == doctest::Approx(0.5).epsilon(1e-14));
}

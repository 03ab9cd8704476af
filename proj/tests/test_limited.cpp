#include <doctest.h>

#include <cmath>

#include "prodline/envelope.hpp"
#include "prodline/limited.hpp"
#include "prodline/verifier.hpp"

using namespace prodline;

TEST_CASE("l threshold") {
    CHECK(l_threshold(2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(l_threshold(1.0) == doctest::Approx(0.625).epsilon(1e-15));
    CHECK(l_threshold(1e-12) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("regime classification") {
    CHECK(classify(validate({0.2, 1.0, 1.0})) == Regime::MuLeQuarter);
    CHECK(classify(validate({0.25, 1.0, 1.0})) == Regime::MuLeQuarter);
    CHECK(classify(validate({0.35, 1.0, 1.0})) == Regime::MuQuarterToHalf);
    CHECK(classify(validate({0.5, 1.0, 1.0})) == Regime::MuHalfToL);
    CHECK(classify(validate({0.6, 1.0, 2.0})) == Regime::MuHalfToL);  // l(2) = 2/3
    CHECK(classify(validate({0.75, 1.0, 2.0})) == Regime::MuAboveL);
    CHECK(classify(validate({2.0 / 3.0, 1.0, 2.0})) == Regime::MuAboveL);  // boundary
    // with vH != 1 the threshold uses the money-normalized curvature c*vH
    CHECK(classify(validate({1.2, 2.0, 1.0})) == Regime::MuHalfToL);  // mu=.6 < l(2)=2/3
    CHECK(classify(validate({1.2, 2.0, 0.5})) == Regime::MuHalfToL);  // mu=.6 < l(1)=.625
    CHECK(classify(validate({1.3, 2.0, 0.5})) == Regime::MuAboveL);   // mu=.65 >= l(1)
}

TEST_CASE("exclusion threshold in the lower-middle regime") {
    CHECK(solve_m_star_low(validate({0.35, 1.0, 1.0})) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(solve_m_star_low(validate({0.25 + 1e-6, 1.0, 1.0})) ==
          doctest::Approx(0.5 + 2e-6).epsilon(1e-9));
    // conditional mean of the pooled cell is mu_bar: E[theta | theta <= 0.9] = 0.45
    const double m_star = solve_m_star_low(validate({0.45, 1.0, 1.0}));
    CHECK(m_star == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(0.5 * m_star == doctest::Approx(0.45).epsilon(1e-15));
    CHECK_THROWS_AS(solve_m_star_low(validate({0.6, 1.0, 1.0})), RegimeError);
    CHECK_THROWS_AS(solve_m_star_low(validate({0.2, 1.0, 1.0})), RegimeError);
}

TEST_CASE("pooling quadratic coefficients at the reference point") {
    const ModelParams p = validate({0.75, 1.0, 2.0});
    const Quadratic h2 = pooling_quadratic_h2(p);
    CHECK(h2.a == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(h2.b == doctest::Approx(-3.5).epsilon(1e-14));
    CHECK(h2.d == doctest::Approx(1.375).epsilon(1e-14));
}

TEST_CASE("pooling interval at the reference point") {
    const ModelParams p = validate({0.75, 1.0, 2.0});
    const PoolingInterval iv = solve_pooling_interval(p);
    CHECK(iv.m_lo == doctest::Approx(0.5954915028125263).epsilon(1e-12));
    CHECK(iv.m_hi == doctest::Approx(0.9045084971874737).epsilon(1e-12));
    CHECK(0.5 * (iv.m_lo + iv.m_hi) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(std::abs(pooling_quadratic_h2(p).eval(iv.m_lo)) <= 1e-10);
}

TEST_CASE("pooling interval across the upper regimes") {
    // exact rational roots at (0.55, 1, 1): m_* = 0.45, m^* = 0.65
    const PoolingInterval a = solve_pooling_interval(validate({0.55, 1.0, 1.0}));
    CHECK(a.m_lo == doctest::Approx(0.45).epsilon(1e-12));
    CHECK(a.m_hi == doctest::Approx(0.65).epsilon(1e-12));

    const PoolingInterval b = solve_pooling_interval(validate({0.5, 1.0, 1.0}));
    CHECK(b.m_lo == doctest::Approx(0.5));
    CHECK(b.m_hi == doctest::Approx(0.5));

    CHECK_THROWS_AS(solve_pooling_interval(validate({0.3, 1.0, 1.0})), RegimeError);

    for (double mu : {0.52, 0.6, 0.7, 0.75, 0.85, 0.97}) {
        for (double c : {0.2, 0.9, 1.7, 2.4}) {
            const ModelParams p = validate({mu, 1.0, c});
            const PoolingInterval iv = solve_pooling_interval(p);
            CHECK(0.5 * (iv.m_lo + iv.m_hi) == doctest::Approx(mu).epsilon(1e-10));
            CHECK(iv.m_lo >= 0.0);
            CHECK(iv.m_hi <= 1.0);
            if (classify(p) == Regime::MuHalfToL) {
                CHECK(iv.m_lo <= 0.5 + 1e-9);
                CHECK(std::abs(pooling_quadratic_h1(p).eval(iv.m_hi)) <= 1e-10);
            } else {
                CHECK(iv.m_lo >= 0.5 - 1e-9);
                CHECK(std::abs(pooling_quadratic_h2(p).eval(iv.m_lo)) <= 1e-10);
            }
        }
    }
}

TEST_CASE("pooling interval scales with money units through c*vH") {
    // (vl, vh, c) and (k vl, k vh, c/k) share the same interval
    const PoolingInterval base = solve_pooling_interval(validate({0.75, 1.0, 2.0}));
    const PoolingInterval scaled = solve_pooling_interval(validate({1.5, 2.0, 1.0}));
    CHECK(scaled.m_lo == doctest::Approx(base.m_lo).epsilon(1e-12));
    CHECK(scaled.m_hi == doctest::Approx(base.m_hi).epsilon(1e-12));
}

TEST_CASE("limited schedule structure per regime") {
    SUBCASE("lowest regime matches commitment quality pointwise") {
        const ModelParams p = validate({0.2, 1.0, 1.0});
        const Schedule s = limited_schedule(p);
        REQUIRE(s.segments.size() == 2);
        for (int i = 0; i <= 2000; ++i) {
            const double th = i / 2000.0;
            CHECK(s.quality_at(th) == doctest::Approx(commitment_quality(th, p)).epsilon(1e-14));
        }
        CHECK(s.segments[0].price2 == doctest::Approx(p.v_h));
        CHECK(s.segments[1].price2 == doctest::Approx(p.v_h));
    }
    SUBCASE("lower-middle regime widens the exclusion cell") {
        const ModelParams p = validate({0.35, 1.0, 1.0});
        const Schedule s = limited_schedule(p);
        REQUIRE(s.segments.size() == 2);
        CHECK(s.segments[0].hi == doctest::Approx(0.7).epsilon(1e-12));
        CHECK(s.segments[0].cell_mean == doctest::Approx(0.35).epsilon(1e-12));
        CHECK(s.quality_at(0.6) == doctest::Approx(0.0));
        CHECK(commitment_quality(0.6, p) > 0.0);
    }
    SUBCASE("upper-middle regime pools after exclusion, prices split") {
        const ModelParams p = validate({0.55, 1.0, 1.0});
        const Schedule s = limited_schedule(p);
        REQUIRE(s.segments.size() == 3);
        CHECK(s.segments[0].hi == doctest::Approx(0.45).epsilon(1e-12));
        CHECK(s.segments[1].quality.value == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(s.segments[0].price2 == doctest::Approx(p.v_l));
        CHECK(s.segments[1].price2 == doctest::Approx(p.v_l));
        CHECK(s.segments[2].price2 == doctest::Approx(p.v_h));
    }
    SUBCASE("top regime keeps a separating band below the pooled cell") {
        const ModelParams p = validate({0.75, 1.0, 2.0});
        const Schedule s = limited_schedule(p);
        REQUIRE(s.segments.size() == 4);
        CHECK(s.segments[1].lo == doctest::Approx(0.5));
        CHECK(s.segments[1].hi == doctest::Approx(0.5954915028125263).epsilon(1e-9));
        CHECK(s.segments[2].quality.value == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(s.segments[2].cell_mean == doctest::Approx(0.75).epsilon(1e-9));
        CHECK(s.segments[3].price2 == doctest::Approx(p.v_h));
    }
}

TEST_CASE("closed-form transfers") {
    SUBCASE("lowest regime: (theta^2 - 1/4)/c") {
        const Schedule s = limited_schedule(validate({0.2, 1.0, 2.0}));
        CHECK(s.transfer_at(0.75) == doctest::Approx(0.15625).epsilon(1e-12));
        CHECK(s.transfer_at(0.3) == doctest::Approx(0.0));
    }
    SUBCASE("top regime pooled cell at the reference point") {
        const Schedule s = limited_schedule(validate({0.75, 1.0, 2.0}));
        CHECK(s.transfer_at(0.75) == doctest::Approx(0.1443135621484342).epsilon(1e-10));
        CHECK(s.transfer_at(1.0) == doctest::Approx(0.5 - 0.3511271242968684).epsilon(1e-9));
        CHECK(s.transfer_at(0.2) == doctest::Approx(0.0));
    }
    SUBCASE("every regime passes the envelope cross-check") {
        for (double mu : {0.15, 0.3, 0.45, 0.5, 0.55, 0.66, 0.75, 0.9, 0.999}) {
            for (double c : {0.1, 0.7, 2.0}) {
                const Schedule s = limited_schedule(validate({mu, 1.0, c}));
                CHECK(envelope_transfer_gap(s) <= 1e-10);
            }
        }
    }
}

TEST_CASE("marginal utility U'") {
    const ModelParams p = validate({0.75, 1.0, 2.0});
    const Schedule s = limited_schedule(p);
    CHECK(u_prime(0.75, s) == doctest::Approx(0.5).epsilon(1e-12));   // pooled: qp + dv
    CHECK(u_prime(1.0, s) == doctest::Approx(0.5).epsilon(1e-12));    // top: (2-1)/c
    CHECK(u_prime(0.55, s) == doctest::Approx(0.05 + 0.25).epsilon(1e-12));
    CHECK(u_prime(0.2, s) == doctest::Approx(0.25).epsilon(1e-12));   // excluded, price vL

    const Schedule s2 = limited_schedule(validate({0.2, 1.0, 2.0}));
    CHECK(u_prime(0.2, s2) == doctest::Approx(0.0));  // excluded with price vH
}

TEST_CASE("monotonicity verdicts") {
    SUBCASE("lower regimes always pass") {
        for (double mu : {0.1, 0.3, 0.45}) {
            const MonotonicityReport r = monotonicity_check(validate({mu, 1.0, 1.0}));
            CHECK(r.analytic_ok);
            CHECK(r.numeric_ok);
            CHECK_FALSE(r.conditions_disagree);
        }
    }
    SUBCASE("upper-middle regime never passes") {
        const MonotonicityReport r = monotonicity_check(validate({0.6, 1.0, 2.0}));
        CHECK(r.regime == Regime::MuHalfToL);
        CHECK_FALSE(r.analytic_ok);
        CHECK_FALSE(r.numeric_ok);
        CHECK(r.worst_drop > 1e-3);
    }
    SUBCASE("top regime passes on the documented band") {
        const MonotonicityReport r = monotonicity_check(validate({0.95, 1.0, 0.5}));
        CHECK(r.regime == Regime::MuAboveL);
        CHECK(r.analytic_ok);
        CHECK(r.numeric_ok);
    }
    SUBCASE("the two closed-form conditions disagree at the reference point") {
        // (1+c)/(2+c) = 0.75 holds with equality, (2+c)/4 = 1 fails; U' does drop.
        const MonotonicityReport r = monotonicity_check(validate({0.75, 1.0, 2.0}));
        CHECK(r.analytic_weak_ok);
        CHECK_FALSE(r.analytic_strict_ok);
        CHECK(r.conditions_disagree);
        CHECK_FALSE(r.numeric_ok);
        CHECK(r.worst_drop == doctest::Approx(0.0954915).epsilon(1e-4));
        // the numeric drop sits at the top of the pooled cell
        CHECK(r.worst_at == doctest::Approx(0.9045).epsilon(1e-3));
    }
    SUBCASE("numeric and appendix verdicts agree on a parameter sweep") {
        for (double mu : {0.52, 0.6, 0.7, 0.8, 0.9, 0.97}) {
            for (double c : {0.3, 0.8, 1.3, 1.9}) {
                const MonotonicityReport r = monotonicity_check(validate({mu, 1.0, c}));
                CHECK(r.analytic_strict_ok == r.numeric_ok);
            }
        }
    }
}

TEST_CASE("pooled quality straddles the commitment curve around mu_bar") {
    const ModelParams p = validate({0.75, 1.0, 2.0});
    const Schedule s = limited_schedule(p);
    const PoolingInterval iv = solve_pooling_interval(p);
    const double qp = (2 * p.mu_bar() - 1) / p.c;
    for (double th = iv.m_lo; th < p.mu_bar(); th += 0.01)
        CHECK(qp >= commitment_quality(th, p) - 1e-12);
    for (double th = p.mu_bar(); th <= iv.m_hi; th += 0.01)
        CHECK(qp <= commitment_quality(th, p) + 1e-12);
    // quality never decreases across the schedule
    double prev = -1.0;
    for (int i = 0; i <= 5000; ++i) {
        const double th = i / 5000.0;
        const double q = s.quality_at(th);
        CHECK(q >= prev - 1e-12);
        prev = q;
    }
}

TEST_CASE("limited revenue: identities and orderings") {
    SUBCASE("revenue identity against transfers") {
        for (double mu : {0.2, 0.35, 0.55, 0.75, 0.9}) {
            const ModelParams p = validate({mu, 1.0, 2.0});
            const Schedule s = limited_schedule(p);
            CHECK(schedule_revenue_quadrature(s) ==
                  doctest::Approx(limited_revenue(p)).epsilon(1e-9));
        }
    }
    SUBCASE("frozen reference values") {
        CHECK(limited_revenue(validate({0.75, 1.0, 2.0})) ==
              doctest::Approx(0.7869279684570286).epsilon(1e-12));
        CHECK(limited_revenue(validate({0.55, 1.0, 1.0})) ==
              doctest::Approx(0.6259583333333334).epsilon(1e-12));
        CHECK(limited_revenue(validate({0.2, 1.0, 2.0})) ==
              doctest::Approx(0.5416666666666667).epsilon(1e-12));
        CHECK(limited_revenue(validate({0.35, 1.0, 1.0})) ==
              doctest::Approx(0.578).epsilon(1e-12));
    }
    SUBCASE("equal to commitment up to 1/4, strictly below after") {
        for (double mu : {0.05, 0.15, 0.25}) {
            const ModelParams p = validate({mu, 1.0, 1.1});
            CHECK(limited_revenue(p) == doctest::Approx(commitment_revenue(p)).epsilon(1e-12));
        }
        // knife edge: revenues also coincide at exactly mu_bar = 1/2
        for (double mu : {0.3, 0.45, 0.55, 0.75, 0.95}) {
            const ModelParams p = validate({mu, 1.0, 1.1});
            CHECK(commitment_revenue(p) - limited_revenue(p) > 1e-5);
        }
        const ModelParams ph = validate({0.5, 1.0, 1.1});
        CHECK(limited_revenue(ph) == doctest::Approx(commitment_revenue(ph)).epsilon(1e-12));
    }
}

TEST_CASE("adjacent structures agree at the regime boundaries") {
    // At mu_bar = 1/4 the two lower structures are the same schedule.
    {
        const ModelParams p = validate({0.25, 1.0, 1.3});
        const Schedule low = limited_schedule(p);  // classified MuLeQuarter
        CHECK(low.segments[0].hi == doctest::Approx(0.5));
        CHECK(low.segments[0].hi == doctest::Approx(2.0 * p.mu_bar()));
    }
    // At mu_bar = l(c) both quadratics put the pooled cell at [1/2, 2mu-1/2],
    // so the two upper structures price and allocate identically.
    {
        const double c = 1.4;
        const double mu = l_threshold(c);
        const ModelParams p = validate({mu, 1.0, c});
        CHECK(classify(p) == Regime::MuAboveL);
        const PoolingInterval via_h2 = solve_pooling_interval(p);
        CHECK(via_h2.m_lo == doctest::Approx(0.5).epsilon(1e-9));

        const Quadratic h1 = pooling_quadratic_h1(p);
        // h1's in-bracket root reproduces the same upper boundary
        const double disc = h1.b * h1.b - 4 * h1.a * h1.d;
        REQUIRE(disc >= 0.0);
        const double root = (-h1.b + std::sqrt(disc)) / (2 * h1.a);
        CHECK(root == doctest::Approx(via_h2.m_hi).epsilon(1e-9));

        // and the revenues of the two assembled structures coincide
        const RFunction rf = make_r_function(p);
        const double rev_h2 = limited_revenue(p);
        const double rev_h1 = via_h2.m_lo * r_value(0.5 * via_h2.m_lo, rf, TieBreak::FavorLow) +
                              (via_h2.m_hi - via_h2.m_lo) * r_value(mu, rf, TieBreak::FavorLow) +
                              r_integral(via_h2.m_hi, 1.0, rf);
        CHECK(rev_h1 == doctest::Approx(rev_h2).epsilon(1e-9));
    }
}

TEST_CASE("degenerate pooled cell at mu_bar = 1/2") {
    const ModelParams p = validate({0.5, 1.0, 1.0});
    const Schedule s = limited_schedule(p);
    REQUIRE(s.segments.size() == 3);
    CHECK(s.segments[1].lo == doctest::Approx(0.5));
    CHECK(s.segments[1].hi == doctest::Approx(0.5));
    CHECK(s.segments[0].price2 == doctest::Approx(p.v_l));
    CHECK(s.segments[2].price2 == doctest::Approx(p.v_h));
}

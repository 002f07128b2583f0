#include "riskbound/errors.hpp"
#include "riskbound/piecewise.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace riskbound;

TEST(Term, Evaluates) {
    const Term t{2.0, 1.0, -1.0, 1.5, 0.0};  // 2 (1-u)^1.5
    EXPECT_NEAR(t(0.75), 2 * std::pow(0.25, 1.5), 1e-15);
    const Term l{1.0, 1.0, -1.0, 1.0, 2.0};  // (1-u) log(1-u)^2
    EXPECT_NEAR(l(0.5), 0.5 * std::log(0.5) * std::log(0.5), 1e-15);
    EXPECT_EQ(l(1.0), 0.0);
}

TEST(Term, OffsetEvaluationKeepsTinyDistances) {
    const Term t{1.0, 1.0, -1.0, 0.5, 0.0};  // sqrt(1-u)
    // 1e-20 below 1 is not representable as u but is as an offset
    EXPECT_NEAR(t.eval_offset(1.0, -1e-20), 1e-10, 1e-24);
    const Term l{1.0, 1.0, -1.0, 0.0, 1.0};  // -log(1-u)
    EXPECT_NEAR(l.eval_offset(1.0, -1e-30), 30 * std::log(10.0), 1e-12);
    // and -log v near v = 1 goes through log1p
    EXPECT_NEAR(l.eval_offset(0.0, 1e-20), 1e-20, 1e-34);
}

TEST(Term, EndpointExponent) {
    EXPECT_EQ(Term::power_of(1.0, 1.0, -1.0, 0.5).endpoint_exponent(1.0), 0.5);
    EXPECT_FALSE(Term::monomial(1.0, 2.0).endpoint_exponent(0.0));
    EXPECT_FALSE(Term::monomial(1.0, 2.0).endpoint_exponent(0.5));
}

TEST(Piecewise, BreakpointValuesAndLimits) {
    // 0 on [0, 0.5), 1 on [0.5, 1], value 0.3 at the jump
    PiecewiseFn f({0.0, 0.5, 1.0}, {{Term::constant(0.0)}, {Term::constant(1.0)}}, {0.0, 0.3, 1.0});
    EXPECT_EQ(f(0.5), 0.3);
    EXPECT_EQ(f.left_limit(0.5), 0.0);
    EXPECT_EQ(f.right_limit(0.5), 1.0);
    EXPECT_FALSE(f.is_continuous());
    EXPECT_FALSE(f.is_left_continuous());
    EXPECT_FALSE(f.is_right_continuous());
}

TEST(Piecewise, DefaultPointValuesAreLeftLimits) {
    PiecewiseFn f({0.0, 0.5, 1.0}, {{Term::constant(0.0)}, {Term::constant(1.0)}});
    EXPECT_EQ(f(0.5), 0.0);
    EXPECT_TRUE(f.is_left_continuous());
}

TEST(Piecewise, RejectsMismatchedPieces) {
    EXPECT_THROW(PiecewiseFn({0.0, 1.0}, {{}, {}}), ContractError);
}

TEST(Piecewise, DerivativeReflectAffine) {
    const PiecewiseFn f = PiecewiseFn::from_terms({Term::monomial(1.0, 3.0)});
    const PiecewiseFn d = f.derivative();
    EXPECT_NEAR(d(0.5), 0.75, 1e-15);
    const PiecewiseFn r = f.reflect();
    EXPECT_NEAR(r(0.25), std::pow(0.75, 3), 1e-15);
    // u -> f(2u - 1) on [0.5, 1]
    const PiecewiseFn c = f.compose_affine(0.5, 1.0, 0.0, 1.0);
    EXPECT_NEAR(c(0.75), 0.125, 1e-15);
    EXPECT_EQ(c(0.25), 0.0);
}

TEST(Piecewise, SumsMergeBreaks) {
    PiecewiseFn a({0.0, 0.3, 1.0}, {{Term::constant(1.0)}, {Term::constant(2.0)}});
    PiecewiseFn b({0.0, 0.6, 1.0}, {{Term::constant(10.0)}, {Term::constant(20.0)}});
    const PiecewiseFn s = a + b;
    EXPECT_EQ(s.piece_count(), 3u);
    EXPECT_EQ(s(0.1), 11.0);
    EXPECT_EQ(s(0.5), 12.0);
    EXPECT_EQ(s(0.9), 22.0);
    EXPECT_EQ((a - a)(0.9), 0.0);
}

TEST(Piecewise, Integrals) {
    const PiecewiseFn f = PiecewiseFn::from_terms({Term::monomial(1.0, 2.0)});
    EXPECT_NEAR(f.integral(0.0, 1.0), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(f.integral(1.0, 0.5), -(1.0 - 0.125) / 3.0, 1e-15);
    EXPECT_NEAR(integrate_product(f, f, 0.0, 1.0), 0.2, 1e-15);
    // -log(1-u) integrates to 1 and its square to 2
    const PiecewiseFn L = PiecewiseFn::from_terms({Term{1.0, 1.0, -1.0, 0.0, 1.0}});
    EXPECT_NEAR(L.integral(0.0, 1.0), 1.0, 1e-10);
    EXPECT_NEAR(integrate_product(L, L, 0.0, 1.0), 2.0, 1e-9);
}

TEST(Piecewise, WeightedIntegralPassesExactOneMinusU) {
    // h(u, 1-u) = (1-u)^(-1/2); int_0^1 h du = 2
    const PiecewiseFn one = PiecewiseFn::constant(1.0);
    Weight w{[](double, double v) { return 1 / std::sqrt(v); }, std::nullopt, -0.5, {}};
    EXPECT_NEAR(integrate_weighted(one, w, 0.0, 1.0), 2.0, 1e-11);
}

TEST(Piecewise, LinearInterpolant) {
    const double xs[] = {0.0, 0.5, 1.0}, ys[] = {0.0, 1.0, 0.0};
    const PiecewiseFn f = PiecewiseFn::linear_interpolant(xs, ys);
    EXPECT_NEAR(f(0.25), 0.5, 1e-15);
    EXPECT_NEAR(f(0.75), 0.5, 1e-15);
}

#include "riskbound/catalog.hpp"
#include "riskbound/errors.hpp"
#include "riskbound/evaluate.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace riskbound;

namespace {

const QuantileFn kUniform = QuantileFn(PiecewiseFn::from_terms({Term::monomial(1.0, 1.0)}));

Distortion identity() { return Distortion(PiecewiseFn::from_terms({Term::monomial(1.0, 1.0)})); }
Distortion gini() {
    return Distortion(PiecewiseFn::from_terms({Term::monomial(1.0, 1.0), Term::monomial(-1.0, 2.0)}));
}
// two-point quantile: 0 below 1/2, 1 above
QuantileFn coin() { return QuantileFn::from_knots({0.0, 0.5, 0.5, 1.0}, {0.0, 0.0, 1.0, 1.0}); }

}  // namespace

TEST(Riskmetric, Examples) {
    EXPECT_NEAR(riskmetric(kUniform, identity()), 0.5, 1e-15);
    const QuantileFn c(PiecewiseFn::constant(0.7));
    EXPECT_NEAR(riskmetric(c, identity()), 0.7, 1e-15);
    EXPECT_NEAR(riskmetric(kUniform, gini()), 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(riskmetric(c, gini()), 0.0, 1e-15);
}

TEST(Riskmetric, EsIsTailAverage) {
    // uniform tail average over [0.9, 1]
    EXPECT_NEAR(riskmetric(kUniform, make_g(MeasureId::es(0.9))), 0.95, 1e-13);
}

TEST(Riskmetric, LeftAndRightQuantileAtAJump) {
    // VaR-type g with a single jump at 1/2
    const Distortion left(PiecewiseFn({0.0, 0.5, 1.0}, {{Term::constant(0.0)}, {Term::constant(1.0)}}, {0.0, 0.0, 1.0}));
    const Distortion right(PiecewiseFn({0.0, 0.5, 1.0}, {{Term::constant(0.0)}, {Term::constant(1.0)}}, {0.0, 1.0, 1.0}));
    EXPECT_EQ(riskmetric(coin(), left), 0.0);
    EXPECT_EQ(riskmetric(coin(), right), 1.0);
    // continuous g cannot tell the versions apart
    EXPECT_NEAR(riskmetric(coin(), gini()), 0.25, 1e-15);
    EXPECT_NEAR(riskmetric(coin(), make_g(MeasureId::es(0.5))), 1.0, 1e-14);
}

TEST(Riskmetric, Equivariance) {
    const Distortion g = make_g(MeasureId::cre());
    const double base = riskmetric(kUniform, g);
    EXPECT_NEAR(riskmetric(kUniform.affine(3.0, 2.0), g), 3.0 * g.at_one() + 2.0 * base, 1e-12);
    const Distortion es = make_g(MeasureId::es(0.8));
    EXPECT_NEAR(riskmetric(kUniform.affine(-1.0, 5.0), es), -1.0 + 5.0 * riskmetric(kUniform, es), 1e-12);
}

TEST(Weighted, Examples) {
    // int (u^2/2)(2u - 1) du = 1/12
    EXPECT_NEAR(weighted_entropy(kUniform, gini(), WeightSpec::half_square()), 1.0 / 12.0, 1e-14);
    EXPECT_NEAR(weighted_entropy(kUniform, gini(), WeightSpec::identity()), 1.0 / 6.0, 1e-15);
    // int e^u (2u - 1) du = 3 - e
    EXPECT_NEAR(weighted_entropy(kUniform, gini(), WeightSpec::exponential()), 3.0 - std::exp(1.0), 1e-13);
    EXPECT_THROW(weighted_entropy(kUniform, identity(), WeightSpec::half_square()), ContractError);
}

TEST(Weighted, SpecInverse) {
    const WeightSpec w = WeightSpec::half_square();
    EXPECT_NEAR(w.inverse(w(1.7)), 1.7, 1e-13);
    EXPECT_NEAR(WeightSpec::exponential().inverse(std::exp(-2.0)), -2.0, 1e-12);
    EXPECT_THROW(w.inverse(-1.0), DomainError);
    EXPECT_THROW(WeightSpec::by_name("cube"), DomainError);
    EXPECT_TRUE(WeightSpec::by_name("id").is_identity());
}

TEST(Moments, Uniform) {
    const Moments m = moments(kUniform);
    EXPECT_NEAR(m.mean, 0.5, 1e-15);
    EXPECT_NEAR(m.variance, 1.0 / 12.0, 1e-15);
    const Moments c = moments(coin());
    EXPECT_NEAR(c.mean, 0.5, 1e-15);
    EXPECT_NEAR(c.variance, 0.25, 1e-15);
    // E[U^2/2] = 1/6, Var = 1/20 - 1/36
    const Moments w = moments(kUniform, WeightSpec::half_square());
    EXPECT_NEAR(w.mean, 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(w.variance, 1.0 / 20 - 1.0 / 36, 1e-15);
}

TEST(Moments, FamilyMembersAreStandardized) {
    const MomentInfo mi{0.3, 1.7};
    for (Family f : {Family::UR, Family::UL, Family::S}) {
        for (double b : {0.5, 0.6, 0.9, 0.999}) {
            const Moments m = moments(family_quantile(f, b, mi));
            EXPECT_NEAR(m.mean, 0.3, 1e-12) << family_name(f) << ' ' << b;
            EXPECT_NEAR(m.variance, 1.7 * 1.7, 1e-11) << family_name(f) << ' ' << b;
        }
    }
    EXPECT_TRUE(check_symmetric(family_quantile(Family::S, 0.7, mi), 0.3));
    EXPECT_FALSE(check_symmetric(family_quantile(Family::UR, 0.7, mi), 0.3));
}

TEST(Symmetry, Check) {
    EXPECT_TRUE(check_symmetric(kUniform, 0.5));
    EXPECT_FALSE(check_symmetric(kUniform, 0.4));
    EXPECT_TRUE(check_symmetric(coin(), 0.5));
}

TEST(Quantile, FromKnotsRejectsDecreasing) {
    EXPECT_THROW(QuantileFn::from_knots({0.0, 0.5, 1.0}, {0.0, 1.0, 0.5}), DomainError);
    EXPECT_EQ(coin().left(0.5), 0.0);
    EXPECT_EQ(coin().right(0.5), 1.0);
}

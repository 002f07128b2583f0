#include "riskbound/catalog.hpp"
#include "riskbound/errors.hpp"
#include "riskbound/oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace riskbound;

namespace {

constexpr ShapeClass kShapes[] = {ShapeClass::General, ShapeClass::Unimodal, ShapeClass::Symmetric,
                                  ShapeClass::SymmetricUnimodal};

}  // namespace

TEST(Knots, FeasibleAndExact) {
    const MomentInfo m{0.3, 1.7};
    std::mt19937_64 rng(5);
    for (ShapeClass s : kShapes) {
        for (int i = 0; i < 200; ++i) {
            const Knots k = random_feasible_knots(s, m, rng);
            EXPECT_TRUE(knots_in_shape(k, s, m.mu)) << shape_name(s) << ' ' << i;
            const Moments mo = knot_moments(k);
            EXPECT_NEAR(mo.mean, m.mu, 1e-12);
            EXPECT_NEAR(mo.variance, m.sigma * m.sigma, 1e-11);
            // the library's quadrature agrees with the exact knot moments
            const Moments q = moments(QuantileFn::from_knots(k.u, k.v));
            EXPECT_NEAR(q.mean, mo.mean, 1e-12);
            EXPECT_NEAR(q.variance, mo.variance, 1e-11);
        }
    }
}

TEST(Knots, ShapeTestRejects) {
    // increasing but not symmetric about 0
    const Knots k{{0.0, 0.5, 1.0}, {-1.0, 0.0, 3.0}};
    EXPECT_TRUE(knots_in_shape(k, ShapeClass::General, 0.0));
    EXPECT_FALSE(knots_in_shape(k, ShapeClass::Symmetric, 0.0));
    // convex then concave quantile: CDF the wrong way round for unimodality
    const Knots z{{0.0, 0.25, 0.5, 0.75, 1.0}, {0.0, 0.1, 1.0, 1.9, 2.0}};
    EXPECT_FALSE(knots_in_shape(z, ShapeClass::Unimodal, 1.0));
    EXPECT_FALSE(knots_in_shape(Knots{{0.0, 1.0}, {1.0, 0.0}}, ShapeClass::General, 0.5));
}

TEST(Oracle, Deterministic) {
    const Distortion g = make_g(MeasureId::cre());
    const OracleMax a = random_feasible_max(ShapeClass::Unimodal, g, {0.0, 1.0}, 100, 99);
    const OracleMax b = random_feasible_max(ShapeClass::Unimodal, g, {0.0, 1.0}, 100, 99);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.best_trial, b.best_trial);
    EXPECT_THROW(random_feasible_max(ShapeClass::General, g, {0.0, 1.0}, 0, 1), DomainError);
}

TEST(Oracle, ZeroSigma) {
    const Distortion g = make_g(MeasureId::es(0.9));
    EXPECT_NEAR(random_feasible_max(ShapeClass::General, g, {2.0, 0.0}, 20, 1).value, 2.0, 1e-12);
}

TEST(Oracle, BelowSharpValues) {
    const MomentInfo m{0.0, 1.0};
    EXPECT_LE(random_feasible_max(ShapeClass::Symmetric, make_g(MeasureId::gini()), m, 500, 3).value,
              1 / std::sqrt(3.0) + 1e-9);
    EXPECT_LE(random_feasible_max(ShapeClass::Symmetric, make_g(MeasureId::es(0.9)), m, 500, 3).value,
              std::sqrt(5.0) + 1e-9);
    EXPECT_LE(random_feasible_max(ShapeClass::General, make_g(MeasureId::es(0.8)), m, 500, 3).value, 2.0 + 1e-9);
}

TEST(FamilySup, MatchesEngineFamilyValue) {
    const MomentInfo m{0.0, 1.0};
    for (const MeasureId& id : {MeasureId::cre(), MeasureId::gini(), MeasureId::es(0.9)}) {
        const Distortion g = make_g(id);
        const BoundResult u = bound_unimodal(g, m), s = bound_symmetric_unimodal(g, m);
        const FamilySup r = family_sup(Family::UR, g, m, 257), l = family_sup(Family::UL, g, m, 257);
        EXPECT_NEAR(std::max(r.value, l.value), u.family_value, 1e-8) << id.label();
        EXPECT_NEAR(family_sup(Family::S, g, m, 257).value, s.family_value, 1e-8) << id.label();
        EXPECT_LT(r.moment_error, 1e-8);
    }
    EXPECT_THROW(family_sup(Family::S, make_g(MeasureId::cre()), m, 1), DomainError);
}

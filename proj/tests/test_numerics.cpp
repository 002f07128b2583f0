#include "riskbound/errors.hpp"
#include "riskbound/numerics.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include <cmath>

using namespace riskbound;
using namespace riskbound::numerics;

namespace {

// composite Simpson after u = 1 - s^2, independent of the library's quadrature
double simpson_sqrt_tail(double lo, int n) {
    const double smax = std::sqrt(1.0 - lo);
    auto f = [](double s) {
        const double u = 1.0 - s * s;
        return std::sqrt((9 * u - 1)) * s * 2 * s;  // sqrt((9u-1)(1-u)) du = sqrt(9u-1) s * 2s ds
    };
    const double h = smax / n;
    double acc = f(0.0) + f(smax);
    for (int i = 1; i < n; ++i) acc += f(i * h) * (i % 2 ? 4 : 2);
    return acc * h / 3;
}

}  // namespace

TEST(Quadrature, Linear) { EXPECT_NEAR(integrate([](double u) { return u; }, 0.0, 1.0), 0.5, 1e-15); }

TEST(Quadrature, PolynomialsUpToDegreeNine) {
    for (int k = 0; k <= 9; ++k)
        EXPECT_NEAR(integrate([k](double u) { return std::pow(u, k); }, 0.0, 1.0), 1.0 / (k + 1), 1e-13) << k;
}

TEST(Quadrature, SqrtTailAgainstSimpson) {
    const double v = integrate([](double u) { return std::sqrt((9 * u - 1) * (1 - u)); }, 0.95, 1.0, 1e-13,
                               {std::nullopt, 0.5});
    EXPECT_NEAR(v, simpson_sqrt_tail(0.95, 20000), 1e-12);
    EXPECT_NEAR(v, 0.0207224408913475, 1e-13);  // mpmath
}

TEST(Quadrature, AlgebraicSingularityWithHint) {
    EXPECT_NEAR(integrate([](double u) { return std::sqrt(u); }, 0.0, 1.0, 1e-13, {0.5, std::nullopt}), 2.0 / 3.0,
                1e-13);
    EXPECT_NEAR(integrate([](double u) { return 1 / std::sqrt(u); }, 0.0, 1.0, 1e-12, {-0.5, std::nullopt}), 2.0,
                1e-11);
    // at the upper end 1 - u loses the last ulps of mass; see the anchored test below
    EXPECT_NEAR(integrate([](double u) { return std::pow(u, -0.8); }, 0.0, 1.0, 1e-12, {-0.8, std::nullopt}), 5.0,
                1e-9);
}

TEST(Quadrature, ReversedLimitsFlipSign) {
    EXPECT_NEAR(integrate([](double u) { return u * u; }, 1.0, 0.0), -1.0 / 3.0, 1e-15);
}

TEST(Quadrature, AnchoredDistancesAreExactAtTheEnds) {
    // int_0^1 (1-u)^(-0.9) du = 10; only the exact distance to 1 resolves the last ulp of mass
    const auto r = integrate_anchored([](double, double, double dh) { return std::pow(dh, -0.9); }, 0.0, 1.0,
                                      1e-12, {std::nullopt, -0.9});
    EXPECT_NEAR(r.value, 10.0, 1e-9);
    const auto l = integrate_anchored([](double, double dl, double) { return std::pow(dl, -0.9); }, 0.0, 1.0,
                                      1e-12, {-0.9, std::nullopt});
    EXPECT_NEAR(l.value, 10.0, 1e-9);
}

TEST(Quadrature, BudgetExhaustionThrowsWithEstimate) {
    // an oscillation the rule cannot resolve with a tiny budget
    try {
        integrate_adaptive([](double u) { return std::sin(1e4 * u); }, 0.0, 1.0, 1e-14, {}, 200);
        FAIL() << "expected NumericError";
    } catch (const NumericError& e) {
        EXPECT_GE(e.error_bound(), 0.0);
    }
}

TEST(Quadrature, NonFiniteLimitsRejected) {
    EXPECT_THROW(integrate([](double) { return 1.0; }, 0.0, INFINITY), DomainError);
}

TEST(Brent, SimpleRoot) {
    auto r = brent_root([](double x) { return x - 0.5; }, 0.0, 1.0);
    ASSERT_TRUE(r);
    EXPECT_NEAR(*r, 0.5, 1e-15);
}

TEST(Brent, CreB0) {
    auto r = brent_root([](double b) { return 2.0 / 3.0 * std::log1p(-b) + b; }, 0.1, 0.99);
    ASSERT_TRUE(r);
    EXPECT_NEAR(*r, 0.582812, 1e-6);
    EXPECT_GE(*r, 0.1);
    EXPECT_LE(*r, 0.99);
}

TEST(Brent, NoSignChange) { EXPECT_FALSE(brent_root([](double x) { return x * x + 1; }, 0.0, 1.0)); }

TEST(AllRoots, FindsEverySignChange) {
    auto rs = all_roots([](double x) { return std::sin(10 * x); }, 0.1, 1.0);
    ASSERT_EQ(rs.size(), 3u);
    for (int k = 1; k <= 3; ++k) EXPECT_NEAR(rs[static_cast<std::size_t>(k - 1)], k * M_PI / 10, 1e-13);
}

TEST(SupScan, Parabola) {
    auto r = sup_scan([](double b) { return -(b - 0.3) * (b - 0.3); }, 0.0, 1.0);
    EXPECT_NEAR(r.argmax, 0.3, 1e-8);
    EXPECT_NEAR(r.value, 0.0, 1e-15);
}

TEST(SupScan, RefinementNeverLowersTheGridMax) {
    auto f = [](double b) { return std::sin(7 * b) * std::exp(-b); };
    SupOptions o;
    o.n_grid = 33;
    auto r = sup_scan(f, 0.0, 3.0, o);
    double grid = -INFINITY;
    for (int i = 0; i < 33; ++i) grid = std::max(grid, f(3.0 * i / 32));
    EXPECT_GE(r.value, grid);
}

TEST(SupScan, TiesGoToSmallestArgument) {
    auto r = sup_scan([](double) { return 1.0; }, 0.0, 1.0);
    EXPECT_EQ(r.argmax, 0.0);
}

TEST(Golden, Maximises) { EXPECT_NEAR(golden_max([](double x) { return -std::abs(x - 0.7); }, 0, 1), 0.7, 1e-9); }

TEST(Special, ClosedFormValues) {
    EXPECT_NEAR(beta_fn(2, 2), 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(gamma_upper(1, 1), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(gamma_upper(1, 1), 0.3678794, 1e-7);
    EXPECT_NEAR(gamma_fn(5), 24.0, 1e-12);
    // B_{2/3}(2,2) - B_{1/3}(2,2) = 13/162
    EXPECT_NEAR(beta_inc(2.0 / 3, 2, 2) - beta_inc(1.0 / 3, 2, 2), 13.0 / 162, 1e-15);
}

TEST(Special, IncompleteBetaSeriesOracle) {
    // B_x(3/2, 2) = x^{3/2}(2/3 - 2x/5) by expanding (1-t)
    for (double x : {1.0 / 3, 2.0 / 3})
        EXPECT_NEAR(beta_inc(x, 1.5, 2), std::pow(x, 1.5) * (2.0 / 3 - 0.4 * x), 1e-14);
}

TEST(Special, AgainstBoost) {
    const double grid[] = {1e-3, 0.1, 0.5, 1.0, 1.5, 2.5, 7.0, 20.0, 50.0};
    for (double a : grid) {
        EXPECT_NEAR(gamma_fn(a) / boost::math::tgamma(a), 1.0, 1e-12) << a;
        EXPECT_NEAR(log_gamma(a), boost::math::lgamma(a), 1e-12 * std::max(1.0, std::abs(boost::math::lgamma(a))));
        for (double x : {1e-3, 0.3, 1.0, 4.0, 20.0, 50.0}) {
            EXPECT_NEAR(gamma_p(a, x), boost::math::gamma_p(a, x), 1e-12) << a << ' ' << x;
            EXPECT_NEAR(gamma_q(a, x), boost::math::gamma_q(a, x), 1e-12) << a << ' ' << x;
        }
        for (double b : grid) {
            for (double x : {1e-3, 0.2, 0.5, 0.9, 0.999}) {
                const double ref = boost::math::ibeta(a, b, x);
                EXPECT_NEAR(beta_inc_reg(x, a, b), ref, 1e-12 * std::max(1.0, ref)) << a << ' ' << b << ' ' << x;
            }
        }
    }
}

TEST(Special, UnregularisedGammaAgainstBoost) {
    for (double s : {0.5, 1.0, 2.5, 4.0})
        for (double x : {0.1, 1.0, 3.0, 10.0}) {
            const double up = boost::math::tgamma(s, x), lo = boost::math::tgamma_lower(s, x);
            EXPECT_NEAR(gamma_upper(s, x) / up, 1.0, 1e-12);
            EXPECT_NEAR(gamma_lower(s, x) / lo, 1.0, 1e-12);
        }
}

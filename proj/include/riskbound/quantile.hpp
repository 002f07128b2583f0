#pragma once

#include "riskbound/piecewise.hpp"

#include <vector>

namespace riskbound {

// Non-decreasing quantile function on (0, 1). At a jump the left-continuous
// version F^{-1} takes the left limit and F^{-1+} the right limit.
class QuantileFn {
public:
    QuantileFn() = default;
    explicit QuantileFn(PiecewiseFn fn);

    // Knots (u_i, v_i) with u from 0 to 1; repeated u values encode a jump.
    static QuantileFn from_knots(const std::vector<double>& u, const std::vector<double>& v);

    double left(double u) const;   // F^{-1}(u)
    double right(double u) const;  // F^{-1+}(u)
    double operator()(double u) const { return left(u); }
    const PiecewiseFn& fn() const { return fn_; }

    QuantileFn affine(double shift, double scale) const;  // shift + scale * q

private:
    PiecewiseFn fn_;
};

struct MomentInfo {
    double mu = 0.0;
    double sigma = 0.0;
};

enum class Family { UR, UL, S };

// Two-parameter extremal families used by the lower bounds.
//   UR(b): mu - sigma sqrt((1-b)/(1/3+b)) on [0,b), linear up to the top on [b,1]
//   UL(b): linear on [0,b), flat at mu + sigma sqrt(3b/(4-3b)) on [b,1]
//   S(b):  linear / flat at mu / linear, b in [1/2, 1)
QuantileFn family_quantile(Family fam, double b, const MomentInfo& m);

const char* family_name(Family f);

}  // namespace riskbound

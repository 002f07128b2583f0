#pragma once

#include "riskbound/distortion.hpp"
#include "riskbound/quantile.hpp"

#include <functional>
#include <string>

namespace riskbound {

// Increasing weight Psi for weighted entropies, with derivative psi and a
// bracketed numeric inverse.
class WeightSpec {
public:
    WeightSpec(std::string name, std::function<double(double)> Psi, std::function<double(double)> psi,
               double domain_lo, double domain_hi, bool identity = false);

    static WeightSpec identity();
    static WeightSpec half_square();  // x^2 / 2 on [0, inf)
    static WeightSpec exponential();  // e^x
    static WeightSpec by_name(const std::string& name);

    double operator()(double x) const { return Psi_(x); }
    double derivative(double x) const { return psi_(x); }
    double inverse(double y) const;
    bool is_identity() const { return identity_; }
    const std::string& name() const { return name_; }
    double domain_lo() const { return lo_; }
    double domain_hi() const { return hi_; }

private:
    std::string name_;
    std::function<double(double)> Psi_, psi_;
    double lo_, hi_;
    bool identity_;
};

// rho_g(F^{-1}) = int_0^1 q(u) d hat g(u). Atoms of d hat g use F^{-1} when g is
// left-continuous and F^{-1+} when it is right-continuous; in general the part
// of a jump approached from the left pairs with q(u-) and the rest with q(u+).
double riskmetric(const QuantileFn& q, const Distortion& g);

// int Psi(q(u)) d hat g(u); needs g(1) = 0.
double weighted_entropy(const QuantileFn& q, const Distortion& g, const WeightSpec& w);

struct Moments {
    double mean;
    double variance;
};
Moments moments(const QuantileFn& q);
// Moments of Psi(X).
Moments moments(const QuantileFn& q, const WeightSpec& w);

// q(u) + q(1-u) = 2 mu on an interior grid that skips jump points.
bool check_symmetric(const QuantileFn& q, double mu, double tol = 1e-10);

}  // namespace riskbound

#pragma once

#include "riskbound/piecewise.hpp"

#include <memory>
#include <vector>

namespace riskbound {

// Properties the constructor of a distortion asserts analytically. A false
// field means "not asserted", never "known to fail".
struct DistortionFlags {
    bool continuous = false;
    bool increasing = false;
    bool concave = false;
    bool convex = false;
};

struct Jump {
    double location;
    double size;  // right limit minus left limit (one-sided at 0 and 1)
};

// g : [0,1] -> R of bounded variation with g(0) = 0.
class Distortion {
public:
    Distortion() = default;
    explicit Distortion(PiecewiseFn fn, DistortionFlags flags = {});

    double operator()(double u) const { return fn_(u); }
    double at_one() const { return fn_.point_values().back(); }
    const PiecewiseFn& fn() const { return fn_; }
    const DistortionFlags& flags() const { return flags_; }

    std::vector<Jump> jumps(double tol = 0.0) const;
    bool is_continuous() const { return fn_.is_continuous(1e-13); }
    bool is_left_continuous() const { return fn_.is_left_continuous(1e-13); }
    bool is_right_continuous() const { return fn_.is_right_continuous(1e-13); }

    // Analytic convex envelope of this function, if one is known.
    const std::shared_ptr<const PiecewiseFn>& envelope_hint() const { return envelope_; }
    // Analytic convex envelope of hat(this), if one is known.
    const std::shared_ptr<const PiecewiseFn>& hat_envelope_hint() const { return hat_envelope_; }
    Distortion with_envelope(PiecewiseFn env) const;
    Distortion with_hat_envelope(PiecewiseFn env) const;

    friend Distortion hat(const Distortion& g);

private:
    PiecewiseFn fn_;
    DistortionFlags flags_;
    std::shared_ptr<const PiecewiseFn> envelope_;
    std::shared_ptr<const PiecewiseFn> hat_envelope_;
};

// hat g(u) = g(1) - g(1 - u). An involution; concavity of g maps to convexity.
Distortion hat(const Distortion& g);
// bar g(u) = (g(u) + g(1 - u) - g(1)) / 2
Distortion symmetrize(const Distortion& g);

struct Regularized {
    Distortion g;
    bool unchanged;
};
// check g: the maximum of value, left and right limit at every interior breakpoint.
Regularized usc_regularize(const Distortion& g);

// Residual-lifetime hat: u -> -g((1-u)/(1-q)) on [q, 1], 0 before. Needs g(1) = 0.
Distortion residual_transform(const Distortion& g, double q);
// Past-lifetime hat: u -> -g((q-u)/q) on [0, q], 0 after. Needs g(1) = 0.
Distortion past_transform(const Distortion& g, double q);

// Grid check of the asserted flags (1025 points, tolerance 1e-12 relative).
bool verify_flags(const Distortion& g, std::size_t n = 1025);

}  // namespace riskbound

#include "jmes/distortion.hpp"

#include <cmath>

namespace jmes {

namespace {
constexpr double kDegenerate = 1e-12;
}

DistortionCurve::DistortionCurve(Copula copula, double alpha, double beta,
                                 DistortionKind kind)
    : copula_(std::move(copula)), alpha_(alpha), beta_(beta), kind_(kind) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("distortion: alpha outside [0,1)");
    if (!(beta >= 0.0 && beta < 1.0)) throw DomainError("distortion: beta outside [0,1)");
    cbar_ab_ = copula_.tail(alpha_, beta_);
    if (kind_ != DistortionKind::MarginalTail && cbar_ab_ < kDegenerate)
        throw DegenerateConditioning("distortion: joint tail event has no mass");
}

double DistortionCurve::eval(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("distortion eval: t outside [0,1]");
    switch (kind_) {
        case DistortionKind::MarginalTail:
            return std::max((t - beta_) / (1.0 - beta_), 0.0);
        case DistortionKind::JointTail: {
            if (t <= beta_) return 0.0;
            if (t == 1.0) return 1.0;
            return 1.0 - copula_.tail(alpha_, t) / cbar_ab_;
        }
        case DistortionKind::DualForm: {
            if (t == 0.0) return 0.0;
            return std::min(copula_.tail(alpha_, 1.0 - t) / cbar_ab_, 1.0);
        }
    }
    return 0.0;
}

double DistortionCurve::derivative(double t) const {
    if (kind_ == DistortionKind::MarginalTail)
        return t > beta_ ? 1.0 / (1.0 - beta_) : 0.0;
    if (kind_ == DistortionKind::DualForm)
        throw DomainError("distortion derivative: use the JointTail form");
    if (!(t > beta_ && t < 1.0))
        throw DomainError("distortion derivative: t outside (beta,1)");
    return (1.0 - copula_.partial2(alpha_, t)) / cbar_ab_;
}

double DistortionCurve::inverse(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("distortion inverse: p outside [0,1]");
    if (kind_ == DistortionKind::MarginalTail) return beta_ + (1.0 - beta_) * p;
    if (kind_ == DistortionKind::DualForm) {
        // inf{t : h(t) >= p} = 1 - sup{s : hbar(s) <= 1-p}.
        DistortionCurve joint(copula_, alpha_, beta_, DistortionKind::JointTail);
        if (p == 0.0) return 0.0;
        if (p == 1.0) return 1.0 - beta_;
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (eval(mid) >= p) {
                hi = mid;
            } else {
                lo = mid;
            }
            if (hi - lo < 1e-12) break;
        }
        return hi;
    }
    if (p == 0.0) return beta_;  // continuous copulas put no mass below beta
    if (p >= 1.0) return 1.0;
    // Monotone bisection warm-started from the independence linear guess.
    double lo = beta_, hi = 1.0;
    double mid = beta_ + (1.0 - beta_) * p;
    for (int it = 0; it < 100; ++it) {
        if (eval(mid) >= p) {
            hi = mid;
        } else {
            lo = mid;
        }
        if (hi - lo < 1e-12) break;
        mid = 0.5 * (lo + hi);
    }
    return 0.5 * (lo + hi);
}

ConvexityResult compose_convexity_check(const DistortionCurve& outer,
                                        const DistortionCurve& inner, int grid_points,
                                        double tolerance) {
    if (outer.beta() != inner.beta())
        throw DomainError("compose_convexity_check: curves must share beta");
    if (grid_points < 3) throw DomainError("compose_convexity_check: need >= 3 points");
    ConvexityResult res;
    const int n = grid_points;
    std::vector<double> f(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / (n - 1);
        f[static_cast<std::size_t>(i)] = outer.eval(inner.inverse(t));
    }
    for (int i = 1; i + 1 < n; ++i) {
        const double gap = f[i] - 0.5 * (f[i - 1] + f[i + 1]);
        if (gap > tolerance) {
            res.convex = false;
            res.witnesses.push_back({static_cast<double>(i - 1) / (n - 1),
                                     static_cast<double>(i) / (n - 1),
                                     static_cast<double>(i + 1) / (n - 1), gap});
        }
    }
    return res;
}

}  // namespace jmes

#pragma once

// Conditional distortion curves induced by the joint tail event
// {U > alpha, V > beta}: the tail form hbar_{alpha,beta}, the marginal
// tail form hbar_beta, and the dual distortion h_{alpha,beta}.

#include <vector>

#include "jmes/copulas.hpp"

namespace jmes {

enum class DistortionKind {
    JointTail,     // hbar_{alpha,beta}: cdf of V given U>alpha, V>beta
    MarginalTail,  // hbar_beta = max{(t-beta)/(1-beta), 0}
    DualForm,      // h_{alpha,beta}(t) = 1 - hbar_{alpha,beta}(1-t)
};

struct ConvexityWitness {
    double t_left, t_mid, t_right;
    double gap;  // f(mid) - (f(left)+f(right))/2, positive when convexity fails
};

struct ConvexityResult {
    bool convex = true;
    std::vector<ConvexityWitness> witnesses;
};

class DistortionCurve {
  public:
    DistortionCurve(Copula copula, double alpha, double beta,
                    DistortionKind kind = DistortionKind::JointTail);

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    DistortionKind kind() const { return kind_; }
    const Copula& copula() const { return copula_; }
    // Mass of the conditioning event, P(U>alpha, V>beta).
    double conditioning_mass() const { return cbar_ab_; }

    double eval(double t) const;
    // d/dt of the JointTail form on (beta, 1): (1 - partial2(alpha,t)) / Cbar(alpha,beta).
    double derivative(double t) const;
    // Generalized inverse inf{t : eval(t) >= p}.
    double inverse(double p) const;

  private:
    Copula copula_;
    double alpha_, beta_;
    DistortionKind kind_;
    double cbar_ab_;
};

// Midpoint-convexity check of outer.eval(inverse of inner) on a uniform grid;
// both curves must share the copula and beta.
ConvexityResult compose_convexity_check(const DistortionCurve& outer,
                                        const DistortionCurve& inner, int grid_points = 1001,
                                        double tolerance = 1e-9);

}  // namespace jmes

#pragma once

// Peaks-over-threshold estimation: GPD maximum likelihood on tail
// exceedances and the three-piece semiparametric marginal (GPD tails
// around an empirical body).

#include <cstdint>
#include <vector>

#include "jmes/distributions.hpp"

namespace jmes {

struct GpdFit {
    double xi = 0.0;
    double scale = 1.0;
    double threshold = 0.0;
    std::int64_t n_exceed = 0;
    double loglik = 0.0;
    // Norm of the average log-likelihood gradient in (xi, log scale) at the
    // reported optimum.
    double grad_norm = 0.0;
    bool small_sample_warning = false;  // n_exceed < 30
};

// L_t = -100 * log(p_t / p_{t-1}); positive when the price falls.
std::vector<double> log_losses(const std::vector<double>& prices);

// MLE for GPD(xi, scale) on positive excesses; profile search over
// xi in [-0.5, 2] with an inner scale maximization.
GpdFit fit_gpd(const std::vector<double>& excesses);

// GPD log-likelihood at (xi, scale); the xi -> 0 branch is the exponential
// limit.
double gpd_loglik(const std::vector<double>& excesses, double xi, double scale);

struct SemiParametricParts {
    GpdFit lower;
    GpdFit upper;
    double u_lo = 0.0;
    double u_hi = 0.0;
    std::int64_t n = 0;
    std::int64_t n_below = 0;  // observations strictly below u_lo
    std::int64_t n_above = 0;  // observations strictly above u_hi
};

// Empirical body between the tail_frac and 1-tail_frac empirical quantiles,
// mirrored GPD below, GPD above; the result conforms to the Marginal
// interface.  The parts used to build it are retrievable from the impl.
Marginal build_semiparametric(const std::vector<double>& sample, double tail_frac = 0.1);

// Access the fitted pieces of a semiparametric marginal.
const SemiParametricParts& semiparametric_parts(const Marginal& m);

}  // namespace jmes

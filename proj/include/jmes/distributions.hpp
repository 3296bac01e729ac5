#pragma once

// Univariate marginal models: cdf, generalized-inverse quantile, density
// where available, mean, and the analytic upper-tail integral
// tail_mean(p) = integral of quantile(t) over t in (p,1), which backs ES
// and the tail completions of the conditional measure integrals.

#include <memory>
#include <string>
#include <vector>

#include "jmes/errors.hpp"

namespace jmes {

enum class MarginalFamily {
    Normal,
    LogNormal,
    StudentT,
    Gamma,
    Gpd,
    Empirical,
    ShiftScale,
    SemiParametric,
    ComonotoneSum,
};

// How the quantile function behaves on (p_lo, p_hi]: smooth enough for
// quadrature, or piecewise constant with the given break points.
struct QuantileSegment {
    double p_lo = 0.0;
    double p_hi = 1.0;
    bool stepwise = false;
    std::vector<double> knots;  // increasing partition of (p_lo, p_hi]
};

class MarginalImpl {
  public:
    virtual ~MarginalImpl() = default;
    virtual MarginalFamily family() const = 0;
    virtual std::string describe() const = 0;
    virtual double cdf(double x) const = 0;
    // Generalized inverse inf{x : cdf(x) >= p}, p in (0,1).
    virtual double quantile(double p) const = 0;
    virtual bool has_density() const { return true; }
    virtual double density(double x) const = 0;
    virtual double mean() const = 0;
    virtual double tail_mean(double p) const = 0;
    virtual bool continuous() const { return true; }
    virtual std::vector<QuantileSegment> segments() const { return {{0.0, 1.0, false, {}}}; }
};

// Immutable value handle; cheap to copy, safe for concurrent reads.
class Marginal {
  public:
    explicit Marginal(std::shared_ptr<const MarginalImpl> impl) : impl_(std::move(impl)) {}

    static Marginal normal(double mu, double sigma);
    static Marginal log_normal(double mu, double sigma);
    static Marginal student_t(double nu);
    static Marginal gamma(double shape, double scale);
    static Marginal gpd(double xi, double scale, double threshold);
    static Marginal empirical(std::vector<double> sample);
    static Marginal shift_scale(const Marginal& base, double loc, double scale);
    // Quantile-additive coupling of two margins driven by one uniform.
    static Marginal comonotone_sum(const Marginal& a, const Marginal& b);

    MarginalFamily family() const { return impl_->family(); }
    std::string describe() const { return impl_->describe(); }
    double cdf(double x) const { return impl_->cdf(x); }
    double quantile(double p) const;
    bool has_density() const { return impl_->has_density(); }
    double density(double x) const { return impl_->density(x); }
    double mean() const { return impl_->mean(); }
    double tail_mean(double p) const;
    bool continuous() const { return impl_->continuous(); }
    std::vector<QuantileSegment> segments() const { return impl_->segments(); }

    // ES_p = tail_mean(p) / (1-p); ES_0 is the mean.
    double es(double p) const;
    // W_p = (1-p) * (ES_p - VaR_p).
    double excess_wealth(double p) const;
    // EPW_p = W_p / VaR_p; throws ZeroQuantile when VaR_p is zero.
    double epw(double p) const;

    const MarginalImpl& impl() const { return *impl_; }

  private:
    std::shared_ptr<const MarginalImpl> impl_;
};

// Evaluation grid of probabilities, strictly increasing inside (0,1).
struct PGrid {
    std::vector<double> points;

    static PGrid uniform(int n);
    // 199 uniform interior points plus 20 log-spaced points near each end;
    // order violations for the families here concentrate in the tails.
    static PGrid default_grid();
    // Superset refinement: keeps every existing point, adds midpoints.
    static PGrid refined(const PGrid& g);
    void validate() const;
};

}  // namespace jmes

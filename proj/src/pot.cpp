#include "jmes/pot.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "optimize.hpp"

namespace jmes {

std::vector<double> log_losses(const std::vector<double>& prices) {
    if (prices.size() < 2) throw DomainError("log_losses: need at least two prices");
    std::vector<double> out;
    out.reserve(prices.size() - 1);
    for (std::size_t i = 1; i < prices.size(); ++i) {
        if (!(prices[i] > 0.0) || !(prices[i - 1] > 0.0))
            throw NonPositivePrice("log_losses: prices must be positive");
        out.push_back(-100.0 * std::log(prices[i] / prices[i - 1]));
    }
    return out;
}

double gpd_loglik(const std::vector<double>& excesses, double xi, double scale) {
    const auto n = static_cast<double>(excesses.size());
    double ll = -n * std::log(scale);
    if (std::fabs(xi) < 1e-10) {
        for (double x : excesses) ll -= x / scale;
        return ll;
    }
    const double c = 1.0 + 1.0 / xi;
    for (double x : excesses) {
        const double t = xi * x / scale;
        if (t <= -1.0) return -std::numeric_limits<double>::infinity();
        ll -= c * std::log1p(t);
    }
    return ll;
}

GpdFit fit_gpd(const std::vector<double>& excesses) {
    if (excesses.size() < 10) throw DomainError("fit_gpd: need at least 10 excesses");
    double xmax = 0.0, xmin = std::numeric_limits<double>::infinity();
    double xsum = 0.0;
    for (double x : excesses) {
        if (!(x > 0.0)) throw DomainError("fit_gpd: excesses must be positive");
        xmax = std::max(xmax, x);
        xmin = std::min(xmin, x);
        xsum += x;
    }
    if (xmax - xmin < 1e-12 * xmax)
        throw DegenerateSample("fit_gpd: all excesses (nearly) equal");
    const double xbar = xsum / static_cast<double>(excesses.size());

    // Inner maximization over scale at fixed xi.  For xi < 0 the support
    // constraint needs scale > -xi * max(x).
    auto best_scale = [&](double xi) {
        double lo = 1e-8 * xbar;
        double hi = 100.0 * (xbar + xmax);
        if (xi < 0.0) lo = std::max(lo, -xi * xmax * (1.0 + 1e-10));
        const auto r = opt::brent_minimize(
            [&](double ls) { return -gpd_loglik(excesses, xi, std::exp(ls)); },
            std::log(lo), std::log(hi), 1e-12, 300);
        return std::pair<double, double>(std::exp(r.x), -r.f);
    };

    const auto prof = opt::brent_minimize(
        [&](double xi) { return -best_scale(xi).second; }, -0.5, 2.0, 1e-10, 300);
    if (!prof.converged) throw NonConvergence("fit_gpd: profile search did not converge");

    GpdFit fit;
    fit.xi = prof.x;
    fit.scale = best_scale(prof.x).first;
    fit.n_exceed = static_cast<std::int64_t>(excesses.size());
    fit.loglik = gpd_loglik(excesses, fit.xi, fit.scale);
    fit.small_sample_warning = excesses.size() < 30;
    // Average-gradient norm in (xi, log scale) by central differences.
    const double h1 = 1e-6, h2 = 1e-6;
    const double n = static_cast<double>(excesses.size());
    const double gx =
        (gpd_loglik(excesses, fit.xi + h1, fit.scale) -
         gpd_loglik(excesses, fit.xi - h1, fit.scale)) / (2.0 * h1) / n;
    const double gs =
        (gpd_loglik(excesses, fit.xi, fit.scale * std::exp(h2)) -
         gpd_loglik(excesses, fit.xi, fit.scale * std::exp(-h2))) / (2.0 * h2) / n;
    fit.grad_norm = std::hypot(gx, gs);
    return fit;
}

namespace {

// Three branches: mirrored GPD below u_lo, empirical cdf on the body,
// GPD above u_hi.  The printed lower branch of the source form is not a
// valid decreasing cdf as written; the standard mirrored tail
// (N_lo/N) * (1 + xi_L (u_lo - x) / beta_L)^(-1/xi_L) is used instead.
class SemiParametricDist final : public MarginalImpl {
  public:
    SemiParametricDist(std::vector<double> sorted, SemiParametricParts parts)
        : x_(std::move(sorted)), parts_(parts) {
        suffix_.assign(x_.size() + 1, 0.0);
        for (std::size_t i = x_.size(); i > 0; --i)
            suffix_[i - 1] = suffix_[i] + x_[i - 1];
        lo_frac_ = static_cast<double>(parts_.n_below) / static_cast<double>(parts_.n);
        hi_frac_ = static_cast<double>(parts_.n_above) / static_cast<double>(parts_.n);
    }

    MarginalFamily family() const override { return MarginalFamily::SemiParametric; }
    std::string describe() const override {
        return "semiparametric(n=" + std::to_string(parts_.n) +
               ",xi_hi=" + std::to_string(parts_.upper.xi) + ")";
    }

    double cdf(double x) const override {
        if (x > parts_.u_hi) {
            const double z = (x - parts_.u_hi) / parts_.upper.scale;
            return 1.0 - hi_frac_ * gpd_sf(z, parts_.upper.xi);
        }
        if (x < parts_.u_lo) {
            const double z = (parts_.u_lo - x) / parts_.lower.scale;
            return lo_frac_ * gpd_sf(z, parts_.lower.xi);
        }
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        return static_cast<double>(it - x_.begin()) / static_cast<double>(x_.size());
    }

    double quantile(double p) const override {
        if (p > 1.0 - hi_frac_) {
            const double sf = (1.0 - p) / hi_frac_;  // survival beyond u_hi
            return parts_.u_hi + gpd_sf_inv(sf, parts_.upper.xi, parts_.upper.scale);
        }
        if (p < lo_frac_) {
            const double sf = p / lo_frac_;
            return parts_.u_lo - gpd_sf_inv(sf, parts_.lower.xi, parts_.lower.scale);
        }
        const auto n = static_cast<double>(x_.size());
        auto k = static_cast<std::size_t>(std::ceil(n * p));
        k = std::clamp<std::size_t>(k, 1, x_.size());
        return x_[k - 1];
    }

    bool has_density() const override { return false; }
    double density(double) const override {
        throw DensityUnavailable("semiparametric: body has no density");
    }

    double mean() const override { return tail_mean(0.0); }

    double tail_mean(double p) const override {
        const double hi_start = 1.0 - hi_frac_;
        double total = upper_tail_mean_from(std::max(p, hi_start));
        if (p >= hi_start) return total;
        // Body: exact step sums between p and the upper threshold level.
        const auto n = static_cast<double>(x_.size());
        const double body_lo = std::max(p, lo_frac_);
        auto k = static_cast<std::size_t>(std::ceil(n * body_lo));
        k = std::clamp<std::size_t>(k, 1, x_.size());
        const auto k_hi = static_cast<std::size_t>(std::llround(hi_start * n));
        if (k <= k_hi) {
            total += x_[k - 1] * (static_cast<double>(k) / n - body_lo);
            total += (suffix_[k] - suffix_[k_hi]) / n;
        }
        if (p < lo_frac_) total += lower_tail_mean_to(p);
        return total;
    }

    bool continuous() const override { return false; }

    std::vector<QuantileSegment> segments() const override {
        std::vector<QuantileSegment> segs;
        if (lo_frac_ > 0.0) segs.push_back({0.0, lo_frac_, false, {}});
        QuantileSegment body;
        body.p_lo = lo_frac_;
        body.p_hi = 1.0 - hi_frac_;
        body.stepwise = true;
        const auto n = static_cast<double>(x_.size());
        const auto k_lo = static_cast<std::size_t>(std::llround(lo_frac_ * n));
        const auto k_hi = static_cast<std::size_t>(std::llround((1.0 - hi_frac_) * n));
        for (std::size_t i = k_lo + 1; i <= k_hi; ++i)
            body.knots.push_back(static_cast<double>(i) / n);
        segs.push_back(body);
        if (hi_frac_ > 0.0) segs.push_back({1.0 - hi_frac_, 1.0, false, {}});
        return segs;
    }

    const SemiParametricParts& parts() const { return parts_; }

  private:
    static double gpd_sf(double z, double xi) {  // survival of the excess law
        if (std::fabs(xi) < 1e-12) return std::exp(-z);
        const double t = 1.0 + xi * z;
        if (t <= 0.0) return 0.0;
        return std::exp(-std::log1p(xi * z) / xi);
    }
    static double gpd_sf_inv(double sf, double xi, double scale) {
        if (std::fabs(xi) < 1e-12) return -scale * std::log(sf);
        return scale * std::expm1(-xi * std::log(sf)) / xi;
    }

    // integral of the quantile over (p, 1) inside the upper GPD branch.
    double upper_tail_mean_from(double p) const {
        if (parts_.upper.xi >= 1.0)
            throw NonintegrableTail("semiparametric: upper tail mean requires xi < 1");
        const double q = 1.0 - p;  // <= hi_frac_
        if (q <= 0.0) return 0.0;
        const double xi = parts_.upper.xi;
        const double s = parts_.upper.scale;
        // quantile(1-q) = u_hi + (s/xi) * ((q/hi_frac)^{-xi} - 1)
        if (std::fabs(xi) < 1e-12) {
            const double r = q / hi_frac_;
            return q * parts_.u_hi + s * q * (1.0 - std::log(r));
        }
        const double r = q / hi_frac_;
        return q * (parts_.u_hi - s / xi) +
               (s / xi) * hi_frac_ * std::pow(r, 1.0 - xi) / (1.0 - xi);
    }

    // integral of the quantile over (0, p) inside the lower GPD branch.
    double lower_tail_mean_to(double p) const {
        const double xi = parts_.lower.xi;
        const double s = parts_.lower.scale;
        const double span = p;  // integrate quantile from 0 to p, p <= lo_frac
        if (xi >= 1.0) throw NonintegrableTail("semiparametric: lower tail mean requires xi < 1");
        // quantile(t) = u_lo - (s/xi)((t/lo_frac)^{-xi} - 1) for t < lo_frac
        if (std::fabs(xi) < 1e-12) {
            const double r = span / lo_frac_;
            return span * parts_.u_lo - s * span * (1.0 - std::log(r));
        }
        const double r = span / lo_frac_;
        return span * (parts_.u_lo + s / xi) -
               (s / xi) * lo_frac_ * std::pow(r, 1.0 - xi) / (1.0 - xi);
    }

    std::vector<double> x_;
    std::vector<double> suffix_;
    SemiParametricParts parts_;
    double lo_frac_, hi_frac_;
};

}  // namespace

Marginal build_semiparametric(const std::vector<double>& sample, double tail_frac) {
    if (sample.size() < 100) throw DomainError("build_semiparametric: need n >= 100");
    if (!(tail_frac > 0.0 && tail_frac < 0.5))
        throw DomainError("build_semiparametric: tail_frac outside (0, 0.5)");
    std::vector<double> sorted = sample;
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    // Thresholds at the empirical quantiles (generalized inverse).
    auto order_stat = [&](double p) {
        auto k = static_cast<std::size_t>(std::ceil(n * p));
        k = std::clamp<std::size_t>(k, 1, sorted.size());
        return sorted[k - 1];
    };
    SemiParametricParts parts;
    parts.n = static_cast<std::int64_t>(sorted.size());
    parts.u_lo = order_stat(tail_frac);
    parts.u_hi = order_stat(1.0 - tail_frac);

    std::vector<double> upper_exc, lower_exc;
    for (double x : sorted) {
        if (x > parts.u_hi) upper_exc.push_back(x - parts.u_hi);
        if (x < parts.u_lo) lower_exc.push_back(parts.u_lo - x);
    }
    parts.n_above = static_cast<std::int64_t>(upper_exc.size());
    parts.n_below = static_cast<std::int64_t>(lower_exc.size());
    parts.upper = fit_gpd(upper_exc);
    parts.upper.threshold = parts.u_hi;
    parts.lower = fit_gpd(lower_exc);
    parts.lower.threshold = parts.u_lo;
    return Marginal(std::make_shared<SemiParametricDist>(std::move(sorted), parts));
}

const SemiParametricParts& semiparametric_parts(const Marginal& m) {
    const auto* p = dynamic_cast<const SemiParametricDist*>(&m.impl());
    if (!p) throw DomainError("semiparametric_parts: not a semiparametric marginal");
    return p->parts();
}

}  // namespace jmes

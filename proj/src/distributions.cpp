#include "jmes/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "jmes/special_functions.hpp"

namespace jmes {

namespace {

void require_prob_open(double p, const char* who) {
    if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream os;
        os << who << ": p = " << p << " outside (0,1)";
        throw DomainError(os.str());
    }
}

class NormalDist final : public MarginalImpl {
  public:
    NormalDist(double mu, double sigma) : mu_(mu), sigma_(sigma) {
        if (!(sigma > 0.0)) throw DomainError("normal: sigma must be > 0");
    }
    MarginalFamily family() const override { return MarginalFamily::Normal; }
    std::string describe() const override {
        std::ostringstream os;
        os << "normal(" << mu_ << "," << sigma_ << ")";
        return os.str();
    }
    double cdf(double x) const override { return sf::normal_cdf((x - mu_) / sigma_); }
    double quantile(double p) const override { return mu_ + sigma_ * sf::normal_quantile(p); }
    double density(double x) const override {
        return sf::normal_pdf((x - mu_) / sigma_) / sigma_;
    }
    double mean() const override { return mu_; }
    double tail_mean(double p) const override {
        if (p == 0.0) return mu_;
        return mu_ * (1.0 - p) + sigma_ * sf::normal_pdf(sf::normal_quantile(p));
    }

  private:
    double mu_, sigma_;
};

class LogNormalDist final : public MarginalImpl {
  public:
    LogNormalDist(double mu, double sigma) : mu_(mu), sigma_(sigma) {
        if (!(sigma > 0.0)) throw DomainError("log_normal: sigma must be > 0");
    }
    MarginalFamily family() const override { return MarginalFamily::LogNormal; }
    std::string describe() const override {
        std::ostringstream os;
        os << "lognormal(" << mu_ << "," << sigma_ << ")";
        return os.str();
    }
    double cdf(double x) const override {
        if (x <= 0.0) return 0.0;
        return sf::normal_cdf((std::log(x) - mu_) / sigma_);
    }
    double quantile(double p) const override {
        return std::exp(mu_ + sigma_ * sf::normal_quantile(p));
    }
    double density(double x) const override {
        if (x <= 0.0) return 0.0;
        return sf::normal_pdf((std::log(x) - mu_) / sigma_) / (sigma_ * x);
    }
    double mean() const override { return std::exp(mu_ + 0.5 * sigma_ * sigma_); }
    double tail_mean(double p) const override {
        if (p == 0.0) return mean();
        return mean() * sf::normal_cdf(sigma_ - sf::normal_quantile(p));
    }

  private:
    double mu_, sigma_;
};

class StudentTDist final : public MarginalImpl {
  public:
    explicit StudentTDist(double nu) : nu_(nu) {
        if (!(nu > 0.0)) throw DomainError("student_t: nu must be > 0");
    }
    MarginalFamily family() const override { return MarginalFamily::StudentT; }
    std::string describe() const override {
        std::ostringstream os;
        os << "student_t(" << nu_ << ")";
        return os.str();
    }
    double cdf(double x) const override { return sf::student_t_cdf(x, nu_); }
    double quantile(double p) const override { return sf::student_t_quantile(p, nu_); }
    double density(double x) const override { return sf::student_t_pdf(x, nu_); }
    double mean() const override {
        if (nu_ <= 1.0) throw NonintegrableTail("student_t: mean requires nu > 1");
        return 0.0;
    }
    double tail_mean(double p) const override {
        if (nu_ <= 1.0) throw NonintegrableTail("student_t: tail mean requires nu > 1");
        if (p == 0.0) return 0.0;
        const double x = quantile(p);
        const double lc = std::lgamma(0.5 * (nu_ + 1.0)) - std::lgamma(0.5 * nu_) -
                          0.5 * std::log(nu_ * M_PI);
        return std::exp(lc) * nu_ / (nu_ - 1.0) *
               std::pow(1.0 + x * x / nu_, 0.5 * (1.0 - nu_));
    }

  private:
    double nu_;
};

class GammaDist final : public MarginalImpl {
  public:
    GammaDist(double shape, double scale) : a_(shape), b_(scale) {
        if (!(shape > 0.0)) throw DomainError("gamma: shape must be > 0");
        if (!(scale > 0.0)) throw DomainError("gamma: scale must be > 0");
    }
    MarginalFamily family() const override { return MarginalFamily::Gamma; }
    std::string describe() const override {
        std::ostringstream os;
        os << "gamma(" << a_ << "," << b_ << ")";
        return os.str();
    }
    double cdf(double x) const override {
        if (x <= 0.0) return 0.0;
        return sf::gamma_p(a_, x / b_);
    }
    double quantile(double p) const override { return b_ * sf::gamma_p_inverse(a_, p); }
    double density(double x) const override {
        if (x <= 0.0) return 0.0;
        return std::exp((a_ - 1.0) * std::log(x) - x / b_ - std::lgamma(a_) -
                        a_ * std::log(b_));
    }
    double mean() const override { return a_ * b_; }
    double tail_mean(double p) const override {
        if (p == 0.0) return mean();
        return a_ * b_ * sf::gamma_q(a_ + 1.0, quantile(p) / b_);
    }

  private:
    double a_, b_;
};

class GpdDist final : public MarginalImpl {
  public:
    GpdDist(double xi, double scale, double threshold) : xi_(xi), sigma_(scale), u_(threshold) {
        if (!(scale > 0.0)) throw DomainError("gpd: scale must be > 0");
    }
    MarginalFamily family() const override { return MarginalFamily::Gpd; }
    std::string describe() const override {
        std::ostringstream os;
        os << "gpd(xi=" << xi_ << ",scale=" << sigma_ << ",u=" << u_ << ")";
        return os.str();
    }
    double cdf(double x) const override {
        if (x <= u_) return 0.0;
        const double z = (x - u_) / sigma_;
        if (std::fabs(xi_) < 1e-12) return -std::expm1(-z);
        const double t = 1.0 + xi_ * z;
        if (t <= 0.0) return 1.0;  // beyond the finite endpoint when xi < 0
        return -std::expm1(-std::log1p(xi_ * z) / xi_);
    }
    double quantile(double p) const override {
        if (std::fabs(xi_) < 1e-12) return u_ - sigma_ * std::log1p(-p);
        return u_ + sigma_ * std::expm1(-xi_ * std::log1p(-p)) / xi_;
    }
    double density(double x) const override {
        if (x <= u_) return 0.0;
        const double z = (x - u_) / sigma_;
        if (std::fabs(xi_) < 1e-12) return std::exp(-z) / sigma_;
        const double t = 1.0 + xi_ * z;
        if (t <= 0.0) return 0.0;
        return std::exp(-(1.0 / xi_ + 1.0) * std::log(t)) / sigma_;
    }
    double mean() const override {
        if (xi_ >= 1.0) throw NonintegrableTail("gpd: mean requires xi < 1");
        return u_ + sigma_ / (1.0 - xi_);
    }
    double tail_mean(double p) const override {
        if (xi_ >= 1.0) throw NonintegrableTail("gpd: tail mean requires xi < 1");
        const double q = 1.0 - p;
        if (std::fabs(xi_) < 1e-12) return q * u_ + sigma_ * q * (1.0 - std::log(q));
        return q * (u_ - sigma_ / xi_) +
               (sigma_ / xi_) * std::pow(q, 1.0 - xi_) / (1.0 - xi_);
    }

  private:
    double xi_, sigma_, u_;
};

class EmpiricalDist final : public MarginalImpl {
  public:
    explicit EmpiricalDist(std::vector<double> sample) : x_(std::move(sample)) {
        if (x_.empty()) throw DomainError("empirical: sample must be nonempty");
        std::sort(x_.begin(), x_.end());
        suffix_.assign(x_.size() + 1, 0.0);
        for (std::size_t i = x_.size(); i > 0; --i)
            suffix_[i - 1] = suffix_[i] + x_[i - 1];
    }
    MarginalFamily family() const override { return MarginalFamily::Empirical; }
    std::string describe() const override {
        std::ostringstream os;
        os << "empirical(n=" << x_.size() << ")";
        return os.str();
    }
    double cdf(double x) const override {
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        return static_cast<double>(it - x_.begin()) / static_cast<double>(x_.size());
    }
    double quantile(double p) const override {
        // Type-1 (left-continuous inverse): the ceil(n*p)-th order statistic.
        const auto n = static_cast<double>(x_.size());
        auto k = static_cast<std::size_t>(std::ceil(n * p));
        if (k < 1) k = 1;
        if (k > x_.size()) k = x_.size();
        return x_[k - 1];
    }
    bool has_density() const override { return false; }
    double density(double) const override {
        throw DensityUnavailable("empirical: no density");
    }
    double mean() const override { return suffix_[0] / static_cast<double>(x_.size()); }
    double tail_mean(double p) const override {
        if (p == 0.0) return mean();
        const auto n = static_cast<double>(x_.size());
        auto k = static_cast<std::size_t>(std::ceil(n * p));
        if (k < 1) k = 1;
        if (k > x_.size()) return 0.0;
        return x_[k - 1] * (static_cast<double>(k) / n - p) + suffix_[k] / n;
    }
    bool continuous() const override { return false; }
    std::vector<QuantileSegment> segments() const override {
        QuantileSegment s;
        s.p_lo = 0.0;
        s.p_hi = 1.0;
        s.stepwise = true;
        const auto n = static_cast<double>(x_.size());
        s.knots.reserve(x_.size());
        for (std::size_t i = 1; i <= x_.size(); ++i)
            s.knots.push_back(static_cast<double>(i) / n);
        return {s};
    }

  private:
    std::vector<double> x_;
    std::vector<double> suffix_;  // suffix_[i] = sum of x_[i..n)
};

class ShiftScaleDist final : public MarginalImpl {
  public:
    ShiftScaleDist(Marginal base, double loc, double scale)
        : base_(std::move(base)), loc_(loc), scale_(scale) {
        if (!(scale > 0.0)) throw DomainError("shift_scale: scale must be > 0");
    }
    MarginalFamily family() const override { return MarginalFamily::ShiftScale; }
    std::string describe() const override {
        std::ostringstream os;
        os << "shift_scale(" << base_.describe() << ",loc=" << loc_ << ",scale=" << scale_
           << ")";
        return os.str();
    }
    double cdf(double x) const override { return base_.cdf((x - loc_) / scale_); }
    double quantile(double p) const override { return loc_ + scale_ * base_.quantile(p); }
    bool has_density() const override { return base_.has_density(); }
    double density(double x) const override {
        return base_.density((x - loc_) / scale_) / scale_;
    }
    double mean() const override { return loc_ + scale_ * base_.mean(); }
    double tail_mean(double p) const override {
        return loc_ * (1.0 - p) + scale_ * base_.tail_mean(p);
    }
    bool continuous() const override { return base_.continuous(); }
    std::vector<QuantileSegment> segments() const override { return base_.segments(); }

  private:
    Marginal base_;
    double loc_, scale_;
};

class ComonotoneSumDist final : public MarginalImpl {
  public:
    ComonotoneSumDist(Marginal a, Marginal b) : a_(std::move(a)), b_(std::move(b)) {
        if (!a_.continuous() || !b_.continuous())
            throw DomainError("comonotone_sum: components must be continuous");
    }
    MarginalFamily family() const override { return MarginalFamily::ComonotoneSum; }
    std::string describe() const override {
        return "comonotone_sum(" + a_.describe() + "+" + b_.describe() + ")";
    }
    double cdf(double x) const override {
        // Invert the additive quantile by bisection in p.
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 100; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (quantile(mid) <= x) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    }
    double quantile(double p) const override { return a_.quantile(p) + b_.quantile(p); }
    bool has_density() const override { return false; }
    double density(double) const override {
        throw DensityUnavailable("comonotone_sum: density not provided");
    }
    double mean() const override { return a_.mean() + b_.mean(); }
    double tail_mean(double p) const override { return a_.tail_mean(p) + b_.tail_mean(p); }

  private:
    Marginal a_, b_;
};

}  // namespace

Marginal Marginal::normal(double mu, double sigma) {
    return Marginal(std::make_shared<NormalDist>(mu, sigma));
}
Marginal Marginal::log_normal(double mu, double sigma) {
    return Marginal(std::make_shared<LogNormalDist>(mu, sigma));
}
Marginal Marginal::student_t(double nu) {
    return Marginal(std::make_shared<StudentTDist>(nu));
}
Marginal Marginal::gamma(double shape, double scale) {
    return Marginal(std::make_shared<GammaDist>(shape, scale));
}
Marginal Marginal::gpd(double xi, double scale, double threshold) {
    return Marginal(std::make_shared<GpdDist>(xi, scale, threshold));
}
Marginal Marginal::empirical(std::vector<double> sample) {
    return Marginal(std::make_shared<EmpiricalDist>(std::move(sample)));
}
Marginal Marginal::shift_scale(const Marginal& base, double loc, double scale) {
    return Marginal(std::make_shared<ShiftScaleDist>(base, loc, scale));
}
Marginal Marginal::comonotone_sum(const Marginal& a, const Marginal& b) {
    return Marginal(std::make_shared<ComonotoneSumDist>(a, b));
}

double Marginal::quantile(double p) const {
    require_prob_open(p, "quantile");
    return impl_->quantile(p);
}

double Marginal::tail_mean(double p) const {
    if (!(p >= 0.0 && p < 1.0)) throw DomainError("tail_mean: p outside [0,1)");
    return impl_->tail_mean(p);
}

double Marginal::es(double p) const {
    if (!(p >= 0.0 && p < 1.0)) throw DomainError("es: p outside [0,1)");
    return tail_mean(p) / (1.0 - p);
}

double Marginal::excess_wealth(double p) const {
    require_prob_open(p, "excess_wealth");
    return (1.0 - p) * (es(p) - quantile(p));
}

double Marginal::epw(double p) const {
    require_prob_open(p, "epw");
    const double q = quantile(p);
    if (std::fabs(q) < 1e-12) throw ZeroQuantile("epw: VaR_p is zero");
    return excess_wealth(p) / q;
}

PGrid PGrid::uniform(int n) {
    if (n < 1) throw DomainError("PGrid::uniform: n must be >= 1");
    PGrid g;
    g.points.reserve(n);
    for (int i = 1; i <= n; ++i)
        g.points.push_back(static_cast<double>(i) / (n + 1));
    return g;
}

PGrid PGrid::default_grid() {
    PGrid g;
    for (int i = 1; i <= 199; ++i) g.points.push_back(i / 200.0);
    for (int j = 0; j < 20; ++j) {
        const double e = std::pow(10.0, -2.0 - 8.0 * j / 19.0);
        g.points.push_back(e);
        g.points.push_back(1.0 - e);
    }
    std::sort(g.points.begin(), g.points.end());
    g.points.erase(std::unique(g.points.begin(), g.points.end()), g.points.end());
    g.validate();
    return g;
}

PGrid PGrid::refined(const PGrid& g) {
    PGrid r;
    r.points.reserve(2 * g.points.size());
    for (std::size_t i = 0; i < g.points.size(); ++i) {
        if (i > 0) r.points.push_back(0.5 * (g.points[i - 1] + g.points[i]));
        r.points.push_back(g.points[i]);
    }
    r.validate();
    return r;
}

void PGrid::validate() const {
    if (points.empty()) throw DomainError("PGrid: empty");
    double prev = 0.0;
    for (double p : points) {
        if (!(p > prev && p < 1.0)) throw DomainError("PGrid: not strictly increasing in (0,1)");
        prev = p;
    }
}

}  // namespace jmes

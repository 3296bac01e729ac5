#include "jmes/copulas.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "jmes/quadrature.hpp"
#include "jmes/rng.hpp"
#include "jmes/special_functions.hpp"

namespace jmes {

namespace {

// -log(u) evaluated through log1p so arguments near 1 keep relative accuracy.
inline double neg_log(double u) { return -std::log1p(u - 1.0); }

inline void require_unit(double u, double v, const char* who) {
    if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0))
        throw DomainError(std::string(who) + ": (u,v) outside [0,1]^2");
}

// Scale factor of the Student t conditional: T2 | T1 = y is location rho*y
// with this scale and nu+1 degrees of freedom.
inline double t_cond_scale(double y, double rho, double nu) {
    return std::sqrt((nu + y * y) * (1.0 - rho * rho) / (nu + 1.0));
}

}  // namespace

const char* family_name(CopulaFamily f) {
    switch (f) {
        case CopulaFamily::Independence: return "independence";
        case CopulaFamily::Comonotone: return "comonotone";
        case CopulaFamily::Fgm: return "fgm";
        case CopulaFamily::Gumbel: return "gumbel";
        case CopulaFamily::Gaussian: return "gaussian";
        case CopulaFamily::StudentT: return "studentt";
    }
    return "?";
}

Copula Copula::independence() { return {CopulaFamily::Independence, 0.0, 0.0}; }
Copula Copula::comonotone() { return {CopulaFamily::Comonotone, 0.0, 0.0}; }

Copula Copula::fgm(double theta) {
    if (!(theta >= -1.0 && theta <= 1.0)) throw DomainError("fgm: theta outside [-1,1]");
    return {CopulaFamily::Fgm, theta, 0.0};
}

Copula Copula::gumbel(double theta) {
    if (!(theta >= 1.0)) throw DomainError("gumbel: theta must be >= 1");
    return {CopulaFamily::Gumbel, theta, 0.0};
}

Copula Copula::gaussian(double rho) {
    if (!(rho > -1.0 && rho < 1.0)) throw DomainError("gaussian: rho outside (-1,1)");
    return {CopulaFamily::Gaussian, rho, 0.0};
}

Copula Copula::student_t(double rho, double nu) {
    if (!(rho > -1.0 && rho < 1.0)) throw DomainError("student_t: rho outside (-1,1)");
    if (!(nu > 0.0)) throw DomainError("student_t: nu must be > 0");
    return {CopulaFamily::StudentT, rho, nu};
}

std::string Copula::describe() const {
    std::ostringstream os;
    os << family_name(family_);
    switch (family_) {
        case CopulaFamily::Fgm:
        case CopulaFamily::Gumbel:
            os << "(theta=" << p1_ << ")";
            break;
        case CopulaFamily::Gaussian:
            os << "(rho=" << p1_ << ")";
            break;
        case CopulaFamily::StudentT:
            os << "(rho=" << p1_ << ",nu=" << p2_ << ")";
            break;
        default:
            break;
    }
    return os.str();
}

std::vector<double> Copula::parameters() const {
    switch (family_) {
        case CopulaFamily::Independence:
        case CopulaFamily::Comonotone:
            return {};
        case CopulaFamily::StudentT:
            return {p1_, p2_};
        default:
            return {p1_};
    }
}

int Copula::parameter_count() const { return static_cast<int>(parameters().size()); }

double Copula::cdf(double u, double v) const {
    require_unit(u, v, "copula cdf");
    if (u == 0.0 || v == 0.0) return 0.0;
    if (u == 1.0) return v;
    if (v == 1.0) return u;
    switch (family_) {
        case CopulaFamily::Independence:
            return u * v;
        case CopulaFamily::Comonotone:
            return std::min(u, v);
        case CopulaFamily::Fgm:
            return u * v * (1.0 + p1_ * (1.0 - u) * (1.0 - v));
        case CopulaFamily::Gumbel: {
            const double x = neg_log(u), y = neg_log(v);
            const double m = std::pow(std::pow(x, p1_) + std::pow(y, p1_), 1.0 / p1_);
            return std::exp(-m);
        }
        case CopulaFamily::Gaussian: {
            // Single integral of the conditional form over the second
            // coordinate, in normal-score space.
            const double rho = p1_;
            const double x = sf::normal_quantile(u);
            const double yv = sf::normal_quantile(v);
            const double s = std::sqrt(1.0 - rho * rho);
            const double ylo = std::min(yv, 0.0) - 9.0;
            auto r = quad::adaptive_gk(
                [&](double y) {
                    return sf::normal_cdf((x - rho * y) / s) * sf::normal_pdf(y);
                },
                ylo, yv, 1e-14, 1e-12);
            return std::clamp(r.value + sf::normal_cdf(ylo), 0.0, std::min(u, v));
        }
        case CopulaFamily::StudentT: {
            const double rho = p1_, nu = p2_;
            const double x = sf::student_t_quantile(u, nu);
            const double yv = sf::student_t_quantile(v, nu);
            // Below ylo the conditional cdf is within 1e-14 of its limit 1
            // (rho >= 0) or 0 (rho < 0); integrate the remainder exactly as
            // a t cdf mass.
            const double ylo = -std::fabs(sf::student_t_quantile(1e-14, nu)) - std::fabs(yv) - 10.0;
            auto r = quad::adaptive_gk(
                [&](double y) {
                    const double z = (x - rho * y) / t_cond_scale(y, rho, nu);
                    return sf::student_t_cdf(z, nu + 1.0) * sf::student_t_pdf(y, nu);
                },
                ylo, yv, 1e-14, 1e-12);
            const double lower = (rho >= 0.0) ? sf::student_t_cdf(ylo, nu) : 0.0;
            return std::clamp(r.value + lower, 0.0, std::min(u, v));
        }
    }
    return 0.0;
}

double Copula::tail(double u, double v) const {
    require_unit(u, v, "copula tail");
    const double w = 1.0 - u, z = 1.0 - v;
    if (u == 0.0 && v == 0.0) return 1.0;
    if (u == 1.0 || v == 1.0) return 0.0;
    switch (family_) {
        case CopulaFamily::Independence:
            return w * z;
        case CopulaFamily::Comonotone:
            return 1.0 - std::max(u, v);
        case CopulaFamily::Fgm:
            return w * z * (1.0 + p1_ * u * v);
        case CopulaFamily::Gumbel: {
            const double x = neg_log(u), y = neg_log(v);
            const double m = std::pow(std::pow(x, p1_) + std::pow(y, p1_), 1.0 / p1_);
            // w + z - (1 - C); expm1 keeps the small-argument difference exact.
            return w + z + std::expm1(-m);
        }
        case CopulaFamily::Gaussian: {
            const double rho = p1_;
            const double x = sf::normal_quantile(std::max(u, 1e-300));
            const double s = std::sqrt(1.0 - rho * rho);
            // P(U>u, V>v) as a t-space integral of the conditional survival;
            // every term is small in the joint tail, so no cancellation.
            auto r = quad::adaptive_gk(
                [&](double t) {
                    const double y = sf::normal_quantile(t);
                    return sf::normal_cdf((rho * y - x) / s);
                },
                v, 1.0, 1e-15, 1e-11);
            return std::clamp(r.value, 0.0, std::min(w, z));
        }
        case CopulaFamily::StudentT: {
            const double rho = p1_, nu = p2_;
            const double x = sf::student_t_quantile(u, nu);
            auto r = quad::adaptive_gk(
                [&](double t) {
                    const double y = sf::student_t_quantile(t, nu);
                    const double zz = (rho * y - x) / t_cond_scale(y, rho, nu);
                    return sf::student_t_cdf(zz, nu + 1.0);
                },
                v, 1.0, 1e-15, 1e-11);
            return std::clamp(r.value, 0.0, std::min(w, z));
        }
    }
    return 0.0;
}

double Copula::partial2(double u, double v) const {
    if (!(v > 0.0 && v < 1.0)) throw DomainError("partial2: v outside (0,1)");
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    switch (family_) {
        case CopulaFamily::Independence:
            return u;
        case CopulaFamily::Comonotone:
            return u >= v ? 1.0 : 0.0;
        case CopulaFamily::Fgm:
            return u * (1.0 + p1_ * (1.0 - u) * (1.0 - 2.0 * v));
        case CopulaFamily::Gumbel: {
            const double x = neg_log(u), y = neg_log(v);
            const double s = std::pow(x, p1_) + std::pow(y, p1_);
            const double m = std::pow(s, 1.0 / p1_);
            // exp(-m) * s^{1/theta - 1} * y^{theta-1} / v, in log space.
            const double lg = -m + (1.0 / p1_ - 1.0) * std::log(s) +
                              (p1_ - 1.0) * std::log(y) + y;
            return std::exp(lg);
        }
        case CopulaFamily::Gaussian: {
            const double rho = p1_;
            const double x = sf::normal_quantile(u);
            const double y = sf::normal_quantile(v);
            return sf::normal_cdf((x - rho * y) / std::sqrt(1.0 - rho * rho));
        }
        case CopulaFamily::StudentT: {
            const double rho = p1_, nu = p2_;
            const double x = sf::student_t_quantile(u, nu);
            const double y = sf::student_t_quantile(v, nu);
            return sf::student_t_cdf((x - rho * y) / t_cond_scale(y, rho, nu), nu + 1.0);
        }
    }
    return 0.0;
}

double Copula::log_density(double u, double v) const {
    if (!has_density()) throw DensityUnavailable("comonotone copula has no density");
    if (!(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0))
        throw DomainError("log_density: (u,v) must be inside (0,1)^2");
    switch (family_) {
        case CopulaFamily::Independence:
            return 0.0;
        case CopulaFamily::Fgm:
            return std::log(1.0 + p1_ * (1.0 - 2.0 * u) * (1.0 - 2.0 * v));
        case CopulaFamily::Gumbel: {
            const double x = neg_log(u), y = neg_log(v);
            const double s = std::pow(x, p1_) + std::pow(y, p1_);
            const double m = std::pow(s, 1.0 / p1_);
            return -m + x + y + (p1_ - 1.0) * (std::log(x) + std::log(y)) +
                   (1.0 / p1_ - 2.0) * std::log(s) + std::log(m + p1_ - 1.0);
        }
        case CopulaFamily::Gaussian: {
            const double rho = p1_;
            const double x = sf::normal_quantile(u);
            const double y = sf::normal_quantile(v);
            const double r2 = 1.0 - rho * rho;
            return -0.5 * std::log(r2) -
                   (rho * rho * (x * x + y * y) - 2.0 * rho * x * y) / (2.0 * r2);
        }
        case CopulaFamily::StudentT: {
            const double rho = p1_, nu = p2_;
            const double x = sf::student_t_quantile(u, nu);
            const double y = sf::student_t_quantile(v, nu);
            const double r2 = 1.0 - rho * rho;
            const double q = (x * x - 2.0 * rho * x * y + y * y) / (nu * r2);
            return -0.5 * std::log(r2) + std::lgamma(0.5 * (nu + 2.0)) +
                   std::lgamma(0.5 * nu) - 2.0 * std::lgamma(0.5 * (nu + 1.0)) -
                   0.5 * (nu + 2.0) * std::log1p(q) +
                   0.5 * (nu + 1.0) *
                       (std::log1p(x * x / nu) + std::log1p(y * y / nu));
        }
        default:
            return 0.0;
    }
}

double Copula::kendall_tau() const {
    switch (family_) {
        case CopulaFamily::Independence: return 0.0;
        case CopulaFamily::Comonotone: return 1.0;
        case CopulaFamily::Fgm: return 2.0 * p1_ / 9.0;
        case CopulaFamily::Gumbel: return 1.0 - 1.0 / p1_;
        case CopulaFamily::Gaussian:
        case CopulaFamily::StudentT:
            return 2.0 / M_PI * std::asin(p1_);
    }
    return 0.0;
}

std::pair<double, double> Copula::tail_dependence() const {
    switch (family_) {
        case CopulaFamily::Independence:
        case CopulaFamily::Fgm:
        case CopulaFamily::Gaussian:
            return {0.0, 0.0};
        case CopulaFamily::Comonotone:
            return {1.0, 1.0};
        case CopulaFamily::Gumbel:
            return {0.0, 2.0 - std::pow(2.0, 1.0 / p1_)};
        case CopulaFamily::StudentT: {
            const double lam =
                2.0 * sf::student_t_cdf(
                          -std::sqrt((p2_ + 1.0) * (1.0 - p1_) / (1.0 + p1_)), p2_ + 1.0);
            return {lam, lam};
        }
    }
    return {0.0, 0.0};
}

UvPair Copula::conditional_pair(double r1, double r2) const {
    const double v = r1;
    switch (family_) {
        case CopulaFamily::Independence:
            return {r2, v};
        case CopulaFamily::Comonotone:
            return {v, v};
        case CopulaFamily::Gaussian: {
            const double rho = p1_;
            const double u = sf::normal_cdf(rho * sf::normal_quantile(v) +
                                            std::sqrt(1.0 - rho * rho) *
                                                sf::normal_quantile(r2));
            return {u, v};
        }
        case CopulaFamily::StudentT: {
            const double rho = p1_, nu = p2_;
            const double y = sf::student_t_quantile(v, nu);
            const double x =
                rho * y + t_cond_scale(y, rho, nu) * sf::student_t_quantile(r2, nu + 1.0);
            return {sf::student_t_cdf(x, nu), v};
        }
        case CopulaFamily::Fgm: {
            const double a = p1_ * (1.0 - 2.0 * v);
            if (std::fabs(a) < 1e-12) return {r2, v};
            // a*u^2 - (1+a)*u + r2 = 0, stable smaller root.
            const double b = 1.0 + a;
            const double disc = std::sqrt(std::max(b * b - 4.0 * a * r2, 0.0));
            return {2.0 * r2 / (b + disc), v};
        }
        case CopulaFamily::Gumbel: {
            if (p1_ == 1.0) return {r2, v};
            // Solve partial2(u,v) = r2 for x = -log u; monotone decreasing.
            const double theta = p1_;
            const double y = neg_log(v);
            const double ytheta = std::pow(y, theta);
            const double target = std::log(r2);
            auto logg = [&](double x) {
                const double s = std::pow(x, theta) + ytheta;
                const double m = std::pow(s, 1.0 / theta);
                return -m + (1.0 / theta - 1.0) * std::log(s) +
                       (theta - 1.0) * std::log(y) + y;
            };
            auto dlogg = [&](double x) {
                const double s = std::pow(x, theta) + ytheta;
                const double xt1 = std::pow(x, theta - 1.0);
                return -xt1 * (std::pow(s, 1.0 / theta - 1.0) + (theta - 1.0) / s);
            };
            double lo = 0.0;
            double hi = std::max(y, neg_log(std::min(r2, 0.999))) + 1.0;
            while (logg(hi) > target) hi *= 2.0;
            double x = std::max(neg_log(r2), 1e-12);
            if (x >= hi) x = 0.5 * hi;
            for (int it = 0; it < 100; ++it) {
                const double f = logg(x) - target;
                if (f > 0.0) {
                    lo = x;  // g too big -> need larger x
                } else {
                    hi = x;
                }
                double xn = x - f / dlogg(x);
                if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
                if (std::fabs(xn - x) <= 1e-14 * (x + 1e-300)) {
                    x = xn;
                    break;
                }
                x = xn;
            }
            return {std::exp(-x), v};
        }
    }
    return {r2, r1};
}

PseudoSample Copula::sample(std::int64_t n, std::uint64_t seed, Exec exec) const {
    if (n < 1) throw DomainError("sample: n must be >= 1");
    PseudoSample out(static_cast<std::size_t>(n));
    const rng::UniformPairStream stream(seed);
    constexpr std::int64_t kBlock = 1 << 14;
    const std::int64_t n_blocks = (n + kBlock - 1) / kBlock;
    parallel::for_each_block(n_blocks, exec, [&](std::int64_t b) {
        const std::int64_t end = std::min(n, (b + 1) * kBlock);
        for (std::int64_t i = b * kBlock; i < end; ++i) {
            const auto r = stream.pair(static_cast<std::uint64_t>(i));
            out[static_cast<std::size_t>(i)] = conditional_pair(r[0], r[1]);
        }
    });
    return out;
}

}  // namespace jmes

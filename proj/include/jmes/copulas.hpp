#pragma once

// Bivariate copula families: cdf, joint tail function, conditional
// derivative, dependence summaries, conditional-inversion sampling, and
// maximum-likelihood fitting with AIC selection.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "jmes/errors.hpp"
#include "jmes/parallel.hpp"

namespace jmes {

enum class CopulaFamily { Independence, Comonotone, Fgm, Gumbel, Gaussian, StudentT };

const char* family_name(CopulaFamily f);

struct UvPair {
    double u;
    double v;
};

// Pseudo-observations strictly inside the open unit square.
using PseudoSample = std::vector<UvPair>;

class Copula {
  public:
    static Copula independence();
    static Copula comonotone();
    static Copula fgm(double theta);              // theta in [-1, 1]
    static Copula gumbel(double theta);           // theta in [1, inf)
    static Copula gaussian(double rho);           // rho in (-1, 1)
    static Copula student_t(double rho, double nu);  // nu > 0, any real nu

    CopulaFamily family() const { return family_; }
    std::string describe() const;
    std::vector<double> parameters() const;
    int parameter_count() const;

    // C(u,v) on [0,1]^2, within the Frechet bounds.
    double cdf(double u, double v) const;
    // Joint tail P(U>u, V>v) = 1 - u - v + C(u,v), evaluated cancellation-free
    // per family so deep-tail arguments keep relative accuracy.
    double tail(double u, double v) const;
    // d C(u,v) / dv = P(U <= u | V = v), v in (0,1).
    double partial2(double u, double v) const;
    // d C(u,v) / du; equals partial2 with swapped arguments for these
    // exchangeable families.
    double partial1(double u, double v) const { return partial2(v, u); }

    bool has_density() const { return family_ != CopulaFamily::Comonotone; }
    double log_density(double u, double v) const;

    double kendall_tau() const;
    // (lambda_L, lambda_U).
    std::pair<double, double> tail_dependence() const;

    // Conditional inversion: v = r1 and u solves partial2(u, v) = r2.
    UvPair conditional_pair(double r1, double r2) const;
    // n pairs from the philox stream for (seed, stream 0); identical output
    // for both execution policies.
    PseudoSample sample(std::int64_t n, std::uint64_t seed,
                        Exec exec = Exec::Parallel) const;

  private:
    Copula(CopulaFamily f, double p1, double p2) : family_(f), p1_(p1), p2_(p2) {}
    CopulaFamily family_;
    double p1_;  // theta or rho
    double p2_;  // nu for Student t
};

struct CopulaFit {
    Copula copula;
    double loglik = 0.0;
    int n_params = 0;
    double aic = 0.0;
    int iterations = 0;
};

// Maximum likelihood over the family's parameter space; requires n >= 50
// pseudo-observations strictly inside the unit square.
CopulaFit fit_mle(CopulaFamily family, const PseudoSample& data);

// Fit every candidate and keep the AIC minimizer; candidates that fail to
// fit are skipped and reported through `warnings`.  Ties break by family
// enum order.
CopulaFit aic_select(const std::vector<CopulaFamily>& candidates, const PseudoSample& data,
                     std::vector<std::string>* warnings = nullptr);

}  // namespace jmes

#pragma once

// The systemic risk measure zoo over a bivariate model: VaR, ES, MES,
// CoVaR, CoES, JMES, the difference/ratio contribution measures, and the
// median-baseline variants, all evaluated through the quantile-integral
// representation of the conditional distortion curves.

#include <map>
#include <string>
#include <vector>

#include "jmes/copulas.hpp"
#include "jmes/distortion.hpp"
#include "jmes/distributions.hpp"

namespace jmes {

// Copula orientation is fixed as (U <- X, V <- Y).
struct BivariateModel {
    Marginal x;
    Marginal y;
    Copula copula;

    // The same dependence with the roles of X and Y exchanged (valid for
    // the exchangeable families here).
    BivariateModel swapped() const { return {y, x, copula}; }
};

struct QuadratureSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    // Upper-tail integrals run in s-space (t = 1 - exp(-s)) out to this cap,
    // then finish with the analytic tail completion.
    double s_cap = 34.0;
};

// Names in serialization order.
const std::vector<std::string>& measure_names();

struct RiskReport {
    double alpha = 0.0;
    double beta = 0.0;
    std::map<std::string, double> entries;
    std::vector<std::string> flags;  // "<Reason>:<measure>" entries
    QuadratureSettings settings;

    std::string to_json() const;
    static std::string csv_header();
    std::string to_csv_row(const std::string& label) const;
};

double var_y(const BivariateModel& b, double p);
double es_y(const BivariateModel& b, double p);

// E[Y | X > VaR_alpha(X)].  When `fallback` is given it is set when the
// quadrature had to finish on its safety path.
double mes(const BivariateModel& b, double alpha, const QuadratureSettings& qs = {},
           bool* fallback = nullptr);

// VaR_beta of Y given X > VaR_alpha(X); root of Cbar(alpha,t) = (1-alpha)(1-beta).
double covar(const BivariateModel& b, double alpha, double beta);

// Average of covar(alpha, t) over t in (beta, 1).
double coes(const BivariateModel& b, double alpha, double beta,
            const QuadratureSettings& qs = {}, bool* fallback = nullptr);

// E[Y | X > VaR_alpha(X), Y > VaR_beta(Y)].
double jmes(const BivariateModel& b, double alpha, double beta,
            const QuadratureSettings& qs = {}, bool* fallback = nullptr);

// JMES_{alpha2,beta} - JMES_{alpha1,beta}, alpha1 <= alpha2.
double delta_jmes(const BivariateModel& b, double alpha1, double alpha2, double beta,
                  const QuadratureSettings& qs = {});
// JMES_{alpha,beta} - ES_beta.
double delta_jmes_simple(const BivariateModel& b, double alpha, double beta,
                         const QuadratureSettings& qs = {});

// Relative versions of the two forms above (ZeroDenominator when the
// baseline vanishes).
double delta_r_jmes(const BivariateModel& b, double alpha1, double alpha2, double beta,
                    const QuadratureSettings& qs = {});
double delta_r_jmes_simple(const BivariateModel& b, double alpha, double beta,
                           const QuadratureSettings& qs = {});

// The median-baseline and ratio variants (dmCoVaR, drMES, ...) as a partial
// report containing only those entries.
RiskReport median_baseline_variants(const BivariateModel& b, double alpha, double beta,
                                    const QuadratureSettings& qs = {});

// Every measure; failures are recorded as flags, never thrown.
RiskReport full_report(const BivariateModel& b, double alpha, double beta,
                       const QuadratureSettings& qs = {});

}  // namespace jmes

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "jmes/copulas.hpp"
#include "jmes/special_functions.hpp"
#include "optimize.hpp"

namespace jmes {

namespace {

void validate_sample(const PseudoSample& data) {
    if (data.size() < 50) throw DomainError("fit_mle: need at least 50 pseudo-observations");
    for (const auto& p : data) {
        if (!(p.u > 0.0 && p.u < 1.0 && p.v > 0.0 && p.v < 1.0))
            throw DomainError("fit_mle: pseudo-observations must lie inside (0,1)^2");
    }
}

double loglik(const Copula& c, const PseudoSample& data) {
    double ll = 0.0;
    for (const auto& p : data) ll += c.log_density(p.u, p.v);
    return ll;
}

CopulaFit finish(Copula c, double ll, int iters) {
    CopulaFit fit{std::move(c), ll, 0, 0.0, iters};
    fit.n_params = fit.copula.parameter_count();
    fit.aic = 2.0 * fit.n_params - 2.0 * ll;
    return fit;
}

CopulaFit fit_one_param(CopulaFamily family, const PseudoSample& data, double lo,
                        double hi) {
    auto make = [&](double th) {
        switch (family) {
            case CopulaFamily::Fgm: return Copula::fgm(th);
            case CopulaFamily::Gumbel: return Copula::gumbel(th);
            default: return Copula::gaussian(th);
        }
    };
    const auto res = opt::brent_minimize(
        [&](double th) { return -loglik(make(th), data); }, lo, hi, 1e-9, 300);
    if (!res.converged) {
        std::ostringstream os;
        os << "fit_mle(" << family_name(family) << "): no convergence after "
           << res.iterations << " iterations; best parameter " << res.x;
        throw NonConvergence(os.str());
    }
    return finish(make(res.x), -res.f, res.iterations);
}

CopulaFit fit_student_t(const PseudoSample& data) {
    // rho through tanh, nu through a logistic map onto [2, 30].
    auto decode = [](const std::vector<double>& z) {
        const double rho = std::tanh(z[0]);
        const double nu = 2.0 + 28.0 / (1.0 + std::exp(-z[1]));
        return std::pair<double, double>(rho, nu);
    };
    // Normal-scores correlation as the starting rho.
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (const auto& p : data) {
        const double x = sf::normal_quantile(p.u);
        const double y = sf::normal_quantile(p.v);
        sxy += x * y;
        sxx += x * x;
        syy += y * y;
    }
    const double rho0 = std::clamp(sxy / std::sqrt(sxx * syy), -0.99, 0.99);
    const std::vector<double> z0{std::atanh(rho0), 0.0};  // nu0 ~ 16 -> start mid-range
    const auto res = opt::nelder_mead(
        [&](const std::vector<double>& z) {
            const auto [rho, nu] = decode(z);
            return -loglik(Copula::student_t(rho, nu), data);
        },
        z0, 0.5, 1e-11, 600);
    if (!res.converged) {
        const auto [rho, nu] = decode(res.x);
        std::ostringstream os;
        os << "fit_mle(studentt): no convergence after " << res.iterations
           << " iterations; best (rho,nu) = (" << rho << "," << nu << ")";
        throw NonConvergence(os.str());
    }
    const auto [rho, nu] = decode(res.x);
    return finish(Copula::student_t(rho, nu), -res.f, res.iterations);
}

}  // namespace

CopulaFit fit_mle(CopulaFamily family, const PseudoSample& data) {
    validate_sample(data);
    switch (family) {
        case CopulaFamily::Independence:
            return finish(Copula::independence(), 0.0, 0);
        case CopulaFamily::Comonotone:
            throw DomainError("fit_mle: comonotone copula has no density to fit");
        case CopulaFamily::Fgm:
            return fit_one_param(family, data, -1.0, 1.0);
        case CopulaFamily::Gumbel:
            return fit_one_param(family, data, 1.0, 50.0);
        case CopulaFamily::Gaussian:
            return fit_one_param(family, data, -0.9999, 0.9999);
        case CopulaFamily::StudentT:
            return fit_student_t(data);
    }
    throw DomainError("fit_mle: unknown family");
}

CopulaFit aic_select(const std::vector<CopulaFamily>& candidates, const PseudoSample& data,
                     std::vector<std::string>* warnings) {
    if (candidates.empty()) throw DomainError("aic_select: no candidates");
    bool have = false;
    CopulaFit best{Copula::independence(), 0.0, 0, 0.0, 0};
    for (CopulaFamily fam : candidates) {
        CopulaFit fit{Copula::independence(), 0.0, 0, 0.0, 0};
        try {
            fit = fit_mle(fam, data);
        } catch (const Error& e) {
            if (warnings) warnings->push_back(std::string(family_name(fam)) + ": " + e.what());
            continue;
        }
        const auto rank = [](const CopulaFit& f) {
            return std::make_pair(f.aic, static_cast<int>(f.copula.family()));
        };
        if (!have || rank(fit) < rank(best)) {
            best = fit;
            have = true;
        }
    }
    if (!have) throw NonConvergence("aic_select: every candidate failed to fit");
    return best;
}

}  // namespace jmes

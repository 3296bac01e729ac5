#include "jmes/measures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "jmes/quadrature.hpp"

namespace jmes {

namespace {

struct StieltjesResult {
    double value = 0.0;
    bool fallback = false;
};

// integral of G^{-1}(t) dW(t) over (lo, 1) for a nondecreasing cumulative
// weight W with density w, where w is bounded by sup_w.  Stepwise quantile
// segments are summed exactly against W; smooth segments are integrated by
// adaptive panels in s-space near the endpoints with analytic tail
// completion through the margin's tail_mean.
class QuantileStieltjes {
  public:
    QuantileStieltjes(const Marginal& m, std::function<double(double)> W,
                      std::function<double(double)> w, double sup_w,
                      const QuadratureSettings& qs)
        : m_(m), W_(std::move(W)), w_(std::move(w)), sup_w_(sup_w), qs_(qs) {}

    StieltjesResult run(double lo) {
        StieltjesResult res;
        double abs_budget = qs_.abs_tol;
        for (const auto& seg : m_.segments()) {
            const double a = std::max(seg.p_lo, lo);
            const double b = seg.p_hi;
            if (a >= b) continue;
            if (seg.stepwise) {
                res.value += stepwise_sum(seg, a, b);
            } else {
                res.value += smooth_part(a, b, &res.fallback, abs_budget);
            }
        }
        return res;
    }

  private:
    double stepwise_sum(const QuantileSegment& seg, double a, double b) const {
        double sum = 0.0;
        double prev = seg.p_lo;
        for (double knot : seg.knots) {
            const double cell_lo = std::max(prev, a);
            const double cell_hi = std::min(knot, b);
            prev = knot;
            if (cell_hi <= cell_lo) continue;
            sum += m_.impl().quantile(knot) * (W_(cell_hi) - W_(cell_lo));
        }
        return sum;
    }

    double integrand(double t) const { return m_.impl().quantile(t) * w_(t); }

    double smooth_part(double a, double b, bool* fallback, double abs_tol) {
        double total = 0.0;
        // Interior piece in plain t-space up to where 1-t gets small.
        const double t_switch = (b >= 1.0) ? std::max(a, 0.875) : b;
        double lower_start = a;
        if (a == 0.0) {
            // Descending march toward 0 (needed when conditioning starts at
            // the whole support and the margin is unbounded below).
            lower_start = std::min(0.125, t_switch);
            total += lower_march(lower_start, abs_tol);
        }
        if (t_switch > lower_start) {
            const auto r = quad::adaptive_gk([this](double t) { return integrand(t); },
                                             lower_start, t_switch, abs_tol, qs_.rel_tol);
            total += r.value;
            if (!r.converged) *fallback = true;
        }
        if (b >= 1.0 && t_switch < 1.0) total += upper_march(t_switch, fallback, abs_tol);
        return total;
    }

    // integral over (t0, 1): panels in s = -log(1-t), completion via tail_mean.
    double upper_march(double t0, bool* fallback, double abs_tol) {
        double total = 0.0;
        double s = -std::log1p(-t0);
        auto f_s = [this](double s_) {
            const double q = std::exp(-s_);
            const double t = 1.0 - q;
            return integrand(t) * q;
        };
        while (s < qs_.s_cap) {
            const double s_next = std::min(s + 1.0, qs_.s_cap);
            const auto r = quad::adaptive_gk(f_s, s, s_next, 0.25 * abs_tol, qs_.rel_tol);
            total += r.value;
            s = s_next;
            const double t_cur = 1.0 - std::exp(-s);
            const double bound = sup_w_ * std::fabs(m_.tail_mean(t_cur));
            if (bound < std::max(abs_tol, qs_.rel_tol * std::fabs(total))) break;
        }
        // Analytic completion: w is nearly constant on the remaining sliver,
        // so integral of G^{-1} w ~ w * tail_mean.  A second evaluation point
        // guards against residual weight variation.
        const double t1 = 1.0 - std::exp(-s);
        const double tm = m_.tail_mean(t1);
        if (tm != 0.0) {
            const double w1 = w_(t1);
            const double t2 = 1.0 - 0.25 * std::exp(-s);
            const double w2 = w_(t2);
            total += 0.5 * (w1 + w2) * tm;
            const double band = std::fabs(w1 - w2) * std::fabs(tm);
            if (band > 64.0 * std::max(abs_tol, qs_.rel_tol * std::fabs(total)))
                *fallback = true;
        }
        return total;
    }

    // integral over (0, t0): panels in s = -log t, completion via the lower
    // tail mean  mean - tail_mean.
    double lower_march(double t0, double abs_tol) {
        double total = 0.0;
        double s = -std::log(t0);
        auto f_s = [this](double s_) {
            const double t = std::exp(-s_);
            return integrand(t) * t;
        };
        const double mean = m_.mean();
        while (s < qs_.s_cap) {
            const double s_next = std::min(s + 1.0, qs_.s_cap);
            const auto r = quad::adaptive_gk(f_s, s, s_next, 0.25 * abs_tol, qs_.rel_tol);
            total += r.value;
            s = s_next;
            const double t_cur = std::exp(-s);
            const double lower_mass = mean - m_.tail_mean(t_cur);
            const double bound =
                sup_w_ * (std::fabs(lower_mass) +
                          t_cur * std::fabs(m_.impl().quantile(t_cur)));
            if (bound < std::max(abs_tol, qs_.rel_tol * std::fabs(total))) break;
        }
        const double t1 = std::exp(-s);
        total += w_(t1) * (mean - m_.tail_mean(t1));
        return total;
    }

    const Marginal& m_;
    std::function<double(double)> W_;
    std::function<double(double)> w_;
    double sup_w_;
    QuadratureSettings qs_;
};

void require_level(double p, const char* who) {
    if (!(p >= 0.0 && p < 1.0))
        throw DomainError(std::string(who) + ": confidence level outside [0,1)");
}

double jmes_generic(const BivariateModel& b, double alpha, double beta,
                    const QuadratureSettings& qs, bool* fallback) {
    const DistortionCurve h(b.copula, alpha, beta, DistortionKind::JointTail);
    const double cbar = h.conditioning_mass();
    QuantileStieltjes integral(
        b.y, [&h](double t) { return h.eval(t); },
        [&h, beta](double t) { return t > beta && t < 1.0 ? h.derivative(t) : 0.0; },
        1.0 / cbar, qs);
    const auto r = integral.run(beta);
    if (fallback) *fallback = r.fallback;
    return r.value;
}

// Bracketed root solve for Cbar(alpha, t) = (1-alpha)(1-beta) in t, to
// 1e-12; Cbar is nonincreasing in t, so [0,1] always brackets.  Illinois
// updates keep the bisection guarantee while converging superlinearly.
double covar_level(const Copula& c, double alpha, double beta) {
    const double target = (1.0 - alpha) * (1.0 - beta);
    auto g = [&](double t) {
        return (t >= 1.0 ? 0.0 : t <= 0.0 ? 1.0 - alpha : c.tail(alpha, t)) - target;
    };
    double lo = 0.0, hi = 1.0;
    double flo = 1.0 - alpha - target, fhi = -target;
    double t = beta;  // independence guess
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double f = g(t);
        if (f > 0.0) {
            lo = t;
            flo = f;
        } else {
            hi = t;
            fhi = f;
        }
        double tn = (flo != fhi) ? (lo * fhi - hi * flo) / (fhi - flo) : 0.5 * (lo + hi);
        const double margin = 0.05 * (hi - lo);
        if (!(tn > lo + margin && tn < hi - margin) || (it % 3 == 2))
            tn = 0.5 * (lo + hi);
        t = tn;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

const std::vector<std::string>& measure_names() {
    static const std::vector<std::string> names = {
        "E",       "VaR",      "ES",    "CoVaR",  "CoES",   "MES",    "JMES",
        "dCoVaR",  "dmCoVaR",  "dMES",  "dmMES",  "dJMES",  "dmJMES",
        "drCoVaR", "drmCoVaR", "drMES", "drmMES", "drJMES", "drmJMES"};
    return names;
}

double var_y(const BivariateModel& b, double p) { return b.y.quantile(p); }

double es_y(const BivariateModel& b, double p) { return b.y.es(p); }

double mes(const BivariateModel& b, double alpha, const QuadratureSettings& qs,
           bool* fallback) {
    require_level(alpha, "mes");
    if (b.copula.family() == CopulaFamily::Independence) return b.y.mean();
    if (b.copula.family() == CopulaFamily::Comonotone) return b.y.es(alpha);
    if (alpha == 0.0) return b.y.mean();
    return jmes_generic(b, alpha, 0.0, qs, fallback);
}

double covar(const BivariateModel& b, double alpha, double beta) {
    if (!(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0))
        throw DomainError("covar: levels outside (0,1)");
    if (b.copula.tail(alpha, beta) < 1e-12)
        throw DegenerateConditioning("covar: conditioning event has no mass");
    return b.y.quantile(covar_level(b.copula, alpha, beta));
}

double coes(const BivariateModel& b, double alpha, double beta,
            const QuadratureSettings& qs, bool* fallback_out) {
    if (!(alpha > 0.0 && alpha < 1.0 && beta > 0.0 && beta < 1.0))
        throw DomainError("coes: levels outside (0,1)");
    if (b.copula.tail(alpha, beta) < 1e-12)
        throw DegenerateConditioning("coes: conditioning event has no mass");
    // CoES = average of G^{-1}(t*(t)) over t in (beta,1); the conditional
    // level t*(t) satisfies 1 - (1-t*) <= 1 - (1-alpha)(1-t), which gives a
    // computable remainder bound through the tail mean.
    auto level = [&](double t) { return covar_level(b.copula, alpha, t); };
    auto f_t = [&](double t) { return b.y.impl().quantile(level(t)); };
    double total = 0.0;
    double s = -std::log1p(-beta);
    auto f_s = [&](double s_) {
        const double q = std::exp(-s_);
        return f_t(1.0 - q) * q;
    };
    bool fallback = false;
    while (s < qs.s_cap) {
        const double s_next = std::min(s + 1.0, qs.s_cap);
        const auto r = quad::adaptive_gk(f_s, s, s_next, 0.25 * qs.abs_tol, qs.rel_tol);
        total += r.value;
        if (!r.converged) fallback = true;
        s = s_next;
        const double q_cur = std::exp(-s);
        const double upper = std::fabs(b.y.tail_mean(1.0 - (1.0 - alpha) * q_cur)) /
                             (1.0 - alpha);
        if (upper < std::max(qs.abs_tol, qs.rel_tol * std::fabs(total))) break;
    }
    {
        const double q1 = std::exp(-s);
        const double t_hi = 1.0 - (1.0 - alpha) * q1;
        const double lower_rem = b.y.tail_mean(1.0 - q1);
        const double upper_rem = b.y.tail_mean(t_hi) / (1.0 - alpha);
        total += 0.5 * (lower_rem + upper_rem);
        const double band = 0.5 * std::fabs(upper_rem - lower_rem);
        if (band > 1e-7 * std::max(std::fabs(total), 1.0)) fallback = true;
    }
    if (fallback_out) *fallback_out = fallback;
    return total / (1.0 - beta);
}

double jmes(const BivariateModel& b, double alpha, double beta,
            const QuadratureSettings& qs, bool* fallback) {
    require_level(alpha, "jmes");
    require_level(beta, "jmes");
    if (b.copula.family() == CopulaFamily::Comonotone)
        return b.y.es(std::max(alpha, beta));  // analytic limit of the family
    if (alpha == 0.0) return b.y.es(beta);
    return jmes_generic(b, alpha, beta, qs, fallback);
}

double delta_jmes(const BivariateModel& b, double alpha1, double alpha2, double beta,
                  const QuadratureSettings& qs) {
    if (!(alpha1 <= alpha2)) throw DomainError("delta_jmes: requires alpha1 <= alpha2");
    if (alpha1 == alpha2) return 0.0;
    return jmes(b, alpha2, beta, qs) - jmes(b, alpha1, beta, qs);
}

double delta_jmes_simple(const BivariateModel& b, double alpha, double beta,
                         const QuadratureSettings& qs) {
    return delta_jmes(b, 0.0, alpha, beta, qs);
}

double delta_r_jmes(const BivariateModel& b, double alpha1, double alpha2, double beta,
                    const QuadratureSettings& qs) {
    if (!(alpha1 <= alpha2)) throw DomainError("delta_r_jmes: requires alpha1 <= alpha2");
    const double base = jmes(b, alpha1, beta, qs);
    if (std::fabs(base) < 1e-12)
        throw ZeroDenominator("delta_r_jmes: baseline JMES is zero");
    if (alpha1 == alpha2) return 0.0;
    return (jmes(b, alpha2, beta, qs) - base) / base;
}

double delta_r_jmes_simple(const BivariateModel& b, double alpha, double beta,
                           const QuadratureSettings& qs) {
    return delta_r_jmes(b, 0.0, alpha, beta, qs);
}

namespace {

void put(RiskReport* rep, const std::string& name, const std::function<double()>& fn) {
    try {
        rep->entries[name] = fn();
    } catch (const NonintegrableTail& e) {
        rep->flags.push_back("NonintegrableTail:" + name);
    } catch (const DegenerateConditioning& e) {
        rep->flags.push_back("DegenerateConditioning:" + name);
    } catch (const ZeroDenominator& e) {
        rep->flags.push_back("ZeroDenominator:" + name);
    } catch (const Error& e) {
        rep->flags.push_back(std::string("Error:") + name);
    }
}

double ratio(double num, double den, const char* name) {
    if (std::fabs(den) < 1e-12)
        throw ZeroDenominator(std::string(name) + ": denominator is zero");
    return num / den;
}

}  // namespace

RiskReport median_baseline_variants(const BivariateModel& b, double alpha, double beta,
                                    const QuadratureSettings& qs) {
    RiskReport rep;
    rep.alpha = alpha;
    rep.beta = beta;
    rep.settings = qs;
    put(&rep, "dCoVaR", [&] { return covar(b, alpha, beta) - b.y.quantile(beta); });
    put(&rep, "dmCoVaR", [&] { return covar(b, alpha, beta) - covar(b, 0.5, beta); });
    put(&rep, "dMES", [&] { return mes(b, alpha, qs) - b.y.mean(); });
    put(&rep, "dmMES", [&] { return mes(b, alpha, qs) - mes(b, 0.5, qs); });
    put(&rep, "dJMES", [&] { return delta_jmes_simple(b, alpha, beta, qs); });
    put(&rep, "dmJMES", [&] { return jmes(b, alpha, beta, qs) - jmes(b, 0.5, beta, qs); });
    put(&rep, "drCoVaR", [&] {
        return ratio(covar(b, alpha, beta) - b.y.quantile(beta), b.y.quantile(beta),
                     "drCoVaR");
    });
    put(&rep, "drmCoVaR", [&] {
        const double base = covar(b, 0.5, beta);
        return ratio(covar(b, alpha, beta) - base, base, "drmCoVaR");
    });
    put(&rep, "drMES", [&] {
        return ratio(mes(b, alpha, qs) - b.y.mean(), b.y.mean(), "drMES");
    });
    put(&rep, "drmMES", [&] {
        const double base = mes(b, 0.5, qs);
        return ratio(mes(b, alpha, qs) - base, base, "drmMES");
    });
    put(&rep, "drJMES", [&] { return delta_r_jmes_simple(b, alpha, beta, qs); });
    put(&rep, "drmJMES", [&] {
        const double base = jmes(b, 0.5, beta, qs);
        return ratio(jmes(b, alpha, beta, qs) - base, base, "drmJMES");
    });
    return rep;
}

RiskReport full_report(const BivariateModel& b, double alpha, double beta,
                       const QuadratureSettings& qs) {
    RiskReport rep = median_baseline_variants(b, alpha, beta, qs);
    put(&rep, "E", [&] { return b.y.mean(); });
    put(&rep, "VaR", [&] { return b.y.quantile(beta); });
    put(&rep, "ES", [&] { return b.y.es(beta); });
    put(&rep, "CoVaR", [&] { return covar(b, alpha, beta); });
    bool fb_coes = false, fb_mes = false, fb_jmes = false;
    put(&rep, "CoES", [&] { return coes(b, alpha, beta, qs, &fb_coes); });
    put(&rep, "MES", [&] { return mes(b, alpha, qs, &fb_mes); });
    put(&rep, "JMES", [&] { return jmes(b, alpha, beta, qs, &fb_jmes); });
    if (fb_coes) rep.flags.push_back("QuadratureFallback:CoES");
    if (fb_mes) rep.flags.push_back("QuadratureFallback:MES");
    if (fb_jmes) rep.flags.push_back("QuadratureFallback:JMES");
    return rep;
}

std::string RiskReport::to_json() const {
    nlohmann::json j;
    j["alpha"] = alpha;
    j["beta"] = beta;
    nlohmann::json e = nlohmann::json::object();
    for (const auto& [k, v] : entries) e[k] = v;
    j["entries"] = e;
    j["flags"] = flags;
    j["settings"] = {{"rel_tol", settings.rel_tol},
                     {"abs_tol", settings.abs_tol},
                     {"s_cap", settings.s_cap}};
    return j.dump(2);
}

std::string RiskReport::csv_header() {
    std::ostringstream os;
    os << "label,alpha,beta";
    for (const auto& n : measure_names()) os << "," << n;
    os << ",flags";
    return os.str();
}

std::string RiskReport::to_csv_row(const std::string& label) const {
    std::ostringstream os;
    os.precision(10);
    os << label << "," << alpha << "," << beta;
    for (const auto& n : measure_names()) {
        os << ",";
        const auto it = entries.find(n);
        if (it != entries.end()) os << it->second;
    }
    os << ",";
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (i) os << ";";
        os << flags[i];
    }
    return os.str();
}

}  // namespace jmes

#pragma once

// Internal derivative-free optimizers used by the fitting routines.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace jmes::opt {

struct ScalarResult {
    double x = 0.0;
    double f = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Brent minimization on [a,b] (golden section with parabolic steps).
inline ScalarResult brent_minimize(const std::function<double(double)>& f, double a,
                                   double b, double tol = 1e-10, int max_iter = 200) {
    const double golden = 0.3819660112501051;
    double x = a + golden * (b - a);
    double w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    ScalarResult res;
    for (int it = 0; it < max_iter; ++it) {
        const double m = 0.5 * (a + b);
        const double tol1 = tol * std::fabs(x) + 1e-14;
        const double tol2 = 2.0 * tol1;
        if (std::fabs(x - m) <= tol2 - 0.5 * (b - a)) {
            res.converged = true;
            res.iterations = it;
            break;
        }
        double u;
        bool parabolic = false;
        if (std::fabs(e) > tol1) {
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::fabs(q);
            const double etemp = e;
            e = d;
            if (std::fabs(p) < std::fabs(0.5 * q * etemp) && p > q * (a - x) &&
                p < q * (b - x)) {
                parabolic = true;
                d = p / q;
                u = x + d;
                if (u - a < tol2 || b - u < tol2) d = (m > x) ? tol1 : -tol1;
            }
        }
        if (!parabolic) {
            e = (x < m) ? b - x : a - x;
            d = golden * e;
        }
        u = (std::fabs(d) >= tol1) ? x + d : x + ((d > 0.0) ? tol1 : -tol1);
        const double fu = f(u);
        if (fu <= fx) {
            if (u < x) {
                b = x;
            } else {
                a = x;
            }
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) {
                a = u;
            } else {
                b = u;
            }
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
        res.iterations = it + 1;
    }
    res.x = x;
    res.f = fx;
    return res;
}

struct VectorResult {
    std::vector<double> x;
    double f = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Nelder-Mead downhill simplex.
inline VectorResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> x0, double step = 0.5,
                                double ftol = 1e-10, int max_iter = 600) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> fvals(n + 1);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step;
    for (std::size_t i = 0; i <= n; ++i) fvals[i] = f(simplex[i]);

    VectorResult res;
    for (int it = 0; it < max_iter; ++it) {
        // Order: best first.
        std::vector<std::size_t> idx(n + 1);
        for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return fvals[a] < fvals[b]; });
        std::vector<std::vector<double>> sx(n + 1);
        std::vector<double> sf(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            sx[i] = simplex[idx[i]];
            sf[i] = fvals[idx[i]];
        }
        simplex = sx;
        fvals = sf;
        res.iterations = it + 1;
        if (std::fabs(fvals[n] - fvals[0]) <=
            ftol * (std::fabs(fvals[0]) + std::fabs(fvals[n]) + 1e-300)) {
            res.converged = true;
            break;
        }
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / n;
        auto blend = [&](double c) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j)
                p[j] = centroid[j] + c * (simplex[n][j] - centroid[j]);
            return p;
        };
        const auto xr = blend(-1.0);
        const double fr = f(xr);
        if (fr < fvals[0]) {
            const auto xe = blend(-2.0);
            const double fe = f(xe);
            if (fe < fr) {
                simplex[n] = xe; fvals[n] = fe;
            } else {
                simplex[n] = xr; fvals[n] = fr;
            }
        } else if (fr < fvals[n - 1]) {
            simplex[n] = xr;
            fvals[n] = fr;
        } else {
            const auto xc = blend(0.5);
            const double fc = f(xc);
            if (fc < fvals[n]) {
                simplex[n] = xc;
                fvals[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        simplex[i][j] = 0.5 * (simplex[i][j] + simplex[0][j]);
                    fvals[i] = f(simplex[i]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (fvals[i] < fvals[best]) best = i;
    res.x = simplex[best];
    res.f = fvals[best];
    return res;
}

}  // namespace jmes::opt

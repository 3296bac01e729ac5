#include "jmes/orders.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace jmes {

namespace {

// Evaluate f on every grid point (parallel, per-slot writes) and compare
// pairwise lhs <= rhs + tol.
OrderCheckResult pointwise_compare(OrderRelation rel, const PGrid& grid, double tol,
                                   Exec exec,
                                   const std::function<double(double)>& lhs,
                                   const std::function<double(double)>& rhs) {
    OrderCheckResult res;
    res.relation = rel;
    res.grid = grid;
    res.tolerance = tol;
    const auto n = static_cast<std::int64_t>(grid.points.size());
    std::vector<double> l(n), r(n);
    parallel::for_each_block(n, exec, [&](std::int64_t i) {
        l[i] = lhs(grid.points[i]);
        r[i] = rhs(grid.points[i]);
    });
    for (std::int64_t i = 0; i < n; ++i) {
        if (l[i] > r[i] + tol) {
            res.verdict = Verdict::Violated;
            res.witnesses.push_back({grid.points[i], 0.0, l[i], r[i], l[i] - r[i] - tol});
        }
    }
    return res;
}

// f evaluated on the grid must be nonincreasing (dir < 0) or nondecreasing
// (dir > 0) along the grid.
OrderCheckResult monotone_along_grid(OrderRelation rel, const PGrid& grid, double tol,
                                     Exec exec, int dir,
                                     const std::function<double(double)>& f) {
    OrderCheckResult res;
    res.relation = rel;
    res.grid = grid;
    res.tolerance = tol;
    const auto n = static_cast<std::int64_t>(grid.points.size());
    std::vector<double> vals(n);
    parallel::for_each_block(n, exec, [&](std::int64_t i) { vals[i] = f(grid.points[i]); });
    for (std::int64_t i = 1; i < n; ++i) {
        const double step = dir * (vals[i] - vals[i - 1]);
        if (step < -tol) {
            res.verdict = Verdict::Violated;
            res.witnesses.push_back(
                {grid.points[i - 1], grid.points[i], vals[i - 1], vals[i], -step - tol});
        }
    }
    return res;
}

}  // namespace

const char* relation_name(OrderRelation r) {
    switch (r) {
        case OrderRelation::St: return "st";
        case OrderRelation::Icx: return "icx";
        case OrderRelation::Disp: return "disp";
        case OrderRelation::Epw: return "epw";
        case OrderRelation::Lr: return "lr";
        case OrderRelation::Si: return "si";
        case OrderRelation::Rti: return "rti";
        case OrderRelation::Tp2Tail: return "tp2_tail";
        case OrderRelation::LAlphaRatio: return "l_alpha_ratio";
        case OrderRelation::Symmetry: return "symmetry";
    }
    return "?";
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::Violated: return "violated";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

std::string OrderCheckResult::to_json() const {
    nlohmann::json j;
    j["relation"] = relation_name(relation);
    j["verdict"] = verdict_name(verdict);
    j["tolerance"] = tolerance;
    j["grid_size"] = grid.points.size();
    if (!note.empty()) j["note"] = note;
    nlohmann::json w = nlohmann::json::array();
    for (const auto& x : witnesses)
        w.push_back({{"p1", x.p1}, {"p2", x.p2}, {"lhs", x.lhs}, {"rhs", x.rhs},
                     {"margin", x.margin}});
    j["witnesses"] = w;
    return j.dump(2);
}

OrderCheckResult check_st(const Marginal& m1, const Marginal& m2, const PGrid& grid,
                          double tol, Exec exec) {
    return pointwise_compare(
        OrderRelation::St, grid, tol, exec, [&](double p) { return m1.quantile(p); },
        [&](double p) { return m2.quantile(p); });
}

OrderCheckResult check_icx(const Marginal& m1, const Marginal& m2, const PGrid& grid,
                           double tol, Exec exec) {
    return pointwise_compare(
        OrderRelation::Icx, grid, tol, exec, [&](double p) { return m1.es(p); },
        [&](double p) { return m2.es(p); });
}

OrderCheckResult check_disp(const Marginal& m1, const Marginal& m2, const PGrid& grid,
                            double tol, Exec exec) {
    OrderCheckResult res;
    res.relation = OrderRelation::Disp;
    res.grid = grid;
    res.tolerance = tol;
    const auto n = static_cast<std::int64_t>(grid.points.size());
    std::vector<double> q1(n), q2(n);
    parallel::for_each_block(n, exec, [&](std::int64_t i) {
        q1[i] = m1.quantile(grid.points[i]);
        q2[i] = m2.quantile(grid.points[i]);
    });
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t j = i + 1; j < n; ++j) {
            const double lhs = q1[j] - q1[i];
            const double rhs = q2[j] - q2[i];
            if (lhs > rhs + tol) {
                res.verdict = Verdict::Violated;
                res.witnesses.push_back(
                    {grid.points[i], grid.points[j], lhs, rhs, lhs - rhs - tol});
                if (res.witnesses.size() >= 64) return res;
            }
        }
    }
    return res;
}

OrderCheckResult check_epw(const Marginal& m1, const Marginal& m2, const PGrid& grid,
                           double tol, Exec exec) {
    OrderCheckResult res;
    res.relation = OrderRelation::Epw;
    res.grid = grid;
    res.tolerance = tol;
    const auto n = static_cast<std::int64_t>(grid.points.size());
    std::vector<double> e1(n), e2(n);
    std::vector<char> ok(n, 0);
    parallel::for_each_block(n, exec, [&](std::int64_t i) {
        const double p = grid.points[i];
        try {
            e1[i] = m1.epw(p);
            e2[i] = m2.epw(p);
            ok[i] = 1;
        } catch (const ZeroQuantile&) {
            ok[i] = 0;  // outside the order's domain
        }
    });
    for (std::int64_t i = 0; i < n; ++i) {
        if (!ok[i]) continue;
        if (e1[i] > e2[i] + tol) {
            res.verdict = Verdict::Violated;
            res.witnesses.push_back({grid.points[i], 0.0, e1[i], e2[i], e1[i] - e2[i] - tol});
        }
    }
    return res;
}

OrderCheckResult check_lr(const Marginal& m1, const Marginal& m2, const PGrid& grid,
                          double tol) {
    OrderCheckResult res;
    res.relation = OrderRelation::Lr;
    res.grid = grid;
    res.tolerance = tol;
    if (!m1.has_density() || !m2.has_density()) {
        res.verdict = Verdict::Inconclusive;
        res.note = "density unavailable";
        return res;
    }
    // x-grid from the quantiles of both margins.
    std::vector<double> xs;
    xs.reserve(2 * grid.points.size());
    for (double p : grid.points) {
        xs.push_back(m1.quantile(p));
        xs.push_back(m2.quantile(p));
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    double prev_ratio = -1.0;
    double prev_x = 0.0;
    bool have_prev = false;
    for (double x : xs) {
        const double f = m1.density(x);
        const double g = m2.density(x);
        if (!(f > 0.0) || !std::isfinite(g)) continue;  // outside common support
        const double ratio = g / f;
        if (have_prev && ratio < prev_ratio - tol) {
            res.verdict = Verdict::Violated;
            res.witnesses.push_back({prev_x, x, prev_ratio, ratio, prev_ratio - ratio - tol});
        }
        prev_ratio = ratio;
        prev_x = x;
        have_prev = true;
    }
    return res;
}

OrderCheckResult check_si(const Copula& c, const PGrid& grid, double tol, Exec exec) {
    OrderCheckResult out;
    out.relation = OrderRelation::Si;
    out.grid = grid;
    out.tolerance = tol;
    out.note = "partial2(u,.) nonincreasing; exchangeable family covers both directions";
    for (double u : grid.points) {
        auto r = monotone_along_grid(OrderRelation::Si, grid, tol, exec, -1,
                                     [&](double v) { return c.partial2(u, v); });
        if (r.verdict == Verdict::Violated) {
            out.verdict = Verdict::Violated;
            for (auto& w : r.witnesses) {
                w.p1 = u;
                out.witnesses.push_back(w);
            }
            if (out.witnesses.size() >= 64) break;
        }
    }
    return out;
}

OrderCheckResult check_rti(const Copula& c, const PGrid& grid, double tol, Exec exec) {
    OrderCheckResult out;
    out.relation = OrderRelation::Rti;
    out.grid = grid;
    out.tolerance = tol;
    for (double u : grid.points) {
        auto r = monotone_along_grid(
            OrderRelation::Rti, grid, tol, exec, +1,
            [&](double v) { return c.tail(u, v) / (1.0 - v); });
        if (r.verdict == Verdict::Violated) {
            out.verdict = Verdict::Violated;
            for (auto& w : r.witnesses) {
                w.p1 = u;
                out.witnesses.push_back(w);
            }
            if (out.witnesses.size() >= 64) break;
        }
    }
    return out;
}

OrderCheckResult check_tp2_tail(const Copula& c, const PGrid& grid, double tol, Exec exec) {
    OrderCheckResult res;
    res.relation = OrderRelation::Tp2Tail;
    res.grid = grid;
    res.tolerance = tol;
    res.note = "adjacent 2x2 log-minors; positive minors compose to all rectangles";
    const auto n = static_cast<std::int64_t>(grid.points.size());
    std::vector<double> logc(static_cast<std::size_t>(n * n));
    parallel::for_each_block(n, exec, [&](std::int64_t i) {
        for (std::int64_t j = 0; j < n; ++j)
            logc[static_cast<std::size_t>(i * n + j)] =
                std::log(std::max(c.tail(grid.points[i], grid.points[j]), 1e-300));
    });
    for (std::int64_t i = 0; i + 1 < n; ++i) {
        for (std::int64_t j = 0; j + 1 < n; ++j) {
            const double minor = logc[i * n + j] + logc[(i + 1) * n + j + 1] -
                                 logc[i * n + j + 1] - logc[(i + 1) * n + j];
            if (minor < -tol) {
                res.verdict = Verdict::Violated;
                res.witnesses.push_back(
                    {grid.points[i], grid.points[j], minor, 0.0, -minor - tol});
                if (res.witnesses.size() >= 64) return res;
            }
        }
    }
    return res;
}

OrderCheckResult check_l_alpha(const Copula& c1, const Copula& c2, double alpha,
                               double beta, const PGrid& grid, double tol, Exec exec) {
    OrderCheckResult res;
    res.relation = OrderRelation::LAlphaRatio;
    res.tolerance = tol;
    if (c1.tail(alpha, beta) < 1e-12 || c2.tail(alpha, beta) < 1e-12)
        throw DegenerateConditioning("check_l_alpha: tail mass vanishes at (alpha,beta)");
    // Restrict the grid to [beta, 1); always include beta itself.
    res.grid.points.push_back(beta);
    for (double t : grid.points)
        if (t > beta) res.grid.points.push_back(t);
    const auto n = static_cast<std::int64_t>(res.grid.points.size());
    std::vector<double> l(n);
    parallel::for_each_block(n, exec, [&](std::int64_t i) {
        const double t = res.grid.points[i];
        l[i] = c2.tail(alpha, t) / c1.tail(alpha, t);
    });
    const double floor = l[0];
    bool monotone = true;
    for (std::int64_t i = 1; i < n; ++i) {
        if (l[i] < floor - tol) {
            res.verdict = Verdict::Violated;
            res.witnesses.push_back({res.grid.points[i], beta, l[i], floor, floor - l[i] - tol});
        }
        if (l[i] < l[i - 1] - tol) monotone = false;
    }
    res.note = monotone ? "l_alpha nondecreasing on [beta,1)"
                        : "floor condition only; l_alpha not monotone";
    return res;
}

OrderCheckResult check_symmetry_fn(const std::function<double(double, double)>& cdf,
                                   const PGrid& grid, double tol) {
    OrderCheckResult res;
    res.relation = OrderRelation::Symmetry;
    res.grid = grid;
    res.tolerance = tol;
    const auto n = grid.points.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double a = cdf(grid.points[i], grid.points[j]);
            const double b = cdf(grid.points[j], grid.points[i]);
            if (std::fabs(a - b) > tol) {
                res.verdict = Verdict::Violated;
                res.witnesses.push_back(
                    {grid.points[i], grid.points[j], a, b, std::fabs(a - b) - tol});
                if (res.witnesses.size() >= 64) return res;
            }
        }
    }
    return res;
}

OrderCheckResult check_symmetry(const Copula& c, const PGrid& grid, double tol, Exec exec) {
    (void)exec;
    return check_symmetry_fn([&](double u, double v) { return c.cdf(u, v); }, grid, tol);
}

}  // namespace jmes

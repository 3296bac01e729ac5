#include "jmes/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "jmes/rng.hpp"

namespace jmes {

namespace {

constexpr std::int64_t kBlock = 1 << 15;

void require_mc(const BivariateModel& b, double alpha, double beta, std::int64_t n) {
    if (n < 10000) throw DomainError("mc: n must be >= 1e4");
    const double mass = b.copula.tail(alpha, beta);
    if (mass * static_cast<double>(n) < 100.0)
        throw InsufficientTailSamples("mc: expected conditional count below 100");
}

// Collect v-coordinates of samples with u > alpha (alpha = 0 collects all),
// preserving sample order across blocks for any thread count.
std::vector<double> collect_conditional_v(const Copula& c, double alpha, std::int64_t n,
                                          std::uint64_t seed, std::uint64_t stream,
                                          Exec exec) {
    const std::int64_t n_blocks = (n + kBlock - 1) / kBlock;
    std::vector<std::vector<double>> per_block(static_cast<std::size_t>(n_blocks));
    const rng::UniformPairStream rs(seed, stream);
    parallel::for_each_block(n_blocks, exec, [&](std::int64_t blk) {
        auto& local = per_block[static_cast<std::size_t>(blk)];
        const std::int64_t end = std::min(n, (blk + 1) * kBlock);
        for (std::int64_t i = blk * kBlock; i < end; ++i) {
            const auto r = rs.pair(static_cast<std::uint64_t>(i));
            const UvPair p = c.conditional_pair(r[0], r[1]);
            if (p.u > alpha) local.push_back(p.v);
        }
    });
    std::size_t total = 0;
    for (const auto& v : per_block) total += v.size();
    std::vector<double> out;
    out.reserve(total);
    for (const auto& v : per_block) out.insert(out.end(), v.begin(), v.end());
    return out;
}

struct MeanStat {
    double mean = 0.0;
    double se = 0.0;
    std::int64_t n = 0;
};

MeanStat mean_of(const std::vector<double>& xs) {
    MeanStat s;
    s.n = static_cast<std::int64_t>(xs.size());
    if (xs.empty()) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    if (xs.size() > 1)
        s.se = std::sqrt(ss / (static_cast<double>(xs.size()) - 1.0)) /
               std::sqrt(static_cast<double>(xs.size()));
    return s;
}

// Type-1 sample quantile: the ceil(m*beta)-th order statistic of sorted xs.
double sample_quantile_sorted(const std::vector<double>& xs, double beta) {
    const auto m = static_cast<double>(xs.size());
    auto k = static_cast<std::size_t>(std::ceil(m * beta));
    k = std::clamp<std::size_t>(k, 1, xs.size());
    return xs[k - 1];
}

// ES of the empirical law above level beta and its asymptotic standard
// error from the influence values z_i = q + (x_i - q)_+ / (1-beta).
MeanStat sample_es(const std::vector<double>& sorted_xs, double beta) {
    const double q = sample_quantile_sorted(sorted_xs, beta);
    std::vector<double> z;
    z.reserve(sorted_xs.size());
    for (double x : sorted_xs) z.push_back(q + std::max(x - q, 0.0) / (1.0 - beta));
    return mean_of(z);
}

McEstimate finish(const MeanStat& s, std::int64_t n_total, std::int64_t n_cond,
                  std::uint64_t seed) {
    McEstimate e;
    e.value = s.mean;
    e.std_error = s.se;
    e.n_total = n_total;
    e.n_conditional = n_cond;
    e.seed = seed;
    e.generator = rng::kGeneratorName;
    return e;
}

std::vector<double> map_quantile(const Marginal& m, const std::vector<double>& vs,
                                 Exec exec) {
    std::vector<double> out(vs.size());
    const auto n = static_cast<std::int64_t>(vs.size());
    const std::int64_t n_blocks = (n + kBlock - 1) / kBlock;
    parallel::for_each_block(n_blocks, exec, [&](std::int64_t blk) {
        const std::int64_t end = std::min(n, (blk + 1) * kBlock);
        for (std::int64_t i = blk * kBlock; i < end; ++i)
            out[static_cast<std::size_t>(i)] = m.impl().quantile(vs[static_cast<std::size_t>(i)]);
    });
    return out;
}

McEstimate quantile_estimate(const Marginal& m, std::vector<double> vs, double beta,
                             std::int64_t n_total, std::uint64_t seed) {
    std::sort(vs.begin(), vs.end());
    const auto msize = static_cast<double>(vs.size());
    const auto k = static_cast<std::int64_t>(std::ceil(msize * beta));
    const auto d = static_cast<std::int64_t>(
        std::ceil(3.0 * std::sqrt(msize * beta * (1.0 - beta)))) + 1;
    const auto at = [&](std::int64_t idx) {
        idx = std::clamp<std::int64_t>(idx, 1, static_cast<std::int64_t>(vs.size()));
        return m.impl().quantile(vs[static_cast<std::size_t>(idx - 1)]);
    };
    McEstimate e;
    e.value = at(k);
    e.std_error = (at(k + d) - at(k - d)) / 6.0;
    e.n_total = n_total;
    e.n_conditional = static_cast<std::int64_t>(vs.size());
    e.seed = seed;
    e.generator = rng::kGeneratorName;
    return e;
}

}  // namespace

std::string McEstimate::to_json() const {
    nlohmann::json j{{"value", value},          {"std_error", std_error},
                     {"n_total", n_total},      {"n_conditional", n_conditional},
                     {"seed", seed},            {"generator", generator}};
    return j.dump();
}

McEstimate mc_jmes(const BivariateModel& b, double alpha, double beta, std::int64_t n,
                   std::uint64_t seed, Exec exec) {
    require_mc(b, alpha, beta, n);
    auto vs = collect_conditional_v(b.copula, alpha, n, seed, 0, exec);
    std::vector<double> kept;
    kept.reserve(vs.size());
    for (double v : vs)
        if (v > beta) kept.push_back(v);
    if (kept.size() < 2) throw InsufficientTailSamples("mc_jmes: conditional sample empty");
    const auto ys = map_quantile(b.y, kept, exec);
    return finish(mean_of(ys), n, static_cast<std::int64_t>(kept.size()), seed);
}

McEstimate mc_mes(const BivariateModel& b, double alpha, std::int64_t n,
                  std::uint64_t seed, Exec exec) {
    require_mc(b, alpha, 0.0, n);
    const auto vs = collect_conditional_v(b.copula, alpha, n, seed, 0, exec);
    if (vs.size() < 2) throw InsufficientTailSamples("mc_mes: conditional sample empty");
    const auto ys = map_quantile(b.y, vs, exec);
    return finish(mean_of(ys), n, static_cast<std::int64_t>(vs.size()), seed);
}

McEstimate mc_covar(const BivariateModel& b, double alpha, double beta, std::int64_t n,
                    std::uint64_t seed, Exec exec) {
    require_mc(b, alpha, beta, n);
    auto vs = collect_conditional_v(b.copula, alpha, n, seed, 0, exec);
    if (vs.size() < 100) throw InsufficientTailSamples("mc_covar: conditional sample too small");
    return quantile_estimate(b.y, std::move(vs), beta, n, seed);
}

McEstimate mc_coes(const BivariateModel& b, double alpha, double beta, std::int64_t n,
                   std::uint64_t seed, Exec exec) {
    require_mc(b, alpha, beta, n);
    auto vs = collect_conditional_v(b.copula, alpha, n, seed, 0, exec);
    if (vs.size() < 100) throw InsufficientTailSamples("mc_coes: conditional sample too small");
    auto ys = map_quantile(b.y, vs, exec);
    std::sort(ys.begin(), ys.end());
    return finish(sample_es(ys, beta), n, static_cast<std::int64_t>(ys.size()), seed);
}

McEstimate mc_es(const BivariateModel& b, double beta, std::int64_t n, std::uint64_t seed,
                 Exec exec) {
    auto vs = collect_conditional_v(b.copula, 0.0, n, seed, 1, exec);
    auto ys = map_quantile(b.y, vs, exec);
    std::sort(ys.begin(), ys.end());
    return finish(sample_es(ys, beta), n, n, seed);
}

McEstimate mc_var(const BivariateModel& b, double beta, std::int64_t n, std::uint64_t seed,
                  Exec exec) {
    auto vs = collect_conditional_v(b.copula, 0.0, n, seed, 1, exec);
    return quantile_estimate(b.y, std::move(vs), beta, n, seed);
}

McEstimate mc_mean(const BivariateModel& b, std::int64_t n, std::uint64_t seed, Exec exec) {
    const auto vs = collect_conditional_v(b.copula, 0.0, n, seed, 1, exec);
    const auto ys = map_quantile(b.y, vs, exec);
    return finish(mean_of(ys), n, n, seed);
}

namespace {

McEstimate combine_diff(const McEstimate& a, const McEstimate& c) {
    McEstimate e = a;
    e.value = a.value - c.value;
    e.std_error = std::hypot(a.std_error, c.std_error);
    return e;
}

McEstimate combine_ratio_minus_one(const McEstimate& a, const McEstimate& c) {
    McEstimate e = a;
    e.value = a.value / c.value - 1.0;
    e.std_error = std::hypot(a.std_error / c.value,
                             a.value * c.std_error / (c.value * c.value));
    e.std_error = std::fabs(e.std_error);
    return e;
}

}  // namespace

McZoo mc_measure_zoo(const BivariateModel& b, double alpha, double beta, std::int64_t n,
                     std::uint64_t seed, Exec exec) {
    require_mc(b, alpha, beta, n);
    McZoo zoo;
    auto& est = zoo.estimates;

    // Pass 1 (stream 0): samples for the primary conditional measures.
    {
        auto v_a = collect_conditional_v(b.copula, alpha, n, seed, 0, exec);
        const auto n_a = static_cast<std::int64_t>(v_a.size());
        auto y_a = map_quantile(b.y, v_a, exec);
        est["MES"] = finish(mean_of(y_a), n, n_a, seed);
        std::vector<double> y_jmes;
        y_jmes.reserve(y_a.size());
        for (std::size_t i = 0; i < v_a.size(); ++i)
            if (v_a[i] > beta) y_jmes.push_back(y_a[i]);
        est["JMES"] =
            finish(mean_of(y_jmes), n, static_cast<std::int64_t>(y_jmes.size()), seed);
        est["CoVaR"] = quantile_estimate(b.y, v_a, beta, n, seed);
        std::sort(y_a.begin(), y_a.end());
        est["CoES"] = finish(sample_es(y_a, beta), n, n_a, seed);
    }

    // Pass 2 (stream 1): baselines on an independent stream so differences
    // and ratios propagate errors independently.
    {
        auto v_all = collect_conditional_v(b.copula, 0.0, n, seed, 1, exec);
        // Median-stress baselines.
        std::vector<double> v_m;
        v_m.reserve(v_all.size());
        {
            const rng::UniformPairStream rs(seed, 1);
            // Re-filter u > 0.5 from the same stream; regenerating u is
            // cheaper than caching both coordinates.
            const std::int64_t n_blocks = (n + kBlock - 1) / kBlock;
            std::vector<std::vector<double>> per_block(static_cast<std::size_t>(n_blocks));
            parallel::for_each_block(n_blocks, exec, [&](std::int64_t blk) {
                auto& local = per_block[static_cast<std::size_t>(blk)];
                const std::int64_t end = std::min(n, (blk + 1) * kBlock);
                for (std::int64_t i = blk * kBlock; i < end; ++i) {
                    const auto r = rs.pair(static_cast<std::uint64_t>(i));
                    const UvPair p = b.copula.conditional_pair(r[0], r[1]);
                    if (p.u > 0.5) local.push_back(p.v);
                }
            });
            for (const auto& blkv : per_block) v_m.insert(v_m.end(), blkv.begin(), blkv.end());
        }
        const auto n_m = static_cast<std::int64_t>(v_m.size());
        auto y_m = map_quantile(b.y, v_m, exec);
        est["MES05"] = finish(mean_of(y_m), n, n_m, seed);
        std::vector<double> y_jm;
        for (std::size_t i = 0; i < v_m.size(); ++i)
            if (v_m[i] > beta) y_jm.push_back(y_m[i]);
        est["JMES05"] = finish(mean_of(y_jm), n, static_cast<std::int64_t>(y_jm.size()), seed);
        est["CoVaR05"] = quantile_estimate(b.y, v_m, beta, n, seed);

        est["VaR"] = quantile_estimate(b.y, v_all, beta, n, seed);
        {
            // ES = q + mean((Y - q)_+) / (1-beta) with q the sample VaR;
            // only the v > beta samples contribute nonzero terms, so the
            // quantile map stays cheap.  Standard error from the same
            // influence values, zero-padded to the full sample.
            std::vector<double> v_tail;
            for (double v : v_all)
                if (v > beta) v_tail.push_back(v);
            const auto y_tail = map_quantile(b.y, v_tail, exec);
            const auto m = static_cast<double>(v_all.size());
            const double q = est["VaR"].value;
            double zsum = 0.0;
            std::vector<double> z;
            z.reserve(y_tail.size());
            for (double y : y_tail) {
                const double zz = std::max(y - q, 0.0) / (1.0 - beta);
                z.push_back(zz);
                zsum += zz;
            }
            const double zmean = zsum / m;
            double ss = (m - static_cast<double>(z.size())) * zmean * zmean;
            for (double zz : z) ss += (zz - zmean) * (zz - zmean);
            MeanStat s;
            s.mean = q + zmean;
            s.se = std::sqrt(ss / (m - 1.0)) / std::sqrt(m);
            s.n = static_cast<std::int64_t>(y_tail.size());
            est["ES"] = finish(s, n, s.n, seed);
        }
        // Mean from a fixed-size subsample keeps the quantile mapping cheap.
        const std::size_t n_sub = std::min<std::size_t>(v_all.size(), 1000000);
        std::vector<double> v_sub(v_all.begin(), v_all.begin() + static_cast<std::ptrdiff_t>(n_sub));
        const auto y_sub = map_quantile(b.y, v_sub, exec);
        est["E"] = finish(mean_of(y_sub), static_cast<std::int64_t>(n_sub),
                          static_cast<std::int64_t>(n_sub), seed);
    }

    est["dCoVaR"] = combine_diff(est["CoVaR"], est["VaR"]);
    est["dmCoVaR"] = combine_diff(est["CoVaR"], est["CoVaR05"]);
    est["dMES"] = combine_diff(est["MES"], est["E"]);
    est["dmMES"] = combine_diff(est["MES"], est["MES05"]);
    est["dJMES"] = combine_diff(est["JMES"], est["ES"]);
    est["dmJMES"] = combine_diff(est["JMES"], est["JMES05"]);
    est["drCoVaR"] = combine_ratio_minus_one(est["CoVaR"], est["VaR"]);
    est["drmCoVaR"] = combine_ratio_minus_one(est["CoVaR"], est["CoVaR05"]);
    est["drMES"] = combine_ratio_minus_one(est["MES"], est["E"]);
    est["drmMES"] = combine_ratio_minus_one(est["MES"], est["MES05"]);
    est["drJMES"] = combine_ratio_minus_one(est["JMES"], est["ES"]);
    est["drmJMES"] = combine_ratio_minus_one(est["JMES"], est["JMES05"]);
    return zoo;
}

std::vector<McOrderWitness> mc_order_witness(const BivariateModel& b1,
                                             const BivariateModel& b2,
                                             const std::string& measure,
                                             const std::vector<std::pair<double, double>>& grid,
                                             std::int64_t n, std::uint64_t seed, Exec exec) {
    std::vector<McOrderWitness> witnesses;
    auto eval = [&](const BivariateModel& b, double a, double beta, std::uint64_t s) {
        if (measure == "JMES") return mc_jmes(b, a, beta, n, s, exec);
        if (measure == "MES") return mc_mes(b, a, n, s, exec);
        if (measure == "CoVaR") return mc_covar(b, a, beta, n, s, exec);
        if (measure == "CoES") return mc_coes(b, a, beta, n, s, exec);
        throw DomainError("mc_order_witness: unsupported measure " + measure);
    };
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const auto [a, beta] = grid[g];
        McOrderWitness w{a, beta, {}, {}};
        try {
            w.first = eval(b1, a, beta, seed + 2 * g);
            w.second = eval(b2, a, beta, seed + 2 * g + 1);
        } catch (const InsufficientTailSamples&) {
            continue;
        }
        const double band = 3.0 * std::hypot(w.first.std_error, w.second.std_error);
        if (w.first.value - w.second.value > band) witnesses.push_back(w);
    }
    return witnesses;
}

}  // namespace jmes

#pragma once

// Independent Monte Carlo estimators for every measure.  Sampling happens
// in copula space: draw (u,v), condition on u > alpha / v > beta exactly,
// and map through the marginal quantile, so no threshold has to be
// estimated.  Samples are indexed by a counter-based generator in fixed
// blocks; serial and parallel execution produce bit-identical estimates.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "jmes/measures.hpp"

namespace jmes {

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t n_total = 0;
    std::int64_t n_conditional = 0;
    std::uint64_t seed = 0;
    std::string generator;

    std::string to_json() const;
};

McEstimate mc_jmes(const BivariateModel& b, double alpha, double beta, std::int64_t n,
                   std::uint64_t seed, Exec exec = Exec::Parallel);
McEstimate mc_mes(const BivariateModel& b, double alpha, std::int64_t n,
                  std::uint64_t seed, Exec exec = Exec::Parallel);
McEstimate mc_covar(const BivariateModel& b, double alpha, double beta, std::int64_t n,
                    std::uint64_t seed, Exec exec = Exec::Parallel);
McEstimate mc_coes(const BivariateModel& b, double alpha, double beta, std::int64_t n,
                   std::uint64_t seed, Exec exec = Exec::Parallel);
// Unconditional companions used when differencing the zoo against its
// baselines.
McEstimate mc_es(const BivariateModel& b, double beta, std::int64_t n, std::uint64_t seed,
                 Exec exec = Exec::Parallel);
McEstimate mc_var(const BivariateModel& b, double beta, std::int64_t n, std::uint64_t seed,
                  Exec exec = Exec::Parallel);
McEstimate mc_mean(const BivariateModel& b, std::int64_t n, std::uint64_t seed,
                   Exec exec = Exec::Parallel);

// Every measure name from the report zoo estimated by Monte Carlo in two
// sampling passes (primary measures and baselines use disjoint streams so
// differences and ratios have independent-error propagation).
struct McZoo {
    std::map<std::string, McEstimate> estimates;
};
McZoo mc_measure_zoo(const BivariateModel& b, double alpha, double beta, std::int64_t n,
                     std::uint64_t seed, Exec exec = Exec::Parallel);

// Sampled-order falsification harness: for each (alpha, beta) pair, check
// that measure(b1) <= measure(b2) within 3 combined standard errors and
// report the points where the sampled ordering contradicts it.
struct McOrderWitness {
    double alpha, beta;
    McEstimate first, second;
};
std::vector<McOrderWitness> mc_order_witness(const BivariateModel& b1,
                                             const BivariateModel& b2,
                                             const std::string& measure,
                                             const std::vector<std::pair<double, double>>& grid,
                                             std::int64_t n, std::uint64_t seed,
                                             Exec exec = Exec::Parallel);

}  // namespace jmes

#pragma once

// Grid-based checkers for the stochastic orders (st, icx, disp, epw, lr)
// and the dependence properties (SI, RTI, tail TP2, the l_alpha ratio
// floor, exchange symmetry).  A verdict is a certificate at the grid's
// resolution, never a proof; results carry the grid and tolerance.

#include <string>
#include <vector>

#include "jmes/copulas.hpp"
#include "jmes/distributions.hpp"
#include "jmes/parallel.hpp"

namespace jmes {

enum class OrderRelation {
    St,
    Icx,
    Disp,
    Epw,
    Lr,
    Si,
    Rti,
    Tp2Tail,
    LAlphaRatio,
    Symmetry,
};

enum class Verdict { Holds, Violated, Inconclusive };

const char* relation_name(OrderRelation r);
const char* verdict_name(Verdict v);

struct OrderWitness {
    double p1 = 0.0;  // grid point (or first coordinate of a rectangle)
    double p2 = 0.0;  // second coordinate when the check uses pairs
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // how far past the tolerance the comparison failed
};

struct OrderCheckResult {
    OrderRelation relation;
    Verdict verdict = Verdict::Holds;
    std::vector<OrderWitness> witnesses;
    PGrid grid;
    double tolerance = 1e-9;
    std::string note;  // e.g. which SI direction was evaluated

    std::string to_json() const;
};

// VaR_p(m1) <= VaR_p(m2) on the grid.
OrderCheckResult check_st(const Marginal& m1, const Marginal& m2, const PGrid& grid,
                          double tol = 1e-9, Exec exec = Exec::Parallel);

// ES_p(m1) <= ES_p(m2) on the grid.
OrderCheckResult check_icx(const Marginal& m1, const Marginal& m2, const PGrid& grid,
                           double tol = 1e-9, Exec exec = Exec::Parallel);

// Quantile spacings ordered over every grid pair u < v.
OrderCheckResult check_disp(const Marginal& m1, const Marginal& m2, const PGrid& grid,
                            double tol = 1e-9, Exec exec = Exec::Parallel);

// EPW_p(m1) <= EPW_p(m2) on grid points where both quantiles are nonzero.
OrderCheckResult check_epw(const Marginal& m1, const Marginal& m2, const PGrid& grid,
                           double tol = 1e-9, Exec exec = Exec::Parallel);

// density2/density1 nondecreasing along the x-grid induced by the
// quantiles of both margins; Inconclusive when a density is unavailable.
OrderCheckResult check_lr(const Marginal& m1, const Marginal& m2, const PGrid& grid,
                          double tol = 1e-9);

// X SI Y: partial2(u, v) nonincreasing in v.  For these exchangeable
// families one direction settles both.
OrderCheckResult check_si(const Copula& c, const PGrid& grid, double tol = 1e-9,
                          Exec exec = Exec::Parallel);

// X RTI Y: Cbar(u,v)/(1-v) nondecreasing in v.
OrderCheckResult check_rti(const Copula& c, const PGrid& grid, double tol = 1e-9,
                           Exec exec = Exec::Parallel);

// Tail function TP2: log Cbar supermodular on adjacent grid rectangles.
OrderCheckResult check_tp2_tail(const Copula& c, const PGrid& grid, double tol = 1e-9,
                                Exec exec = Exec::Parallel);

// l_alpha(t) = Cbar2(alpha,t)/Cbar1(alpha,t) >= l_alpha(beta) on [beta,1);
// the note records whether the stronger monotone form holds as well.
OrderCheckResult check_l_alpha(const Copula& c1, const Copula& c2, double alpha,
                               double beta, const PGrid& grid, double tol = 1e-9,
                               Exec exec = Exec::Parallel);

// max |C(u,v) - C(v,u)| over the grid.
OrderCheckResult check_symmetry(const Copula& c, const PGrid& grid, double tol = 1e-12,
                                Exec exec = Exec::Parallel);

// Same check against an arbitrary cdf, used to exercise the violated path
// with an asymmetric fixture.
OrderCheckResult check_symmetry_fn(const std::function<double(double, double)>& cdf,
                                   const PGrid& grid, double tol = 1e-12);

}  // namespace jmes

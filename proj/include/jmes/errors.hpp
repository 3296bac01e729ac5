#pragma once

#include <stdexcept>
#include <string>

namespace jmes {

// Base class for all library errors so callers can catch one type.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside the contract, e.g. a probability outside (0,1).
class DomainError : public Error {
  public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

// Upper-tail mean does not exist (Student t with nu <= 1, GPD with xi >= 1).
class NonintegrableTail : public Error {
  public:
    explicit NonintegrableTail(const std::string& what) : Error(what) {}
};

// EPW requested at a level where the quantile is zero.
class ZeroQuantile : public Error {
  public:
    explicit ZeroQuantile(const std::string& what) : Error(what) {}
};

// Conditioning event {U > alpha, V > beta} carries (numerically) no mass.
class DegenerateConditioning : public Error {
  public:
    explicit DegenerateConditioning(const std::string& what) : Error(what) {}
};

// Ratio measure with a zero (or numerically zero) denominator.
class ZeroDenominator : public Error {
  public:
    explicit ZeroDenominator(const std::string& what) : Error(what) {}
};

// Iterative fit ran out of iterations; message carries the best iterate.
class NonConvergence : public Error {
  public:
    explicit NonConvergence(const std::string& what) : Error(what) {}
};

// Sample degenerate for the requested fit (e.g. all excesses equal).
class DegenerateSample : public Error {
  public:
    explicit DegenerateSample(const std::string& what) : Error(what) {}
};

// Monte Carlo conditioning event too rare for the requested sample size.
class InsufficientTailSamples : public Error {
  public:
    explicit InsufficientTailSamples(const std::string& what) : Error(what) {}
};

// Density requested from a model that has none (empirical bodies).
class DensityUnavailable : public Error {
  public:
    explicit DensityUnavailable(const std::string& what) : Error(what) {}
};

// Price series with a non-positive entry cannot be log-differenced.
class NonPositivePrice : public Error {
  public:
    explicit NonPositivePrice(const std::string& what) : Error(what) {}
};

// Figure id outside the supported set.
class UnknownFigure : public Error {
  public:
    explicit UnknownFigure(const std::string& what) : Error(what) {}
};

}  // namespace jmes

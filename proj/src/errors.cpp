#include "qgraph/errors.hpp"

#include <cstdio>

namespace qgraph {

namespace {

std::string describe(const char* what, cplx lambda, double sigma_min) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s at lambda = %.15g%+.15gi (sigma_min = %.3e)", what, lambda.real(),
                lambda.imag(), sigma_min);
  return buf;
}

}  // namespace

NearSingular::NearSingular(cplx lambda, double sigma_min)
    : NumericalException(describe("interior system is near singular (lambda in sigma(H0))", lambda, sigma_min),
                         lambda, sigma_min) {}

ContinuationPole::ContinuationPole(cplx lambda, double sigma_min)
    : NumericalException(describe("k I + i Lambda is singular", lambda, sigma_min), lambda, sigma_min) {}

ThresholdExcluded::ThresholdExcluded(cplx lambda)
    : NumericalException(describe("lambda is on the branch cut (-inf, 0] or below the threshold floor", lambda, 0.0),
                         lambda, 0.0) {}

}  // namespace qgraph

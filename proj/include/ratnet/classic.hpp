#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "ratnet/ratfun.hpp"

namespace ratnet::classic {

// Newman rational approximant to |x| on [-1,1]:
//   p(x) = prod_{i=0}^{N-1} (x + xi^i), xi = exp(-1/sqrt(N)),
//   r_abs(x) = x (p(x) - p(-x)) / (p(x) + p(-x)).
// Requires 4 <= N <= 400 (larger N overflows the product in doubles).
std::function<double(double)> newman_abs(int N);

// ReLU approximant (r_abs(x) + x) / 2 from the same construction.
std::function<double(double)> newman_relu(int N);

// Minimax polynomial fit to ReLU on [-1,1] by discrete Remez exchange;
// returns ascending monomial coefficients (degree+1 of them).
std::vector<double> best_poly_relu(int degree);

// Near-best rational approximant of type (r_p, r_q) to f on I: Lawson
// iteratively-reweighted least squares on a Chebyshev grid, then local
// exchange refinement. Denominator normalized so its constant coefficient
// is 1 when that is well scaled (largest-magnitude coefficient otherwise).
RationalFunction minimax_rational(const std::function<double(double)>& f,
                                  int r_p, int r_q, Interval I);

enum class Family { zolotarev, newman, best_poly };

std::string family_name(Family f);

struct ConvergenceRow {
  Family family;
  std::size_t param_count;
  double sup_error;
};

// Sup error to ReLU on [-1,1] per raw-parameter budget:
//   zolotarev: budget 7p (p composed stages), newman: 2(N+1) coefficients,
//   best_poly: degree+1 coefficients.
std::vector<ConvergenceRow> convergence_table(
    Family family, const std::vector<std::size_t>& budgets);

namespace detail {

struct RemezResult {
  std::vector<double> cheb;  // Chebyshev-basis coefficients, ascending
  double error = 0.0;        // max |f - p| on the working grid
  int alternations = 0;      // alternating-sign residual points in the final reference
};

// Discrete Remez exchange on a Chebyshev working grid over [-1,1].
RemezResult best_poly(const std::function<double(double)>& f, int degree);

// Chebyshev-basis coefficients -> ascending monomial coefficients.
std::vector<double> cheb_to_monomial(const std::vector<double>& c);

}  // namespace detail

}  // namespace ratnet::classic

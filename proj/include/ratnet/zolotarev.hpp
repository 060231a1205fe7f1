#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "ratnet/ratfun.hpp"

namespace ratnet::zolotarev {

// Certified numeric range in 64-bit arithmetic.
inline constexpr int kMaxDegree = 81;  // total degree of a sign approximant
inline constexpr int kMaxStages = 4;   // composed type-(3,2) stages (3^4 = 81)
inline constexpr double kMinGap = 1e-12;
inline constexpr double kMaxGap = 1.0 - 1e-12;

// Degree-k rational sign approximant on [-1,-ell] u [ell,1]:
//   r(x) = M x prod_{j even} (x^2 + c_j) / prod_{j odd} (x^2 + c_j).
struct ZolotarevSpec {
  int k = 1;
  double ell = 0.0;
  double kappa = 0.0;            // sqrt(1 - ell^2)
  std::vector<double> c;         // c_1..c_{k-1}, ascending in j
  double M = 0.0;

  // Factored product-of-pair-ratios evaluation; stable across the whole
  // certified range (the expanded coefficient form underflows for large k).
  double eval(double x) const;
  double operator()(double x) const { return eval(x); }
};

// Build the degree-k sign approximant; k odd, 1 <= k <= kMaxDegree,
// kMinGap <= ell <= kMaxGap. The returned RationalFunction is the expanded
// coefficient form (well-scaled only for moderate k; certify with spec.eval).
std::pair<ZolotarevSpec, RationalFunction> build(int k, double ell);

// p max-normalized type-(3,2) stages composing to the degree-3^p sign
// approximant on [-1,-ell] u [ell,1]; param_count = 7p. 1 <= p <= kMaxStages.
ComposedRational compose_stages(int p, double ell);

// Number of composed stages sufficient for ReLU accuracy epsilon:
//   ceil((ln(2/pi^2) + 2 ln ln(4/eps)) / ln 3), clamped to >= 1.
int stage_count_for(double epsilon);

// Smallest epsilon the certified stage range (p <= kMaxStages) can serve.
double min_certified_epsilon();

// R~(x) = (x r(x)/(1+eps) + x)/2 where r is the composed sign approximant
// with gap ell = 4 exp(-pi sqrt(3^p / 2)). Not itself a univariate chain of
// rational stages, so it carries the ComposedRational plus the finishing
// transform; stage/parameter accounting lives on the composed part.
struct ReluApproximant {
  ComposedRational r;
  double epsilon = 0.0;
  double ell = 0.0;

  double eval(double x) const;
  double operator()(double x) const { return eval(x); }
  std::size_t stage_count() const { return r.stage_count(); }
  std::size_t param_count() const { return r.param_count(); }
};

ReluApproximant relu_approximant(double epsilon);

// x -> x r(x) with gap ell = 4 exp(-pi sqrt(k/2)); sup error to |x| on
// [-1,1] is at most that same ell. k odd, 1 <= k <= kMaxDegree.
std::function<double(double)> abs_approximant(int k);

}  // namespace ratnet::zolotarev

#include "ratnet/ratfun.hpp"

#include <cmath>
#include <numbers>

#include "ratnet/errors.hpp"

namespace ratnet {

double eval_horner(const std::vector<double>& coeffs, double x) {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

static void trim(std::vector<double>& c) {
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
}

RationalFunction::RationalFunction(std::vector<double> p, std::vector<double> q)
    : numer(std::move(p)), denom(std::move(q)) {
  if (numer.empty() || denom.empty())
    throw PreconditionError("rational function needs at least one coefficient per side");
  trim(numer);
  trim(denom);
  if (denom.size() == 1 && denom[0] == 0.0)
    throw PreconditionError("zero denominator polynomial");
}

double RationalFunction::eval(double x) const {
  const double v = eval_horner(numer, x) / eval_horner(denom, x);
  if (!std::isfinite(v)) throw EvalError("rational evaluation not finite", x);
  return v;
}

RationalFunction RationalFunction::power(int j) {
  if (j < 0) throw PreconditionError("power() wants a nonnegative exponent");
  std::vector<double> p(static_cast<std::size_t>(j) + 1, 0.0);
  p.back() = 1.0;
  return RationalFunction(std::move(p), {1.0});
}

RationalFunction RationalFunction::polynomial(std::vector<double> c) {
  return RationalFunction(std::move(c), {1.0});
}

RationalFunction RationalFunction::relu_init() {
  // published 4-dp fit, highest degree first in the source table
  return RationalFunction({0.0218, 0.5000, 1.5957, 1.1915}, {1.0, 0.0, 2.3830});
}

double ComposedRational::eval(double x) const {
  double v = x;
  for (const auto& s : stages) v = s.eval(v);
  return v;
}

long long ComposedRational::degree() const {
  long long d = 1;
  for (const auto& s : stages) d *= s.degree();
  return d;
}

std::size_t ComposedRational::param_count() const {
  std::size_t n = 0;
  for (const auto& s : stages) n += s.param_count();
  return n;
}

// Chebyshev points of the second kind on [lo,hi], ascending in x.
static double cheb_point(Interval I, std::size_t i, std::size_t n) {
  const double mid = 0.5 * (I.lo + I.hi), rad = 0.5 * (I.hi - I.lo);
  // i = 0 -> cos(pi) = -1 (lo), i = n-1 -> cos(0) = +1 (hi)
  const double theta = std::numbers::pi * static_cast<double>(n - 1 - i) / static_cast<double>(n - 1);
  return mid + rad * std::cos(theta);
}

bool pole_check(const RationalFunction& r, Interval I, std::size_t n_grid) {
  if (n_grid < 2) throw PreconditionError("pole_check needs at least 2 grid points");
  if (!(I.lo < I.hi)) throw PreconditionError("pole_check wants a nondegenerate interval");
  double qmax = 0.0;
  double first = 0.0;
  std::vector<double> qs(n_grid);
  for (std::size_t i = 0; i < n_grid; ++i) {
    qs[i] = eval_horner(r.denom, cheb_point(I, i, n_grid));
    const double a = std::fabs(qs[i]);
    if (a > qmax) qmax = a;
  }
  const double tol_pole = 1e-8 * (qmax > 1.0 ? qmax : 1.0);
  first = qs[0];
  for (std::size_t i = 0; i < n_grid; ++i) {
    if (std::fabs(qs[i]) <= tol_pole) return false;
    if (qs[i] * first < 0.0) return false;  // sign change
  }
  return true;
}

SupNormReport sup_error(const std::function<double(double)>& f,
                        const std::function<double(double)>& g, Interval I,
                        std::size_t n_grid) {
  if (n_grid < 2) throw PreconditionError("sup_error needs at least 2 grid points");
  if (!(I.lo < I.hi)) throw PreconditionError("sup_error wants a nondegenerate interval");
  SupNormReport rep{n_grid, -1.0, I.lo};
  for (std::size_t i = 0; i < n_grid; ++i) {
    const double x = cheb_point(I, i, n_grid);
    const double e = std::fabs(f(x) - g(x));
    if (e > rep.max_abs_error) {  // ascending sweep keeps the smallest argmax on ties
      rep.max_abs_error = e;
      rep.argmax = x;
    }
  }
  return rep;
}

}  // namespace ratnet

#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ratnet {

double eval_horner(const std::vector<double>& coeffs, double x);

// Rational function P/Q with coefficients stored in ascending degree order.
// Trailing zero coefficients are trimmed on construction so the leading
// coefficient is nonzero (the zero polynomial keeps a single 0 entry).
struct RationalFunction {
  std::vector<double> numer;  // a_0 .. a_{rP}
  std::vector<double> denom;  // b_0 .. b_{rQ}

  RationalFunction() : numer{0.0}, denom{1.0} {}
  RationalFunction(std::vector<double> p, std::vector<double> q);

  int deg_p() const { return static_cast<int>(numer.size()) - 1; }
  int deg_q() const { return static_cast<int>(denom.size()) - 1; }
  int degree() const { return deg_p() > deg_q() ? deg_p() : deg_q(); }
  std::size_t param_count() const { return numer.size() + denom.size(); }

  // Horner evaluation of P(x)/Q(x); throws EvalError if the result is not finite.
  double eval(double x) const;
  double operator()(double x) const { return eval(x); }

  static RationalFunction identity() { return RationalFunction({0.0, 1.0}, {1.0}); }
  static RationalFunction power(int j);                       // x^j
  static RationalFunction polynomial(std::vector<double> c);  // c ascending
  // the type-(3,2) ReLU-fit used to initialize trainable activations
  static RationalFunction relu_init();
};

// Composition r_k( ... r_2(r_1(x)) ... ) of rational stages.
struct ComposedRational {
  std::vector<RationalFunction> stages;

  double eval(double x) const;
  double operator()(double x) const { return eval(x); }
  long long degree() const;          // product of stage degrees
  std::size_t param_count() const;   // sum of stage coefficient counts
  std::size_t stage_count() const { return stages.size(); }
};

struct Interval {
  double lo;
  double hi;
};

struct SupNormReport {
  std::size_t grid_size;
  double max_abs_error;
  double argmax;
};

// True iff Q has no sign change and stays away from zero on a dense grid over I.
// The near-zero threshold is 1e-8 * max(1, max |Q| on the grid).
bool pole_check(const RationalFunction& r, Interval I, std::size_t n_grid = 4096);

// Max |f-g| over n_grid Chebyshev points of the second kind on I (endpoints
// included); ties in the max are broken toward the smallest argmax.
SupNormReport sup_error(const std::function<double(double)>& f,
                        const std::function<double(double)>& g, Interval I,
                        std::size_t n_grid = 100000);

}  // namespace ratnet

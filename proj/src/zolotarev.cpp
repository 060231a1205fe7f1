#include "ratnet/zolotarev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ratnet/elliptic.hpp"
#include "ratnet/errors.hpp"

namespace ratnet::zolotarev {

namespace {

void check_gap(double ell) {
  if (!(ell >= kMinGap && ell <= kMaxGap)) {
    throw RangeError("gap parameter ell outside certified range",
                     "ell in [1e-12, 1 - 1e-12]");
  }
}

void check_degree(int k) {
  if (k < 1 || k % 2 == 0 || k > kMaxDegree) {
    throw RangeError("degree must be odd and within certified range",
                     "odd k with 1 <= k <= 81");
  }
}

// c_j = ell^2 sn^2 / (1 - sn^2) at u = jK/k, evaluated in the complementary
// formulation (mc = ell^2) so tiny gaps keep full relative accuracy.
std::vector<double> sign_constants(int k, double ell) {
  const double K = elliptic::detail::complete_K_from_complement(ell);
  std::vector<double> c;
  c.reserve(static_cast<std::size_t>(k - 1));
  for (int j = 1; j < k; ++j) {
    const auto scd = elliptic::detail::sncndn(j * K / k, ell * ell);
    const double t = scd.sn / scd.cn;
    c.push_back(ell * ell * t * t);
  }
  return c;
}

// rho(x) = x prod (x^2 + c_even)/(x^2 + c_odd), paired ratios for stability.
double eval_rho(double x, const std::vector<double>& c, double scale) {
  double v = scale * x;
  const double x2 = x * x;
  const std::size_t npair = c.size() / 2;
  for (std::size_t i = 0; i < npair; ++i) {
    v *= (x2 + c[2 * i + 1]) / (x2 + c[2 * i]);
  }
  return v;
}

// Golden-section search for an extremum of sign*rho on [a,b]; returns the
// rho value at the refined point.
double refine_extremum(double a, double b, double sign,
                       const std::vector<double>& c) {
  const double gold = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gold * (b - a);
  double x2 = a + gold * (b - a);
  double f1 = sign * eval_rho(x1, c, 1.0);
  double f2 = sign * eval_rho(x2, c, 1.0);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gold * (b - a);
      f2 = sign * eval_rho(x2, c, 1.0);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gold * (b - a);
      f1 = sign * eval_rho(x1, c, 1.0);
    }
  }
  return sign * std::max(f1, f2);
}

struct RhoRange {
  double lo, hi;
};

// min/max of rho over [ell, 1].
RhoRange rho_extrema(int k, double ell, const std::vector<double>& c) {
  if (k == 1) {
    return {ell, 1.0};  // rho(x) = x is monotone
  }
  if (k == 3) {
    // rho'(x) = 0  <=>  t^2 + (3 c1 - c2) t + c1 c2 = 0 with t = x^2.
    const double c1 = c[0];
    const double c2 = c[1];
    const double b = 3.0 * c1 - c2;
    const double disc = b * b - 4.0 * c1 * c2;
    double lo = std::min(eval_rho(ell, c, 1.0), eval_rho(1.0, c, 1.0));
    double hi = std::max(eval_rho(ell, c, 1.0), eval_rho(1.0, c, 1.0));
    if (disc > 0.0) {
      const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
      for (double t : {q, c1 * c2 / q}) {
        if (t > ell * ell && t < 1.0) {
          const double v = eval_rho(std::sqrt(t), c, 1.0);
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
    }
    return {lo, hi};
  }
  // General odd k: log-spaced scan plus golden-section refinement of every
  // interior local extremum.
  const int n = 200001;
  std::vector<double> xs(n);
  std::vector<double> vals(n);
  const double la = std::log(ell);
  for (int i = 0; i < n; ++i) {
    xs[i] = std::exp(la + (0.0 - la) * i / (n - 1));
    vals[i] = eval_rho(xs[i], c, 1.0);
  }
  double lo = *std::min_element(vals.begin(), vals.end());
  double hi = *std::max_element(vals.begin(), vals.end());
  for (int i = 1; i + 1 < n; ++i) {
    if (vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1]) {
      hi = std::max(hi, refine_extremum(xs[i - 1], xs[i + 1], +1.0, c));
    }
    if (vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1]) {
      lo = std::min(lo, refine_extremum(xs[i - 1], xs[i + 1], -1.0, c));
    }
  }
  return {lo, hi};
}

std::vector<double> poly_mult(const std::vector<double>& a,
                              const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] += a[i] * b[j];
    }
  }
  return out;
}

// Degree-3 stage for gap ell: constants, extrema of the unscaled stage.
struct Stage3 {
  double c1, c2, lo, hi;
};

Stage3 build_stage3(double ell) {
  const auto c = sign_constants(3, ell);
  const auto range = rho_extrema(3, ell, c);
  return {c[0], c[1], range.lo, range.hi};
}

}  // namespace

double ZolotarevSpec::eval(double x) const { return eval_rho(x, c, M); }

std::pair<ZolotarevSpec, RationalFunction> build(int k, double ell) {
  check_degree(k);
  check_gap(ell);
  ZolotarevSpec spec;
  spec.k = k;
  spec.ell = ell;
  spec.kappa = std::sqrt((1.0 - ell) * (1.0 + ell));
  spec.c = sign_constants(k, ell);
  const auto range = rho_extrema(k, ell, spec.c);
  spec.M = 2.0 / (range.hi + range.lo);

  // Expanded coefficient form: numer = M x prod(x^2 + c_even),
  // denom = prod(x^2 + c_odd); even/odd in the 1-based index j.
  std::vector<double> numer = {0.0, spec.M};
  std::vector<double> denom = {1.0};
  for (int j = 1; j < k; ++j) {
    const std::vector<double> quad = {spec.c[static_cast<std::size_t>(j - 1)],
                                      0.0, 1.0};
    if (j % 2 == 0) {
      numer = poly_mult(numer, quad);
    } else {
      denom = poly_mult(denom, quad);
    }
  }
  return {std::move(spec), RationalFunction(numer, denom)};
}

ComposedRational compose_stages(int p, double ell) {
  if (p < 1 || p > kMaxStages) {
    throw RangeError("stage count outside certified range", "p in 1..4");
  }
  check_gap(ell);
  ComposedRational out;
  double cur = ell;
  std::vector<Stage3> raw;
  raw.reserve(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) {
    const Stage3 s = build_stage3(cur);
    raw.push_back(s);
    cur = s.lo / s.hi;  // image of the gap under the max-normalized stage
  }
  const double m_total = 2.0 / (1.0 + cur);
  for (int i = 0; i < p; ++i) {
    double scale = 1.0 / raw[static_cast<std::size_t>(i)].hi;
    if (i == p - 1) {
      scale *= m_total;  // final stage carries the equioscillation scaling
    }
    const double c1 = raw[static_cast<std::size_t>(i)].c1;
    const double c2 = raw[static_cast<std::size_t>(i)].c2;
    out.stages.emplace_back(std::vector<double>{0.0, scale * c2, 0.0, scale},
                            std::vector<double>{c1, 0.0, 1.0});
  }
  return out;
}

int stage_count_for(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw RangeError("accuracy must lie in (0, 1)", "epsilon in (0, 1)");
  }
  const double raw = (std::log(2.0 / (std::numbers::pi * std::numbers::pi)) +
                      2.0 * std::log(std::log(4.0 / epsilon))) /
                     std::log(3.0);
  return std::max(1, static_cast<int>(std::ceil(raw)));
}

double min_certified_epsilon() {
  // Largest ln(4/eps) keeping the stage formula at kMaxStages.
  const double cap = std::exp((kMaxStages * std::log(3.0) -
                               std::log(2.0 / (std::numbers::pi * std::numbers::pi))) /
                              2.0);
  return 4.0 * std::exp(-cap);
}

double ReluApproximant::eval(double x) const {
  return 0.5 * (x * r.eval(x) / (1.0 + epsilon) + x);
}

ReluApproximant relu_approximant(double epsilon) {
  const int p = stage_count_for(epsilon);
  if (p > kMaxStages) {
    throw RangeError("accuracy outside certified stage range; smallest epsilon",
                     min_certified_epsilon());
  }
  ReluApproximant out;
  out.epsilon = epsilon;
  out.ell = 4.0 * std::exp(-std::numbers::pi * std::sqrt(std::pow(3.0, p) / 2.0));
  out.r = compose_stages(p, out.ell);
  return out;
}

std::function<double(double)> abs_approximant(int k) {
  check_degree(k);
  const double ell = 4.0 * std::exp(-std::numbers::pi * std::sqrt(k / 2.0));
  auto [spec, rat] = build(k, ell);
  return [s = std::move(spec)](double x) { return x * s.eval(x); };
}

}  // namespace ratnet::zolotarev

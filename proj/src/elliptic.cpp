#include "ratnet/elliptic.hpp"

#include <cmath>
#include <numbers>

#include "ratnet/errors.hpp"

namespace ratnet::elliptic {

EllipticModulus::EllipticModulus(double k) : kappa(k) {
  if (!(k >= 0.0 && k < 1.0)) {
    throw RangeError("elliptic modulus out of range", "kappa in [0, 1)");
  }
}

namespace detail {

double complete_K_from_complement(double kprime) {
  if (!(kprime > 0.0 && kprime <= 1.0)) {
    throw RangeError("complementary modulus out of range", "kprime in (0, 1]");
  }
  double a = 1.0;
  double b = kprime;
  for (int it = 0; it < 64; ++it) {
    if (std::abs(a - b) <= 1e-15 * a) {
      return std::numbers::pi / (2.0 * a);
    }
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  throw NumericError("AGM iteration for complete elliptic integral did not converge");
}

SnCnDn sncndn(double u, double mc) {
  constexpr double kConvergence = 1e-16;
  if (mc == 1.0) {
    return {std::sin(u), std::cos(u), 1.0};
  }
  if (!(mc > 0.0 && mc < 1.0)) {
    throw RangeError("complementary parameter out of range", "mc in (0, 1]");
  }
  // Descending Gauss/Landen ladder; em/en hold the AGM pair per rung.
  double em[64];
  double en[64];
  double a = 1.0;
  double dn = 1.0;
  double emc = mc;
  double c = 0.0;
  int l = 0;
  for (int i = 0; i < 64; ++i) {
    l = i;
    em[i] = a;
    emc = std::sqrt(emc);
    en[i] = emc;
    c = 0.5 * (a + emc);
    if (std::abs(a - emc) <= kConvergence * a) {
      break;
    }
    emc *= a;
    a = c;
  }
  u *= c;
  double sn = std::sin(u);
  double cn = std::cos(u);
  if (sn != 0.0) {
    a = cn / sn;
    c *= a;
    for (int ii = l; ii >= 0; --ii) {
      const double b = em[ii];
      a *= c;
      c *= dn;
      dn = (en[ii] + a) / (b + a);
      a = c / b;
    }
    a = 1.0 / std::sqrt(c * c + 1.0);
    sn = (sn < 0.0) ? -a : a;
    cn = c * sn;
  }
  return {sn, cn, dn};
}

}  // namespace detail

double complete_K(EllipticModulus m) {
  // (1-k)(1+k) keeps the complement accurate for kappa near 1.
  const double kp = std::sqrt((1.0 - m.kappa) * (1.0 + m.kappa));
  return detail::complete_K_from_complement(kp);
}

double jacobi_sn(double u, EllipticModulus m) {
  const double mc = (1.0 - m.kappa) * (1.0 + m.kappa);
  return detail::sncndn(u, mc).sn;
}

}  // namespace ratnet::elliptic

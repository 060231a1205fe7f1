#pragma once

namespace ratnet::elliptic {

// Modulus kappa in [0, 1). Constructor validates the range.
struct EllipticModulus {
  double kappa;
  explicit EllipticModulus(double k);
};

// Complete elliptic integral K(kappa), AGM-based.
double complete_K(EllipticModulus m);

// Jacobi sn(u; kappa) via the descending Landen (Gauss/AGM) recursion.
double jacobi_sn(double u, EllipticModulus m);

namespace detail {

// All internals run in the complementary formulation: mc = 1 - kappa^2.
// Callers with kappa ~ 1 (tiny gap ell) pass mc = ell^2 directly and never
// lose the gap to rounding in 1 - kappa^2.

// K(kappa) given the complementary modulus kprime = sqrt(1 - kappa^2).
double complete_K_from_complement(double kprime);

struct SnCnDn {
  double sn, cn, dn;
};

// sn, cn, dn at parameter m = 1 - mc; requires 0 < mc <= 1.
SnCnDn sncndn(double u, double mc);

}  // namespace detail

}  // namespace ratnet::elliptic

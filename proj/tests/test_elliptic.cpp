#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ratnet/elliptic.hpp"
#include "ratnet/errors.hpp"

using namespace ratnet;

namespace {

// Independent quadrature oracle for K(kappa): composite Simpson on the
// Legendre form integral over [0, pi/2]. The integrand is smooth for
// kappa < 1, so 20000 panels give ~1e-13 accuracy for kappa <= 0.9999.
double K_oracle(double kappa) {
  const int n = 20000;  // panels (even count of subintervals = 2n)
  const double h = std::numbers::pi / 2.0 / (2 * n);
  auto f = [&](double th) {
    const double s = std::sin(th);
    return 1.0 / std::sqrt(1.0 - kappa * kappa * s * s);
  };
  double acc = f(0.0) + f(std::numbers::pi / 2.0);
  for (int i = 1; i < 2 * n; ++i) acc += f(i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Incomplete elliptic integral u(t) = int_0^t ds / sqrt((1-s^2)(1-k^2 s^2)),
// evaluated by Simpson with the s = t*sin(phi) substitution that removes the
// endpoint singularity at s = t when t -> 1.
double u_oracle(double t, double kappa) {
  const int n = 4000;
  const double h = std::numbers::pi / 2.0 / (2 * n);
  auto f = [&](double phi) {
    const double s = t * std::sin(phi);
    const double c = t * std::cos(phi);
    return c / std::sqrt((1.0 - s * s) * (1.0 - kappa * kappa * s * s));
  };
  double acc = f(0.0) + f(std::numbers::pi / 2.0);
  for (int i = 1; i < 2 * n; ++i) acc += f(i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("complete integral matches quadrature oracle") {
  for (double kappa : {0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.9999}) {
    const double want = K_oracle(kappa);
    const double got = elliptic::complete_K(elliptic::EllipticModulus{kappa});
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("complete integral limits and monotonicity") {
  CHECK(elliptic::complete_K(elliptic::EllipticModulus{0.0}) ==
        doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  double prev = 0.0;
  for (double kappa : {0.0, 0.2, 0.4, 0.6, 0.8, 0.95, 0.999}) {
    const double K = elliptic::complete_K(elliptic::EllipticModulus{kappa});
    CHECK(K > prev);
    prev = K;
  }
  // near-degenerate modulus still finite and large
  CHECK(elliptic::complete_K(elliptic::EllipticModulus{1.0 - 1e-12}) > 10.0);
}

TEST_CASE("modulus validation") {
  CHECK_THROWS_AS(elliptic::EllipticModulus{1.0}, RangeError);
  CHECK_THROWS_AS(elliptic::EllipticModulus{-0.1}, RangeError);
  CHECK_THROWS_AS(elliptic::EllipticModulus{1.5}, RangeError);
}

TEST_CASE("sn degenerates to sine at kappa = 0") {
  for (double u : {0.0, 0.3, 1.0, 1.5}) {
    CHECK(elliptic::jacobi_sn(u, elliptic::EllipticModulus{0.0}) ==
          doctest::Approx(std::sin(u)).epsilon(1e-14));
  }
}

TEST_CASE("sn hits the corners: sn(0) = 0 and sn(K) = 1") {
  for (double kappa : {0.2, 0.6, 0.95}) {
    const elliptic::EllipticModulus m{kappa};
    CHECK(elliptic::jacobi_sn(0.0, m) == doctest::Approx(0.0).epsilon(1e-15));
    const double K = elliptic::complete_K(m);
    CHECK(elliptic::jacobi_sn(K, m) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("sn inverts the incomplete integral (quadrature oracle)") {
  for (double kappa : {0.1, 0.5, 0.9}) {
    const elliptic::EllipticModulus m{kappa};
    const double K = elliptic::complete_K(m);
    for (double frac : {0.15, 0.4, 0.65, 0.9}) {
      const double u = frac * K;
      const double t = elliptic::jacobi_sn(u, m);
      CHECK(u_oracle(t, kappa) == doctest::Approx(u).epsilon(1e-10));
    }
  }
}

TEST_CASE("sn cn dn satisfy the Pythagorean identities") {
  for (double mc : {0.9, 0.5, 0.1, 1e-4}) {  // complementary parameter 1 - k^2
    for (double u : {0.1, 0.7, 1.3, 2.2}) {
      const auto v = elliptic::detail::sncndn(u, mc);
      const double k2 = 1.0 - mc;
      CHECK(v.sn * v.sn + v.cn * v.cn == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(v.dn * v.dn + k2 * v.sn * v.sn == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("complementary-parameter entry point matches the standard one") {
  // K built from kprime directly equals K(sqrt(1 - kprime^2)). Near kappa = 1
  // the round trip through kappa^2 loses ~eps/kprime^2 * dK/dm accuracy, so
  // the comparison tolerance must scale accordingly (the complement entry
  // point exists precisely because it avoids that conditioning).
  for (double kprime : {0.8, 0.3, 0.05, 1e-3}) {
    const double kappa = std::sqrt((1.0 - kprime) * (1.0 + kprime));
    const double a = elliptic::detail::complete_K_from_complement(kprime);
    const double b = elliptic::complete_K(elliptic::EllipticModulus{kappa});
    const double tol = 1e-12 + 1e-16 / (kprime * kprime);
    CHECK(std::fabs(a - b) <= tol * std::fabs(b));
  }
}

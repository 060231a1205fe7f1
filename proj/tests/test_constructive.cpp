#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "doctest.h"
#include "ratnet/constructive.hpp"
#include "ratnet/errors.hpp"
#include "ratnet/zolotarev.hpp"

using namespace ratnet;
using namespace ratnet::constructive;

namespace {

double relu(double x) { return x > 0.0 ? x : 0.0; }

int size_bound(int n, int rp) {
  const int lg = static_cast<int>(std::log(static_cast<double>(n)) /
                                      std::log(static_cast<double>(rp)) +
                                  1e-9);
  return 5 * lg * lg + 1;
}

PiecewiseLinear seeded_piecewise(int m, double L, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  PiecewiseLinear g;
  g.lipschitz = L;
  for (int i = 0; i < m; ++i) g.breakpoints.push_back(u(rng));
  std::sort(g.breakpoints.begin(), g.breakpoints.end());
  g.coeffs.resize(static_cast<std::size_t>(m) + 2);
  for (double& v : g.coeffs) v = c(rng);
  g.coeffs[0] *= L;
  double sum = 0.0;
  for (int j = 1; j <= m; ++j) sum += std::fabs(g.coeffs[static_cast<std::size_t>(j)]);
  for (int j = 1; j <= m; ++j) g.coeffs[static_cast<std::size_t>(j)] *= L / sum;
  g.validate();
  return g;
}

}  // namespace

TEST_CASE("product gadget multiplies exactly") {
  const RationalNetwork net = product_gadget();
  CHECK(net.size() == 3);
  CHECK(net.eval({2.0, 3.0})[0] == doctest::Approx(6.0).epsilon(1e-15));
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng), y = u(rng);
    const double got = net.eval({x, y})[0];
    CHECK(std::fabs(got - x * y) <= 1e-13 * std::max(1.0, std::fabs(x * y)));
  }
  for (int i = 0; i < 100; ++i) {
    CHECK(net.eval({u(rng), 0.0})[0] == doctest::Approx(0.0).scale(1.0));
  }
}

TEST_CASE("monomial networks are exact with bounded size") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int n : {2, 3, 5, 9, 11, 27}) {
    const RationalNetwork net = monomial_network(n, 3);
    CHECK(net.size() <= static_cast<std::size_t>(size_bound(n, 3)));
    for (int i = 0; i < 1000; ++i) {
      const double x = u(rng);
      const double want = std::pow(x, n);
      const double got = net.eval1(x);
      CHECK(std::fabs(got - want) <= 1e-10 * std::max(1.0, std::fabs(want)));
    }
  }
}

TEST_CASE("monomial corner cases") {
  const RationalNetwork ident = monomial_network(1, 3);
  CHECK(ident.size() <= 1);
  CHECK(ident.eval1(-0.4) == doctest::Approx(-0.4).epsilon(1e-15));

  // x^9 = (x^3)^3 at x = 2 is exactly 512 in binary arithmetic
  CHECK(monomial_network(9, 3).eval1(2.0) == 512.0);

  // alternative base
  const RationalNetwork n11 = monomial_network(11, 2);
  CHECK(n11.size() <= static_cast<std::size_t>(size_bound(11, 2)));
  CHECK(n11.eval1(1.5) == doctest::Approx(std::pow(1.5, 11)).epsilon(1e-12));

  CHECK_THROWS_AS(monomial_network(0, 3), PreconditionError);
  CHECK_THROWS_AS(monomial_network(5, 1), PreconditionError);
}

TEST_CASE("piecewise exact ReLU form reproduces the definition") {
  const PiecewiseLinear g = seeded_piecewise(5, 3.0, 4);
  for (int i = 0; i <= 1000; ++i) {
    const double x = static_cast<double>(i) / 1000.0;
    double want = g.coeffs[0] * relu(g.breakpoints[0] - x) + g.coeffs.back();
    for (std::size_t j = 0; j < g.breakpoints.size(); ++j) {
      want += g.coeffs[j + 1] * relu(x - g.breakpoints[j]);
    }
    CHECK(g.eval(x) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("piecewise validation rejects malformed inputs") {
  PiecewiseLinear bad;
  bad.breakpoints = {0.7, 0.3};  // unsorted
  bad.coeffs = {0.1, 0.1, 0.1, 0.1};
  bad.lipschitz = 1.0;
  CHECK_THROWS_AS(bad.validate(), PreconditionError);

  PiecewiseLinear len;
  len.breakpoints = {0.5};
  len.coeffs = {0.1, 0.1};  // needs m + 2 = 3
  len.lipschitz = 1.0;
  CHECK_THROWS_AS(len.validate(), PreconditionError);

  PiecewiseLinear lip;
  lip.breakpoints = {0.5};
  lip.coeffs = {2.0, 0.1, 0.0};  // |c_0| = 2 > L = 1
  lip.lipschitz = 1.0;
  CHECK_THROWS_AS(lip.validate(), PreconditionError);
}

TEST_CASE("piecewise network: single hinge") {
  PiecewiseLinear g;
  g.breakpoints = {0.5};
  g.coeffs = {0.0, 1.0, 0.0};  // ReLU(x - 0.5)
  g.lipschitz = 1.0;
  const RationalNetwork net = piecewise_network(g, 1e-2);
  const auto rep = certify_1d(net, [&](double x) { return g.eval(x); }, {0, 1});
  CHECK(rep.max_abs_error <= 1e-2);
}

TEST_CASE("piecewise network: constants are exact") {
  PiecewiseLinear g;
  g.breakpoints = {0.5};
  g.coeffs = {0.0, 0.0, 0.37};
  g.lipschitz = 1.0;
  const RationalNetwork net = piecewise_network(g, 1e-3);
  const auto rep = certify_1d(net, [&](double x) { return g.eval(x); }, {0, 1});
  CHECK(rep.max_abs_error == 0.0);
}

TEST_CASE("piecewise network: random m=5 instance meets tolerance") {
  const PiecewiseLinear g = seeded_piecewise(5, 3.0, 11);
  const double eps = 1e-3;
  const RationalNetwork net = piecewise_network(g, eps);
  const auto rep = certify_1d(net, [&](double x) { return g.eval(x); }, {0, 1});
  CHECK(rep.max_abs_error <= eps);
  CHECK(net.poles_ok());

  // hinge substitution uses the staged ReLU stage count at tolerance eps/(2L)
  const int stages = zolotarev::stage_count_for(eps / (2.0 * g.lipschitz));
  int rational_activations = 0;
  for (const auto& a : net.activations) {
    if (a.kind == Activation::kRational) ++rational_activations;
  }
  CHECK(rational_activations == stages + 1);  // stage chain + squaring gadget
}

TEST_CASE("taylor grid resolution formula") {
  CHECK(taylor_grid_resolution(1, 3, 1e-2) == 5);
  // d=2, n=3: (6/(4*8) * 5e-3)^(-1/3) = (9.375e-4)^(-1/3) = 10.2 -> 11
  CHECK(taylor_grid_resolution(2, 3, 1e-2) == 11);
  CHECK_THROWS_AS(taylor_grid_resolution(3, 3, 1e-2), PreconditionError);
  CHECK_THROWS_AS(taylor_grid_resolution(1, 5, 1e-2), PreconditionError);
  CHECK_THROWS_AS(taylor_grid_resolution(1, 3, 0.0), RangeError);
}

TEST_CASE("partition of unity sums to one in exact form") {
  for (int N : {3, 5, 8}) {
    std::vector<PiecewiseLinear> psi;
    for (int m = 0; m <= N; ++m) psi.push_back(taylor_partition(m, N));
    for (int i = 0; i <= 600; ++i) {
      const double t = static_cast<double>(i) / 600.0;
      double sum = 0.0;
      for (const auto& p : psi) {
        const double v = p.eval(t);
        CHECK(v >= -1e-12);
        CHECK(v <= 1.0 + 1e-12);
        sum += v;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    // plateau / ramp / support structure of an interior bump
    if (N >= 3) {
      const auto p1 = taylor_partition(1, N);
      const double h = 1.0 / (3.0 * N);
      const double mu = 1.0 / N;
      CHECK(p1.eval(mu) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(p1.eval(mu + h) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(p1.eval(mu + 1.5 * h) == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(p1.eval(mu + 2.0 * h) == doctest::Approx(0.0).scale(1.0));
      CHECK(p1.eval(mu + 2.5 * h) == doctest::Approx(0.0).scale(1.0));
    }
  }
}

TEST_CASE("taylor network: linear targets are reproduced within tolerance") {
  const DerivFn derivs = [](const std::vector<int>& order,
                            const std::vector<double>& at) {
    int total = 0;
    for (int o : order) total += o;
    if (total == 0) return at[0];
    if (total == 1) return 1.0;
    return 0.0;
  };
  const RationalNetwork net = taylor_network(derivs, 1, 2, 0.1);
  const auto rep = certify_1d(net, [](double x) { return x; }, {0, 1});
  CHECK(rep.max_abs_error <= 0.1);
}

TEST_CASE("taylor network: exp target meets tolerance with the formula's N") {
  const DerivFn derivs = [](const std::vector<int>&,
                            const std::vector<double>& at) {
    return std::exp(at[0] - 1.0);
  };
  CHECK(taylor_grid_resolution(1, 3, 1e-2) == 5);
  const RationalNetwork net = taylor_network(derivs, 1, 3, 1e-2);
  const auto rep =
      certify_1d(net, [](double x) { return std::exp(x - 1.0); }, {0, 1});
  CHECK(rep.max_abs_error <= 1e-2);
  // poles_ok is not asserted here: tight-tolerance stage chains have a
  // first-stage denominator constant below the conservative near-zero
  // screen even though the denominator is strictly positive. The sup-norm
  // certificate above is the meaningful safety statement for this net.
}

TEST_CASE("taylor network: two-dimensional separable exponential") {
  // f(x,y) = exp(x + y - 2), every partial derivative equals f itself
  const DerivFn derivs = [](const std::vector<int>&,
                            const std::vector<double>& at) {
    return std::exp(at[0] + at[1] - 2.0);
  };
  const double eps = 0.2;
  const RationalNetwork net = taylor_network(derivs, 2, 2, eps);
  const auto rep = certify_2d(
      net, [](double x, double y) { return std::exp(x + y - 2.0); }, {0, 1},
      {0, 1}, 41, 500, 3);
  CHECK(rep.max_abs_error <= eps);
}

TEST_CASE("ratify: single ReLU reduces to the staged ReLU approximant") {
  RationalNetwork f;
  f.input_dim = 1;
  f.output_dim = 1;
  f.domain = {-1, 1};
  f.activations.resize(2);
  f.activations[1].kind = Activation::kRelu;
  NetLayer layer;
  NetNode node;
  node.in = {{0, 1.0}};
  node.bias = 0.0;
  node.act = 1;
  layer.nodes.push_back(node);
  f.layers.push_back(layer);

  const auto res = ratify_relu_network(f, 0.05);
  CHECK(res.replaced == 1);
  CHECK(res.per_activation_epsilon == doctest::Approx(0.05));
  const auto rep = certify_1d(res.net, relu, {-1, 1});
  CHECK(rep.max_abs_error <= 0.05);
  CHECK(res.stages == zolotarev::stage_count_for(0.05));
}

TEST_CASE("ratify: random contractive two-layer network") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RationalNetwork f;
  f.input_dim = 1;
  f.output_dim = 1;
  f.domain = {-1, 1};
  f.activations.resize(2);
  f.activations[1].kind = Activation::kRelu;
  auto contractive_node = [&](int fan_in) {
    NetNode node;
    double sum = 0.0;
    std::vector<double> w(static_cast<std::size_t>(fan_in) + 1);
    for (double& v : w) {
      v = u(rng);
      sum += std::fabs(v);
    }
    for (int i = 0; i < fan_in; ++i) node.in.push_back({i, 0.9 * w[static_cast<std::size_t>(i)] / sum});
    node.bias = 0.9 * w.back() / sum;
    node.act = 1;
    return node;
  };
  NetLayer hidden, out;
  for (int i = 0; i < 3; ++i) hidden.nodes.push_back(contractive_node(1));
  out.nodes.push_back(contractive_node(3));
  f.layers.push_back(hidden);
  f.layers.push_back(out);

  const double eps = 0.1;
  const auto res = ratify_relu_network(f, eps);
  CHECK(res.replaced == 4);
  CHECK(res.per_activation_epsilon == doctest::Approx(eps / 2.0));  // 2 ReLU layers
  const auto rep =
      certify_1d(res.net, [&](double x) { return f.eval1(x); }, {-1, 1});
  CHECK(rep.max_abs_error <= eps);

  // parameter accounting: original affine params + 7 * stages * replaced
  CHECK(res.original_params == f.affine_param_count());
  CHECK(res.trainable_param_count() ==
        res.original_params + 7u * static_cast<unsigned>(res.stages) *
                                  static_cast<unsigned>(res.replaced));

  // flat and geometric schedules coincide for 1-Lipschitz activations
  const auto geo = ratify_relu_network(f, eps, ToleranceSchedule::geometric);
  CHECK(geo.per_activation_epsilon ==
        doctest::Approx(res.per_activation_epsilon));
  CHECK(geo.net.size() == res.net.size());
}

TEST_CASE("ratify rejects norm-violating networks naming the offenders") {
  RationalNetwork f;
  f.input_dim = 1;
  f.output_dim = 1;
  f.domain = {-1, 1};
  f.activations.resize(2);
  f.activations[1].kind = Activation::kRelu;
  NetLayer layer;
  NetNode node;
  node.in = {{0, 1.4}};  // ||a||_1 + |b| = 1.4 > 1
  node.bias = 0.0;
  node.act = 1;
  layer.nodes.push_back(node);
  f.layers.push_back(layer);
  CHECK_THROWS_AS(ratify_relu_network(f, 0.1), PreconditionError);
  try {
    ratify_relu_network(f, 0.1);
  } catch (const PreconditionError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("layer 0") != std::string::npos);
    CHECK(msg.find("node 0") != std::string::npos);
  }
}

TEST_CASE("certification helpers behave on exact networks") {
  const RationalNetwork ident = monomial_network(1, 3);
  const auto rep = certify_1d(ident, [](double x) { return x; }, {-1, 1}, 512);
  CHECK(rep.max_abs_error == 0.0);
  CHECK(rep.grid_size >= 512);
}

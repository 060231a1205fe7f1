#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ratnet/ratfun.hpp"
#include "ratnet/zolotarev.hpp"

namespace ratnet::constructive {

// ----- layered network representation --------------------------------------

struct Activation {
  enum Kind { kIdentity, kRelu, kRational } kind = kIdentity;
  RationalFunction r;  // meaningful only for kRational
};

struct NetNode {
  std::vector<std::pair<int, double>> in;  // (index in previous layer, weight)
  double bias = 0.0;
  int act = 0;  // index into RationalNetwork::activations (0 = identity)
};

struct NetLayer {
  std::vector<NetNode> nodes;
};

// Strictly layered network of nodes x -> act(a^T x + b) with sparse affine
// rows. Layer 0 of `layers` consumes the network inputs; the last layer's
// node values are the outputs. Identity nodes exist only to ferry values
// between layers, so size() counts compute (non-identity) nodes.
struct RationalNetwork {
  int input_dim = 1;
  int output_dim = 1;
  Interval domain{-1.0, 1.0};  // declared working interval for pole screening
  std::vector<Activation> activations;  // entry 0 is the identity
  std::vector<NetLayer> layers;

  std::vector<double> eval(const std::vector<double>& x) const;
  double eval1(double x) const;  // 1-input 1-output convenience
  std::size_t size() const;
  std::size_t depth() const { return layers.size(); }
  std::size_t affine_param_count() const;  // every weight and bias
  bool poles_ok() const;  // pole_check of each rational activation on `domain`
};

// ----- builder --------------------------------------------------------------

struct NodeRef {
  int layer = 0;  // 0 = network input
  int index = 0;
};

struct Term {
  NodeRef node;
  double coeff = 0.0;
};

// Affine combination of node outputs (terms may sit at different layers;
// consumers align them with identity carries).
struct Expr {
  std::vector<Term> terms;
  double bias = 0.0;
};

Expr expr_of(NodeRef n, double coeff = 1.0);
Expr combine(const Expr& a, const Expr& b, double ca = 1.0, double cb = 1.0);
Expr scale(const Expr& a, double c);

class NetBuilder {
 public:
  explicit NetBuilder(int input_dim);

  NodeRef input(int i) const;
  int activation_id(const Activation& a);  // registers once, then reuses
  int square_id();                          // activation x^2
  int relu_id();

  // Node at one layer past the deepest term, computing act(expr).
  NodeRef emit(const Expr& e, int act_id);
  NodeRef align(NodeRef n, int layer);  // memoized identity-carry chain

  // Exact product via xy = (x^2 + y^2 - (x-y)^2)/2; identical inputs
  // collapse to a single squaring node.
  Expr product(const Expr& x, const Expr& y);
  Expr power(const Expr& x, int n);  // exact x^n, square-and-multiply

  // R~(u) for a prepared ReLU approximant: stage chain, one exact product,
  // and the finishing affine transform.
  Expr relu_approx(const Expr& u, const zolotarev::ReluApproximant& ra);

  RationalNetwork finish(const std::vector<Expr>& outputs, Interval domain);

 private:
  int expr_layer(const Expr& e) const;
  Expr aligned(const Expr& e, int layer);

  int input_dim_;
  std::vector<Activation> acts_;
  std::vector<NetLayer> layers_;
  std::map<std::pair<int, int>, int> carry_memo_;  // (layer,index) -> index at layer+1
};

// ----- constructions ---------------------------------------------------------

// (x, y) -> xy exactly; three squaring nodes plus an affine readout.
RationalNetwork product_gadget();

// x -> x^n exactly for all real x; r_p >= 2 selects the documented size
// bound 5*floor(log_{r_p} n)^2 + 1.
RationalNetwork monomial_network(int n, int r_p = 3);

// g(x) = c_0 ReLU(b_1 - x) + sum_{j=1..m} c_j ReLU(x - b_j) + c_{m+1}
// on [0,1], with |c_0| <= L and sum_{j>=1} |c_j| <= L.
struct PiecewiseLinear {
  std::vector<double> breakpoints;  // b_1 < ... < b_m in [0,1]
  std::vector<double> coeffs;       // c_0 .. c_{m+1}
  double lipschitz = 0.0;           // L

  double eval(double x) const;  // exact ReLU form
  void validate() const;        // throws PreconditionError on violations
};

// Every ReLU in the exact decomposition replaced by the rational ReLU
// approximant at tolerance epsilon/(2L); sup error on [0,1] <= epsilon.
RationalNetwork piecewise_network(const PiecewiseLinear& g, double epsilon);

// Partial derivative oracle: order is a multi-index (size d), at is the
// evaluation point. Must return D^order f(at) for all |order| < n.
using DerivFn =
    std::function<double(const std::vector<int>& order, const std::vector<double>& at)>;

// Grid resolution N = ceil((n!/(2^d d^n) * eps/2)^(-1/n)).
int taylor_grid_resolution(int d, int n, double epsilon);

// The 1-D partition-of-unity factor around grid point m/N: 1 on
// |t - m/N| <= 1/(3N), 0 beyond 2/(3N), linear (slope 3N) in between,
// clipped to [0,1] at the domain edges. Sum over m = 0..N is 1 on [0,1].
PiecewiseLinear taylor_partition(int m, int N);

// Localized-Taylor approximant on [0,1]^d (d in {1,2}, n <= 4): partition
// functions realized as rational piecewise networks, Taylor terms as exact
// monomial/product subnetworks; sup error <= epsilon.
RationalNetwork taylor_network(const DerivFn& derivs, int d, int n, double epsilon);

// Per-layer tolerance schedule for ReLU-network conversion. ReLU is
// 1-Lipschitz, so the geometric schedule of the underlying error recursion
// degenerates to the flat budget; both are exposed for completeness.
enum class ToleranceSchedule { flat, geometric };

struct RatifyResult {
  RationalNetwork net;
  int replaced = 0;              // ReLU activations substituted
  int stages = 0;                // composed stages per substituted activation
  double per_activation_epsilon = 0.0;
  std::size_t original_params = 0;  // weights+biases of the input network

  std::size_t trainable_param_count() const {
    return original_params +
           7u * static_cast<std::size_t>(stages) * static_cast<std::size_t>(replaced);
  }
};

// Replace every ReLU activation by the rational approximant at tolerance
// epsilon / (number of ReLU layers). Requires the contraction hypothesis
// ||a||_1 + |b| <= 1 (tolerance 1e-12) on every node and inputs in [-1,1]^d.
RatifyResult ratify_relu_network(const RationalNetwork& f, double epsilon,
                                 ToleranceSchedule schedule = ToleranceSchedule::flat);

// ----- certification helpers -------------------------------------------------

SupNormReport certify_1d(const RationalNetwork& net,
                         const std::function<double(double)>& exact, Interval I,
                         std::size_t n_grid = 10000);

// Dense per-dimension grid plus seeded uniform random sample.
SupNormReport certify_2d(const RationalNetwork& net,
                         const std::function<double(double, double)>& exact,
                         Interval I1, Interval I2, std::size_t per_dim = 101,
                         std::size_t n_random = 2000, unsigned seed = 0);

}  // namespace ratnet::constructive

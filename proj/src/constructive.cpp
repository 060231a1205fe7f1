#include "ratnet/constructive.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "ratnet/errors.hpp"

namespace ratnet::constructive {

// ----- RationalNetwork -------------------------------------------------------

std::vector<double> RationalNetwork::eval(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != input_dim) {
    throw PreconditionError("network input dimension mismatch");
  }
  std::vector<double> prev = x;
  std::vector<double> cur;
  for (const NetLayer& layer : layers) {
    cur.assign(layer.nodes.size(), 0.0);
    for (std::size_t i = 0; i < layer.nodes.size(); ++i) {
      const NetNode& node = layer.nodes[i];
      double v = node.bias;
      for (const auto& [idx, w] : node.in) {
        v += w * prev[static_cast<std::size_t>(idx)];
      }
      const Activation& a = activations[static_cast<std::size_t>(node.act)];
      switch (a.kind) {
        case Activation::kIdentity: break;
        case Activation::kRelu: v = v > 0.0 ? v : 0.0; break;
        case Activation::kRational: v = a.r.eval(v); break;
      }
      if (!std::isfinite(v)) {
        throw EvalError("network node value not finite", v);
      }
      cur[i] = v;
    }
    prev.swap(cur);
  }
  return prev;
}

double RationalNetwork::eval1(double x) const {
  const auto out = eval({x});
  return out.at(0);
}

std::size_t RationalNetwork::size() const {
  std::size_t n = 0;
  for (const NetLayer& layer : layers) {
    for (const NetNode& node : layer.nodes) {
      if (activations[static_cast<std::size_t>(node.act)].kind !=
          Activation::kIdentity) {
        ++n;
      }
    }
  }
  return n;
}

std::size_t RationalNetwork::affine_param_count() const {
  std::size_t n = 0;
  for (const NetLayer& layer : layers) {
    for (const NetNode& node : layer.nodes) {
      n += node.in.size() + 1;
    }
  }
  return n;
}

bool RationalNetwork::poles_ok() const {
  for (const Activation& a : activations) {
    if (a.kind == Activation::kRational && !pole_check(a.r, domain)) {
      return false;
    }
  }
  return true;
}

// ----- Expr algebra ----------------------------------------------------------

namespace {

Expr canonical(std::vector<Term> terms, double bias) {
  std::map<std::pair<int, int>, double> acc;
  for (const Term& t : terms) {
    acc[{t.node.layer, t.node.index}] += t.coeff;
  }
  Expr out;
  out.bias = bias;
  for (const auto& [key, coeff] : acc) {
    if (coeff != 0.0) {
      out.terms.push_back({NodeRef{key.first, key.second}, coeff});
    }
  }
  return out;
}

bool same_expr(const Expr& a, const Expr& b) {
  if (a.bias != b.bias || a.terms.size() != b.terms.size()) return false;
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    if (a.terms[i].node.layer != b.terms[i].node.layer ||
        a.terms[i].node.index != b.terms[i].node.index ||
        a.terms[i].coeff != b.terms[i].coeff) {
      return false;
    }
  }
  return true;
}

}  // namespace

Expr expr_of(NodeRef n, double coeff) {
  Expr e;
  e.terms.push_back({n, coeff});
  return e;
}

Expr combine(const Expr& a, const Expr& b, double ca, double cb) {
  std::vector<Term> terms;
  terms.reserve(a.terms.size() + b.terms.size());
  for (const Term& t : a.terms) terms.push_back({t.node, ca * t.coeff});
  for (const Term& t : b.terms) terms.push_back({t.node, cb * t.coeff});
  return canonical(std::move(terms), ca * a.bias + cb * b.bias);
}

Expr scale(const Expr& a, double c) {
  Expr out = a;
  out.bias *= c;
  for (Term& t : out.terms) t.coeff *= c;
  return out;
}

// ----- NetBuilder ------------------------------------------------------------

NetBuilder::NetBuilder(int input_dim) : input_dim_(input_dim) {
  if (input_dim < 1) throw PreconditionError("builder wants input_dim >= 1");
  acts_.push_back(Activation{});  // id 0: identity
}

NodeRef NetBuilder::input(int i) const {
  if (i < 0 || i >= input_dim_) throw PreconditionError("input index out of range");
  return NodeRef{0, i};
}

int NetBuilder::activation_id(const Activation& a) {
  for (std::size_t i = 0; i < acts_.size(); ++i) {
    if (acts_[i].kind != a.kind) continue;
    if (a.kind != Activation::kRational ||
        (acts_[i].r.numer == a.r.numer && acts_[i].r.denom == a.r.denom)) {
      return static_cast<int>(i);
    }
  }
  acts_.push_back(a);
  return static_cast<int>(acts_.size()) - 1;
}

int NetBuilder::square_id() {
  return activation_id(
      {Activation::kRational, RationalFunction::polynomial({0.0, 0.0, 1.0})});
}

int NetBuilder::relu_id() { return activation_id({Activation::kRelu, {}}); }

int NetBuilder::expr_layer(const Expr& e) const {
  int layer = 0;
  for (const Term& t : e.terms) layer = std::max(layer, t.node.layer);
  return layer;
}

NodeRef NetBuilder::align(NodeRef n, int layer) {
  while (n.layer < layer) {
    const auto key = std::make_pair(n.layer, n.index);
    const auto it = carry_memo_.find(key);
    if (it != carry_memo_.end()) {
      n = NodeRef{n.layer + 1, it->second};
      continue;
    }
    if (static_cast<int>(layers_.size()) < n.layer + 1) {
      layers_.resize(static_cast<std::size_t>(n.layer) + 1);
    }
    NetLayer& target = layers_[static_cast<std::size_t>(n.layer)];
    target.nodes.push_back({{{n.index, 1.0}}, 0.0, 0});
    const int idx = static_cast<int>(target.nodes.size()) - 1;
    carry_memo_[key] = idx;
    n = NodeRef{n.layer + 1, idx};
  }
  return n;
}

Expr NetBuilder::aligned(const Expr& e, int layer) {
  std::vector<Term> terms;
  terms.reserve(e.terms.size());
  for (const Term& t : e.terms) terms.push_back({align(t.node, layer), t.coeff});
  return canonical(std::move(terms), e.bias);
}

NodeRef NetBuilder::emit(const Expr& e, int act_id) {
  if (act_id < 0 || act_id >= static_cast<int>(acts_.size())) {
    throw PreconditionError("emit: unknown activation id");
  }
  const int layer = expr_layer(e);
  const Expr ea = aligned(e, layer);
  if (static_cast<int>(layers_.size()) < layer + 1) {
    layers_.resize(static_cast<std::size_t>(layer) + 1);
  }
  NetNode node;
  node.bias = ea.bias;
  node.act = act_id;
  for (const Term& t : ea.terms) node.in.push_back({t.node.index, t.coeff});
  NetLayer& target = layers_[static_cast<std::size_t>(layer)];
  target.nodes.push_back(std::move(node));
  return NodeRef{layer + 1, static_cast<int>(target.nodes.size()) - 1};
}

Expr NetBuilder::product(const Expr& x, const Expr& y) {
  if (x.terms.empty()) return scale(y, x.bias);  // constant factor: exact, no nodes
  if (y.terms.empty()) return scale(x, y.bias);
  if (same_expr(x, y)) {
    return expr_of(emit(x, square_id()));
  }
  const int layer = std::max(expr_layer(x), expr_layer(y));
  const Expr xa = aligned(x, layer);
  const Expr ya = aligned(y, layer);
  const NodeRef a = emit(xa, square_id());
  const NodeRef b = emit(ya, square_id());
  const NodeRef c = emit(combine(xa, ya, 1.0, -1.0), square_id());
  Expr out = expr_of(a, 0.5);
  out = combine(out, expr_of(b, 0.5));
  out = combine(out, expr_of(c, -0.5));
  return out;
}

Expr NetBuilder::power(const Expr& x, int n) {
  if (n < 0) throw PreconditionError("power wants a nonnegative exponent");
  if (n == 0) {
    Expr one;
    one.bias = 1.0;
    return one;
  }
  // Balanced exponent splitting: x^(2m) squares x^m, x^(2m+1) multiplies
  // x^m by x^(m+1). Every product pairs factors within a factor |x| of each
  // other, so the squaring-gadget subtraction never cancels catastrophically
  // (square-and-multiply's trailing r^2 * x products lose ~eps * x^(n-2)
  // relative accuracy). The even powers 2m and 2m+2 that the gadget squares
  // produce are memoized, which keeps the node count inside the documented
  // size bound.
  std::map<int, Expr> memo;
  memo.emplace(1, x);
  const std::function<Expr(int)> get = [&](int m) -> Expr {
    const auto it = memo.find(m);
    if (it != memo.end()) return it->second;
    Expr value;
    if (m % 2 == 0) {
      const Expr half = get(m / 2);
      value = expr_of(emit(half, square_id()));
    } else {
      const Expr lo = get(m / 2);
      const Expr hi = get(m / 2 + 1);
      Expr even_lo;  // x^(m-1)
      if (const auto el = memo.find(m - 1); el != memo.end()) {
        even_lo = el->second;
      } else {
        even_lo = expr_of(emit(lo, square_id()));
        memo.emplace(m - 1, even_lo);
      }
      Expr even_hi;  // x^(m+1)
      if (const auto eh = memo.find(m + 1); eh != memo.end()) {
        even_hi = eh->second;
      } else {
        even_hi = expr_of(emit(hi, square_id()));
        memo.emplace(m + 1, even_hi);
      }
      const Expr diff_sq = expr_of(emit(combine(lo, hi, 1.0, -1.0), square_id()));
      value = combine(combine(even_lo, even_hi, 0.5, 0.5), diff_sq, 1.0, -0.5);
    }
    memo.emplace(m, value);
    return value;
  };
  return get(n);
}

Expr NetBuilder::relu_approx(const Expr& u, const zolotarev::ReluApproximant& ra) {
  Expr v = u;
  for (const RationalFunction& stage : ra.r.stages) {
    v = expr_of(emit(v, activation_id({Activation::kRational, stage})));
  }
  const Expr prod = product(u, v);
  return combine(scale(prod, 0.5 / (1.0 + ra.epsilon)), scale(u, 0.5));
}

RationalNetwork NetBuilder::finish(const std::vector<Expr>& outputs,
                                   Interval domain) {
  if (outputs.empty()) throw PreconditionError("finish wants at least one output");
  int target = static_cast<int>(layers_.size());
  for (const Expr& e : outputs) target = std::max(target, expr_layer(e));
  RationalNetwork net;
  net.input_dim = input_dim_;
  net.output_dim = static_cast<int>(outputs.size());
  net.domain = domain;
  NetLayer out_layer;
  for (const Expr& e : outputs) {
    const Expr ea = aligned(e, target);
    NetNode node;
    node.bias = ea.bias;
    node.act = 0;
    for (const Term& t : ea.terms) node.in.push_back({t.node.index, t.coeff});
    out_layer.nodes.push_back(std::move(node));
  }
  if (static_cast<int>(layers_.size()) < target) {
    layers_.resize(static_cast<std::size_t>(target));
  }
  layers_.push_back(std::move(out_layer));
  net.activations = std::move(acts_);
  net.layers = std::move(layers_);
  return net;
}

// ----- constructions ---------------------------------------------------------

RationalNetwork product_gadget() {
  NetBuilder b(2);
  const Expr xy = b.product(expr_of(b.input(0)), expr_of(b.input(1)));
  return b.finish({xy}, Interval{-10.0, 10.0});
}

RationalNetwork monomial_network(int n, int r_p) {
  if (n < 1) throw PreconditionError("monomial_network wants n >= 1");
  if (r_p < 2) throw PreconditionError("monomial_network wants r_p >= 2");
  NetBuilder b(1);
  const Expr y = b.power(expr_of(b.input(0)), n);
  return b.finish({y}, Interval{-2.0, 2.0});
}

// ----- piecewise linear ------------------------------------------------------

double PiecewiseLinear::eval(double x) const {
  const std::size_t m = breakpoints.size();
  double v = coeffs[m + 1];
  if (m > 0) v += coeffs[0] * std::max(breakpoints[0] - x, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    v += coeffs[j + 1] * std::max(x - breakpoints[j], 0.0);
  }
  return v;
}

void PiecewiseLinear::validate() const {
  const std::size_t m = breakpoints.size();
  if (m == 0) throw PreconditionError("piecewise linear wants at least one breakpoint");
  if (coeffs.size() != m + 2) {
    throw PreconditionError("piecewise linear wants m+2 coefficients");
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (!(breakpoints[j] >= 0.0 && breakpoints[j] <= 1.0)) {
      throw PreconditionError("piecewise breakpoints must lie in [0,1]");
    }
    if (j > 0 && !(breakpoints[j - 1] < breakpoints[j])) {
      throw PreconditionError("piecewise breakpoints must be strictly increasing");
    }
  }
  if (!(lipschitz >= 0.0)) throw PreconditionError("piecewise Lipschitz constant invalid");
  const double tol = 1e-12;
  if (std::fabs(coeffs[0]) > lipschitz + tol) {
    throw PreconditionError("piecewise |c_0| exceeds the declared Lipschitz bound");
  }
  double s = 0.0;
  for (std::size_t j = 1; j <= m; ++j) s += std::fabs(coeffs[j]);
  if (s > lipschitz + tol) {
    throw PreconditionError("piecewise sum |c_j| exceeds the declared Lipschitz bound");
  }
}

namespace {

// Shared hinge substitution: every active ReLU hinge of g becomes the
// rational approximant at tolerance eps/(2L), applied to the hinge argument.
Expr piecewise_expr(NetBuilder& b, const PiecewiseLinear& g, double eps,
                    const Expr& x) {
  g.validate();
  const std::size_t m = g.breakpoints.size();
  struct Hinge {
    Expr arg;
    double coeff;
  };
  std::vector<Hinge> hinges;
  if (g.coeffs[0] != 0.0) {
    Expr arg = scale(x, -1.0);
    arg.bias += g.breakpoints[0];
    hinges.push_back({arg, g.coeffs[0]});
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (g.coeffs[j + 1] != 0.0) {
      Expr arg = x;
      arg.bias -= g.breakpoints[j];
      hinges.push_back({arg, g.coeffs[j + 1]});
    }
  }
  Expr out;
  out.bias = g.coeffs[m + 1];
  if (hinges.empty()) return out;  // constant piece: exact
  const auto ra = zolotarev::relu_approximant(eps / (2.0 * g.lipschitz));
  for (const Hinge& h : hinges) {
    out = combine(out, b.relu_approx(h.arg, ra), 1.0, h.coeff);
  }
  return out;
}

}  // namespace

RationalNetwork piecewise_network(const PiecewiseLinear& g, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw RangeError("piecewise tolerance must lie in (0, 1)");
  }
  NetBuilder b(1);
  const Expr out = piecewise_expr(b, g, epsilon, expr_of(b.input(0)));
  return b.finish({out}, Interval{0.0, 1.0});
}

// ----- localized Taylor networks ----------------------------------------------

int taylor_grid_resolution(int d, int n, double epsilon) {
  if (d != 1 && d != 2) {
    throw PreconditionError("taylor networks support d in {1, 2} only");
  }
  if (n < 1 || n > 4) {
    throw PreconditionError("taylor networks support smoothness order n <= 4");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw RangeError("taylor tolerance must lie in (0, 1)");
  }
  const double factorial_n = std::tgamma(static_cast<double>(n) + 1.0);
  const double lead = factorial_n / (std::pow(2.0, d) * std::pow(d, n));
  const int N = static_cast<int>(std::ceil(std::pow(lead * epsilon / 2.0, -1.0 / n)));
  return std::max(N, 1);
}

PiecewiseLinear taylor_partition(int m, int N) {
  if (N < 1 || m < 0 || m > N) throw PreconditionError("taylor_partition wants 0 <= m <= N");
  const double h = 1.0 / (3.0 * N);
  const double mu = static_cast<double>(m) / N;
  const double slope = 3.0 * static_cast<double>(N);
  PiecewiseLinear g;
  if (m == 0) {
    g.breakpoints = {h, 2.0 * h};
    g.coeffs = {0.0, -slope, slope, 1.0};
    g.lipschitz = 2.0 * slope;
  } else if (m == N) {
    g.breakpoints = {1.0 - 2.0 * h, 1.0 - h};
    g.coeffs = {0.0, slope, -slope, 0.0};
    g.lipschitz = 2.0 * slope;
  } else {
    g.breakpoints = {mu - 2.0 * h, mu - h, mu + h, mu + 2.0 * h};
    g.coeffs = {0.0, slope, -slope, -slope, slope, 0.0};
    g.lipschitz = 4.0 * slope;
  }
  return g;
}

RationalNetwork taylor_network(const DerivFn& derivs, int d, int n, double epsilon) {
  const int N = taylor_grid_resolution(d, n, epsilon);
  // Partition substitution budget from the error split; see the partition
  // tolerance discussion in the tests for the measured headroom.
  const double delta =
      epsilon / (std::pow(2.0, d + 1) * std::pow(d, n + 1));
  const double delta_dim = delta / d;  // product of d approximate factors

  NetBuilder b(d);
  std::vector<Expr> inputs;
  for (int k = 0; k < d; ++k) inputs.push_back(expr_of(b.input(k)));

  Expr total;
  std::vector<int> mi(static_cast<std::size_t>(d), 0);
  while (true) {
    // psi_m as a product of per-dimension partition factors.
    std::vector<Expr> psis;
    for (int k = 0; k < d; ++k) {
      psis.push_back(piecewise_expr(
          b, taylor_partition(mi[static_cast<std::size_t>(k)], N), delta_dim,
          inputs[static_cast<std::size_t>(k)]));
    }
    Expr psi_m = psis[0];
    for (int k = 1; k < d; ++k) psi_m = b.product(psi_m, psis[static_cast<std::size_t>(k)]);

    // Taylor polynomial of order < n around m/N.
    std::vector<double> point(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
      point[static_cast<std::size_t>(k)] =
          static_cast<double>(mi[static_cast<std::size_t>(k)]) / N;
    }
    // Power basis u_k^a, built once per grid point.
    std::vector<std::vector<Expr>> upow(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
      Expr u = inputs[static_cast<std::size_t>(k)];
      u.bias -= point[static_cast<std::size_t>(k)];
      auto& pows = upow[static_cast<std::size_t>(k)];
      pows.resize(static_cast<std::size_t>(n));
      pows[0].bias = 1.0;
      if (n >= 2) pows[1] = u;
      for (int a = 2; a < n; ++a) {
        pows[static_cast<std::size_t>(a)] =
            b.product(pows[static_cast<std::size_t>(a - 1)], u);
      }
    }
    std::vector<int> alpha(static_cast<std::size_t>(d), 0);
    Expr poly;
    while (true) {
      int total_order = 0;
      for (int a : alpha) total_order += a;
      if (total_order < n) {
        double fact = 1.0;
        for (int a : alpha) fact *= std::tgamma(static_cast<double>(a) + 1.0);
        const double coeff = derivs(alpha, point) / fact;
        if (coeff != 0.0) {
          Expr mono = upow[0][static_cast<std::size_t>(alpha[0])];
          for (int k = 1; k < d; ++k) {
            const Expr& uk = upow[static_cast<std::size_t>(k)]
                                 [static_cast<std::size_t>(alpha[static_cast<std::size_t>(k)])];
            if (alpha[static_cast<std::size_t>(k)] == 0) continue;
            mono = (mono.terms.empty() && mono.bias == 1.0) ? uk : b.product(mono, uk);
          }
          poly = combine(poly, mono, 1.0, coeff);
        }
      }
      int k = 0;
      while (k < d && ++alpha[static_cast<std::size_t>(k)] > n - 1) {
        alpha[static_cast<std::size_t>(k)] = 0;
        ++k;
      }
      if (k == d) break;
    }

    total = combine(total, b.product(psi_m, poly));

    int k = 0;
    while (k < d && ++mi[static_cast<std::size_t>(k)] > N) {
      mi[static_cast<std::size_t>(k)] = 0;
      ++k;
    }
    if (k == d) break;
  }
  return b.finish({total}, Interval{0.0, 1.0});
}

// ----- ReLU network conversion -------------------------------------------------

RatifyResult ratify_relu_network(const RationalNetwork& f, double epsilon,
                                 ToleranceSchedule schedule) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw RangeError("conversion tolerance must lie in (0, 1)");
  }
  std::ostringstream offenders;
  int bad = 0;
  for (std::size_t li = 0; li < f.layers.size(); ++li) {
    for (std::size_t ni = 0; ni < f.layers[li].nodes.size(); ++ni) {
      const NetNode& node = f.layers[li].nodes[ni];
      double s = std::fabs(node.bias);
      for (const auto& [idx, w] : node.in) s += std::fabs(w);
      if (s > 1.0 + 1e-12) {
        if (bad > 0) offenders << ", ";
        offenders << "layer " << li << " node " << ni << " (" << s << ")";
        ++bad;
      }
    }
  }
  if (bad > 0) {
    throw PreconditionError(
        "ReLU conversion needs ||a||_1 + |b| <= 1 per node; violated at: " +
        offenders.str());
  }

  int relu_layers = 0;
  for (const NetLayer& layer : f.layers) {
    for (const NetNode& node : layer.nodes) {
      if (f.activations[static_cast<std::size_t>(node.act)].kind ==
          Activation::kRelu) {
        ++relu_layers;
        break;
      }
    }
  }

  RatifyResult result;
  result.original_params = f.affine_param_count();
  // ReLU is 1-Lipschitz, so the geometric budget equals the flat one.
  (void)schedule;
  const double per_eps =
      relu_layers > 0 ? epsilon / relu_layers : epsilon;
  result.per_activation_epsilon = per_eps;

  zolotarev::ReluApproximant ra;
  if (relu_layers > 0) ra = zolotarev::relu_approximant(per_eps);
  result.stages = relu_layers > 0 ? static_cast<int>(ra.stage_count()) : 0;

  NetBuilder b(f.input_dim);
  std::vector<Expr> vals;
  for (int i = 0; i < f.input_dim; ++i) vals.push_back(expr_of(b.input(i)));
  for (const NetLayer& layer : f.layers) {
    std::vector<Expr> next;
    next.reserve(layer.nodes.size());
    for (const NetNode& node : layer.nodes) {
      Expr e;
      e.bias = node.bias;
      for (const auto& [idx, w] : node.in) {
        e = combine(e, vals[static_cast<std::size_t>(idx)], 1.0, w);
      }
      const Activation& a = f.activations[static_cast<std::size_t>(node.act)];
      switch (a.kind) {
        case Activation::kIdentity:
          next.push_back(e);
          break;
        case Activation::kRelu:
          next.push_back(b.relu_approx(e, ra));
          ++result.replaced;
          break;
        case Activation::kRational:
          next.push_back(expr_of(b.emit(e, b.activation_id(a))));
          break;
      }
    }
    vals = std::move(next);
  }
  result.net = b.finish(vals, Interval{-1.0, 1.0});
  return result;
}

// ----- certification helpers ---------------------------------------------------

SupNormReport certify_1d(const RationalNetwork& net,
                         const std::function<double(double)>& exact, Interval I,
                         std::size_t n_grid) {
  return sup_error([&](double x) { return net.eval1(x); }, exact, I, n_grid);
}

SupNormReport certify_2d(const RationalNetwork& net,
                         const std::function<double(double, double)>& exact,
                         Interval I1, Interval I2, std::size_t per_dim,
                         std::size_t n_random, unsigned seed) {
  if (per_dim < 2) throw PreconditionError("certify_2d wants per_dim >= 2");
  SupNormReport rep{per_dim * per_dim + n_random, -1.0, I1.lo};
  auto probe = [&](double x1, double x2) {
    const double e = std::fabs(net.eval({x1, x2})[0] - exact(x1, x2));
    if (e > rep.max_abs_error) {
      rep.max_abs_error = e;
      rep.argmax = x1;  // first coordinate of the worst point
    }
  };
  for (std::size_t i = 0; i < per_dim; ++i) {
    const double x1 = I1.lo + (I1.hi - I1.lo) * static_cast<double>(i) /
                                  static_cast<double>(per_dim - 1);
    for (std::size_t j = 0; j < per_dim; ++j) {
      const double x2 = I2.lo + (I2.hi - I2.lo) * static_cast<double>(j) /
                                    static_cast<double>(per_dim - 1);
      probe(x1, x2);
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u1(I1.lo, I1.hi), u2(I2.lo, I2.hi);
  for (std::size_t i = 0; i < n_random; ++i) {
    probe(u1(rng), u2(rng));
  }
  return rep;
}

}  // namespace ratnet::constructive

#include "ratnet/nn.hpp"

#include <cmath>
#include <random>
#include <string>

#include "ratnet/errors.hpp"
#include "ratnet/ratfun.hpp"

namespace ratnet::nn {

namespace detail {

double uniform01(std::uint64_t raw) {
  return static_cast<double>(raw >> 11) * 0x1.0p-53;
}

}  // namespace detail

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * detail::uniform01(rng());
}

// Deterministic Fisher-Yates (std::shuffle's algorithm is unspecified).
void shuffle_indices(std::vector<int>& idx, std::mt19937_64& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(idx[i - 1], idx[j]);
  }
}

struct ActEval {
  Eigen::ArrayXXd out;
  Eigen::ArrayXXd dz;  // activation derivative wrt input (for backward)
};

}  // namespace

double ActivationSpec::eval(double z) const {
  switch (kind) {
    case kRelu: return z > 0.0 ? z : 0.0;
    case kSinusoid: return std::sin(z);
    case kPolynomial:
      return params[0] + z * (params[1] + z * (params[2] + z * params[3]));
    case kRational: {
      const double P =
          params[0] + z * (params[1] + z * (params[2] + z * params[3]));
      const double Q = params[4] + z * (params[5] + z * params[6]);
      return P / Q;
    }
  }
  return 0.0;
}

ActivationSpec ActivationSpec::rational() {
  return {kRational, {0.0218, 0.5, 1.5957, 1.1915, 1.0, 0.0, 2.3830}};
}
ActivationSpec ActivationSpec::relu() { return {kRelu, {}}; }
ActivationSpec ActivationSpec::sinusoid() { return {kSinusoid, {}}; }
ActivationSpec ActivationSpec::polynomial() {
  return {kPolynomial, {1.0 / 16.0, 0.5, 0.5, 0.0}};
}

std::size_t DenseRationalNet::trainable_param_count() const {
  std::size_t n = 0;
  for (const auto& W : weights) n += static_cast<std::size_t>(W.size());
  for (const auto& b : biases) n += static_cast<std::size_t>(b.size());
  for (const auto& a : activations) n += a.params.size();
  return n;
}

bool DenseRationalNet::poles_ok(double bound) const {
  for (const ActivationSpec& a : activations) {
    if (a.kind != ActivationSpec::kRational) continue;
    const RationalFunction r({a.params[0], a.params[1], a.params[2], a.params[3]},
                             {a.params[4], a.params[5], a.params[6]});
    if (!pole_check(r, Interval{-bound, bound})) return false;
  }
  return true;
}

DenseRationalNet make_net(const std::vector<int>& dims,
                          const ActivationSpec& hidden_act, unsigned seed) {
  if (dims.size() < 2) throw PreconditionError("make_net wants at least two dims");
  for (int d : dims) {
    if (d < 1) throw PreconditionError("make_net wants positive layer dims");
  }
  DenseRationalNet net;
  net.layer_dims = dims;
  std::mt19937_64 rng(seed);
  const std::size_t L = dims.size() - 1;
  for (std::size_t i = 0; i < L; ++i) {
    const int fan_in = dims[i];
    const int fan_out = dims[i + 1];
    const double lim = std::sqrt(6.0 / (fan_in + fan_out));
    Eigen::MatrixXd W(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r) {
      for (int c = 0; c < fan_in; ++c) {
        W(r, c) = uniform(rng, -lim, lim);
      }
    }
    net.weights.push_back(std::move(W));
    net.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  for (std::size_t i = 0; i + 1 < L; ++i) net.activations.push_back(hidden_act);
  return net;
}

namespace {

Eigen::ArrayXXd act_forward(const ActivationSpec& a, const Eigen::ArrayXXd& z) {
  switch (a.kind) {
    case ActivationSpec::kRelu: return z.max(0.0);
    case ActivationSpec::kSinusoid: return z.sin();
    case ActivationSpec::kPolynomial: {
      const auto& c = a.params;
      return c[0] + z * (c[1] + z * (c[2] + z * c[3]));
    }
    case ActivationSpec::kRational: {
      const auto& c = a.params;
      const Eigen::ArrayXXd P = c[0] + z * (c[1] + z * (c[2] + z * c[3]));
      const Eigen::ArrayXXd Q = c[4] + z * (c[5] + z * c[6]);
      return P / Q;
    }
  }
  return z;
}

struct ForwardPass {
  std::vector<Eigen::MatrixXd> z;  // pre-activations per weight layer
  std::vector<Eigen::MatrixXd> a;  // a[0] = input, a[i+1] = layer-i output
};

ForwardPass run_forward(const DenseRationalNet& net, const Eigen::MatrixXd& X) {
  const std::size_t L = net.weights.size();
  ForwardPass fp;
  fp.a.push_back(X);
  for (std::size_t i = 0; i < L; ++i) {
    Eigen::MatrixXd zi =
        (fp.a.back() * net.weights[i].transpose()).rowwise() +
        net.biases[i].transpose();
    Eigen::MatrixXd ai =
        (i + 1 < L) ? act_forward(net.activations[i], zi.array()).matrix() : zi;
    if (!ai.allFinite()) {
      throw EvalError("forward: non-finite activation output at layer " +
                          std::to_string(i),
                      0.0);
    }
    fp.z.push_back(std::move(zi));
    fp.a.push_back(std::move(ai));
  }
  return fp;
}

}  // namespace

Eigen::VectorXd forward(const DenseRationalNet& net, const Eigen::MatrixXd& X) {
  return run_forward(net, X).a.back().col(0);
}

double forward_one(const DenseRationalNet& net, const Eigen::VectorXd& x) {
  Eigen::MatrixXd X = x.transpose();
  return forward(net, X)(0);
}

double loss_mse(const DenseRationalNet& net, const Eigen::MatrixXd& X,
                const Eigen::VectorXd& y) {
  if (X.rows() == 0) throw PreconditionError("loss_mse wants nonempty data");
  const Eigen::MatrixXd out = run_forward(net, X).a.back();
  return (out.col(0) - y).squaredNorm() / static_cast<double>(X.rows());
}

namespace {

// Gradients of the batch MSE; shared activation coefficients accumulate
// across every node of their layer.
Gradients backward_from(const DenseRationalNet& net, const ForwardPass& fp,
                        const Eigen::VectorXd& y) {
  const std::size_t L = net.weights.size();
  const auto n = static_cast<double>(y.size());
  Gradients g;
  g.weights.resize(L);
  g.biases.resize(L);
  g.activation.resize(net.activations.size());

  Eigen::MatrixXd d = (2.0 / n) * (fp.a.back().col(0) - y);
  for (std::size_t ii = L; ii-- > 0;) {
    g.weights[ii] = d.transpose() * fp.a[ii];
    g.biases[ii] = d.colwise().sum().transpose();
    if (ii == 0) break;
    const Eigen::MatrixXd da = d * net.weights[ii];
    const ActivationSpec& act = net.activations[ii - 1];
    const Eigen::ArrayXXd z = fp.z[ii - 1].array();
    const Eigen::ArrayXXd gout = da.array();
    Eigen::ArrayXXd dz;
    switch (act.kind) {
      case ActivationSpec::kRelu:
        dz = gout * (z > 0.0).cast<double>();
        break;
      case ActivationSpec::kSinusoid:
        dz = gout * z.cos();
        break;
      case ActivationSpec::kPolynomial: {
        const auto& c = act.params;
        dz = gout * (c[1] + z * (2.0 * c[2] + z * 3.0 * c[3]));
        std::vector<double> dp(4);
        Eigen::ArrayXXd zp = Eigen::ArrayXXd::Ones(z.rows(), z.cols());
        for (int j = 0; j < 4; ++j) {
          dp[static_cast<std::size_t>(j)] = (gout * zp).sum();
          zp *= z;
        }
        g.activation[ii - 1] = std::move(dp);
        break;
      }
      case ActivationSpec::kRational: {
        const auto& c = act.params;
        const Eigen::ArrayXXd P = c[0] + z * (c[1] + z * (c[2] + z * c[3]));
        const Eigen::ArrayXXd Q = c[4] + z * (c[5] + z * c[6]);
        const Eigen::ArrayXXd dP = c[1] + z * (2.0 * c[2] + z * 3.0 * c[3]);
        const Eigen::ArrayXXd dQ = c[5] + 2.0 * z * c[6];
        dz = gout * (dP * Q - P * dQ) / (Q * Q);
        const Eigen::ArrayXXd gp = gout / Q;
        const Eigen::ArrayXXd gq = -gout * P / (Q * Q);
        std::vector<double> dp(7);
        Eigen::ArrayXXd zp = Eigen::ArrayXXd::Ones(z.rows(), z.cols());
        for (int j = 0; j < 4; ++j) {
          dp[static_cast<std::size_t>(j)] = (gp * zp).sum();
          if (j < 3) dp[static_cast<std::size_t>(4 + j)] = (gq * zp).sum();
          zp *= z;
        }
        g.activation[ii - 1] = std::move(dp);
        break;
      }
    }
    for (std::size_t j = 0; j < g.activation[ii - 1].size(); ++j) {
      if (!std::isfinite(g.activation[ii - 1][j])) {
        throw NumericError("backward: non-finite activation-coefficient gradient"
                           " at layer " + std::to_string(ii - 1) +
                           ", coefficient " + std::to_string(j));
      }
    }
    d = dz.matrix();
  }
  return g;
}

}  // namespace

Gradients backward(const DenseRationalNet& net, const Eigen::MatrixXd& X,
                   const Eigen::VectorXd& y) {
  return backward_from(net, run_forward(net, X), y);
}

namespace {

struct AdamState {
  std::vector<Eigen::MatrixXd> mW, vW;
  std::vector<Eigen::VectorXd> mb, vb;
  std::vector<std::vector<double>> ma, va;
  long long step = 0;
};

void adam_update(DenseRationalNet& net, const Gradients& g, AdamState& st,
                 double lr) {
  constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
  ++st.step;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(st.step));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(st.step));
  for (std::size_t i = 0; i < net.weights.size(); ++i) {
    st.mW[i] = b1 * st.mW[i] + (1.0 - b1) * g.weights[i];
    st.vW[i].array() =
        b2 * st.vW[i].array() + (1.0 - b2) * g.weights[i].array().square();
    net.weights[i].array() -=
        lr * (st.mW[i].array() / c1) / ((st.vW[i].array() / c2).sqrt() + eps);
    st.mb[i] = b1 * st.mb[i] + (1.0 - b1) * g.biases[i];
    st.vb[i].array() =
        b2 * st.vb[i].array() + (1.0 - b2) * g.biases[i].array().square();
    net.biases[i].array() -=
        lr * (st.mb[i].array() / c1) / ((st.vb[i].array() / c2).sqrt() + eps);
  }
  for (std::size_t i = 0; i < net.activations.size(); ++i) {
    auto& par = net.activations[i].params;
    for (std::size_t j = 0; j < g.activation[i].size(); ++j) {
      const double gr = g.activation[i][j];
      st.ma[i][j] = b1 * st.ma[i][j] + (1.0 - b1) * gr;
      st.va[i][j] = b2 * st.va[i][j] + (1.0 - b2) * gr * gr;
      par[j] -= lr * (st.ma[i][j] / c1) / (std::sqrt(st.va[i][j] / c2) + eps);
    }
  }
}

}  // namespace

Dataset make_sin2d_dataset(unsigned seed, int n_samples) {
  if (n_samples < 1) throw PreconditionError("dataset wants n_samples >= 1");
  std::mt19937_64 rng(seed);
  Dataset ds;
  ds.X.resize(n_samples, 2);
  ds.y.resize(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double x = uniform(rng, -20.0, 20.0);
    const double t = uniform(rng, 0.0, 40.0);
    ds.y(i) = -std::sin(std::numbers::pi * x / 20.0) *
              std::cos(std::numbers::pi * t / 40.0);
    ds.X(i, 0) = x / 20.0;
    ds.X(i, 1) = t / 20.0 - 1.0;
  }
  return ds;
}

TrainResult train(const DenseRationalNet& start, const Eigen::MatrixXd& X,
                  const Eigen::VectorXd& y, const TrainConfig& cfg) {
  if (cfg.epochs < 0 || cfg.batch_size < 1 || !(cfg.learning_rate > 0.0) ||
      !(cfg.val_fraction >= 0.0 && cfg.val_fraction < 1.0)) {
    throw PreconditionError("train: invalid config");
  }
  if (X.rows() != y.size() || X.rows() < 2) {
    throw PreconditionError("train: data shape mismatch or too small");
  }
  TrainResult result;
  result.net = start;
  DenseRationalNet& net = result.net;

  std::mt19937_64 rng(cfg.seed);
  const int n_total = static_cast<int>(X.rows());
  std::vector<int> idx(static_cast<std::size_t>(n_total));
  for (int i = 0; i < n_total; ++i) idx[static_cast<std::size_t>(i)] = i;
  shuffle_indices(idx, rng);
  const int n_val = static_cast<int>(std::lround(cfg.val_fraction * n_total));
  const int n_train = n_total - n_val;
  if (n_train < 1) throw PreconditionError("train: empty training split");

  Eigen::MatrixXd Xtr(n_train, X.cols()), Xval(std::max(n_val, 1), X.cols());
  Eigen::VectorXd ytr(n_train), yval(std::max(n_val, 1));
  for (int i = 0; i < n_train; ++i) {
    Xtr.row(i) = X.row(idx[static_cast<std::size_t>(i)]);
    ytr(i) = y(idx[static_cast<std::size_t>(i)]);
  }
  for (int i = 0; i < n_val; ++i) {
    Xval.row(i) = X.row(idx[static_cast<std::size_t>(n_train + i)]);
    yval(i) = y(idx[static_cast<std::size_t>(n_train + i)]);
  }
  if (n_val == 0) {  // degenerate: validate on the training split
    Xval = Xtr;
    yval = ytr;
  }

  AdamState st;
  for (const auto& W : net.weights) {
    st.mW.push_back(Eigen::MatrixXd::Zero(W.rows(), W.cols()));
    st.vW.push_back(Eigen::MatrixXd::Zero(W.rows(), W.cols()));
  }
  for (const auto& b : net.biases) {
    st.mb.push_back(Eigen::VectorXd::Zero(b.size()));
    st.vb.push_back(Eigen::VectorXd::Zero(b.size()));
  }
  for (const auto& a : net.activations) {
    st.ma.push_back(std::vector<double>(a.params.size(), 0.0));
    st.va.push_back(std::vector<double>(a.params.size(), 0.0));
  }

  std::vector<int> perm(static_cast<std::size_t>(n_train));
  for (int i = 0; i < n_train; ++i) perm[static_cast<std::size_t>(i)] = i;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_indices(perm, rng);
    double train_sum = 0.0;
    int batches = 0;
    for (int s = 0; s < n_train; s += cfg.batch_size) {
      const int bn = std::min(cfg.batch_size, n_train - s);
      Eigen::MatrixXd Xb(bn, Xtr.cols());
      Eigen::VectorXd yb(bn);
      for (int i = 0; i < bn; ++i) {
        Xb.row(i) = Xtr.row(perm[static_cast<std::size_t>(s + i)]);
        yb(i) = ytr(perm[static_cast<std::size_t>(s + i)]);
      }
      const ForwardPass fp = run_forward(net, Xb);
      const double batch_loss =
          (fp.a.back().col(0) - yb).squaredNorm() / static_cast<double>(bn);
      if (!std::isfinite(batch_loss) || batch_loss > 1e6) {
        throw TrainingError("training diverged at epoch " + std::to_string(epoch),
                            [&] {
                              std::vector<std::pair<double, double>> h;
                              for (const auto& e : result.history) {
                                h.push_back({e.train_mse, e.val_mse});
                              }
                              return h;
                            }());
      }
      train_sum += batch_loss;
      ++batches;
      const Gradients g = backward_from(net, fp, yb);

      // Snapshot denominator coefficients so a near-pole step can be undone.
      std::vector<std::array<double, 3>> denoms(net.activations.size());
      for (std::size_t i = 0; i < net.activations.size(); ++i) {
        const auto& a = net.activations[i];
        if (a.kind == ActivationSpec::kRational) {
          denoms[i] = {a.params[4], a.params[5], a.params[6]};
        }
      }
      adam_update(net, g, st, cfg.learning_rate);
      for (std::size_t i = 0; i < net.activations.size(); ++i) {
        auto& a = net.activations[i];
        if (a.kind != ActivationSpec::kRational) continue;
        const RationalFunction r({a.params[0], a.params[1], a.params[2], a.params[3]},
                                 {a.params[4], a.params[5], a.params[6]});
        if (!pole_check(r, Interval{-cfg.pole_bound, cfg.pole_bound})) {
          a.params[4] = denoms[i][0];
          a.params[5] = denoms[i][1];
          a.params[6] = denoms[i][2];
        }
      }
    }
    const double val =
        (forward(net, Xval) - yval).squaredNorm() / static_cast<double>(Xval.rows());
    result.history.push_back({train_sum / std::max(batches, 1), val});
  }
  return result;
}

}  // namespace ratnet::nn

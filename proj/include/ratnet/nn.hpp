#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

namespace ratnet::nn {

// Shared per-layer activation. Rational params are ascending:
// p0..p3 (numerator, type 3) then q0..q2 (denominator, type 2).
struct ActivationSpec {
  enum Kind { kRational, kRelu, kSinusoid, kPolynomial } kind = kRelu;
  std::vector<double> params;  // 7 for rational, 4 for polynomial, else empty

  double eval(double z) const;

  // Published type-(3,2) ReLU fit (highest-degree-first in the source table).
  static ActivationSpec rational();
  static ActivationSpec relu();
  static ActivationSpec sinusoid();
  // Degree-3 minimax fit of ReLU: 1/16 + z/2 + z^2/2.
  static ActivationSpec polynomial();
};

// Dense net: layer_dims = [d_0 .. d_L]; hidden layers carry one shared
// activation each; the output layer is linear.
struct DenseRationalNet {
  std::vector<int> layer_dims;
  std::vector<Eigen::MatrixXd> weights;        // L matrices, d_{i+1} x d_i
  std::vector<Eigen::VectorXd> biases;         // L vectors
  std::vector<ActivationSpec> activations;     // L-1 hidden specs

  std::size_t trainable_param_count() const;
  // True if every rational activation's denominator stays away from zero
  // on [-bound, bound].
  bool poles_ok(double bound = 10.0) const;
};

// Glorot-uniform weights (seeded, deterministic), zero biases, the given
// activation copied to every hidden layer.
DenseRationalNet make_net(const std::vector<int>& dims,
                          const ActivationSpec& hidden_act, unsigned seed);

// Batched forward pass; X rows are samples. Throws EvalError naming the
// layer if an activation output is non-finite.
Eigen::VectorXd forward(const DenseRationalNet& net, const Eigen::MatrixXd& X);
double forward_one(const DenseRationalNet& net, const Eigen::VectorXd& x);

double loss_mse(const DenseRationalNet& net, const Eigen::MatrixXd& X,
                const Eigen::VectorXd& y);

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  std::vector<std::vector<double>> activation;  // per hidden layer (may be empty)
};

// Exact reverse-mode gradients of mean squared error over the batch, for
// weights, biases, and shared activation coefficients.
Gradients backward(const DenseRationalNet& net, const Eigen::MatrixXd& X,
                   const Eigen::VectorXd& y);

struct TrainConfig {
  unsigned seed = 0;
  int epochs = 500;
  int batch_size = 256;
  double learning_rate = 1e-3;
  double val_fraction = 0.2;  // seeded shuffle split
  double pole_bound = 10.0;   // denominator screening interval after each step
  // optimizer is Adam (beta1 0.9, beta2 0.999, eps 1e-8); loss is MSE
};

struct EpochStats {
  double train_mse;  // mean over the epoch's batches
  double val_mse;
};

struct TrainResult {
  DenseRationalNet net;
  std::vector<EpochStats> history;
};

// Adam training with seeded shuffle split and per-epoch reshuffling;
// deterministic given the seed. Denominator steps that bring a rational
// activation near a pole on [-pole_bound, pole_bound] are rolled back for
// that layer. Throws TrainingError (with history) on divergence.
TrainResult train(const DenseRationalNet& net, const Eigen::MatrixXd& X,
                  const Eigen::VectorXd& y, const TrainConfig& cfg);

// Smooth oscillatory 2-D synthetic target
//   u(x, t) = -sin(pi x / 20) cos(pi t / 40),  (x, t) in [-20,20] x [0,40],
// sampled uniformly; features normalized to [-1,1]^2.
struct Dataset {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

Dataset make_sin2d_dataset(unsigned seed, int n_samples = 2500);

namespace detail {

// Uniform double in [0,1) from the top 53 bits; platform-independent.
double uniform01(std::uint64_t raw);

}  // namespace detail

}  // namespace ratnet::nn

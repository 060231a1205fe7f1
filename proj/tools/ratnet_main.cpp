// ratnet command-line driver: convergence sweeps (fig1), activation training
// comparison (train-compare), and constructive network builders (construct).
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ratnet/classic.hpp"
#include "ratnet/constructive.hpp"
#include "ratnet/errors.hpp"
#include "ratnet/io.hpp"
#include "ratnet/nn.hpp"
#include "ratnet/zolotarev.hpp"

namespace {

using namespace ratnet;

std::vector<std::size_t> default_budgets(classic::Family f) {
  switch (f) {
    case classic::Family::zolotarev: return {7, 14, 21, 28};
    case classic::Family::newman: return {20, 34, 52, 74};
    case classic::Family::best_poly: return {5, 9, 17, 33};
  }
  return {};
}

classic::Family family_from(const std::string& name) {
  if (name == "zolotarev") return classic::Family::zolotarev;
  if (name == "newman") return classic::Family::newman;
  if (name == "best_poly" || name == "poly") return classic::Family::best_poly;
  throw RangeError("unknown family '" + name + "'",
                   std::string("zolotarev, newman, best_poly"));
}

// Family ordering invariant: within each family errors are non-increasing in
// parameter count; where families share a budget >= 14, zolotarev <= newman
// <= best_poly.
bool ordering_holds(const std::vector<classic::ConvergenceRow>& rows) {
  std::map<classic::Family, std::vector<std::pair<std::size_t, double>>> per;
  for (const auto& r : rows) per[r.family].push_back({r.param_count, r.sup_error});
  for (auto& [fam, v] : per) {
    std::sort(v.begin(), v.end());
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (v[i].second > v[i - 1].second * (1.0 + 1e-12)) return false;
    }
  }
  std::map<std::size_t, std::map<classic::Family, double>> by_budget;
  for (const auto& r : rows) by_budget[r.param_count][r.family] = r.sup_error;
  for (const auto& [budget, fams] : by_budget) {
    if (budget < 14) continue;
    const auto z = fams.find(classic::Family::zolotarev);
    const auto n = fams.find(classic::Family::newman);
    const auto p = fams.find(classic::Family::best_poly);
    if (z != fams.end() && n != fams.end() && z->second > n->second) return false;
    if (n != fams.end() && p != fams.end() && n->second > p->second) return false;
    if (z != fams.end() && p != fams.end() && z->second > p->second) return false;
  }
  return true;
}

int run_fig1(const std::string& out_csv, const std::vector<std::string>& families,
             const std::vector<std::size_t>& budgets) {
  std::vector<classic::ConvergenceRow> rows;
  for (const std::string& name : families) {
    const classic::Family fam = family_from(name);
    const std::vector<std::size_t>& b =
        budgets.empty() ? default_budgets(fam) : budgets;
    const auto table = classic::convergence_table(fam, b);
    rows.insert(rows.end(), table.begin(), table.end());
  }
  io::write_convergence_csv(out_csv, rows);
  const bool ok = ordering_holds(rows);
  std::cout << "rows: " << rows.size() << "\nwrote: " << out_csv
            << "\nordering: " << (ok ? "ok" : "violated") << "\n";
  return ok ? 0 : 1;
}

std::string csv_path_for(const std::string& base, const std::string& name) {
  const std::string suffix = "_" + name + ".csv";
  if (base.size() >= 4 && base.compare(base.size() - 4, 4, ".csv") == 0) {
    return base.substr(0, base.size() - 4) + suffix;
  }
  return base + suffix;
}

std::vector<int> parse_arch(const std::string& s) {
  std::vector<int> dims;
  std::string tok;
  for (char c : s + ",") {
    if (c == ',' || c == 'x') {
      if (!tok.empty()) dims.push_back(std::stoi(tok));
      tok.clear();
    } else {
      tok += c;
    }
  }
  return dims;
}

int run_train_compare(const std::string& config_path, const std::string& out_csv) {
  io::Config cfg;
  if (!config_path.empty()) cfg = io::load_config(config_path);

  unsigned seed = cfg.get_unsigned("seed", 0);
  if (const char* env = std::getenv("RATNET_SEED")) {
    seed = static_cast<unsigned>(std::stoul(env));
  }
  const int epochs = cfg.get_int("epochs", 500);
  const std::string target = cfg.get("target", "sin2d");
  if (target != "sin2d") {
    throw RangeError("unknown target '" + target + "'", std::string("sin2d"));
  }
  const std::vector<int> dims = parse_arch(cfg.get("architecture", "2,50,50,50,50,1"));
  if (dims.size() < 2 || dims.front() != 2 || dims.back() != 1) {
    throw PreconditionError("architecture must map 2 inputs to 1 output");
  }

  nn::TrainConfig tc;
  tc.seed = seed;
  tc.epochs = epochs;
  tc.batch_size = cfg.get_int("batch_size", 256);
  tc.learning_rate = cfg.get_double("lr", 1e-3);
  tc.val_fraction = cfg.get_double("val_fraction", 0.2);

  const int n_samples = cfg.get_int("samples", 2500);
  const nn::Dataset data = nn::make_sin2d_dataset(seed, n_samples);

  struct Entry {
    std::string name;
    nn::ActivationSpec act;
  };
  const std::vector<Entry> entries = {
      {"relu", nn::ActivationSpec::relu()},
      {"sinusoid", nn::ActivationSpec::sinusoid()},
      {"rational", nn::ActivationSpec::rational()},
      {"polynomial", nn::ActivationSpec::polynomial()},
  };

  std::map<std::string, double> initial, final_val;
  for (const Entry& e : entries) {
    const nn::DenseRationalNet net = nn::make_net(dims, e.act, seed);
    initial[e.name] = nn::loss_mse(net, data.X, data.y);
    const nn::TrainResult res = nn::train(net, data.X, data.y, tc);
    io::write_history_csv(csv_path_for(out_csv, e.name), res.history);
    final_val[e.name] =
        res.history.empty() ? initial[e.name] : res.history.back().val_mse;
    std::cout << e.name << ": params=" << net.trainable_param_count()
              << " initial_mse=" << io::format17(initial[e.name])
              << " final_val_mse=" << io::format17(final_val[e.name]) << "\n";
  }

  if (epochs == 0) {
    double lo = initial.begin()->second, hi = lo;
    for (const auto& [name, v] : initial) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const bool ok = hi <= 2.0 * lo;
    std::cout << "initial-loss spread: " << (ok ? "within 2x" : "exceeds 2x") << "\n";
    return ok ? 0 : 1;
  }
  const bool ok = final_val["rational"] < final_val["relu"];
  std::cout << "ordering rational<relu: " << (ok ? "ok" : "violated") << "\n";
  return ok ? 0 : 1;
}

constructive::PiecewiseLinear random_piecewise(int m, double lipschitz,
                                               unsigned seed) {
  std::mt19937_64 rng(seed);
  auto u01 = [&] { return nn::detail::uniform01(rng()); };
  constructive::PiecewiseLinear g;
  g.lipschitz = lipschitz;
  for (int i = 0; i < m; ++i) {
    g.breakpoints.push_back(0.05 + 0.9 * u01());
  }
  std::sort(g.breakpoints.begin(), g.breakpoints.end());
  g.coeffs.resize(static_cast<std::size_t>(m) + 2);
  for (double& c : g.coeffs) c = 2.0 * u01() - 1.0;
  g.coeffs[0] *= lipschitz;  // |c_0| <= L
  double sum = 0.0;
  for (int j = 1; j <= m; ++j) sum += std::abs(g.coeffs[static_cast<std::size_t>(j)]);
  if (sum > 0.0) {
    const double s = lipschitz / sum;  // sum_{j>=1} |c_j| = L exactly
    for (int j = 1; j <= m; ++j) g.coeffs[static_cast<std::size_t>(j)] *= s;
  }
  g.validate();
  return g;
}

// Random strictly contractive two-layer ReLU network on [-1,1]^dim
// (every node satisfies ||a||_1 + |b| <= 1).
constructive::RationalNetwork random_relu_net(int dim, int width, unsigned seed) {
  std::mt19937_64 rng(seed);
  auto u01 = [&] { return nn::detail::uniform01(rng()); };
  constructive::RationalNetwork net;
  net.input_dim = dim;
  net.output_dim = 1;
  net.domain = {-1.0, 1.0};
  net.activations.resize(2);
  net.activations[0].kind = constructive::Activation::kIdentity;
  net.activations[1].kind = constructive::Activation::kRelu;
  auto make_node = [&](int fan_in, int act) {
    constructive::NetNode node;
    std::vector<double> raw(static_cast<std::size_t>(fan_in) + 1);
    double sum = 0.0;
    for (double& v : raw) {
      v = 2.0 * u01() - 1.0;
      sum += std::abs(v);
    }
    const double s = 0.95 / std::max(sum, 1e-12);
    for (int i = 0; i < fan_in; ++i) {
      node.in.emplace_back(i, raw[static_cast<std::size_t>(i)] * s);
    }
    node.bias = raw.back() * s;
    node.act = act;
    return node;
  };
  constructive::NetLayer hidden, output;
  for (int i = 0; i < width; ++i) hidden.nodes.push_back(make_node(dim, 1));
  output.nodes.push_back(make_node(width, 1));
  net.layers.push_back(std::move(hidden));
  net.layers.push_back(std::move(output));
  return net;
}

void print_net_summary(const constructive::RationalNetwork& net) {
  std::cout << "size: " << net.size() << "\ndepth: " << net.depth()
            << "\naffine_params: " << net.affine_param_count() << "\n";
}

int run_construct(const std::string& kind, int n, int rp, double eps, int m,
                  double lipschitz, int order, int dim, int width, unsigned seed,
                  const std::string& in_path, const std::string& out_path) {
  constructive::RationalNetwork net;
  double certified = 0.0;

  if (kind == "monomial") {
    net = constructive::monomial_network(n, rp);
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double x = -2.0 + 4.0 * nn::detail::uniform01(rng());
      const double want = std::pow(x, n);
      const double got = net.eval1(x);
      const double scale = std::max(1.0, std::abs(want));
      worst = std::max(worst, std::abs(got - want) / scale);
    }
    certified = worst;
    const int lg = static_cast<int>(std::log(static_cast<double>(n)) /
                                        std::log(static_cast<double>(rp)) +
                                    1e-9);
    std::cout << "kind: monomial\nn: " << n << "\nsize_bound: " << 5 * lg * lg + 1
              << "\n";
    print_net_summary(net);
    std::cout << "certified_sup_error: " << io::format17(certified)
              << " (relative, 1000 random points in [-2,2])\n";
  } else if (kind == "piecewise") {
    const constructive::PiecewiseLinear g = random_piecewise(m, lipschitz, seed);
    net = constructive::piecewise_network(g, eps);
    const auto rep = constructive::certify_1d(
        net, [&](double x) { return g.eval(x); }, {0.0, 1.0});
    certified = rep.max_abs_error;
    std::cout << "kind: piecewise\nm: " << m << "\nlipschitz: " << lipschitz
              << "\nepsilon: " << eps << "\n";
    print_net_summary(net);
    std::cout << "certified_sup_error: " << io::format17(certified) << "\n";
  } else if (kind == "taylor") {
    const auto f = [](double x) { return std::exp(x - 1.0); };
    const constructive::DerivFn derivs =
        [](const std::vector<int>&, const std::vector<double>& at) {
          return std::exp(at[0] - 1.0);  // every derivative of exp(x-1)
        };
    net = constructive::taylor_network(derivs, 1, order, eps);
    const auto rep = constructive::certify_1d(net, f, {0.0, 1.0});
    certified = rep.max_abs_error;
    std::cout << "kind: taylor\ntarget: exp(x-1) on [0,1]\norder: " << order
              << "\nepsilon: " << eps
              << "\nresolution: " << constructive::taylor_grid_resolution(1, order, eps)
              << "\n";
    print_net_summary(net);
    std::cout << "certified_sup_error: " << io::format17(certified) << "\n";
  } else if (kind == "ratify") {
    const constructive::RationalNetwork relu_net =
        in_path.empty() ? random_relu_net(dim, width, seed)
                        : io::load_graph_checkpoint(in_path);
    const auto res = constructive::ratify_relu_network(relu_net, eps);
    net = res.net;
    if (relu_net.input_dim == 1) {
      const auto rep = constructive::certify_1d(
          net, [&](double x) { return relu_net.eval1(x); }, {-1.0, 1.0});
      certified = rep.max_abs_error;
    } else if (relu_net.input_dim == 2) {
      const auto rep = constructive::certify_2d(
          net,
          [&](double x, double y) {
            return relu_net.eval({x, y})[0];
          },
          {-1.0, 1.0}, {-1.0, 1.0});
      certified = rep.max_abs_error;
    } else {
      throw RangeError("ratify certification supports input_dim 1 or 2",
                       std::string("1 or 2"));
    }
    std::cout << "kind: ratify\nepsilon: " << eps << "\nreplaced: " << res.replaced
              << "\nstages_per_relu: " << res.stages
              << "\nper_activation_epsilon: " << io::format17(res.per_activation_epsilon)
              << "\ntrainable_params: " << res.trainable_param_count() << "\n";
    print_net_summary(net);
    std::cout << "certified_sup_error: " << io::format17(certified) << "\n";
  } else if (kind == "relu-approx") {
    const zolotarev::ReluApproximant ra = zolotarev::relu_approximant(eps);
    constructive::NetBuilder b(1);
    const constructive::Expr out =
        b.relu_approx(constructive::expr_of(b.input(0)), ra);
    net = b.finish({out}, {-1.0, 1.0});
    const auto rep = constructive::certify_1d(
        net, [](double x) { return x > 0.0 ? x : 0.0; }, {-1.0, 1.0});
    certified = rep.max_abs_error;
    std::cout << "kind: relu-approx\nepsilon: " << eps
              << "\nstages: " << ra.stage_count()
              << "\napproximant_params: " << ra.param_count() << "\n";
    print_net_summary(net);
    std::cout << "certified_sup_error: " << io::format17(certified) << "\n";
  } else {
    throw RangeError("unknown construct kind '" + kind + "'",
                     std::string("monomial, piecewise, taylor, ratify, relu-approx"));
  }

  io::save_checkpoint(net, out_path);
  std::cout << "wrote: " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rational neural networks: construction, certification, training"};
  app.require_subcommand(1);

  // fig1
  std::string fig1_out = "fig1.csv";
  std::vector<std::string> fig1_families = {"zolotarev", "newman", "best_poly"};
  std::vector<std::size_t> fig1_budgets;
  auto* fig1 = app.add_subcommand(
      "fig1", "parameter-budget convergence sweep (CSV: family,param_count,sup_error)");
  fig1->add_option("--out", fig1_out, "output CSV path");
  fig1->add_option("--families", fig1_families,
                   "families to sweep (zolotarev, newman, best_poly)")
      ->delimiter(',');
  fig1->add_option("--budgets", fig1_budgets,
                   "shared parameter budgets (default: per-family sweep)")
      ->delimiter(',');

  // train-compare
  std::string tc_config, tc_out = "train_compare.csv";
  auto* tc = app.add_subcommand(
      "train-compare",
      "train relu/sinusoid/rational/polynomial nets on the synthetic target");
  tc->add_option("config", tc_config, "key=value config file (seed, epochs, "
                                      "batch_size, lr, target, architecture)");
  tc->add_option("--out", tc_out, "output CSV base path (per-activation suffix)");

  // construct
  std::string c_kind, c_in, c_out = "net.ckpt";
  int c_n = 9, c_rp = 3, c_m = 5, c_order = 3, c_dim = 1, c_width = 8;
  double c_eps = 0.1, c_lip = 3.0;
  unsigned c_seed = 0;
  auto* ct = app.add_subcommand("construct",
                                "build a certified rational network and save it");
  ct->add_option("kind", c_kind,
                 "monomial | piecewise | taylor | ratify | relu-approx")
      ->required();
  ct->add_option("--n", c_n, "monomial exponent");
  ct->add_option("--rp", c_rp, "monomial numerator-degree base (>= 2)");
  ct->add_option("--eps", c_eps, "target sup-norm tolerance");
  ct->add_option("--m", c_m, "piecewise: breakpoint count");
  ct->add_option("--lipschitz", c_lip, "piecewise: Lipschitz bound");
  ct->add_option("--order", c_order, "taylor: smoothness order n");
  ct->add_option("--dim", c_dim, "ratify: input dimension of the random net");
  ct->add_option("--width", c_width, "ratify: hidden width of the random net");
  ct->add_option("--seed", c_seed, "seed for the random target network");
  ct->add_option("--in", c_in, "ratify: graph checkpoint to convert");
  ct->add_option("--out", c_out, "checkpoint output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fig1) return run_fig1(fig1_out, fig1_families, fig1_budgets);
    if (*tc) return run_train_compare(tc_config, tc_out);
    if (*ct) {
      if (const char* env = std::getenv("RATNET_SEED")) {
        c_seed = static_cast<unsigned>(std::stoul(env));
      }
      return run_construct(c_kind, c_n, c_rp, c_eps, c_m, c_lip, c_order, c_dim,
                           c_width, c_seed, c_in, c_out);
    }
  } catch (const ratnet::TrainingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

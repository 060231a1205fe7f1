#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "ratnet/classic.hpp"
#include "ratnet/constructive.hpp"
#include "ratnet/errors.hpp"
#include "ratnet/io.hpp"
#include "ratnet/nn.hpp"

using namespace ratnet;

namespace {

std::filesystem::path temp_file(const std::string& stem) {
  return std::filesystem::temp_directory_path() / ("ratnet_test_" + stem);
}

struct FileGuard {
  std::filesystem::path p;
  ~FileGuard() { std::filesystem::remove(p); }
};

}  // namespace

TEST_CASE("format17 round-trips doubles exactly") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> xs = {0.0,    1.0,        -1.0,       0.1,
                            1e-300, 1.2345e300, 0.0218869785};
  for (int i = 0; i < 2000; ++i) xs.push_back(std::ldexp(u(rng), (i % 600) - 300));
  for (double x : xs) {
    const std::string s = io::format17(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
}

TEST_CASE("atomic text write leaves the contents and no temporary") {
  const auto path = temp_file("atomic.txt");
  FileGuard guard{path};
  io::write_text_atomic(path.string(), "hello\nworld\n");
  CHECK(io::read_text(path.string()) == "hello\nworld\n");
  // overwrite in place
  io::write_text_atomic(path.string(), "second\n");
  CHECK(io::read_text(path.string()) == "second\n");
  int leftovers = 0;
  for (const auto& entry :
       std::filesystem::directory_iterator(path.parent_path())) {
    const std::string name = entry.path().filename().string();
    if (name.find("ratnet_test_atomic") != std::string::npos &&
        name != path.filename().string()) {
      ++leftovers;
    }
  }
  CHECK(leftovers == 0);
  CHECK_THROWS_AS(io::read_text((path.parent_path() / "ratnet_missing_xyz").string()),
                  IoError);
}

TEST_CASE("dense checkpoints round-trip bit-exactly") {
  const nn::DenseRationalNet net =
      nn::make_net({2, 8, 5, 1}, nn::ActivationSpec::rational(), 17);
  const auto path = temp_file("dense.ckpt");
  FileGuard guard{path};
  io::save_checkpoint(net, path.string());
  CHECK(io::checkpoint_kind(path.string()) == io::CheckpointKind::kDense);
  const nn::DenseRationalNet back = io::load_dense_checkpoint(path.string());

  REQUIRE(back.layer_dims == net.layer_dims);
  REQUIRE(back.weights.size() == net.weights.size());
  for (std::size_t i = 0; i < net.weights.size(); ++i) {
    CHECK((back.weights[i] - net.weights[i]).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.biases[i] - net.biases[i]).cwiseAbs().maxCoeff() == 0.0);
  }
  REQUIRE(back.activations.size() == net.activations.size());
  for (std::size_t i = 0; i < net.activations.size(); ++i) {
    CHECK(back.activations[i].kind == net.activations[i].kind);
    CHECK(back.activations[i].params == net.activations[i].params);  // bitwise
  }

  // forward agreement on random inputs (the contract that matters)
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXd x(2);
    x << u(rng), u(rng);
    CHECK(nn::forward_one(back, x) == nn::forward_one(net, x));
  }

  // every activation family serializes
  for (auto spec : {nn::ActivationSpec::relu(), nn::ActivationSpec::sinusoid(),
                    nn::ActivationSpec::polynomial()}) {
    const nn::DenseRationalNet n2 = nn::make_net({1, 3, 1}, spec, 2);
    io::save_checkpoint(n2, path.string());
    const nn::DenseRationalNet b2 = io::load_dense_checkpoint(path.string());
    CHECK(b2.activations[0].kind == spec.kind);
    CHECK(b2.activations[0].params == spec.params);
  }
}

TEST_CASE("graph checkpoints round-trip bit-exactly") {
  constructive::PiecewiseLinear g;
  g.breakpoints = {0.25, 0.7};
  g.coeffs = {0.3, -0.4, 0.5, 0.1};
  g.lipschitz = 1.0;
  const constructive::RationalNetwork net =
      constructive::piecewise_network(g, 1e-2);

  const auto path = temp_file("graph.ckpt");
  FileGuard guard{path};
  io::save_checkpoint(net, path.string());
  CHECK(io::checkpoint_kind(path.string()) == io::CheckpointKind::kGraph);
  const constructive::RationalNetwork back =
      io::load_graph_checkpoint(path.string());

  CHECK(back.input_dim == net.input_dim);
  CHECK(back.output_dim == net.output_dim);
  CHECK(back.domain.lo == net.domain.lo);
  CHECK(back.domain.hi == net.domain.hi);
  CHECK(back.size() == net.size());
  CHECK(back.depth() == net.depth());
  REQUIRE(back.activations.size() == net.activations.size());
  for (std::size_t i = 0; i < net.activations.size(); ++i) {
    CHECK(back.activations[i].kind == net.activations[i].kind);
    CHECK(back.activations[i].r.numer == net.activations[i].r.numer);
    CHECK(back.activations[i].r.denom == net.activations[i].r.denom);
  }
  for (int i = 0; i <= 100; ++i) {
    const double x = static_cast<double>(i) / 100.0;
    CHECK(back.eval1(x) == net.eval1(x));  // bitwise-identical evaluation
  }

  // loading with the wrong reader throws
  CHECK_THROWS_AS(io::load_dense_checkpoint(path.string()), IoError);
}

TEST_CASE("checkpoint loader rejects malformed files") {
  const auto path = temp_file("bad.ckpt");
  FileGuard guard{path};

  io::write_text_atomic(path.string(), "not-a-checkpoint\n");
  CHECK_THROWS_AS(io::checkpoint_kind(path.string()), IoError);
  CHECK_THROWS_AS(io::load_dense_checkpoint(path.string()), IoError);

  CHECK_THROWS_AS(io::checkpoint_kind("/nonexistent/nowhere.ckpt"), IoError);

  // truncation: write a valid dense checkpoint, chop it in half
  const nn::DenseRationalNet net =
      nn::make_net({2, 4, 1}, nn::ActivationSpec::rational(), 5);
  io::save_checkpoint(net, path.string());
  const std::string full = io::read_text(path.string());
  io::write_text_atomic(path.string(), full.substr(0, full.size() / 2));
  CHECK_THROWS_AS(io::load_dense_checkpoint(path.string()), IoError);

  // unknown activation name
  std::string tampered = full;
  const auto at = tampered.find("rational");
  REQUIRE(at != std::string::npos);
  tampered.replace(at, 8, "mystery8");
  io::write_text_atomic(path.string(), tampered);
  CHECK_THROWS_AS(io::load_dense_checkpoint(path.string()), IoError);
}

TEST_CASE("convergence CSV prints the documented header and rows") {
  std::vector<classic::ConvergenceRow> rows = {
      {classic::Family::zolotarev, 7, 0.0425},
      {classic::Family::newman, 14, 0.0065713628},
      {classic::Family::best_poly, 5, 0.25},
  };
  const std::string csv = io::convergence_csv(rows);
  const std::string first = csv.substr(0, csv.find('\n'));
  CHECK(first == "family,param_count,sup_error");
  CHECK(csv.find("zolotarev,7,") != std::string::npos);
  CHECK(csv.find("newman,14,") != std::string::npos);
  CHECK(csv.find("best_poly,5,0.25") != std::string::npos);
  // written file matches the in-memory string
  const auto path = temp_file("conv.csv");
  FileGuard guard{path};
  io::write_convergence_csv(path.string(), rows);
  CHECK(io::read_text(path.string()) == csv);
}

TEST_CASE("history CSV counts epochs from zero") {
  std::vector<nn::EpochStats> rows = {{0.5, 0.6}, {0.25, 0.3}};
  const std::string csv = io::history_csv(rows);
  CHECK(csv.substr(0, csv.find('\n')) == "epoch,train_mse,val_mse");
  CHECK(csv.find("\n0,0.5,0.59999999999999998\n") != std::string::npos);
  CHECK(csv.find("\n1,0.25,0.29999999999999999\n") != std::string::npos);
  CHECK(io::history_csv({}).find("epoch,train_mse,val_mse") == 0);
}

TEST_CASE("config parsing: comments, whitespace, typed getters") {
  const std::string text =
      "# training setup\n"
      "seed = 42\n"
      "epochs=500   # inline comment\n"
      "  learning_rate =  1e-3\n"
      "\n"
      "name = sin2d run\n";
  const io::Config cfg = io::parse_config(text);
  CHECK(cfg.has("seed"));
  CHECK_FALSE(cfg.has("missing"));
  CHECK(cfg.get_unsigned("seed", 0) == 42u);
  CHECK(cfg.get_int("epochs", -1) == 500);
  CHECK(cfg.get_double("learning_rate", 0.0) == 1e-3);
  CHECK(cfg.get("name", "") == "sin2d run");
  CHECK(cfg.get_int("absent", 7) == 7);
  CHECK(cfg.get("absent", "dflt") == "dflt");

  CHECK_THROWS_AS(io::parse_config("just a line without equals\n"), IoError);
  CHECK_THROWS_AS(io::parse_config("= value\n"), IoError);
  const io::Config bad = io::parse_config("epochs = soon\n");
  CHECK_THROWS_AS(bad.get_int("epochs", 0), IoError);
  CHECK_THROWS_AS(bad.get_double("epochs", 0.0), IoError);

  const auto path = temp_file("cfg.txt");
  FileGuard guard{path};
  io::write_text_atomic(path.string(), text);
  CHECK(io::load_config(path.string()).get_int("epochs", -1) == 500);
  CHECK_THROWS_AS(io::load_config("/nonexistent/nowhere.cfg"), IoError);
}

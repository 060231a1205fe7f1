#include "ratnet/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ratnet/errors.hpp"

namespace ratnet::io {

std::string format17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw IoError("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw IoError("rename failed: " + tmp + " -> " + path + " (" +
                  std::strerror(errno) + ")");
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ----- checkpoints ----------------------------------------------------------

namespace {

constexpr const char* kMagic = "ratnet-v1";

const char* dense_act_name(const nn::ActivationSpec& a) {
  switch (a.kind) {
    case nn::ActivationSpec::kRational: return "rational";
    case nn::ActivationSpec::kRelu: return "relu";
    case nn::ActivationSpec::kSinusoid: return "sinusoid";
    case nn::ActivationSpec::kPolynomial: return "polynomial";
  }
  return "relu";
}

nn::ActivationSpec dense_act_from(const std::string& name) {
  if (name == "rational") return {nn::ActivationSpec::kRational, {}};
  if (name == "relu") return {nn::ActivationSpec::kRelu, {}};
  if (name == "sinusoid") return {nn::ActivationSpec::kSinusoid, {}};
  if (name == "polynomial") return {nn::ActivationSpec::kPolynomial, {}};
  throw IoError("checkpoint: unknown activation kind '" + name + "'");
}

// Keyword-driven tokenizer over the full file contents.
class Parser {
 public:
  Parser(std::string text, std::string path)
      : ss_(std::move(text)), path_(std::move(path)) {}

  std::string word() {
    std::string w;
    if (!(ss_ >> w)) fail("unexpected end of file");
    return w;
  }
  void expect(const std::string& kw) {
    const std::string w = word();
    if (w != kw) fail("expected '" + kw + "', got '" + w + "'");
  }
  long integer() {
    const std::string w = word();
    try {
      std::size_t pos = 0;
      const long v = std::stol(w, &pos);
      if (pos != w.size()) throw std::invalid_argument(w);
      return v;
    } catch (const std::exception&) {
      fail("expected integer, got '" + w + "'");
    }
    return 0;
  }
  double real() {
    const std::string w = word();
    try {
      std::size_t pos = 0;
      const double v = std::stod(w, &pos);
      if (pos != w.size()) throw std::invalid_argument(w);
      return v;
    } catch (const std::exception&) {
      fail("expected number, got '" + w + "'");
    }
    return 0.0;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw IoError("checkpoint " + path_ + ": " + msg);
  }

 private:
  std::istringstream ss_;
  std::string path_;
};

}  // namespace

void save_checkpoint(const nn::DenseRationalNet& net, const std::string& path) {
  std::ostringstream out;
  out << kMagic << "\ndense\ndims";
  for (int d : net.layer_dims) out << ' ' << d;
  out << '\n';
  const std::size_t L = net.weights.size();
  for (std::size_t i = 0; i < L; ++i) {
    const auto& W = net.weights[i];
    out << "layer " << i << '\n';
    out << "W " << W.rows() << ' ' << W.cols() << '\n';
    for (Eigen::Index r = 0; r < W.rows(); ++r) {
      for (Eigen::Index c = 0; c < W.cols(); ++c) {
        out << (c ? " " : "") << format17(W(r, c));
      }
      out << '\n';
    }
    out << "b " << net.biases[i].size() << '\n';
    for (Eigen::Index r = 0; r < net.biases[i].size(); ++r) {
      out << (r ? " " : "") << format17(net.biases[i](r));
    }
    out << '\n';
    if (i + 1 < L) {
      const auto& a = net.activations[i];
      out << "act " << dense_act_name(a) << ' ' << a.params.size();
      for (double p : a.params) out << ' ' << format17(p);
      out << '\n';
    } else {
      out << "act linear 0\n";
    }
  }
  out << "end\n";
  write_text_atomic(path, out.str());
}

void save_checkpoint(const constructive::RationalNetwork& net,
                     const std::string& path) {
  std::ostringstream out;
  out << kMagic << "\ngraph\n";
  out << "input_dim " << net.input_dim << '\n';
  out << "output_dim " << net.output_dim << '\n';
  out << "domain " << format17(net.domain.lo) << ' ' << format17(net.domain.hi)
      << '\n';
  out << "activations " << net.activations.size() << '\n';
  for (std::size_t i = 0; i < net.activations.size(); ++i) {
    const auto& a = net.activations[i];
    out << "act " << i << ' ';
    switch (a.kind) {
      case constructive::Activation::kIdentity: out << "identity"; break;
      case constructive::Activation::kRelu: out << "relu"; break;
      case constructive::Activation::kRational: {
        out << "rational " << a.r.numer.size() << ' ' << a.r.denom.size();
        for (double c : a.r.numer) out << ' ' << format17(c);
        for (double c : a.r.denom) out << ' ' << format17(c);
        break;
      }
    }
    out << '\n';
  }
  out << "layers " << net.layers.size() << '\n';
  for (std::size_t li = 0; li < net.layers.size(); ++li) {
    const auto& layer = net.layers[li];
    out << "layer " << li << ' ' << layer.nodes.size() << '\n';
    for (const auto& node : layer.nodes) {
      out << "node " << node.in.size();
      for (const auto& [src, w] : node.in) {
        out << ' ' << src << ' ' << format17(w);
      }
      out << ' ' << format17(node.bias) << ' ' << node.act << '\n';
    }
  }
  out << "end\n";
  write_text_atomic(path, out.str());
}

CheckpointKind checkpoint_kind(const std::string& path) {
  Parser p(read_text(path), path);
  p.expect(kMagic);
  const std::string kind = p.word();
  if (kind == "dense") return CheckpointKind::kDense;
  if (kind == "graph") return CheckpointKind::kGraph;
  p.fail("unknown checkpoint kind '" + kind + "'");
}

nn::DenseRationalNet load_dense_checkpoint(const std::string& path) {
  Parser p(read_text(path), path);
  p.expect(kMagic);
  p.expect("dense");
  p.expect("dims");
  nn::DenseRationalNet net;
  // dims count is implied by the layer blocks; read ints until "layer"
  std::vector<int> dims;
  std::string w;
  for (;;) {
    w = p.word();
    if (w == "layer") break;
    try {
      dims.push_back(std::stoi(w));
    } catch (const std::exception&) {
      p.fail("expected dimension or 'layer', got '" + w + "'");
    }
  }
  if (dims.size() < 2) p.fail("needs at least two dims");
  net.layer_dims = dims;
  const std::size_t L = dims.size() - 1;
  for (std::size_t i = 0; i < L; ++i) {
    if (i > 0) p.expect("layer");
    const long li = p.integer();
    if (li != static_cast<long>(i)) p.fail("layer blocks out of order");
    p.expect("W");
    const long rows = p.integer(), cols = p.integer();
    if (rows != dims[i + 1] || cols != dims[i]) p.fail("weight shape mismatch");
    Eigen::MatrixXd W(rows, cols);
    for (long r = 0; r < rows; ++r) {
      for (long c = 0; c < cols; ++c) W(r, c) = p.real();
    }
    net.weights.push_back(std::move(W));
    p.expect("b");
    const long bn = p.integer();
    if (bn != dims[i + 1]) p.fail("bias length mismatch");
    Eigen::VectorXd b(bn);
    for (long r = 0; r < bn; ++r) b(r) = p.real();
    net.biases.push_back(std::move(b));
    p.expect("act");
    const std::string name = p.word();
    const long np = p.integer();
    if (i + 1 < L) {
      nn::ActivationSpec a = dense_act_from(name);
      a.params.resize(static_cast<std::size_t>(np));
      for (long j = 0; j < np; ++j) a.params[static_cast<std::size_t>(j)] = p.real();
      net.activations.push_back(std::move(a));
    } else {
      if (name != "linear" || np != 0) p.fail("output layer must be linear");
    }
  }
  p.expect("end");
  return net;
}

constructive::RationalNetwork load_graph_checkpoint(const std::string& path) {
  Parser p(read_text(path), path);
  p.expect(kMagic);
  p.expect("graph");
  constructive::RationalNetwork net;
  p.expect("input_dim");
  net.input_dim = static_cast<int>(p.integer());
  p.expect("output_dim");
  net.output_dim = static_cast<int>(p.integer());
  p.expect("domain");
  net.domain.lo = p.real();
  net.domain.hi = p.real();
  p.expect("activations");
  const long na = p.integer();
  net.activations.clear();
  for (long i = 0; i < na; ++i) {
    p.expect("act");
    if (p.integer() != i) p.fail("activation table out of order");
    const std::string kind = p.word();
    constructive::Activation a;
    if (kind == "identity") {
      a.kind = constructive::Activation::kIdentity;
    } else if (kind == "relu") {
      a.kind = constructive::Activation::kRelu;
    } else if (kind == "rational") {
      a.kind = constructive::Activation::kRational;
      const long nn_ = p.integer(), nd = p.integer();
      std::vector<double> numer, denom;
      for (long j = 0; j < nn_; ++j) numer.push_back(p.real());
      for (long j = 0; j < nd; ++j) denom.push_back(p.real());
      a.r = RationalFunction(numer, denom);
    } else {
      p.fail("unknown activation kind '" + kind + "'");
    }
    net.activations.push_back(std::move(a));
  }
  p.expect("layers");
  const long nl = p.integer();
  for (long li = 0; li < nl; ++li) {
    p.expect("layer");
    if (p.integer() != li) p.fail("layer blocks out of order");
    const long nodes = p.integer();
    constructive::NetLayer layer;
    for (long ni = 0; ni < nodes; ++ni) {
      p.expect("node");
      constructive::NetNode node;
      const long nin = p.integer();
      for (long j = 0; j < nin; ++j) {
        const int src = static_cast<int>(p.integer());
        const double wt = p.real();
        node.in.emplace_back(src, wt);
      }
      node.bias = p.real();
      node.act = static_cast<int>(p.integer());
      if (node.act < 0 || node.act >= static_cast<int>(net.activations.size())) {
        p.fail("node references unknown activation");
      }
      layer.nodes.push_back(std::move(node));
    }
    net.layers.push_back(std::move(layer));
  }
  p.expect("end");
  return net;
}

// ----- CSV -------------------------------------------------------------------

std::string convergence_csv(const std::vector<classic::ConvergenceRow>& rows) {
  std::ostringstream out;
  out << "family,param_count,sup_error\n";
  for (const auto& r : rows) {
    out << classic::family_name(r.family) << ',' << r.param_count << ','
        << format17(r.sup_error) << '\n';
  }
  return out.str();
}

std::string history_csv(const std::vector<nn::EpochStats>& rows) {
  std::ostringstream out;
  out << "epoch,train_mse,val_mse\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << i << ',' << format17(rows[i].train_mse) << ','
        << format17(rows[i].val_mse) << '\n';
  }
  return out.str();
}

void write_convergence_csv(const std::string& path,
                           const std::vector<classic::ConvergenceRow>& rows) {
  write_text_atomic(path, convergence_csv(rows));
}

void write_history_csv(const std::string& path,
                       const std::vector<nn::EpochStats>& rows) {
  write_text_atomic(path, history_csv(rows));
}

// ----- config ----------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

bool Config::has(const std::string& key) const { return values.count(key) > 0; }

std::string Config::get(const std::string& key, const std::string& fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

int Config::get_int(const std::string& key, int fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  try {
    return std::stoi(it->second);
  } catch (const std::exception&) {
    throw IoError("config: key '" + key + "' is not an integer: " + it->second);
  }
}

unsigned Config::get_unsigned(const std::string& key, unsigned fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  try {
    return static_cast<unsigned>(std::stoul(it->second));
  } catch (const std::exception&) {
    throw IoError("config: key '" + key + "' is not unsigned: " + it->second);
  }
}

double Config::get_double(const std::string& key, double fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw IoError("config: key '" + key + "' is not a number: " + it->second);
  }
}

Config parse_config(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw IoError("config line " + std::to_string(lineno) +
                    ": expected key=value, got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw IoError("config line " + std::to_string(lineno) + ": empty key");
    }
    cfg.values[key] = value;
  }
  return cfg;
}

Config load_config(const std::string& path) {
  return parse_config(read_text(path));
}

}  // namespace ratnet::io

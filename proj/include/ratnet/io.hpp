#pragma once

#include <map>
#include <string>
#include <vector>

#include "ratnet/classic.hpp"
#include "ratnet/constructive.hpp"
#include "ratnet/nn.hpp"

namespace ratnet::io {

// Decimal with 17 significant digits; round-trips IEEE doubles exactly.
std::string format17(double v);

// Write-temp-then-rename so readers never observe a partial file.
void write_text_atomic(const std::string& path, const std::string& contents);

std::string read_text(const std::string& path);

// ----- checkpoints ----------------------------------------------------------
// Line-oriented text, header "ratnet-v1", then "dense" (trainable nets:
// per-layer row-major weight block, bias line, activation kind + coefficients)
// or "graph" (constructive nets: activation table, then sparse node rows).

enum class CheckpointKind { kDense, kGraph };

void save_checkpoint(const nn::DenseRationalNet& net, const std::string& path);
void save_checkpoint(const constructive::RationalNetwork& net,
                     const std::string& path);

CheckpointKind checkpoint_kind(const std::string& path);

nn::DenseRationalNet load_dense_checkpoint(const std::string& path);
constructive::RationalNetwork load_graph_checkpoint(const std::string& path);

// ----- CSV -------------------------------------------------------------------

// header: family,param_count,sup_error
std::string convergence_csv(const std::vector<classic::ConvergenceRow>& rows);
// header: epoch,train_mse,val_mse (epoch counted from 0)
std::string history_csv(const std::vector<nn::EpochStats>& rows);

void write_convergence_csv(const std::string& path,
                           const std::vector<classic::ConvergenceRow>& rows);
void write_history_csv(const std::string& path,
                       const std::vector<nn::EpochStats>& rows);

// ----- config ----------------------------------------------------------------
// Plain-text `key = value` lines; `#` starts a comment; blank lines ignored.

struct Config {
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  int get_int(const std::string& key, int fallback) const;
  unsigned get_unsigned(const std::string& key, unsigned fallback) const;
  double get_double(const std::string& key, double fallback) const;
};

Config parse_config(const std::string& text);
Config load_config(const std::string& path);

}  // namespace ratnet::io

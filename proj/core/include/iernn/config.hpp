#pragma once

#include "iernn/expr.hpp"
#include "iernn/harness.hpp"
#include "iernn/theorems.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace iernn {

inline constexpr int kSchemaVersion = 1;

/// Small time-varying QP given as coefficient expressions in t.
struct SolveConfig
{
  enum class Start { solution, random, given };

  int n = 0;
  int m = 0;
  std::vector<std::vector<Expr>> Q;  // n x n
  std::vector<Expr> P;               // n
  std::vector<std::vector<Expr>> J;  // m x n
  std::vector<Expr> B;               // m
  double duration = 5.0;             // s
  long sample_every = 100;           // steps
  Start start = Start::random;
  double start_spread = 0.5;         // half-width of the uniform offset, random start only
  Vec y0;                            // given start only
  std::uint64_t seed = 1;

  TimeVaryingQP qp() const;
};

struct OutputConfig
{
  std::string dir;  // empty: --out, then the IERNN_OUT_DIR environment variable
  bool plot_script = true;
};

struct RunConfig
{
  int schema_version = kSchemaVersion;
  std::string name = "run";
  std::vector<Variant> variants{Variant::ie_rnn};
  NeuralConfig solver;
  NoiseModel noise;
  std::optional<TrackingConfig> track;
  VerifyPlan verify;
  std::optional<SolveConfig> solve;
  OutputConfig output;

  /// Applies a seed override to both the tracking run and the solve start.
  void set_seed(std::uint64_t seed);
};

/// Parses a JSON run document. Every failure is a ConfigError whose message
/// starts with the dotted key path, e.g. "track.path.scale: must be > 0".
/// Relative chain-file paths are resolved against base_dir.
RunConfig parse_run_config(const std::string& text, const std::string& base_dir = ".");
RunConfig load_run_config(const std::string& path);

/// "ie", "z" or "both".
std::vector<Variant> parse_variants(const std::string& s);
std::string variant_tag(Variant v);

}  // namespace iernn

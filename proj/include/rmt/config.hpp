#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "rmt/ensembles.hpp"
#include "rmt/laws.hpp"
#include "rmt/montecarlo.hpp"

namespace rmt {

enum class Command { simulate, theory, laws, volterra, report };

std::string to_string(Command cmd);
Command command_from_string(std::string_view name);

struct LawsRequest {
  LimitLaw law;
  int points = 401;
};

struct VolterraRequest {
  double w = 1.0;
  double x = 1.0;
  double kappa4 = 0.0;
  double step = 1.0 / 200.0;
  double horizon = 20.0;
  int order = 128;
};

/// Validated configuration for one subcommand.
///
/// Schema (all keys optional unless the subcommand needs them):
///   ensemble:      {family, n, w2 | a2, m | c, entry, diag}
///                  entry/diag laws: {kind: gaussian|rademacher|uniform|table,
///                  variance | halfwidth | atoms: [[x, p], ...]}; without a scale the
///                  law takes the ensemble variance (2 w2 for diag).
///   test_function: {name, <numeric parameters>}
///   replicas, seed, n_grid, workers, order
///   laws:          {law: semicircle|marchenko_pastur, w2 | a2, c, points}
///   volterra:      {h, T, x, kappa4, order}
struct LabConfig {
  Command command = Command::simulate;
  std::optional<EnsembleSpec> ensemble;
  std::optional<TestFunctionSpec> test_function;
  int replicas = 0;
  std::uint64_t seed = 0;
  std::vector<int> n_grid;
  std::optional<int> workers;
  int order = 128;
  std::optional<LawsRequest> laws;
  std::optional<VolterraRequest> volterra;

  /// Canonical JSON of the resolved configuration (defaults filled, workers omitted).
  std::string resolved_json;
  /// FNV-1a 64 of resolved_json as 16 hex digits.
  std::string hash;

  ExperimentConfig experiment(int workers) const;
};

/// Parses and validates a JSON config for `cmd`, after applying key=value
/// overrides (dotted keys address nested objects; values are parsed as JSON,
/// falling back to strings). Throws ConfigError naming the offending key.
LabConfig parse_config(std::string_view text, Command cmd,
                       std::span<const std::string> overrides = {});

/// 64-bit FNV-1a hash as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view data);

}  // namespace rmt

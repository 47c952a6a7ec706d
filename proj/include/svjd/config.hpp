#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "svjd/american.hpp"
#include "svjd/fourier.hpp"
#include "svjd/mc.hpp"
#include "svjd/model.hpp"

namespace svjd {

/// Sweep bounds for the convergence command; zero selects the axis default.
struct SweepConfig {
  double start = 0.0;
  double stop = 0.0;
  double factor = 2.0;
};

/// Everything a run needs, read from a v1 JSON config.
struct RunConfig {
  MarketModel model;
  double t = 0.0;
  double T = 1.0;
  double K = 0.0;
  std::uint64_t seed = 42;
  QuadratureConfig quad;
  SimConfig sim;  ///< seed filled from the top-level seed
  LSMConfig american;
  SweepConfig sweep;
  std::string canonical;  ///< defaults-filled config, sorted keys
  std::string hash;       ///< FNV-1a of canonical, 16 hex digits
};

using Override = std::pair<std::string, std::string>;

/// Splits "a.b.c=value" into its key path and value.
Override parse_override(const std::string& text);

/// Parses a v1 config. Unknown keys and type mismatches throw ValidationError;
/// missing keys take their defaults. Overrides name existing dotted keys and
/// are applied before the model is validated.
RunConfig load_config(const std::string& json_text, const std::vector<Override>& overrides = {});
RunConfig load_config_file(const std::string& path, const std::vector<Override>& overrides = {});

/// The fully defaulted config tree as pretty JSON.
std::string default_config_json();

std::string fnv1a_hex(const std::string& data);

/// Prefixes relative paths with $SVJD_OUTPUT_DIR when it is set.
std::string resolve_output_path(const std::string& path);

}  // namespace svjd

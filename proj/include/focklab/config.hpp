// config.hpp - experiment configuration loading (TOML subset or JSON)
//
// The TOML reader covers the subset used by experiment files: comments,
// one-level [tables], and key = scalar / (nested) array bindings.  JSON
// configs use the same schema; validation errors carry JSON-pointer-style
// paths.

#pragma once

#include <optional>
#include <string>

#include "focklab/equivalence.hpp"
#include "focklab/lattice_field.hpp"

namespace focklab {

struct ConfigError : std::runtime_error {
  std::string pointer;  // e.g. "/ensemble/weights"
  ConfigError(const std::string& msg, const std::string& pointer_)
      : std::runtime_error(msg + " at " + pointer_), pointer(pointer_) {}
};

// seeded uniform sampler over [-amplitude, amplitude]^(2 modes)
struct SamplerSpec {
  unsigned points = 1;
  double amplitude = 0.5;
};

struct ExperimentConfig {
  unsigned modes = 1;
  unsigned cutoff = 30;
  std::optional<LatticeSpec> lattice;
  std::string hamiltonian;
  std::optional<Ensemble> ensemble;
  std::optional<SamplerSpec> sampler;
  double t_max = 10.0;
  double dt = 1e-3;
  unsigned sample_stride = 100;
  unsigned derivative_orders = 3;
  double tolerance = 1e-6;
  uint64_t seed = 0;
};

ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig config_from_toml(const std::string& text);
// dispatches on extension: .json -> JSON, anything else -> TOML
ExperimentConfig load_config(const std::string& path);

// the configured ensemble, drawing from the seeded sampler when no
// explicit points are given
Ensemble realize_ensemble(const ExperimentConfig& config);

EquivalenceConfig to_equivalence_config(const ExperimentConfig& config);

}  // namespace focklab

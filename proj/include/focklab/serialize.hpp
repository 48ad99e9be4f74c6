// serialize.hpp - deterministic JSON/CSV emission and parsing
//
// Every double is printed with %.17g so that identical inputs produce
// byte-identical files; object keys are emitted in a fixed order.  Parsing
// is delegated to nlohmann::json (determinism only matters on the way out).

#pragma once

#include <string>

#include "focklab/equivalence.hpp"
#include "focklab/lattice_field.hpp"

namespace focklab {

std::string format_double(double x);  // %.17g
std::string json_escape(const std::string& s);

struct StoredState {
  unsigned a_modes = 0;
  unsigned b_modes = 0;
  unsigned cutoff = 0;
  Eigen::VectorXcd amplitudes;
};

// schema: { "modes", "b_modes", "cutoff", "layout": "mixed-radix-lsb",
//           "re": [...], "im": [...] }
std::string state_to_json(const FockSpace& space, const Eigen::VectorXcd& v);
StoredState state_from_json(const std::string& text);

// row-major nested arrays: { "modes", "b_modes", "cutoff", "layout",
//                            "re": [[...]], "im": [[...]] }
std::string density_to_json(const FockSpace& space, const Eigen::MatrixXcd& rho);

// { "d", "M", "dx", "fields", "masses": [...], "phi": [[...]], "pi": [[...]] }
std::string lattice_state_to_json(const LatticeSpec& spec,
                                  const LatticeState& state);
std::pair<LatticeSpec, LatticeState> lattice_state_from_json(
    const std::string& text);

std::string ensemble_to_json(const Ensemble& ens);
Ensemble ensemble_from_json(const std::string& text);

// full run report; "version" stamps the writer so byte-identity is scoped
// to (config, seed, version)
inline constexpr const char* kFocklabVersion = "focklab 1.0.0";

std::string report_to_json(const EquivalenceReport& report);
// one row per (time, mode):
// t,mode,classical_phi,classical_pi,quantum_phi,quantum_pi,gap_phi,gap_pi
std::string report_to_csv(const EquivalenceReport& report);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace focklab

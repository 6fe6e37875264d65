#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "aklab/structure.hpp"

namespace aklab {

/// Malformed or inconsistent configuration; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PotentialSpec {
  enum class Kind { Flat, Modes, Random };
  Kind kind = Kind::Flat;
  std::vector<PotentialMode> modes;
  int cutoff = 0;          // random only
  double amplitude = 0.0;  // random only
};

/// Tangent vector recipe: JP(f) or P(f) of a single Fourier mode, or [J, a] for a random sp(2m) field a.
struct TangentSpec {
  enum class Kind { JPMode, PMode, Random };
  Kind kind = Kind::JPMode;
  std::vector<int> k;          // empty selects (1, 0, ...)
  bool sine = true;
  double amplitude = 1.0;
  int cutoff = 1;              // random only
  std::uint64_t seed_offset = 0;
};

struct Tolerances {
  double battery = 1e-7;
  double adjoint = 1e-7;
  double mohsen = 1e-5;
  double lichnerowicz = 1e-5;
  double salamon = 1e-7;
  double anti_self_adjoint = 1e-9;
  double hessian = 1e-4;
  double symbol = 1e-10;
  double homogeneity = 1e-12;
  double parabolicity = 1e-12;
  double structure = 1e-10;
  double geodesic = 1e-8;
  double monotone = 1e-12;
};

struct RunConfig {
  int m = 1;
  int n = 32;
  std::uint64_t seed = 1;
  PotentialSpec potential;
  Tolerances tolerances;

  int input_cutoff = 2;  // band limit of random test functions
  int pairs = 20;        // random (f, v) pairs for adjointness

  double dt = 0.0;       // 0 selects c_cfl * h^4
  int steps = 100;
  double c_cfl = 0.0;    // 0 selects the library default
  std::vector<double> fd_steps{1e-2, 5e-3, 2.5e-3};

  TangentSpec u;
  TangentSpec v;
  double geodesic_T = 1.0;
  double geodesic_dt = 1e-3;

  std::vector<int> symbol_k{1, 2};
  int symbol_samples = 1000;

  std::string out_dir = ".";
  std::string report_file = "report.json";
  std::string trace_file = "flow.csv";
};

/// Parses the JSON schema documented in the README. Unknown keys and invariant violations throw ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Canonical JSON echo of every field, including defaults.
std::string config_to_json(const RunConfig& config);
/// Checks n, mode cutoffs, dt and steps; throws ConfigError.
void validate(const RunConfig& config);

/// Builds the initial structure and tangent probes from a config.
AKStructure build_structure(const RunConfig& config);
TangentField build_tangent(const RunConfig& config, const TangentSpec& spec, const AKStructure& J);

}  // namespace aklab

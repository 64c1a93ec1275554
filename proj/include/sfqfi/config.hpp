#pragma once

#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "sfqfi/incoherent.hpp"
#include "sfqfi/pipeline.hpp"

namespace sfqfi {

/// Configuration error carrying the offending key path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Flat key tree: dotted paths to raw string values.
using KeyTree = std::map<std::string, std::string>;

/// Parses `key.path = value` lines. `[section]` headers prefix the keys that
/// follow; `#` starts a comment; blank lines are ignored. Duplicate keys are
/// an error.
KeyTree parse_key_tree(std::istream& in);
KeyTree parse_key_tree_string(const std::string& text);

struct SweepSpec {
  enum class Variable { Time, Cycles, Intensity, Dp, DE };
  Variable variable = Variable::Time;
  double from = 0.0;
  double to = 0.0;
  int points = 0;  // time sweeps: 0 takes every vector-potential zero in range
  bool log_spacing = false;
};
const char* to_string(SweepSpec::Variable v);

struct OutputSpec {
  std::string path;         // empty: stdout
  std::string format = "csv";
};

/// Outcome set used for the incoherent layers.
enum class EnsemblePovm { Full, Coarse, Yield };

struct RunConfig {
  RunSpec run;
  double intensity_wcm2 = 2e14;
  double wavelength_nm = 800.0;
  double cycles_fwhm = 0.0;  // 0 for monochromatic
  std::optional<SweepSpec> sweep;
  EnsembleSpec ensemble;
  EnsemblePovm ensemble_povm = EnsemblePovm::Coarse;
  double focal_w0_um = 0.0;
  double focal_z0_um = 0.0;
  int threads = 0;  // 0: hardware parallelism
  OutputSpec output;

  bool ensemble_enabled() const { return ensemble.focal || ensemble.cep_n_phi || ensemble.fluct; }
};

/// Builds and validates a run configuration. Unknown keys, malformed values
/// and violated invariants raise ConfigError naming the key.
RunConfig load_config(const KeyTree& tree);

/// Reads a file; the SFQFI_OUTPUT environment variable, when set, replaces
/// output.path.
RunConfig load_config_file(const std::string& path);

/// Same configuration at another peak intensity / pulse length.
RunSpec spec_at_intensity(const RunConfig& cfg, double intensity_wcm2);
RunSpec spec_at_cycles(const RunConfig& cfg, double cycles_fwhm);

}  // namespace sfqfi

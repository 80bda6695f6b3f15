#pragma once
//
// Experiment configs: INI-style text with [surface], [surface_tilde],
// [isometry], [pair], [quadrature], [tolerances] and [suite] sections.
// Unknown sections or keys are rejected so typos fail loudly.

#include "dsrig/ambient.hpp"
#include "dsrig/hypersurface.hpp"
#include "dsrig/surface.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace dsrig::cli {

struct SurfaceSpec {
  std::string kind;  ///< slice | perturbed_slice | harmonic_sum
  AnalyticDescriptor descriptor;
  /// When set, the analytic surface is sampled on this (n_theta, n_phi)
  /// grid and used through the SampledGrid backend.
  std::optional<std::pair<int, int>> sampled_grid;

  GraphSurface build() const;
};

struct IsometrySpec {
  std::string kind = "identity";  ///< identity | rotation | boost | reflect_equator
  double rapidity = 0.0;
  double angle = 0.0;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitX();

  AmbientIsometry build() const;
};

/// Named tolerances with their defaults; overrides must use these names.
class Tolerances {
 public:
  Tolerances();
  double get(const std::string& name) const;
  void set(const std::string& name, double value);  ///< ConfigError on unknown names
  const std::map<std::string, double>& all() const { return values_; }

 private:
  std::map<std::string, double> values_;
};

inline constexpr double kMaxRapidity = 1.0;
inline constexpr int kMinQuadrature = 16;

struct ExperimentConfig {
  std::optional<SurfaceSpec> surface;
  std::optional<SurfaceSpec> surface_tilde;
  std::optional<IsometrySpec> isometry;
  std::string pair_mode = "ambient";  ///< ambient | chart_identity
  int n_theta = 64;
  int n_phi = 128;
  Tolerances tolerances;
  std::set<std::string> suite;  ///< selected geometry checks; empty = all
  unsigned seed = 20240229;

  bool selected(const std::string& check) const { return suite.empty() || suite.count(check) > 0; }

  /// Throws ConfigError when the single-surface requirements fail.
  void require_single_surface() const;
  /// Throws ConfigError when the pair requirements fail.
  void require_pair() const;
  IsometricPair build_pair() const;

  /// Canonical key=value echo, in a fixed order.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// "128x256" -> (128, 256); ParseError otherwise.
std::pair<int, int> parse_grid(const std::string& text);

/// Names of the checks the geometry command knows about.
const std::vector<std::string>& geometry_checks();

}  // namespace dsrig::cli

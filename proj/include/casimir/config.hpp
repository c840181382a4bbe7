#pragma once

// Scene configuration files: a flat key = value format with [slab_a],
// [slab_b] and [run] sections. Frequencies are in units of w0; lengths carry
// an explicit unit tag, "lambda0" or "c_over_w0".
//
//   [slab_a]
//   material = drude_lorentz
//   electric.omega_p = 1
//   electric.omega_t = 0.5
//   electric.gamma = 0.005
//
//   [run]
//   gap = 0.25 lambda0

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "casimir/analysis.hpp"
#include "casimir/lifshitz.hpp"

namespace casimir::config {

/// Parse failure; the message carries "<source>:<line>: <field>: <reason>".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& field, const std::string& reason);

  [[nodiscard]] int line() const { return line_; }
  [[nodiscard]] const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

struct GridSpec {
  Parameter x_param;
  double x_min = 0.0, x_max = 0.0;
  int nx = 1;
  Parameter y_param;
  double y_min = 0.0, y_max = 0.0;
  int ny = 1;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct DispersionSpec {
  Side material = Side::A;  ///< which slab's material to tabulate
  double omega_min = 0.01, omega_max = 3.0;
  int n_omega = 300;
  double xi_min = 0.0, xi_max = 3.0;
  int n_xi = 31;

  friend bool operator==(const DispersionSpec&, const DispersionSpec&) = default;
};

struct RunSpec {
  std::optional<double> gap;  ///< c/w0
  std::optional<double> gap_min, gap_max;
  int n_points = 64;
  Spacing spacing = Spacing::Log;
  double refine_tol = 1e-4;  ///< c/w0
  QuadratureSpec quad;
  std::optional<GridSpec> grid;
  std::optional<DispersionSpec> dispersion;

  friend bool operator==(const RunSpec&, const RunSpec&) = default;
};

struct SceneConfig {
  std::optional<Slab> slab_a;
  std::optional<Slab> slab_b;
  RunSpec run;

  /// Scene at run.gap. Throws ConfigError naming the missing field.
  [[nodiscard]] Scene scene() const;
  /// Both slabs at an arbitrary gap (for sweeps and grids).
  [[nodiscard]] Scene scene_at(double gap) const;

  friend bool operator==(const SceneConfig&, const SceneConfig&) = default;
};

SceneConfig parse(std::string_view text, const std::string& source = "<config>");
SceneConfig load(const std::string& path);

/// Canonical text form; parse(to_text(c)) == c.
std::string to_text(const SceneConfig& c);

/// "0.25 lambda0" / "1.5 c_over_w0" -> c/w0.
double parse_length(std::string_view text);

}  // namespace casimir::config

#pragma once

// Studies built on the force kernel: distance sweeps, two-parameter grids,
// equilibrium (zero-crossing) search and static impedance diagnostics.

#include <Eigen/Core>

#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "casimir/lifshitz.hpp"
#include "casimir/materials.hpp"

namespace casimir {

/// Vacuum wavelength of the frequency unit, lambda0 = 2 pi c / w0, in c/w0.
inline constexpr double kLambda0 = 2.0 * std::numbers::pi;

inline double to_lambda0(double gap) { return gap / kLambda0; }
inline double from_lambda0(double gap_lambda0) { return gap_lambda0 * kLambda0; }

enum class Spacing { Linear, Log };

/// n points from lo to hi inclusive.
std::vector<double> sample_points(double lo, double hi, int n, Spacing spacing);

struct SweepResult {
  Slab slab_a;
  Slab slab_b;
  std::vector<double> gaps;  ///< strictly increasing, c/w0
  std::vector<ForceResult> forces;

  [[nodiscard]] std::size_t size() const { return gaps.size(); }
};

/// Force at each gap. Non-converged points are kept with converged = false.
/// `jobs` bounds the number of worker threads; results are ordered by gap
/// regardless.
SweepResult sweep_distance(const Slab& slab_a, const Slab& slab_b, double gap_min, double gap_max, int n_points,
                           Spacing spacing, const QuadratureSpec& quad = {}, int jobs = 1);

// ---------------------------------------------------------------------------
// Grid scans

enum class Side { A, B };

enum class Quantity {
  ElectricPlasma,
  ElectricResonance,
  ElectricDamping,
  MagneticPlasma,
  MagneticResonance,
  MagneticDamping,
  ConstantEps,
  ConstantMu,
  Gap,
};

/// One scannable scalar of a scene, e.g. slab B's electric plasma frequency.
struct Parameter {
  Quantity quantity = Quantity::Gap;
  Side side = Side::A;  ///< ignored for Quantity::Gap

  /// Dotted name: "gap", "slab_a.eps", "slab_b.magnetic.omega_t", ...
  [[nodiscard]] std::string name() const;
  static Parameter parse(std::string_view name);

  friend bool operator==(const Parameter&, const Parameter&) = default;
};

/// Copy of `scene` with `p` set to `value`. Throws InvalidArgument when the
/// parameter does not exist on that slab's material or the value is invalid.
Scene apply_parameter(const Scene& scene, const Parameter& p, double value);
double read_parameter(const Scene& scene, const Parameter& p);

struct GridAxis {
  Parameter parameter;
  std::vector<double> values;
};

struct GridResult {
  GridAxis x_axis;
  GridAxis y_axis;
  Eigen::MatrixXd values;  ///< F_r, rows follow x, columns follow y
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> converged;
  std::vector<ForceResult> cells;  ///< row-major (x outer, y inner)

  [[nodiscard]] const ForceResult& cell(Eigen::Index i, Eigen::Index j) const {
    return cells[static_cast<std::size_t>(i * values.cols() + j)];
  }
};

GridResult grid_scan(const Scene& template_scene, const GridAxis& x_axis, const GridAxis& y_axis,
                     const QuadratureSpec& quad = {}, int jobs = 1);

/// Linear grid over [x_range] x [y_range].
GridResult grid_scan(const Scene& template_scene, const Parameter& x_param, const Parameter& y_param,
                     std::pair<double, double> x_range, std::pair<double, double> y_range, int nx, int ny,
                     const QuadratureSpec& quad = {}, int jobs = 1);

// ---------------------------------------------------------------------------
// Equilibria

enum class Stability { Stable, Unstable };

struct Crossing {
  double gap = 0.0;            ///< bracket midpoint
  Stability kind = Stability::Unstable;
  double bracket_width = 0.0;  ///< final bisection bracket, hi - lo
  double lo = 0.0;
  double hi = 0.0;
  bool warning = false;        ///< tolerance not reached or a refinement evaluation did not converge
};

struct EquilibriumReport {
  std::vector<Crossing> crossings;  ///< sorted by gap

  [[nodiscard]] std::size_t count(Stability kind) const;
};

/// Brackets every sign change of F between adjacent converged sweep points
/// and bisects it down to `refine_tol`. A repulsive-to-attractive change with
/// increasing gap is a stable (restoring) equilibrium.
EquilibriumReport find_equilibria(const SweepResult& sweep, double refine_tol, const QuadratureSpec& quad = {},
                                  int max_bisections = 200);

// ---------------------------------------------------------------------------
// Impedance diagnostics

enum class ForcePrediction { Attractive, Repulsive, Indeterminate };

struct ImpedanceReport {
  Impedance z_a0;
  Impedance z_b0;
  ForcePrediction prediction = ForcePrediction::Indeterminate;
};

/// Static impedances Z(0) of both slabs and the heuristic large-separation
/// sign: repulsive when they straddle the vacuum value 1.
ImpedanceReport static_impedance_report(const Slab& slab_a, const Slab& slab_b);

std::string_view to_string(Stability s);
std::string_view to_string(ForcePrediction p);
std::string_view to_string(Spacing s);

}  // namespace casimir

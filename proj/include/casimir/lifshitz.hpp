#pragma once

// Casimir force between two planar slabs at zero temperature, written on the
// imaginary frequency axis. Units: hbar = c = w0 = 1, lengths in c/w0, force
// per unit area in hbar*w0^4/c^3. Positive force means attraction.

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "casimir/errors.hpp"
#include "casimir/materials.hpp"

namespace casimir {

enum class Polarization { TE, TM };

/// Slab thickness: semi-infinite, or finite with a vacuum half-space behind it.
class Thickness {
 public:
  static Thickness semi_infinite() { return Thickness(); }
  static Thickness finite(double d) {
    if (!(std::isfinite(d) && d > 0.0)) throw InvalidArgument("slab thickness must be finite and > 0");
    return Thickness(d);
  }

  [[nodiscard]] bool is_finite() const { return value_.has_value(); }
  [[nodiscard]] double value() const { return value_.value(); }

  friend bool operator==(const Thickness&, const Thickness&) = default;

 private:
  Thickness() = default;
  explicit Thickness(double d) : value_(d) {}
  std::optional<double> value_;
};

class Slab {
 public:
  explicit Slab(Material material, Thickness thickness = Thickness::semi_infinite())
      : material_(std::move(material)), thickness_(thickness) {
    if (material_.is_ideal() && thickness_.is_finite()) {
      throw InvalidArgument("ideal materials (perfect conductor, infinitely permeable) must be semi-infinite");
    }
  }

  [[nodiscard]] const Material& material() const { return material_; }
  [[nodiscard]] const Thickness& thickness() const { return thickness_; }

  friend bool operator==(const Slab&, const Slab&) = default;

 private:
  Material material_;
  Thickness thickness_;
};

class Scene {
 public:
  Scene(Slab a, Slab b, double gap) : slab_a_(std::move(a)), slab_b_(std::move(b)), gap_(gap) {
    if (!(std::isfinite(gap_) && gap_ > 0.0)) throw InvalidArgument("gap must be finite and > 0");
  }

  [[nodiscard]] const Slab& slab_a() const { return slab_a_; }
  [[nodiscard]] const Slab& slab_b() const { return slab_b_; }
  [[nodiscard]] double gap() const { return gap_; }

  [[nodiscard]] Scene with_gap(double gap) const { return Scene(slab_a_, slab_b_, gap); }
  [[nodiscard]] Scene swapped() const { return Scene(slab_b_, slab_a_, gap_); }

  friend bool operator==(const Scene&, const Scene&) = default;

 private:
  Slab slab_a_;
  Slab slab_b_;
  double gap_;
};

struct QuadratureSpec {
  double rel_tol = 1e-6;
  double abs_tol = 1e-12;
  int max_subdivisions = 200;
  double tail_cutoff = 1e-16;  ///< truncate where exp(-2 a kappa) drops below this

  void validate() const {
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw InvalidArgument("rel_tol must lie in (0, 1)");
    if (!(abs_tol >= 0.0 && std::isfinite(abs_tol))) throw InvalidArgument("abs_tol must be finite and >= 0");
    if (max_subdivisions <= 0) throw InvalidArgument("max_subdivisions must be > 0");
    if (!(tail_cutoff > 0.0 && tail_cutoff < 1.0)) throw InvalidArgument("tail_cutoff must lie in (0, 1)");
  }

  friend bool operator==(const QuadratureSpec&, const QuadratureSpec&) = default;
};

struct ForceResult {
  double force = 0.0;     ///< F_C, positive = attractive
  double force_te = 0.0;
  double force_tm = 0.0;
  double relative = 0.0;  ///< F_C / F_0(gap)
  double error_estimate = 0.0;
  long evaluations = 0;   ///< integrand calls
  bool converged = true;
};

/// Thrown by casimir_force when the tolerance is not met; carries the best
/// estimate and its error bound.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(ForceResult best)
      : std::runtime_error("quadrature did not reach the requested tolerance (error estimate " +
                           std::to_string(best.error_estimate) + ")"),
        best_(best) {}
  [[nodiscard]] const ForceResult& best() const { return best_; }

 private:
  ForceResult best_;
};

/// Ideal-metal force pi^2 / (240 a^4).
inline double f0(double gap) {
  if (!(gap > 0.0)) throw DomainError("gap must be > 0");
  const double a2 = gap * gap;
  return std::numbers::pi * std::numbers::pi / (240.0 * a2 * a2);
}

namespace detail {

template <class Scalar>
void check_wavevector(Scalar xi, Scalar kappa) {
  if (!(kappa > Scalar(0))) throw DomainError("kappa must be > 0");
  if (!(xi >= Scalar(0))) throw DomainError("xi must be >= 0");
  if (kappa < xi) throw DomainError("kappa must be >= xi");
}

template <class Scalar>
struct InterfaceTerms {
  Eigen::Array<Scalar, 2, 1> r;  // (TE, TM)
  Scalar kappa_medium;           // kappa_1; 0 for ideal materials
};

template <class Scalar>
InterfaceTerms<Scalar> interface_terms(const Material& material, Scalar xi, Scalar kappa) {
  using Pair = Eigen::Array<Scalar, 2, 1>;
  if (material.is<PerfectConductor>()) return {Pair(Scalar(-1), Scalar(1)), Scalar(0)};
  if (material.is<InfinitelyPermeable>()) return {Pair(Scalar(1), Scalar(-1)), Scalar(0)};
  const auto resp = eval_imaginary_axis<Scalar>(material, xi);
  // (eps*mu - 1) xi^2 + kappa^2, written to stay accurate when eps*mu ~ 1.
  const Scalar index_excess = (resp.eps - Scalar(1)) * resp.mu + (resp.mu - Scalar(1));
  const Scalar k1 = std::sqrt(index_excess * xi * xi + kappa * kappa);
  const Scalar mk = resp.mu * kappa, ek = resp.eps * kappa;
  return {Pair((mk - k1) / (mk + k1), (ek - k1) / (ek + k1)), k1};
}

}  // namespace detail

/// Single-interface Fresnel coefficients (TE, TM) at imaginary frequency.
template <class Scalar = double>
Eigen::Array<Scalar, 2, 1> interface_reflection_pair(const Material& material, Scalar xi, Scalar kappa) {
  detail::check_wavevector(xi, kappa);
  return detail::interface_terms(material, xi, kappa).r;
}

template <class Scalar = double>
Scalar interface_reflection(const Material& material, Scalar xi, Scalar kappa, Polarization pol) {
  const auto r = interface_reflection_pair(material, xi, kappa);
  return pol == Polarization::TE ? r(0) : r(1);
}

/// Slab coefficients (TE, TM). A finite slab sums the two-interface Airy
/// series r (1 - e^{-2 k1 d}) / (1 - r^2 e^{-2 k1 d}).
template <class Scalar = double>
Eigen::Array<Scalar, 2, 1> slab_reflection_pair(const Slab& slab, Scalar xi, Scalar kappa) {
  detail::check_wavevector(xi, kappa);
  const auto terms = detail::interface_terms(slab.material(), xi, kappa);
  if (!slab.thickness().is_finite()) return terms.r;
  const Scalar x = std::exp(Scalar(-2) * terms.kappa_medium * Scalar(slab.thickness().value()));
  return terms.r * (Scalar(1) - x) / (Scalar(1) - terms.r.square() * x);
}

template <class Scalar = double>
Scalar slab_reflection(const Slab& slab, Scalar xi, Scalar kappa, Polarization pol) {
  const auto r = slab_reflection_pair(slab, xi, kappa);
  return pol == Polarization::TE ? r(0) : r(1);
}

/// Force integrand per polarization after the change of variables
/// k dk -> kappa dkappa: kappa^2 r_A r_B e^{-2 a kappa} / (1 - r_A r_B e^{-2 a kappa}).
template <class Scalar = double>
Eigen::Array<Scalar, 2, 1> integrand(const Scene& scene, Scalar xi, Scalar kappa) {
  const auto ra = slab_reflection_pair(scene.slab_a(), xi, kappa);
  const auto rb = slab_reflection_pair(scene.slab_b(), xi, kappa);
  const Scalar e = std::exp(Scalar(-2) * Scalar(scene.gap()) * kappa);
  const Eigen::Array<Scalar, 2, 1> p = ra * rb * e;
  return kappa * kappa * p / (Scalar(1) - p);
}

/// F_C = 1/(2 pi^2) int_0^inf dxi int_xi^inf dkappa [te + tm], by nested
/// adaptive Gauss-Kronrod quadrature on the truncated domain. Never throws on
/// non-convergence; inspect `converged`.
ForceResult try_casimir_force(const Scene& scene, const QuadratureSpec& quad = {});

/// As try_casimir_force, but throws ConvergenceError when the tolerance is
/// not met.
ForceResult casimir_force(const Scene& scene, const QuadratureSpec& quad = {});

/// Upper bound on the force contribution discarded by truncating the domain
/// at kappa_max = -ln(tail_cutoff) / (2 gap).
double truncation_bound(double gap, double tail_cutoff);

}  // namespace casimir

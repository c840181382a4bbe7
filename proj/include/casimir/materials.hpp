#pragma once

// Material dispersion models. Frequencies are in units of the global
// frequency unit w0 (hbar = c = w0 = 1).

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "casimir/errors.hpp"

namespace casimir {

/// Single-resonance Drude-Lorentz oscillator: 1 + wp^2 / (wt^2 - w^2 - i*gamma*w).
struct OscillatorParams {
  double omega_p = 0.0;  ///< plasma frequency
  double omega_t = 0.0;  ///< resonant frequency
  double gamma = 0.0;    ///< damping frequency

  /// Throws InvalidArgument unless every field is finite and non-negative.
  void validate(std::string_view what) const {
    auto check = [&](double v, const char* name) {
      if (!std::isfinite(v) || v < 0.0) {
        throw InvalidArgument(std::string(what) + "." + name + " must be finite and non-negative");
      }
    };
    check(omega_p, "omega_p");
    check(omega_t, "omega_t");
    check(gamma, "gamma");
  }

  /// True when the static (xi = 0) response is infinite: a lossless plasma.
  [[nodiscard]] bool static_divergent() const {
    return omega_p > 0.0 && omega_t == 0.0 && gamma == 0.0;
  }

  friend bool operator==(const OscillatorParams&, const OscillatorParams&) = default;
};

struct DrudeLorentz {
  OscillatorParams electric;
  OscillatorParams magnetic;
  friend bool operator==(const DrudeLorentz&, const DrudeLorentz&) = default;
};

struct ConstantResponse {
  double eps = 1.0;
  double mu = 1.0;
  friend bool operator==(const ConstantResponse&, const ConstantResponse&) = default;
};

struct PerfectConductor {
  friend bool operator==(const PerfectConductor&, const PerfectConductor&) = default;
};
struct InfinitelyPermeable {
  friend bool operator==(const InfinitelyPermeable&, const InfinitelyPermeable&) = default;
};
struct Vacuum {
  friend bool operator==(const Vacuum&, const Vacuum&) = default;
};

/// Immutable dispersion model. Construct through the named factories, which
/// enforce the parameter invariants.
class Material {
 public:
  using Model = std::variant<DrudeLorentz, ConstantResponse, PerfectConductor, InfinitelyPermeable, Vacuum>;

  Material() : model_(Vacuum{}) {}

  static Material drude_lorentz(const OscillatorParams& electric, const OscillatorParams& magnetic) {
    electric.validate("electric");
    magnetic.validate("magnetic");
    return Material(DrudeLorentz{electric, magnetic});
  }

  static Material constant(double eps, double mu = 1.0) {
    if (!(std::isfinite(eps) && eps > 0.0)) throw InvalidArgument("constant eps must be finite and > 0");
    if (!(std::isfinite(mu) && mu > 0.0)) throw InvalidArgument("constant mu must be finite and > 0");
    return Material(ConstantResponse{eps, mu});
  }

  static Material perfect_conductor() { return Material(PerfectConductor{}); }
  static Material infinitely_permeable() { return Material(InfinitelyPermeable{}); }
  static Material vacuum() { return Material(Vacuum{}); }

  [[nodiscard]] const Model& model() const { return model_; }

  [[nodiscard]] bool is_ideal() const {
    return std::holds_alternative<PerfectConductor>(model_) || std::holds_alternative<InfinitelyPermeable>(model_);
  }

  template <class T>
  [[nodiscard]] bool is() const {
    return std::holds_alternative<T>(model_);
  }

  [[nodiscard]] std::string_view kind_name() const;

  friend bool operator==(const Material&, const Material&) = default;

 private:
  explicit Material(Model m) : model_(std::move(m)) {}
  Model model_;
};

inline std::string_view Material::kind_name() const {
  struct Namer {
    std::string_view operator()(const DrudeLorentz&) const { return "drude_lorentz"; }
    std::string_view operator()(const ConstantResponse&) const { return "constant"; }
    std::string_view operator()(const PerfectConductor&) const { return "perfect_conductor"; }
    std::string_view operator()(const InfinitelyPermeable&) const { return "infinitely_permeable"; }
    std::string_view operator()(const Vacuum&) const { return "vacuum"; }
  };
  return std::visit(Namer{}, model_);
}

/// Relative permittivity and permeability at imaginary frequency i*xi.
template <class Scalar = double>
struct AxisResponse {
  Scalar eps;
  Scalar mu;
};

namespace detail {

// 1 + wp^2 / (wt^2 + xi^2 + gamma*xi): the oscillator continued to w = i*xi.
template <class Scalar>
Scalar oscillator_imaginary(const OscillatorParams& p, Scalar xi) {
  if (p.omega_p == 0.0) return Scalar(1);
  const Scalar wp = p.omega_p, wt = p.omega_t, g = p.gamma;
  const Scalar denom = wt * wt + xi * (xi + g);
  if (denom == Scalar(0)) throw DomainError("oscillator response diverges at xi = 0 (omega_t = gamma = 0)");
  return Scalar(1) + wp * wp / denom;
}

template <class Scalar>
std::complex<Scalar> oscillator_real(const OscillatorParams& p, Scalar omega) {
  using C = std::complex<Scalar>;
  if (p.omega_p == 0.0) return C(1);
  const Scalar wp = p.omega_p, wt = p.omega_t, g = p.gamma;
  const C denom(wt * wt - omega * omega, -g * omega);
  return C(1) + C(wp * wp) / denom;
}

}  // namespace detail

/// eps(i*xi), mu(i*xi). Ideal materials have no finite response and throw
/// IdealMaterialError; xi < 0 throws DomainError.
template <class Scalar = double>
AxisResponse<Scalar> eval_imaginary_axis(const Material& material, Scalar xi) {
  if (!(xi >= Scalar(0))) throw DomainError("imaginary frequency xi must be >= 0");
  if (material.is_ideal()) throw IdealMaterialError();
  const auto& m = material.model();
  if (const auto* dl = std::get_if<DrudeLorentz>(&m)) {
    return {detail::oscillator_imaginary(dl->electric, xi), detail::oscillator_imaginary(dl->magnetic, xi)};
  }
  if (const auto* c = std::get_if<ConstantResponse>(&m)) return {Scalar(c->eps), Scalar(c->mu)};
  return {Scalar(1), Scalar(1)};
}

/// Complex eps(w), mu(w) on the real frequency axis (w > 0).
template <class Scalar = double>
std::pair<std::complex<Scalar>, std::complex<Scalar>> eval_real_frequency(const Material& material, Scalar omega) {
  using C = std::complex<Scalar>;
  if (!(omega > Scalar(0))) throw DomainError("real frequency omega must be > 0");
  if (material.is_ideal()) throw IdealMaterialError();
  const auto& m = material.model();
  if (const auto* dl = std::get_if<DrudeLorentz>(&m)) {
    return {detail::oscillator_real(dl->electric, omega), detail::oscillator_real(dl->magnetic, omega)};
  }
  if (const auto* c = std::get_if<ConstantResponse>(&m)) return {C(c->eps), C(c->mu)};
  return {C(1), C(1)};
}

/// Wave impedance sqrt(mu/eps). Ideal materials and divergent static limits
/// are reported as explicit limits rather than as 0 or infinity.
struct Impedance {
  enum class Limit { Finite, Zero, Infinite };
  Limit limit = Limit::Finite;
  double value = 1.0;  ///< meaningful only when limit == Finite

  static Impedance finite(double v) { return {Limit::Finite, v}; }
  static Impedance zero() { return {Limit::Zero, 0.0}; }
  static Impedance infinite() { return {Limit::Infinite, std::numeric_limits<double>::infinity()}; }

  [[nodiscard]] bool is_finite() const { return limit == Limit::Finite; }

  /// -1 below the vacuum impedance, +1 above, 0 when equal within tol.
  [[nodiscard]] int compare_to_vacuum(double tol = 1e-9) const {
    if (limit == Limit::Zero) return -1;
    if (limit == Limit::Infinite) return 1;
    if (std::abs(value - 1.0) <= tol) return 0;
    return value < 1.0 ? -1 : 1;
  }
};

inline Impedance impedance(const Material& material, double xi) {
  if (!(xi >= 0.0)) throw DomainError("imaginary frequency xi must be >= 0");
  if (material.is<PerfectConductor>()) return Impedance::zero();
  if (material.is<InfinitelyPermeable>()) return Impedance::infinite();
  if (const auto* dl = std::get_if<DrudeLorentz>(&material.model()); dl && xi == 0.0) {
    const bool e_div = dl->electric.static_divergent();
    const bool m_div = dl->magnetic.static_divergent();
    // Both lossless plasmas: mu/eps -> (wpm/wpe)^2 as xi -> 0.
    if (e_div && m_div) return Impedance::finite(dl->magnetic.omega_p / dl->electric.omega_p);
    if (e_div) return Impedance::zero();
    if (m_div) return Impedance::infinite();
  }
  const auto r = eval_imaginary_axis(material, xi);
  return Impedance::finite(std::sqrt(r.mu / r.eps));
}

}  // namespace casimir

#include "casimir/lifshitz.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "casimir/quadrature.hpp"

namespace casimir {

namespace {

constexpr int kOuterGeometricPanels = 24;  // xi in (0, K]: K 2^-24 ... K
constexpr int kInnerGeometricPanels = 12;  // kappa in (xi, K]

using Pair = Eigen::Array2d;
using Triple = Eigen::Array3d;  // (te, tm, inner error norm)

std::vector<double> outer_breaks(double kmax) {
  std::vector<double> b;
  b.reserve(kOuterGeometricPanels + 2);
  b.push_back(0.0);
  for (int j = kOuterGeometricPanels; j >= 0; --j) b.push_back(std::ldexp(kmax, -j));
  return b;
}

void inner_breaks(double xi, double kmax, std::array<double, kInnerGeometricPanels + 2>& b) {
  const double span = kmax - xi;
  b[0] = xi;
  for (int j = kInnerGeometricPanels; j >= 0; --j) b[kInnerGeometricPanels + 1 - j] = xi + std::ldexp(span, -j);
  b.back() = kmax;
}

}  // namespace

double truncation_bound(double gap, double tail_cutoff) {
  // |integrand| <= kappa^2 e^{-s kappa} / (1 - tail) per polarization on
  // kappa > K, and the xi-range there has length kappa.
  const double s = 2.0 * gap;
  const double k = -std::log(tail_cutoff) / s;
  const double moment = tail_cutoff * (k * k * k / s + 3.0 * k * k / (s * s) + 6.0 * k / (s * s * s) +
                                       6.0 / (s * s * s * s));
  return 2.0 * moment / (1.0 - tail_cutoff) / (2.0 * std::numbers::pi * std::numbers::pi);
}

ForceResult try_casimir_force(const Scene& scene, const QuadratureSpec& quad) {
  quad.validate();
  const double gap = scene.gap();
  const double kmax = -std::log(quad.tail_cutoff) / (2.0 * gap);

  // Integrals are accumulated without the 1/(2 pi^2) prefactor; abs_tol is in force units.
  const double scale = 1.0 / (2.0 * std::numbers::pi * std::numbers::pi);
  const double abs_unscaled = quad.abs_tol / scale;
  const double inner_rel = 0.1 * quad.rel_tol;
  const double inner_abs = 0.1 * abs_unscaled / kmax;
  long inner_evaluations = 0;

  auto inner = [&](double xi) -> Triple {
    std::array<double, kInnerGeometricPanels + 2> breaks;
    inner_breaks(xi, kmax, breaks);
    auto f = [&](double kappa) -> Pair { return integrand(scene, xi, kappa); };
    auto budget = [&](const Pair& v) { return std::max(inner_abs, inner_rel * v.abs().sum()); };
    const auto r = quadrature::integrate<Pair>(f, std::span<const double>(breaks), budget, quad.max_subdivisions);
    inner_evaluations += r.evaluations;
    return Triple(r.value(0), r.value(1), r.error_norm);
  };

  const auto breaks = outer_breaks(kmax);
  auto outer_budget = [&](const Triple& v) {
    return std::max(abs_unscaled, quad.rel_tol * (std::abs(v(0)) + std::abs(v(1)))) - v(2);
  };
  const auto outer = quadrature::integrate<Triple>(inner, std::span<const double>(breaks), outer_budget,
                                                   quad.max_subdivisions, quadrature::LeadingL1Norm<2>{});

  ForceResult res;
  res.force_te = scale * outer.value(0);
  res.force_tm = scale * outer.value(1);
  res.force = res.force_te + res.force_tm;
  res.relative = res.force / f0(gap);
  res.error_estimate = scale * (outer.error_norm + std::abs(outer.value(2))) + truncation_bound(gap, quad.tail_cutoff);
  res.evaluations = inner_evaluations;
  const double target =
      std::max(quad.abs_tol, quad.rel_tol * (std::abs(res.force_te) + std::abs(res.force_tm)));
  res.converged = res.error_estimate <= target;
  return res;
}

ForceResult casimir_force(const Scene& scene, const QuadratureSpec& quad) {
  auto res = try_casimir_force(scene, quad);
  if (!res.converged) throw ConvergenceError(res);
  return res;
}

}  // namespace casimir

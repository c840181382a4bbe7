#pragma once

// Globally adaptive Gauss-Kronrod (7/15) panel quadrature for small
// vector-valued integrands. Nodes are strictly interior to every panel, so
// integrable endpoint singularities are never evaluated.

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace casimir::quadrature {

template <class Value>
struct Outcome {
  Value value;
  Value error;        ///< per-component |K15 - G7| summed over panels
  double error_norm;  ///< norm of `error` under the integrator's norm
  long evaluations = 0;
  int subdivisions = 0;
  bool converged = false;
};

/// Sum of absolute components.
struct L1Norm {
  template <class Value>
  double operator()(const Value& v) const {
    return static_cast<double>(v.abs().sum());
  }
};

/// L1 norm over the leading `Count` components only; trailing components are
/// integrated but do not drive refinement.
template <int Count>
struct LeadingL1Norm {
  template <class Value>
  double operator()(const Value& v) const {
    return static_cast<double>(v.template head<Count>().abs().sum());
  }
};

namespace detail {

// Kronrod abscissae (descending) and weights; Gauss weights for the
// odd-indexed abscissae plus the centre.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class Scalar, class Value>
struct Panel {
  Scalar lo, hi;
  Value value, error;
  double norm;
};

template <class Scalar, class Value, class F, class Norm>
Panel<Scalar, Value> gauss_kronrod_15(F& f, Scalar lo, Scalar hi, const Norm& norm) {
  const Scalar centre = (lo + hi) / 2;
  const Scalar half = (hi - lo) / 2;
  const Value fc = f(centre);
  Value kronrod = fc * Scalar(kKronrodWeights[7]);
  Value gauss = fc * Scalar(kGaussWeights[3]);
  for (int i = 0; i < 7; ++i) {
    const Scalar dx = half * Scalar(kKronrodNodes[i]);
    const Value pair = f(centre - dx) + f(centre + dx);
    kronrod += pair * Scalar(kKronrodWeights[i]);
    if (i % 2 == 1) gauss += pair * Scalar(kGaussWeights[i / 2]);
  }
  Panel<Scalar, Value> p{lo, hi, kronrod * half, ((kronrod - gauss) * half).abs(), 0.0};
  p.norm = norm(p.error);
  return p;
}

}  // namespace detail

inline constexpr int kNodesPerPanel = 15;

/// Integrates `f` over [breaks.front(), breaks.back()], starting from the
/// panels delimited by `breaks` and bisecting the panel with the largest
/// error until `norm(total error) <= budget(total value)` or
/// `max_subdivisions` bisections have been spent.
///
/// `f` maps Scalar -> Value, where Value is an Eigen array expression type.
template <class Value, class Scalar, class F, class Budget, class Norm = L1Norm>
Outcome<Value> integrate(F&& f, std::span<const Scalar> breaks, Budget&& budget, int max_subdivisions,
                         const Norm& norm = Norm{}) {
  using PanelT = detail::Panel<Scalar, Value>;
  auto by_error = [](const PanelT& x, const PanelT& y) { return x.norm < y.norm; };

  std::vector<PanelT> heap;
  heap.reserve(breaks.size() + static_cast<std::size_t>(max_subdivisions) + 1);
  Value frozen_value = Value::Zero();
  Value frozen_error = Value::Zero();
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    heap.push_back(detail::gauss_kronrod_15<Scalar, Value>(f, breaks[i], breaks[i + 1], norm));
  }
  std::make_heap(heap.begin(), heap.end(), by_error);

  Outcome<Value> out{Value::Zero(), Value::Zero(), 0.0};
  out.evaluations = static_cast<long>(heap.size()) * kNodesPerPanel;

  auto tally = [&] {
    out.value = frozen_value;
    out.error = frozen_error;
    for (const auto& p : heap) {
      out.value += p.value;
      out.error += p.error;
    }
    out.error_norm = norm(out.error);
  };

  tally();
  while (true) {
    if (out.error_norm <= budget(out.value)) {
      out.converged = true;
      break;
    }
    if (heap.empty() || out.subdivisions >= max_subdivisions) break;
    std::pop_heap(heap.begin(), heap.end(), by_error);
    PanelT worst = heap.back();
    heap.pop_back();
    const Scalar mid = (worst.lo + worst.hi) / 2;
    const Scalar scale = std::max(std::abs(worst.lo), std::abs(worst.hi));
    if (!(mid > worst.lo && mid < worst.hi) ||
        (worst.hi - worst.lo) <= Scalar(64) * std::numeric_limits<Scalar>::epsilon() * scale) {
      // Panel is at floating-point resolution: keep its contribution as is.
      frozen_value += worst.value;
      frozen_error += worst.error;
      continue;
    }
    heap.push_back(detail::gauss_kronrod_15<Scalar, Value>(f, worst.lo, mid, norm));
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(detail::gauss_kronrod_15<Scalar, Value>(f, mid, worst.hi, norm));
    std::push_heap(heap.begin(), heap.end(), by_error);
    out.evaluations += 2 * kNodesPerPanel;
    ++out.subdivisions;
    tally();
  }
  return out;
}

/// Scalar convenience wrapper with the usual max(abs_tol, rel_tol*|I|) budget.
template <class F>
Outcome<Eigen::Array<double, 1, 1>> integrate_scalar(F&& f, double lo, double hi, double rel_tol, double abs_tol,
                                                     int max_subdivisions = 200) {
  using V = Eigen::Array<double, 1, 1>;
  const std::array<double, 2> breaks{lo, hi};
  auto g = [&](double x) { return V::Constant(f(x)); };
  auto budget = [&](const V& v) { return std::max(abs_tol, rel_tol * std::abs(v(0))); };
  return integrate<V>(g, std::span<const double>(breaks), budget, max_subdivisions);
}

}  // namespace casimir::quadrature

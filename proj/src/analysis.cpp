#include "casimir/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace casimir {

namespace {

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Work is claimed by
// index, so output placement never depends on completion order.
template <class Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = n;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

int sign_of(double f) { return f < 0.0 ? -1 : 1; }

OscillatorParams& oscillator_for(DrudeLorentz& dl, Quantity q) {
  switch (q) {
    case Quantity::ElectricPlasma:
    case Quantity::ElectricResonance:
    case Quantity::ElectricDamping:
      return dl.electric;
    default:
      return dl.magnetic;
  }
}

double& field_for(OscillatorParams& p, Quantity q) {
  switch (q) {
    case Quantity::ElectricPlasma:
    case Quantity::MagneticPlasma:
      return p.omega_p;
    case Quantity::ElectricResonance:
    case Quantity::MagneticResonance:
      return p.omega_t;
    default:
      return p.gamma;
  }
}

bool is_oscillator_quantity(Quantity q) {
  return q != Quantity::ConstantEps && q != Quantity::ConstantMu && q != Quantity::Gap;
}

struct QuantityName {
  Quantity quantity;
  std::string_view suffix;
};

constexpr QuantityName kQuantityNames[] = {
    {Quantity::ElectricPlasma, "electric.omega_p"},    {Quantity::ElectricResonance, "electric.omega_t"},
    {Quantity::ElectricDamping, "electric.gamma"},     {Quantity::MagneticPlasma, "magnetic.omega_p"},
    {Quantity::MagneticResonance, "magnetic.omega_t"}, {Quantity::MagneticDamping, "magnetic.gamma"},
    {Quantity::ConstantEps, "eps"},                    {Quantity::ConstantMu, "mu"},
};

}  // namespace

std::vector<double> sample_points(double lo, double hi, int n, Spacing spacing) {
  if (n < 1) throw InvalidArgument("need at least one sample point");
  if (n == 1) return {lo};
  if (spacing == Spacing::Log && !(lo > 0.0 && hi > 0.0)) throw InvalidArgument("log spacing needs positive bounds");
  std::vector<double> pts(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    pts[static_cast<std::size_t>(i)] =
        spacing == Spacing::Linear ? lo + t * (hi - lo) : std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
  }
  pts.front() = lo;
  pts.back() = hi;
  return pts;
}

SweepResult sweep_distance(const Slab& slab_a, const Slab& slab_b, double gap_min, double gap_max, int n_points,
                           Spacing spacing, const QuadratureSpec& quad, int jobs) {
  if (!(gap_min > 0.0 && gap_min < gap_max)) throw InvalidArgument("sweep needs 0 < gap_min < gap_max");
  if (n_points < 2) throw InvalidArgument("sweep needs n_points >= 2");
  quad.validate();
  SweepResult out{slab_a, slab_b, sample_points(gap_min, gap_max, n_points, spacing), {}};
  out.forces.resize(out.gaps.size());
  const Scene base(slab_a, slab_b, gap_min);
  parallel_for(out.gaps.size(), jobs, [&](std::size_t i) {
    out.forces[i] = try_casimir_force(base.with_gap(out.gaps[i]), quad);
  });
  return out;
}

std::string Parameter::name() const {
  if (quantity == Quantity::Gap) return "gap";
  std::string prefix = side == Side::A ? "slab_a." : "slab_b.";
  for (const auto& qn : kQuantityNames) {
    if (qn.quantity == quantity) return prefix + std::string(qn.suffix);
  }
  return prefix + "?";
}

Parameter Parameter::parse(std::string_view name) {
  if (name == "gap") return {Quantity::Gap, Side::A};
  Side side;
  if (name.starts_with("slab_a.")) {
    side = Side::A;
  } else if (name.starts_with("slab_b.")) {
    side = Side::B;
  } else {
    throw InvalidArgument("unknown parameter '" + std::string(name) + "'");
  }
  const auto suffix = name.substr(7);
  for (const auto& qn : kQuantityNames) {
    if (qn.suffix == suffix) return {qn.quantity, side};
  }
  throw InvalidArgument("unknown parameter '" + std::string(name) + "'");
}

Scene apply_parameter(const Scene& scene, const Parameter& p, double value) {
  if (p.quantity == Quantity::Gap) return scene.with_gap(value);
  const Slab& slab = p.side == Side::A ? scene.slab_a() : scene.slab_b();
  Material updated;
  if (is_oscillator_quantity(p.quantity)) {
    const auto* dl = std::get_if<DrudeLorentz>(&slab.material().model());
    if (!dl) throw InvalidArgument(p.name() + " requires a drude_lorentz material");
    DrudeLorentz copy = *dl;
    field_for(oscillator_for(copy, p.quantity), p.quantity) = value;
    updated = Material::drude_lorentz(copy.electric, copy.magnetic);
  } else {
    const auto* c = std::get_if<ConstantResponse>(&slab.material().model());
    if (!c) throw InvalidArgument(p.name() + " requires a constant material");
    updated = p.quantity == Quantity::ConstantEps ? Material::constant(value, c->mu) : Material::constant(c->eps, value);
  }
  Slab s(updated, slab.thickness());
  return p.side == Side::A ? Scene(s, scene.slab_b(), scene.gap()) : Scene(scene.slab_a(), s, scene.gap());
}

double read_parameter(const Scene& scene, const Parameter& p) {
  if (p.quantity == Quantity::Gap) return scene.gap();
  const Slab& slab = p.side == Side::A ? scene.slab_a() : scene.slab_b();
  if (is_oscillator_quantity(p.quantity)) {
    const auto* dl = std::get_if<DrudeLorentz>(&slab.material().model());
    if (!dl) throw InvalidArgument(p.name() + " requires a drude_lorentz material");
    DrudeLorentz copy = *dl;
    return field_for(oscillator_for(copy, p.quantity), p.quantity);
  }
  const auto* c = std::get_if<ConstantResponse>(&slab.material().model());
  if (!c) throw InvalidArgument(p.name() + " requires a constant material");
  return p.quantity == Quantity::ConstantEps ? c->eps : c->mu;
}

GridResult grid_scan(const Scene& template_scene, const GridAxis& x_axis, const GridAxis& y_axis,
                     const QuadratureSpec& quad, int jobs) {
  if (x_axis.values.empty() || y_axis.values.empty()) throw InvalidArgument("grid axes must be non-empty");
  if (x_axis.parameter == y_axis.parameter) throw InvalidArgument("grid axes must vary different parameters");
  quad.validate();

  const auto nx = static_cast<Eigen::Index>(x_axis.values.size());
  const auto ny = static_cast<Eigen::Index>(y_axis.values.size());

  // Build every scene up front so invalid parameter values fail before any
  // expensive evaluation.
  std::vector<Scene> scenes;
  scenes.reserve(static_cast<std::size_t>(nx * ny));
  for (double xv : x_axis.values) {
    const Scene row = apply_parameter(template_scene, x_axis.parameter, xv);
    for (double yv : y_axis.values) scenes.push_back(apply_parameter(row, y_axis.parameter, yv));
  }

  GridResult out{x_axis, y_axis, Eigen::MatrixXd(nx, ny), {}, std::vector<ForceResult>(scenes.size())};
  out.converged.resize(nx, ny);
  parallel_for(scenes.size(), jobs, [&](std::size_t k) { out.cells[k] = try_casimir_force(scenes[k], quad); });
  for (Eigen::Index i = 0; i < nx; ++i) {
    for (Eigen::Index j = 0; j < ny; ++j) {
      const auto& c = out.cell(i, j);
      out.values(i, j) = c.relative;
      out.converged(i, j) = c.converged;
    }
  }
  return out;
}

GridResult grid_scan(const Scene& template_scene, const Parameter& x_param, const Parameter& y_param,
                     std::pair<double, double> x_range, std::pair<double, double> y_range, int nx, int ny,
                     const QuadratureSpec& quad, int jobs) {
  return grid_scan(template_scene, GridAxis{x_param, sample_points(x_range.first, x_range.second, nx, Spacing::Linear)},
                   GridAxis{y_param, sample_points(y_range.first, y_range.second, ny, Spacing::Linear)}, quad, jobs);
}

std::size_t EquilibriumReport::count(Stability kind) const {
  return static_cast<std::size_t>(
      std::count_if(crossings.begin(), crossings.end(), [&](const Crossing& c) { return c.kind == kind; }));
}

EquilibriumReport find_equilibria(const SweepResult& sweep, double refine_tol, const QuadratureSpec& quad,
                                  int max_bisections) {
  if (!(refine_tol > 0.0)) throw InvalidArgument("refine_tol must be > 0");
  std::vector<std::size_t> valid;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (sweep.forces[i].converged) valid.push_back(i);
  }
  if (valid.size() < 2) throw InvalidArgument("equilibrium search needs at least two converged sweep points");

  const Scene base(sweep.slab_a, sweep.slab_b, sweep.gaps.front());
  EquilibriumReport report;
  for (std::size_t v = 0; v + 1 < valid.size(); ++v) {
    const std::size_t i = valid[v], j = valid[v + 1];
    const int s_lo = sign_of(sweep.forces[i].force);
    const int s_hi = sign_of(sweep.forces[j].force);
    if (s_lo == s_hi) continue;

    Crossing c;
    // F < 0 (repulsive) below and F > 0 (attractive) above pushes the slabs
    // back toward the crossing.
    c.kind = s_lo < 0 ? Stability::Stable : Stability::Unstable;
    double lo = sweep.gaps[i], hi = sweep.gaps[j];
    int iterations = 0;
    while (hi - lo > refine_tol && iterations < max_bisections) {
      const double mid = 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi)) break;
      const auto r = try_casimir_force(base.with_gap(mid), quad);
      if (!r.converged) c.warning = true;
      (sign_of(r.force) == s_lo ? lo : hi) = mid;
      ++iterations;
    }
    c.lo = lo;
    c.hi = hi;
    c.gap = 0.5 * (lo + hi);
    c.bracket_width = hi - lo;
    if (c.bracket_width > refine_tol) c.warning = true;
    report.crossings.push_back(c);
  }
  std::sort(report.crossings.begin(), report.crossings.end(),
            [](const Crossing& x, const Crossing& y) { return x.gap < y.gap; });
  return report;
}

ImpedanceReport static_impedance_report(const Slab& slab_a, const Slab& slab_b) {
  ImpedanceReport r{impedance(slab_a.material(), 0.0), impedance(slab_b.material(), 0.0)};
  const int ca = r.z_a0.compare_to_vacuum();
  const int cb = r.z_b0.compare_to_vacuum();
  if (ca == 0 || cb == 0) {
    r.prediction = ForcePrediction::Indeterminate;
  } else {
    r.prediction = ca != cb ? ForcePrediction::Repulsive : ForcePrediction::Attractive;
  }
  return r;
}

std::string_view to_string(Stability s) { return s == Stability::Stable ? "stable" : "unstable"; }

std::string_view to_string(ForcePrediction p) {
  switch (p) {
    case ForcePrediction::Attractive:
      return "attractive";
    case ForcePrediction::Repulsive:
      return "repulsive";
    default:
      return "indeterminate";
  }
}

std::string_view to_string(Spacing s) { return s == Spacing::Linear ? "linear" : "log"; }

}  // namespace casimir

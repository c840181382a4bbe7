#include "casimir/cli.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace casimir::cli {

using nlohmann::json;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

config::SceneConfig effective(const config::SceneConfig& cfg, const Options& opt) {
  auto c = cfg;
  if (opt.rel_tol) {
    c.run.quad.rel_tol = *opt.rel_tol;
    c.run.quad.validate();
  }
  return c;
}

json make_record(const std::string& command, const config::SceneConfig& cfg, const Options& opt, json results,
                 json diagnostics) {
  json rec;
  rec["schema"] = "casimir-run-record";
  rec["schema_version"] = kRecordSchemaVersion;
  rec["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  rec["timestamp"] = opt.timestamp.value_or(utc_now());
  rec["command"] = command;
  rec["config"] = config::to_text(cfg);
  rec["results"] = std::move(results);
  rec["diagnostics"] = std::move(diagnostics);
  return rec;
}

void write_record_file(const Options& opt, const json& rec) {
  if (!opt.record) return;
  std::ofstream f(*opt.record, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write record file " + *opt.record);
  f << rec.dump(2) << "\n";
}

json diagnostics_of(const std::vector<const ForceResult*>& results) {
  long evaluations = 0;
  double max_err = 0.0;
  int failed = 0;
  for (const auto* r : results) {
    evaluations += r->evaluations;
    max_err = std::max(max_err, r->error_estimate);
    if (!r->converged) ++failed;
  }
  return {{"evaluations", evaluations},
          {"max_error_estimate", max_err},
          {"points", results.size()},
          {"nonconverged", failed}};
}

std::string status_of(const ForceResult& r) { return r.converged ? "ok" : "nonconverged"; }

void write_force_row(std::ostream& out, double gap, const ForceResult& r) {
  out << csv_number(gap) << ',' << csv_number(to_lambda0(gap)) << ',' << csv_number(r.force) << ','
      << csv_number(r.force_te) << ',' << csv_number(r.force_tm) << ',' << csv_number(r.relative) << ','
      << csv_number(r.error_estimate) << ',' << status_of(r) << '\n';
}

void warn_nonconverged(std::ostream& err, int count) {
  err << "warning: " << count << " point(s) did not reach the requested quadrature tolerance\n";
}

json equilibria_json(const EquilibriumReport& rep) {
  json arr = json::array();
  for (const auto& c : rep.crossings) {
    arr.push_back({{"gap_c_over_w0", c.gap},
                   {"gap_lambda0", to_lambda0(c.gap)},
                   {"kind", to_string(c.kind)},
                   {"bracket_width", c.bracket_width},
                   {"bracket", {c.lo, c.hi}},
                   {"warning", c.warning}});
  }
  return arr;
}

const Slab& dispersion_slab(const config::SceneConfig& cfg, Side side) {
  const auto& s = side == Side::A ? cfg.slab_a : cfg.slab_b;
  if (!s) {
    throw config::ConfigError("<config>", 0, side == Side::A ? "slab_a" : "slab_b",
                              "section is required for the dispersion command");
  }
  return *s;
}

}  // namespace

std::string csv_number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 9);
  return std::string(buf.data(), ptr);
}

json to_json(const ForceResult& r, double gap) {
  return {{"gap_c_over_w0", gap},   {"gap_lambda0", to_lambda0(gap)}, {"F", r.force},
          {"F_TE", r.force_te},     {"F_TM", r.force_tm},             {"F_r", r.relative},
          {"error_estimate", r.error_estimate}, {"evaluations", r.evaluations}, {"converged", r.converged}};
}

int cmd_force(const config::SceneConfig& cfg_in, const Options& opt, std::ostream& out, std::ostream& err) {
  const auto cfg = effective(cfg_in, opt);
  const Scene scene = cfg.scene();
  const auto r = try_casimir_force(scene, cfg.run.quad);
  const auto rec = make_record("force", cfg, opt, to_json(r, scene.gap()), diagnostics_of({&r}));

  switch (opt.format.value_or(Format::Text)) {
    case Format::Json:
      out << rec.dump(2) << "\n";
      break;
    case Format::Csv:
      out << kForceHeader << "\n";
      write_force_row(out, scene.gap(), r);
      break;
    case Format::Text:
      out << "gap      = " << csv_number(scene.gap()) << " c/w0 (" << csv_number(to_lambda0(scene.gap()))
          << " lambda0)\n";
      out << "F        = " << csv_number(r.force) << " hbar w0^4/c^3 (positive = attractive)\n";
      out << "F_TE     = " << csv_number(r.force_te) << "\n";
      out << "F_TM     = " << csv_number(r.force_tm) << "\n";
      out << "F_r      = " << csv_number(r.relative) << "\n";
      out << "error    = " << csv_number(r.error_estimate) << "\n";
      out << "evals    = " << r.evaluations << "\n";
      break;
  }
  write_record_file(opt, rec);
  if (!r.converged) {
    warn_nonconverged(err, 1);
    return kConvergenceWarning;
  }
  return kOk;
}

int cmd_sweep(const config::SceneConfig& cfg_in, const Options& opt, std::ostream& out, std::ostream& err) {
  const auto cfg = effective(cfg_in, opt);
  const auto& run = cfg.run;
  if (!run.gap_min || !run.gap_max) {
    throw config::ConfigError("<config>", 0, "run.gap_min", "sweep needs gap_min and gap_max");
  }
  (void)cfg.scene_at(*run.gap_min);  // both slabs present
  const auto sweep =
      sweep_distance(*cfg.slab_a, *cfg.slab_b, *run.gap_min, *run.gap_max, run.n_points, run.spacing, run.quad, opt.jobs);

  std::vector<const ForceResult*> all;
  json points = json::array();
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    all.push_back(&sweep.forces[i]);
    points.push_back(to_json(sweep.forces[i], sweep.gaps[i]));
  }
  const auto diagnostics = diagnostics_of(all);
  const int failed = diagnostics["nonconverged"].get<int>();

  json eq = json::array();
  bool eq_warning = false;
  if (sweep.size() - static_cast<std::size_t>(failed) >= 2) {
    const auto report = find_equilibria(sweep, run.refine_tol, run.quad);
    eq = equilibria_json(report);
    for (const auto& c : report.crossings) eq_warning = eq_warning || c.warning;
  }
  const auto rec = make_record("sweep", cfg, opt, {{"points", points}, {"equilibria", eq}}, diagnostics);

  if (opt.format.value_or(Format::Csv) == Format::Json) {
    out << rec.dump(2) << "\n";
  } else {
    out << kSweepHeader << "\n";
    for (std::size_t i = 0; i < sweep.size(); ++i) write_force_row(out, sweep.gaps[i], sweep.forces[i]);
  }
  write_record_file(opt, rec);
  for (const auto& c : eq) {
    err << "equilibrium: gap = " << csv_number(c["gap_c_over_w0"].get<double>()) << " c/w0 ("
        << csv_number(c["gap_lambda0"].get<double>()) << " lambda0), " << c["kind"].get<std::string>() << "\n";
  }
  if (failed > 0 || eq_warning) {
    if (failed > 0) warn_nonconverged(err, failed);
    if (eq_warning) err << "warning: an equilibrium refinement did not fully converge\n";
    return kConvergenceWarning;
  }
  return kOk;
}

int cmd_grid(const config::SceneConfig& cfg_in, const Options& opt, std::ostream& out, std::ostream& err) {
  const auto cfg = effective(cfg_in, opt);
  const auto& run = cfg.run;
  if (!run.grid) throw config::ConfigError("<config>", 0, "run.x_param", "grid needs x_param/y_param ranges");
  const auto& g = *run.grid;
  // The template gap is only used when neither axis is the gap.
  const double gap = run.gap.value_or(from_lambda0(0.25));
  const Scene base = cfg.scene_at(gap);
  if (g.x_param.quantity != Quantity::Gap && g.y_param.quantity != Quantity::Gap && !run.gap) {
    throw config::ConfigError("<config>", 0, "run.gap", "grid needs a gap unless one axis varies it");
  }
  const auto grid = grid_scan(base, g.x_param, g.y_param, {g.x_min, g.x_max}, {g.y_min, g.y_max}, g.nx, g.ny,
                              run.quad, opt.jobs);

  std::vector<const ForceResult*> all;
  for (const auto& c : grid.cells) all.push_back(&c);
  const auto diagnostics = diagnostics_of(all);

  json matrix = json::array(), conv = json::array();
  for (Eigen::Index i = 0; i < grid.values.rows(); ++i) {
    json row = json::array(), crow = json::array();
    for (Eigen::Index j = 0; j < grid.values.cols(); ++j) {
      row.push_back(grid.values(i, j));
      crow.push_back(static_cast<bool>(grid.converged(i, j)));
    }
    matrix.push_back(row);
    conv.push_back(crow);
  }
  const json results = {{"x_param", g.x_param.name()}, {"y_param", g.y_param.name()},
                        {"x", grid.x_axis.values},      {"y", grid.y_axis.values},
                        {"F_r", matrix},                {"converged", conv}};
  const auto rec = make_record("grid", cfg, opt, results, diagnostics);

  if (opt.format.value_or(Format::Csv) == Format::Json) {
    out << rec.dump(2) << "\n";
  } else {
    out << kGridHeader << "\n";
    for (Eigen::Index i = 0; i < grid.values.rows(); ++i) {
      for (Eigen::Index j = 0; j < grid.values.cols(); ++j) {
        out << csv_number(grid.x_axis.values[static_cast<std::size_t>(i)]) << ','
            << csv_number(grid.y_axis.values[static_cast<std::size_t>(j)]) << ',' << csv_number(grid.values(i, j))
            << ',' << status_of(grid.cell(i, j)) << '\n';
      }
    }
  }
  write_record_file(opt, rec);
  const int failed = diagnostics["nonconverged"].get<int>();
  if (failed > 0) {
    warn_nonconverged(err, failed);
    return kConvergenceWarning;
  }
  return kOk;
}

int cmd_dispersion(const config::SceneConfig& cfg, const Options& opt, std::ostream& out, std::ostream& /*err*/) {
  const auto spec = cfg.run.dispersion.value_or(config::DispersionSpec{});
  const Material& material = dispersion_slab(cfg, spec.material).material();
  if (material.is_ideal()) throw IdealMaterialError();

  const auto omegas = sample_points(spec.omega_min, spec.omega_max, spec.n_omega, Spacing::Linear);
  const auto xis = sample_points(spec.xi_min, spec.xi_max, spec.n_xi, Spacing::Linear);

  json real_rows = json::array(), imag_rows = json::array();
  std::ostringstream csv;
  csv << kDispersionHeader << "\n";
  for (double w : omegas) {
    const auto [eps, mu] = eval_real_frequency(material, w);
    csv << "real," << csv_number(w) << ',' << csv_number(eps.real()) << ',' << csv_number(eps.imag()) << ','
        << csv_number(mu.real()) << ',' << csv_number(mu.imag()) << ",\n";
    real_rows.push_back({{"omega", w},
                         {"eps_re", eps.real()},
                         {"eps_im", eps.imag()},
                         {"mu_re", mu.real()},
                         {"mu_im", mu.imag()}});
  }
  const double inf = std::numeric_limits<double>::infinity();
  for (double xi : xis) {
    double eps = inf, mu = inf;
    if (const auto* dl = std::get_if<DrudeLorentz>(&material.model()); dl && xi == 0.0) {
      // Lossless plasma responses diverge at xi = 0; report them as inf.
      if (!dl->electric.static_divergent()) eps = detail::oscillator_imaginary(dl->electric, 0.0);
      if (!dl->magnetic.static_divergent()) mu = detail::oscillator_imaginary(dl->magnetic, 0.0);
    } else {
      const auto r = eval_imaginary_axis(material, xi);
      eps = r.eps;
      mu = r.mu;
    }
    const auto z = impedance(material, xi);
    csv << "imaginary," << csv_number(xi) << ',' << csv_number(eps) << ",0," << csv_number(mu) << ",0,"
        << csv_number(z.value) << '\n';
    imag_rows.push_back({{"xi", xi},
                         {"eps", std::isfinite(eps) ? json(eps) : json("inf")},
                         {"mu", std::isfinite(mu) ? json(mu) : json("inf")},
                         {"Z", z.is_finite() ? json(z.value) : json(z.limit == Impedance::Limit::Zero ? "limit-zero"
                                                                                                     : "limit-infinite")}});
  }
  const auto rec = make_record("dispersion", cfg, opt, {{"real_axis", real_rows}, {"imaginary_axis", imag_rows}},
                               {{"points", omegas.size() + xis.size()}});
  if (opt.format.value_or(Format::Csv) == Format::Json) {
    out << rec.dump(2) << "\n";
  } else {
    out << csv.str();
  }
  write_record_file(opt, rec);
  return kOk;
}

int dispatch(const std::string& command, const config::SceneConfig& cfg, const Options& opt, std::ostream& out,
             std::ostream& err) {
  try {
    if (command == "force") return cmd_force(cfg, opt, out, err);
    if (command == "sweep") return cmd_sweep(cfg, opt, out, err);
    if (command == "grid") return cmd_grid(cfg, opt, out, err);
    if (command == "dispersion") return cmd_dispersion(cfg, opt, out, err);
    err << "error: unknown command '" << command << "'\n";
    return kInvalidInput;
  } catch (const config::ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::invalid_argument& e) {
    err << "error: invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::domain_error& e) {
    err << "error: invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

config::SceneConfig config_from_record(const json& record) {
  return config::parse(record.at("config").get<std::string>(), "<record>");
}

}  // namespace casimir::cli

#include "casimir/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace casimir::config {

namespace {

struct Entry {
  std::string key;
  std::string value;
  int line;
};

struct Section {
  int line = 0;
  std::vector<Entry> entries;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

std::optional<int> to_int(std::string_view s) {
  int v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

std::string fmt_double(double v) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string fmt_length(double v) { return fmt_double(v) + " c_over_w0"; }

// Reads the entries of one section, rejecting anything not consumed.
class Reader {
 public:
  Reader(const std::string& source, std::string section, const Section& s)
      : source_(source), section_(std::move(section)), sec_(s) {}

  [[nodiscard]] const Entry* find(std::string_view key) const {
    for (const auto& e : sec_.entries) {
      if (e.key == key) return &e;
    }
    return nullptr;
  }

  [[nodiscard]] bool has(std::string_view key) const { return find(key) != nullptr; }

  const Entry* take(std::string_view key) {
    const Entry* e = find(key);
    if (e) used_.insert(std::string(key));
    return e;
  }

  [[noreturn]] void fail(const Entry& e, const std::string& reason) const {
    throw ConfigError(source_, e.line, section_ + "." + e.key, reason);
  }

  [[noreturn]] void fail_missing(std::string_view key, const std::string& reason = "required key is missing") const {
    throw ConfigError(source_, sec_.line, section_ + "." + std::string(key), reason);
  }

  std::optional<double> number(std::string_view key) {
    const Entry* e = take(key);
    if (!e) return std::nullopt;
    auto v = to_double(e->value);
    if (!v || !std::isfinite(*v)) fail(*e, "expected a finite number, got '" + e->value + "'");
    return v;
  }

  std::optional<int> integer(std::string_view key) {
    const Entry* e = take(key);
    if (!e) return std::nullopt;
    auto v = to_int(e->value);
    if (!v) fail(*e, "expected an integer, got '" + e->value + "'");
    return v;
  }

  std::optional<double> length(std::string_view key) {
    const Entry* e = take(key);
    if (!e) return std::nullopt;
    try {
      return parse_length(e->value);
    } catch (const std::exception& ex) {
      fail(*e, ex.what());
    }
  }

  std::optional<std::string> word(std::string_view key) {
    const Entry* e = take(key);
    if (!e) return std::nullopt;
    return e->value;
  }

  /// Runs `fn`, converting InvalidArgument into a diagnostic on `key`.
  template <class Fn>
  auto guarded(std::string_view key, Fn&& fn) -> decltype(fn()) {
    try {
      return fn();
    } catch (const std::invalid_argument& ex) {
      if (const Entry* e = find(key)) fail(*e, ex.what());
      fail_missing(key, ex.what());
    } catch (const std::domain_error& ex) {
      if (const Entry* e = find(key)) fail(*e, ex.what());
      fail_missing(key, ex.what());
    }
  }

  void reject_unused(std::string_view context = {}) const {
    for (const auto& e : sec_.entries) {
      if (!used_.contains(e.key)) {
        fail(e, context.empty() ? "unknown key" : "unknown key for " + std::string(context));
      }
    }
  }

 private:
  const std::string& source_;
  std::string section_;
  const Section& sec_;
  std::set<std::string> used_;
};

OscillatorParams read_oscillator(Reader& r, const std::string& prefix) {
  auto read = [&](const std::string& key) {
    const double v = r.number(key).value_or(0.0);
    if (v < 0.0) r.fail(*r.find(key), "must be >= 0");
    return v;
  };
  OscillatorParams p;
  p.omega_p = read(prefix + ".omega_p");
  p.omega_t = read(prefix + ".omega_t");
  p.gamma = read(prefix + ".gamma");
  return p;
}

Slab read_slab(const std::string& source, const std::string& name, const Section& sec) {
  Reader r(source, name, sec);
  const auto kind = r.word("material");
  if (!kind) r.fail_missing("material");

  Material material;
  if (*kind == "drude_lorentz") {
    const auto e = read_oscillator(r, "electric");
    const auto m = read_oscillator(r, "magnetic");
    material = r.guarded("material", [&] {
      e.validate("electric");
      m.validate("magnetic");
      return Material::drude_lorentz(e, m);
    });
  } else if (*kind == "constant") {
    const auto eps = r.number("eps");
    if (!eps) r.fail_missing("eps");
    const double mu = r.number("mu").value_or(1.0);
    if (!(*eps > 0.0)) r.fail(*r.find("eps"), "must be > 0");
    if (!(mu > 0.0)) r.fail(*r.find("mu"), "must be > 0");
    material = Material::constant(*eps, mu);
  } else if (*kind == "perfect_conductor") {
    material = Material::perfect_conductor();
  } else if (*kind == "infinitely_permeable") {
    material = Material::infinitely_permeable();
  } else if (*kind == "vacuum") {
    material = Material::vacuum();
  } else {
    r.fail(*r.find("material"), "unknown material kind '" + *kind +
                                    "' (expected drude_lorentz, constant, perfect_conductor, "
                                    "infinitely_permeable or vacuum)");
  }

  Thickness thickness = Thickness::semi_infinite();
  if (const Entry* t = r.find("thickness"); t && t->value != "semi_infinite") {
    const double d = *r.length("thickness");
    thickness = r.guarded("thickness", [&] { return Thickness::finite(d); });
  } else {
    r.take("thickness");
  }
  r.reject_unused("material " + *kind);
  return r.guarded("thickness", [&] { return Slab(material, thickness); });
}

Side read_side(Reader& r, std::string_view key) {
  const auto v = r.word(key);
  if (!v) return Side::A;
  if (*v == "slab_a") return Side::A;
  if (*v == "slab_b") return Side::B;
  r.fail(*r.find(key), "expected slab_a or slab_b");
}

RunSpec read_run(const std::string& source, const Section& sec) {
  Reader r(source, "run", sec);
  RunSpec run;
  run.gap = r.length("gap");
  if (run.gap && !(*run.gap > 0.0)) r.fail(*r.find("gap"), "must be > 0");
  run.gap_min = r.length("gap_min");
  run.gap_max = r.length("gap_max");
  if (run.gap_min && !(*run.gap_min > 0.0)) r.fail(*r.find("gap_min"), "must be > 0");
  if (run.gap_max && !(*run.gap_max > 0.0)) r.fail(*r.find("gap_max"), "must be > 0");
  if (run.gap_min.has_value() != run.gap_max.has_value()) {
    r.fail_missing(run.gap_min ? "gap_max" : "gap_min", "gap_min and gap_max must be given together");
  }
  if (run.gap_min && !(*run.gap_min < *run.gap_max)) r.fail(*r.find("gap_max"), "must exceed gap_min");
  if (auto n = r.integer("n_points")) {
    if (*n < 2) r.fail(*r.find("n_points"), "must be >= 2");
    run.n_points = *n;
  }
  if (auto s = r.word("spacing")) {
    if (*s == "log") {
      run.spacing = Spacing::Log;
    } else if (*s == "linear") {
      run.spacing = Spacing::Linear;
    } else {
      r.fail(*r.find("spacing"), "expected log or linear");
    }
  }
  if (auto t = r.length("refine_tol")) {
    if (!(*t > 0.0)) r.fail(*r.find("refine_tol"), "must be > 0");
    run.refine_tol = *t;
  }

  if (auto v = r.number("rel_tol")) {
    if (!(*v > 0.0 && *v < 1.0)) r.fail(*r.find("rel_tol"), "must lie in (0, 1)");
    run.quad.rel_tol = *v;
  }
  if (auto v = r.number("abs_tol")) {
    if (!(*v >= 0.0)) r.fail(*r.find("abs_tol"), "must be >= 0");
    run.quad.abs_tol = *v;
  }
  if (auto v = r.integer("max_subdivisions")) {
    if (*v <= 0) r.fail(*r.find("max_subdivisions"), "must be > 0");
    run.quad.max_subdivisions = *v;
  }
  if (auto v = r.number("tail_cutoff")) {
    if (!(*v > 0.0 && *v < 1.0)) r.fail(*r.find("tail_cutoff"), "must lie in (0, 1)");
    run.quad.tail_cutoff = *v;
  }

  static constexpr std::array<std::string_view, 8> kGridKeys = {"x_param", "x_min", "x_max", "nx",
                                                                "y_param", "y_min", "y_max", "ny"};
  if (std::any_of(kGridKeys.begin(), kGridKeys.end(), [&](auto k) { return r.has(k); })) {
    for (auto k : kGridKeys) {
      if (!r.has(k)) r.fail_missing(k, "grid runs need all of x_param, x_min, x_max, nx, y_param, y_min, y_max, ny");
    }
    GridSpec g;
    auto axis = [&](char c, Parameter& param, double& lo, double& hi, int& n) {
      const std::string p(1, c);
      const auto name = *r.word(p + "_param");
      param = r.guarded(p + "_param", [&] { return Parameter::parse(name); });
      if (param.quantity == Quantity::Gap) {
        lo = *r.length(p + "_min");
        hi = *r.length(p + "_max");
      } else {
        lo = *r.number(p + "_min");
        hi = *r.number(p + "_max");
      }
      n = *r.integer("n" + p);
      if (n < 1) r.fail(*r.find("n" + p), "must be >= 1");
      if (hi < lo) r.fail(*r.find(p + "_max"), "must be >= " + p + "_min");
    };
    axis('x', g.x_param, g.x_min, g.x_max, g.nx);
    axis('y', g.y_param, g.y_min, g.y_max, g.ny);
    if (g.x_param == g.y_param) r.fail(*r.find("y_param"), "must differ from x_param");
    run.grid = g;
  }

  static constexpr std::array<std::string_view, 7> kDispersionKeys = {
      "dispersion_material", "omega_min", "omega_max", "n_omega", "xi_min", "xi_max", "n_xi"};
  if (std::any_of(kDispersionKeys.begin(), kDispersionKeys.end(), [&](auto k) { return r.has(k); })) {
    DispersionSpec d;
    d.material = read_side(r, "dispersion_material");
    d.omega_min = r.number("omega_min").value_or(d.omega_min);
    d.omega_max = r.number("omega_max").value_or(d.omega_max);
    d.n_omega = r.integer("n_omega").value_or(d.n_omega);
    d.xi_min = r.number("xi_min").value_or(d.xi_min);
    d.xi_max = r.number("xi_max").value_or(d.xi_max);
    d.n_xi = r.integer("n_xi").value_or(d.n_xi);
    auto where = [&](std::string_view k) -> const Entry& {
      if (const Entry* e = r.find(k)) return *e;
      r.fail_missing(k, "inconsistent default");
    };
    if (!(d.omega_min > 0.0)) r.fail(where("omega_min"), "must be > 0");
    if (!(d.omega_max >= d.omega_min)) r.fail(where("omega_max"), "must be >= omega_min");
    if (d.n_omega < 1) r.fail(where("n_omega"), "must be >= 1");
    if (!(d.xi_min >= 0.0)) r.fail(where("xi_min"), "must be >= 0");
    if (!(d.xi_max >= d.xi_min)) r.fail(where("xi_max"), "must be >= xi_min");
    if (d.n_xi < 1) r.fail(where("n_xi"), "must be >= 1");
    run.dispersion = d;
  }

  r.reject_unused("section run");
  return run;
}

std::string parameter_value(const Parameter& p, double v) {
  return p.quantity == Quantity::Gap ? fmt_length(v) : fmt_double(v);
}

void write_slab(std::ostringstream& os, const char* name, const Slab& slab) {
  os << "[" << name << "]\n";
  os << "material = " << slab.material().kind_name() << "\n";
  const auto& m = slab.material().model();
  if (const auto* dl = std::get_if<DrudeLorentz>(&m)) {
    auto osc = [&](const char* prefix, const OscillatorParams& p) {
      os << prefix << ".omega_p = " << fmt_double(p.omega_p) << "\n";
      os << prefix << ".omega_t = " << fmt_double(p.omega_t) << "\n";
      os << prefix << ".gamma = " << fmt_double(p.gamma) << "\n";
    };
    osc("electric", dl->electric);
    osc("magnetic", dl->magnetic);
  } else if (const auto* c = std::get_if<ConstantResponse>(&m)) {
    os << "eps = " << fmt_double(c->eps) << "\n";
    os << "mu = " << fmt_double(c->mu) << "\n";
  }
  os << "thickness = "
     << (slab.thickness().is_finite() ? fmt_length(slab.thickness().value()) : std::string("semi_infinite")) << "\n\n";
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& field, const std::string& reason)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + field + ": " + reason),
      line_(line),
      field_(field) {}

double parse_length(std::string_view text) {
  const auto t = trim(text);
  const auto space = t.find_first_of(" \t");
  if (space == std::string_view::npos) {
    throw InvalidArgument("length '" + std::string(t) + "' needs a unit tag (lambda0 or c_over_w0)");
  }
  const auto num = to_double(trim(t.substr(0, space)));
  const auto unit = trim(t.substr(space));
  if (!num || !std::isfinite(*num)) throw InvalidArgument("expected a finite number in '" + std::string(t) + "'");
  if (unit == "lambda0") return from_lambda0(*num);
  if (unit == "c_over_w0") return *num;
  throw InvalidArgument("unknown length unit '" + std::string(unit) + "' (expected lambda0 or c_over_w0)");
}

Scene SceneConfig::scene() const {
  if (!run.gap) throw ConfigError("<config>", 0, "run.gap", "a single gap is required for this command");
  return scene_at(*run.gap);
}

Scene SceneConfig::scene_at(double gap) const {
  if (!slab_a) throw ConfigError("<config>", 0, "slab_a", "section is required for this command");
  if (!slab_b) throw ConfigError("<config>", 0, "slab_b", "section is required for this command");
  return Scene(*slab_a, *slab_b, gap);
}

SceneConfig parse(std::string_view text, const std::string& source) {
  std::map<std::string, Section, std::less<>> sections;
  Section* current = nullptr;
  std::string current_name;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    const auto line = trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(source, line_no, std::string(line), "malformed section header");
      const std::string name(trim(line.substr(1, line.size() - 2)));
      if (name != "slab_a" && name != "slab_b" && name != "run") {
        throw ConfigError(source, line_no, name, "unknown section (expected slab_a, slab_b or run)");
      }
      if (sections.contains(name)) throw ConfigError(source, line_no, name, "duplicate section");
      current = &sections[name];
      current->line = line_no;
      current_name = name;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(source, line_no, std::string(line), "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!current) throw ConfigError(source, line_no, key, "key outside of any section");
    if (key.empty()) throw ConfigError(source, line_no, current_name, "empty key");
    if (value.empty()) throw ConfigError(source, line_no, current_name + "." + key, "empty value");
    for (const auto& e : current->entries) {
      if (e.key == key) throw ConfigError(source, line_no, current_name + "." + key, "duplicate key");
    }
    current->entries.push_back({key, value, line_no});
  }

  SceneConfig cfg;
  if (auto it = sections.find("slab_a"); it != sections.end()) cfg.slab_a = read_slab(source, "slab_a", it->second);
  if (auto it = sections.find("slab_b"); it != sections.end()) cfg.slab_b = read_slab(source, "slab_b", it->second);
  if (auto it = sections.find("run"); it != sections.end()) cfg.run = read_run(source, it->second);

  if (cfg.run.grid) {
    // Catch parameters that do not exist on the configured materials now,
    // with a field-precise message, instead of mid-scan.
    for (auto [param, key] : {std::pair{cfg.run.grid->x_param, "x_param"}, std::pair{cfg.run.grid->y_param, "y_param"}}) {
      if (param.quantity == Quantity::Gap || !cfg.slab_a || !cfg.slab_b) continue;
      try {
        (void)read_parameter(cfg.scene_at(1.0), param);
      } catch (const std::invalid_argument& ex) {
        const auto& run = sections.at("run");
        int line = run.line;
        for (const auto& e : run.entries) {
          if (e.key == key) line = e.line;
        }
        throw ConfigError(source, line, std::string("run.") + key, ex.what());
      }
    }
  }
  return cfg;
}

SceneConfig load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, 0, "file", "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::string to_text(const SceneConfig& c) {
  std::ostringstream os;
  if (c.slab_a) write_slab(os, "slab_a", *c.slab_a);
  if (c.slab_b) write_slab(os, "slab_b", *c.slab_b);
  const auto& r = c.run;
  os << "[run]\n";
  if (r.gap) os << "gap = " << fmt_length(*r.gap) << "\n";
  if (r.gap_min) os << "gap_min = " << fmt_length(*r.gap_min) << "\n";
  if (r.gap_max) os << "gap_max = " << fmt_length(*r.gap_max) << "\n";
  os << "n_points = " << r.n_points << "\n";
  os << "spacing = " << to_string(r.spacing) << "\n";
  os << "refine_tol = " << fmt_length(r.refine_tol) << "\n";
  os << "rel_tol = " << fmt_double(r.quad.rel_tol) << "\n";
  os << "abs_tol = " << fmt_double(r.quad.abs_tol) << "\n";
  os << "max_subdivisions = " << r.quad.max_subdivisions << "\n";
  os << "tail_cutoff = " << fmt_double(r.quad.tail_cutoff) << "\n";
  if (r.grid) {
    const auto& g = *r.grid;
    os << "x_param = " << g.x_param.name() << "\n";
    os << "x_min = " << parameter_value(g.x_param, g.x_min) << "\n";
    os << "x_max = " << parameter_value(g.x_param, g.x_max) << "\n";
    os << "nx = " << g.nx << "\n";
    os << "y_param = " << g.y_param.name() << "\n";
    os << "y_min = " << parameter_value(g.y_param, g.y_min) << "\n";
    os << "y_max = " << parameter_value(g.y_param, g.y_max) << "\n";
    os << "ny = " << g.ny << "\n";
  }
  if (r.dispersion) {
    const auto& d = *r.dispersion;
    os << "dispersion_material = " << (d.material == Side::A ? "slab_a" : "slab_b") << "\n";
    os << "omega_min = " << fmt_double(d.omega_min) << "\n";
    os << "omega_max = " << fmt_double(d.omega_max) << "\n";
    os << "n_omega = " << d.n_omega << "\n";
    os << "xi_min = " << fmt_double(d.xi_min) << "\n";
    os << "xi_max = " << fmt_double(d.xi_max) << "\n";
    os << "n_xi = " << d.n_xi << "\n";
  }
  return os.str();
}

}  // namespace casimir::config

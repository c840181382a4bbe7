#include <doctest.h>

#include <filesystem>
#include <string>

#include "casimir/config.hpp"

using namespace casimir;
using casimir::config::ConfigError;

namespace {

const char* kBase = R"(# two dielectrics
[slab_a]
material = constant
eps = 2.5

[slab_b]
material = drude_lorentz
electric.omega_p = 1
electric.omega_t = 0.5
electric.gamma = 0.005
magnetic.omega_p = 1.5

[run]
gap = 0.25 lambda0
)";

ConfigError parse_error(const std::string& text) {
  try {
    config::parse(text, "t.conf");
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a ConfigError");
  return ConfigError("", 0, "", "");
}

std::string with_run(const std::string& extra) { return std::string(kBase) + extra; }

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("basic parse") {
    const auto c = config::parse(kBase);
    REQUIRE(c.slab_a);
    REQUIRE(c.slab_b);
    CHECK(c.slab_a->material() == Material::constant(2.5, 1.0));
    const auto& dl = std::get<DrudeLorentz>(c.slab_b->material().model());
    CHECK(dl.electric == OscillatorParams{1.0, 0.5, 0.005});
    CHECK(dl.magnetic == OscillatorParams{1.5, 0.0, 0.0});
    CHECK(*c.run.gap == doctest::Approx(kLambda0 / 4).epsilon(1e-15));
    CHECK(c.scene().gap() == *c.run.gap);
    CHECK(c.run.quad == QuadratureSpec{});
  }

  TEST_CASE("lengths need a unit") {
    CHECK(config::parse_length("2 c_over_w0") == 2.0);
    CHECK(config::parse_length("0.5 lambda0") == doctest::Approx(std::numbers::pi));
    CHECK(config::parse_length("  1e-3   lambda0 ") == doctest::Approx(2e-3 * std::numbers::pi));
    CHECK_THROWS_AS(config::parse_length("0.5"), InvalidArgument);
    CHECK_THROWS_AS(config::parse_length("0.5 nm"), InvalidArgument);
    CHECK_THROWS_AS(config::parse_length("x lambda0"), InvalidArgument);

    const auto e = parse_error(with_run("gap_min = 0.1\n"));
    CHECK(e.field() == "run.gap_min");
    CHECK(e.line() == 15);
  }

  TEST_CASE("negative gap names the field") {
    std::string text = kBase;
    text.replace(text.find("gap = 0.25"), 10, "gap = -0.25");
    const auto e = parse_error(text);
    CHECK(e.field() == "run.gap");
    CHECK(e.line() == 14);
    CHECK(std::string(e.what()).starts_with("t.conf:14: run.gap: "));
  }

  TEST_CASE("strict keys and sections") {
    CHECK(parse_error(with_run("gapp = 1 lambda0\n")).field() == "run.gapp");
    CHECK(parse_error(std::string(kBase) + "[slab_c]\n").field() == "slab_c");
    CHECK(parse_error(with_run("gap = 1 lambda0\n")).field() == "run.gap");  // duplicate
    CHECK(parse_error("[slab_a]\nmaterial = unobtainium\n").field() == "slab_a.material");
    CHECK(parse_error("[slab_a]\nmaterial = constant\n").field() == "slab_a.eps");
    CHECK(parse_error("[slab_a]\nmaterial = constant\neps = 2\nelectric.omega_p = 1\n").field() ==
          "slab_a.electric.omega_p");
    CHECK(parse_error("[slab_a]\nmaterial = perfect_conductor\nthickness = 1 lambda0\n").field() ==
          "slab_a.thickness");
    CHECK(parse_error("[slab_a]\nmaterial = drude_lorentz\nelectric.omega_p = -1\n").field() ==
          "slab_a.electric.omega_p");
    CHECK(parse_error("[slab_a]\nmaterial = drude_lorentz\nelectric.gamma = abc\n").field() ==
          "slab_a.electric.gamma");
    CHECK(parse_error("gap = 1 lambda0\n").line() == 1);
    CHECK(parse_error("[run]\nn_points = 1\n").field() == "run.n_points");
    CHECK(parse_error("[run]\nspacing = cubic\n").field() == "run.spacing");
    CHECK(parse_error("[run]\nrel_tol = 0\n").field() == "run.rel_tol");
    CHECK(parse_error("[run]\ntail_cutoff = 1\n").field() == "run.tail_cutoff");
    CHECK(parse_error("[run]\ngap_min = 2 lambda0\ngap_max = 1 lambda0\n").field() == "run.gap_max");
    CHECK(parse_error("[run]\nfoo\n").line() == 2);
  }

  TEST_CASE("grid keys") {
    const auto c = config::parse(with_run("x_param = slab_a.eps\nx_min = 0.5\nx_max = 4\nnx = 3\n"
                                          "y_param = gap\ny_min = 0.1 lambda0\ny_max = 1 lambda0\nny = 2\n"));
    REQUIRE(c.run.grid);
    CHECK(c.run.grid->x_param == Parameter{Quantity::ConstantEps, Side::A});
    CHECK(c.run.grid->y_max == doctest::Approx(kLambda0));
    CHECK(parse_error(with_run("x_param = slab_a.eps\n")).field().starts_with("run."));
    CHECK(parse_error(with_run("x_param = slab_a.electric.omega_p\nx_min = 0.5\nx_max = 4\nnx = 3\n"
                               "y_param = gap\ny_min = 0.1 lambda0\ny_max = 1 lambda0\nny = 2\n"))
              .field() == "run.x_param");
  }

  TEST_CASE("dispersion keys") {
    const auto c = config::parse("[slab_b]\nmaterial = constant\neps = 3\n[run]\ndispersion_material = slab_b\n"
                                 "n_omega = 10\n");
    REQUIRE(c.run.dispersion);
    CHECK(c.run.dispersion->material == Side::B);
    CHECK(c.run.dispersion->n_omega == 10);
    CHECK(c.run.dispersion->xi_max == 3.0);
    CHECK(parse_error("[run]\ndispersion_material = slab_q\n").field() == "run.dispersion_material");
  }

  TEST_CASE("thickness") {
    const auto c = config::parse("[slab_a]\nmaterial = constant\neps = 4\nthickness = 0.1 lambda0\n");
    CHECK(c.slab_a->thickness().is_finite());
    CHECK(c.slab_a->thickness().value() == doctest::Approx(0.1 * kLambda0));
  }

  TEST_CASE("to_text round-trips every shipped config") {
    int seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(CASIMIR_SOURCE_DIR "/configs")) {
      if (entry.path().extension() != ".conf") continue;
      ++seen;
      CAPTURE(entry.path().string());
      const auto c = config::load(entry.path().string());
      const auto text = config::to_text(c);
      CHECK(config::parse(text) == c);
      CHECK(config::to_text(config::parse(text)) == text);
    }
    CHECK(seen >= 10);
  }

  TEST_CASE("to_text round-trips non-default settings") {
    auto c = config::parse(with_run("rel_tol = 1e-8\nabs_tol = 0\nmax_subdivisions = 57\ntail_cutoff = 1e-12\n"
                                    "spacing = linear\nn_points = 7\nrefine_tol = 3e-7 c_over_w0\n"));
    c.slab_a = Slab(Material::constant(0.1 + 0.2, 1.0 / 3.0), Thickness::finite(0.3));
    CHECK(config::parse(config::to_text(c)) == c);
  }

  TEST_CASE("missing file") {
    CHECK_THROWS_AS(config::load("/nonexistent/x.conf"), ConfigError);
  }
}

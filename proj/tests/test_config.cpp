#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pvtol/config.hpp"

using namespace pvtol;

TEST_CASE("defaults") {
  CliConfig cfg;
  const SimConfig sim = cfg.sim_config();
  CHECK(sim.controller == ControllerKind::InvOpt);
  CHECK(sim.dt == doctest::Approx(1e-3));
  CHECK(sim.t_final == doctest::Approx(30.0));
  CHECK(sim.decimation == 10);
  CHECK(sim.plant.gravity == doctest::Approx(9.81));
  CHECK(sim.kx == doctest::Approx(1.0));
  CHECK(sim.k0(3) == doctest::Approx(2.55));
  REQUIRE(sim.init_comp.has_value());
  CHECK(sim.init_comp->fhat == doctest::Approx(9.81)); // "hover" sentinel

  const MonteCarloConfig mc = cfg.mc_config(7);
  CHECK(mc.n_runs == 100);
  CHECK(mc.delta_lo == doctest::Approx(0.2));
  CHECK(mc.delta_hi == doctest::Approx(5.0));
  CHECK(mc.seed == 7);

  CHECK(cfg.grid_lo() == doctest::Approx(0.2));
  CHECK(cfg.grid_hi() == doctest::Approx(1e6));
  CHECK(cfg.grid_n() == 25);
}

TEST_CASE("parsing") {
  SUBCASE("comments, blank lines, whitespace") {
    const CliConfig cfg = CliConfig::from_string(
        "# a comment\n"
        "\n"
        "  sim.dt = 5e-4   # trailing comment\n"
        "controller=fbl\n");
    const SimConfig sim = cfg.sim_config();
    CHECK(sim.dt == doctest::Approx(5e-4));
    CHECK(sim.controller == ControllerKind::Fbl);
  }
  SUBCASE("unknown key is rejected with its name") {
    try {
      CliConfig::from_string("sim.dts = 1\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("sim.dts") != std::string::npos);
    }
  }
  SUBCASE("malformed line reports its number") {
    try {
      CliConfig::from_string("sim.dt = 1e-3\nnonsense\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
  }
  SUBCASE("non-numeric value") {
    const CliConfig cfg = CliConfig::from_string("sim.dt = fast\n");
    CHECK_THROWS_AS(cfg.sim_config(), ConfigError);
  }
}

TEST_CASE("semantic validation surfaces the offending key") {
  SUBCASE("zero dt") {
    const CliConfig cfg = CliConfig::from_string("sim.dt = 0\n");
    try {
      cfg.sim_config();
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("dt") != std::string::npos);
    }
  }
  SUBCASE("bad controller name") {
    const CliConfig cfg = CliConfig::from_string("controller = pid\n");
    CHECK_THROWS_AS(cfg.sim_config(), ConfigError);
  }
  SUBCASE("short gain vector") {
    const CliConfig cfg = CliConfig::from_string("control.k0 = 1,2,3\n");
    CHECK_THROWS_AS(cfg.sim_config(), ConfigError);
  }
  SUBCASE("inverted Monte-Carlo range") {
    const CliConfig cfg = CliConfig::from_string("mc.delta_lo = 6\n");
    CHECK_THROWS_AS(cfg.mc_config(0), ConfigError);
  }
}

TEST_CASE("set overrides") {
  CliConfig cfg = CliConfig::from_string("sim.dt = 1e-3\n");
  cfg.set("sim.dt=2.5e-4");
  cfg.set("control.setpoint = 5, 5");
  const SimConfig sim = cfg.sim_config();
  CHECK(sim.dt == doctest::Approx(2.5e-4));
  CHECK(sim.setpoint.x_ref == doctest::Approx(5.0));

  CHECK_THROWS_AS(cfg.set("no-equals-sign"), ConfigError);
  CHECK_THROWS_AS(cfg.set("bogus.key=1"), ConfigError);
}

TEST_CASE("serialize round-trips the effective configuration") {
  CliConfig cfg = CliConfig::from_string("sim.dt = 5e-4\ncontrol.kx = 2\n");
  cfg.set("init.theta=0.1");
  const std::string text = cfg.serialize();
  const CliConfig replay = CliConfig::from_string(text);
  CHECK(replay.serialize() == text);

  const SimConfig a = cfg.sim_config();
  const SimConfig b = replay.sim_config();
  CHECK(a.dt == b.dt);
  CHECK(a.kx == b.kx);
  CHECK(a.init_plant.theta == b.init_plant.theta);
  // Every schema key appears exactly once, sorted.
  CHECK(text.find("clf.grid_hi") < text.find("clf.grid_lo"));
  CHECK(text.find("sim.dt = 5e-4") != std::string::npos);
}

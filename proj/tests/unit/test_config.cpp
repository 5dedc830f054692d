#include <cmath>
#include <numbers>
#include <string>

#include "doctest.h"
#include "spinsq/config.hpp"
#include "spinsq/errors.hpp"

using namespace spinsq;

TEST_CASE("minimal config keeps the defaults") {
    const RunConfig c = parse_config(R"({"version": 1})");
    CHECK(c.lattice.rows == 4);
    CHECK(c.lattice.cols == 4);
    CHECK(c.lattice.spacing_um == 15.0);
    CHECK(c.lattice.boundary == Boundary::open);
    CHECK(c.J_MHz == 0.25);
    CHECK(c.hamiltonian == HamiltonianKind::XY);
    CHECK(c.protocol.kind == ProtocolKind::quench);
    CHECK(c.errors.eta == 0.0);
    CHECK(c.errors.eps_up == 0.0);
    CHECK(c.errors.eps_down == 0.0);
    CHECK(c.shots == 0);
    CHECK(c.seed == 1);
}

TEST_CASE("an errors section starts from the experimental values") {
    const RunConfig c = parse_config(R"({"version": 1, "errors": {}})");
    CHECK(c.errors.eta == 0.02);
    CHECK(c.errors.eps_up == 0.025);
    CHECK(c.errors.eps_down == 0.010);
    CHECK(c.errors.rotation_bias_deg == 0.0);

    const RunConfig d = parse_config(R"({"version": 1, "errors": {"eps_up": 0.05}})");
    CHECK(d.errors.eps_up == 0.05);
    CHECK(d.errors.eta == 0.02);
}

TEST_CASE("malformed configs are rejected") {
    const char* bad[] = {
        R"({})",
        R"({"version": 2})",
        R"({"version": 1, "colour": 3})",
        R"({"version": 1, "lattice": {"rows": 2, "depth": 1}})",
        R"({"version": 1, "J_MHz": -1})",
        R"({"version": 1, "J_MHz": "fast"})",
        R"({"version": 1, "hamiltonian": "ising"})",
        R"({"version": 1, "lattice": {"boundary": "twisted"}})",
        R"({"version": 1, "protocol": {"kind": "echo"}})",
        R"({"version": 1, "protocol": {"pulse": {"type": "triangle"}}})",
        R"({"version": 1, "shots": 1})",
        R"({"version": 1, "errors": {"eta": 1.5}})",
        R"({"version": 1, "errors": {"eps_up": 0.3, "eps_down": 0.3}})",
        R"({"version": 1, "time": {"times_us": [0.2, 0.1]}})",
        R"({"version": 1, "time": {"step_us": 0}})",
        R"({"version": 1, "lattice": {"rows": 6, "cols": 6}})",
        R"({"version": 1, "protocol": {"wahuha_fractions": [0.2, 0.2, 0.2, 0.2, 0.3]}})",
        R"({"version": 1, "scaling": {"sizes": [[2, 2, 2]]}})",
        R"(not json)",
    };
    for (const char* text : bad) {
        CAPTURE(text);
        CHECK_THROWS_AS(parse_config(text), ConfigError);
    }
}

TEST_CASE("loading a missing file is a config error") {
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("config_to_json round trips") {
    const RunConfig c = parse_config(R"({
        "version": 1,
        "lattice": {"rows": 3, "cols": 2, "spacing_um": 12.5, "boundary": "periodic", "holes": [1]},
        "J_MHz": 0.3,
        "hamiltonian": "heisenberg",
        "protocol": {"kind": "multistep", "angle_deg": -25, "pulse": {"type": "gaussian", "half_width_ns": 40}},
        "errors": {"eta": 0.05, "rotation_bias_deg": 1.5},
        "shots": 100,
        "time": {"times_us": [0, 0.1, 0.25]},
        "seed": 42,
        "oat": {"sizes": [8, 16, 32], "chi_MHz": 0.01},
        "scaling": {"sizes": [[2, 2], [2, 3], [3, 3]]}
    })");
    const std::string once = config_to_json(c);
    const RunConfig back = parse_config(once);
    CHECK(config_to_json(back) == once);

    CHECK(back.lattice.rows == 3);
    CHECK(back.lattice.boundary == Boundary::periodic);
    CHECK(back.lattice.holes.count(1) == 1);
    CHECK(back.hamiltonian == HamiltonianKind::Heisenberg);
    CHECK(back.protocol.kind == ProtocolKind::multistep);
    REQUIRE(back.protocol.angle_rad.has_value());
    CHECK(*back.protocol.angle_rad * 180.0 / std::numbers::pi == doctest::Approx(-25.0).epsilon(1e-12));
    CHECK(back.protocol.pulse.finite);
    CHECK(back.protocol.pulse.shape == PulseShape::gaussian);
    CHECK(back.errors.eta == 0.05);
    CHECK(back.errors.eps_up == 0.025);
    CHECK(back.errors.rotation_bias_deg == 1.5);
    CHECK(back.shots == 100);
    CHECK(back.seed == 42);
    CHECK(back.time.points() == std::vector<double>{0, 0.1, 0.25});
    REQUIRE(back.oat.chi_MHz.has_value());
    CHECK(*back.oat.chi_MHz == 0.01);
    CHECK(back.scaling.sizes.size() == 3);

    const RunConfig ideal = parse_config(config_to_json(parse_config(R"({"version": 1})")));
    CHECK(ideal.errors.eta == 0.0);
    CHECK(ideal.errors.eps_up == 0.0);
}

TEST_CASE("time grid points") {
    TimeGrid g;
    g.start_us = 0.0;
    g.stop_us = 0.3;
    g.step_us = 0.1;
    const auto p = g.points();
    REQUIRE(p.size() == 4);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(p[i] == doctest::Approx(0.1 * static_cast<double>(i)));

    g.start_us = 0.05;
    g.stop_us = 0.05;
    CHECK(g.points() == std::vector<double>{0.05});

    g.stop_us = 0.0;
    CHECK_THROWS_AS(g.points(), ConfigError);

    TimeGrid e;
    e.explicit_us = {0.0, 0.2, 0.2, 0.5};
    CHECK(e.points() == e.explicit_us);
    e.explicit_us = {-0.1, 0.2};
    CHECK_THROWS_AS(e.points(), ConfigError);
}

TEST_CASE("shipped example configs parse") {
    for (const char* name : {"quench_4x4.json", "ideal_scaling.json", "floquet_4x4.json", "multistep_4x4.json"}) {
        CAPTURE(name);
        CHECK_NOTHROW(load_config(std::string(SPINSQ_CONFIG_DIR) + "/" + name));
    }
}

#include <cmath>

#include "doctest.h"
#include "spinsq/errors.hpp"
#include "spinsq/lattice.hpp"

using namespace spinsq;

TEST_CASE("positions are row-major on the grid") {
    const auto p = build_lattice({1, 2, 15.0, Boundary::open, {}});
    REQUIRE(p.size() == 2);
    CHECK(p[0].x_um == 0.0);
    CHECK(p[0].y_um == 0.0);
    CHECK(p[1].x_um == 15.0);
    CHECK(p[1].y_um == 0.0);

    const auto q = build_lattice({2, 2, 15.0, Boundary::open, {}});
    REQUIRE(q.size() == 4);
    const double d = std::hypot(q[3].x_um - q[0].x_um, q[3].y_um - q[0].y_um);
    CHECK(d == doctest::Approx(15.0 * std::sqrt(2.0)).epsilon(1e-14));

    CHECK(build_lattice({10, 10, 15.0, Boundary::open, {}}).size() == 100);
}

TEST_CASE("holes are removed and indices compacted") {
    LatticeSpec s{2, 3, 10.0, Boundary::open, {1, 4}};
    const auto p = build_lattice(s);
    REQUIRE(p.size() == 4);
    CHECK(s.n_atoms() == 4);
    // surviving grid indices 0, 2, 3, 5
    CHECK(p[1].x_um == 20.0);
    CHECK(p[2].y_um == 10.0);
    CHECK(p[3].x_um == 20.0);
    CHECK(p[3].y_um == 10.0);
}

TEST_CASE("lattice validation") {
    CHECK_THROWS_AS(LatticeSpec({0, 3, 15.0, Boundary::open, {}}).validate(), ConfigError);
    CHECK_THROWS_AS(LatticeSpec({2, 2, 0.0, Boundary::open, {}}).validate(), ConfigError);
    CHECK_THROWS_AS(LatticeSpec({2, 2, 15.0, Boundary::open, {4}}).validate(), ConfigError);
    CHECK_THROWS_AS(LatticeSpec({1, 1, 15.0, Boundary::open, {0}}).validate(), ConfigError);
    CHECK_NOTHROW(LatticeSpec({3, 3, 15.0, Boundary::periodic, {4}}).validate());
}

TEST_CASE("cubic coupling law") {
    const std::vector<Position> p{{0, 0}, {15, 0}, {30, 0}, {15, 15}};
    const auto w = coupling_matrix(p, 15.0);
    CHECK(w(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w(0, 2) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(w(0, 3) == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-14));
    CHECK(w(0, 3) == doctest::Approx(0.35355).epsilon(1e-5));
    CHECK(w(0, 0) == 0.0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(w(i, j) == w(j, i));
}

TEST_CASE("coincident positions are rejected") {
    const std::vector<Position> p{{0, 0}, {0, 0}};
    CHECK_THROWS(coupling_matrix(p, 15.0));
}

TEST_CASE("periodic minimum image") {
    const LatticeSpec open{4, 4, 15.0, Boundary::open, {}};
    const LatticeSpec per{4, 4, 15.0, Boundary::periodic, {}};
    const auto wo = coupling_matrix(open);
    const auto wp = coupling_matrix(per);
    // sites 0 and 3 sit on opposite ends of a row: one spacing apart across the boundary
    CHECK(wo(0, 3) == doctest::Approx(1.0 / 27.0));
    CHECK(wp(0, 3) == doctest::Approx(1.0));
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) CHECK(wp(i, j) >= wo(i, j) - 1e-15);
}

TEST_CASE("coupling is symmetric under a 90 degree lattice rotation") {
    const int L = 4;
    const auto w = coupling_matrix(LatticeSpec{L, L, 15.0, Boundary::open, {}});
    auto rot = [&](int i) {
        const int r = i / L, c = i % L;
        return c * L + (L - 1 - r);
    };
    for (int i = 0; i < L * L; ++i)
        for (int j = 0; j < L * L; ++j) CHECK(w(rot(i), rot(j)) == doctest::Approx(w(i, j)).epsilon(1e-14));
}

TEST_CASE("moment of inertia") {
    const std::vector<Position> pair{{0, 0}, {15, 0}};
    CHECK(moment_of_inertia(coupling_matrix(pair, 15.0), 0.25) == doctest::Approx(0.25).epsilon(1e-15));

    const auto w22 = coupling_matrix(LatticeSpec{2, 2, 15.0, Boundary::open, {}});
    const double expect = 2.0 * 0.25 * (4.0 + 2.0 * std::pow(2.0, -1.5)) / 12.0;
    CHECK(moment_of_inertia(w22, 0.25) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(expect == doctest::Approx(0.19613).epsilon(1e-4));

    // 6x6: independent double loop over positions
    const auto pos = build_lattice({6, 6, 15.0, Boundary::open, {}});
    double sum = 0.0;
    int pairs = 0;
    for (std::size_t i = 0; i < pos.size(); ++i) {
        for (std::size_t j = i + 1; j < pos.size(); ++j) {
            const double r = std::hypot(pos[i].x_um - pos[j].x_um, pos[i].y_um - pos[j].y_um) / 15.0;
            sum += 1.0 / (r * r * r);
            ++pairs;
        }
    }
    CHECK(pairs == 630);
    const double n = 36.0;
    CHECK(moment_of_inertia(coupling_matrix(pos, 15.0), 0.25) ==
          doctest::Approx(2.0 * 0.25 * sum / (n * (n - 1))).epsilon(1e-13));

    // linear in J, translation invariant
    const auto w66 = coupling_matrix(pos, 15.0);
    CHECK(moment_of_inertia(w66, 0.5) == doctest::Approx(2.0 * moment_of_inertia(w66, 0.25)).epsilon(1e-14));
    auto shifted = pos;
    for (auto& q : shifted) {
        q.x_um += 7.3;
        q.y_um -= 2.1;
    }
    CHECK(moment_of_inertia(coupling_matrix(shifted, 15.0), 0.25) ==
          doctest::Approx(moment_of_inertia(w66, 0.25)).epsilon(1e-12));

    CHECK(moment_of_inertia(CouplingMatrix::uniform(5, 0.3), 1.0) == doctest::Approx(0.3));
    CHECK_THROWS(moment_of_inertia(CouplingMatrix(1), 0.25));
}

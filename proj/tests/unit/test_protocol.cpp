#include <cmath>
#include <numbers>

#include "doctest.h"
#include "spinsq/errors.hpp"
#include "spinsq/measurement.hpp"
#include "spinsq/protocol.hpp"
#include "support.hpp"

using namespace spinsq;
using std::numbers::pi;

namespace {

HamiltonianSpec xy(int rows, int cols, double J = 0.25) {
    return HamiltonianSpec::xy(coupling_matrix(LatticeSpec{rows, cols, 15.0, Boundary::open, {}}), J);
}

HamiltonianSpec heis(int rows, int cols, double J = 0.25) {
    return HamiltonianSpec::heisenberg(coupling_matrix(LatticeSpec{rows, cols, 15.0, Boundary::open, {}}), J);
}

}  // namespace

TEST_CASE("coherent state along +y") {
    const auto v1 = prepare_coherent_y(1);
    // index 1 is |up>, index 0 is |dn>
    CHECK(std::abs(v1[1] - cplx(1 / std::sqrt(2.0), 0)) < 1e-15);
    CHECK(std::abs(v1[0] - cplx(0, 1 / std::sqrt(2.0))) < 1e-15);
    const auto sy = apply_collective(Axis::y, v1);
    CHECK(std::abs(sy[0] - 0.5 * v1[0]) < 1e-15);
    CHECK(std::abs(sy[1] - 0.5 * v1[1]) < 1e-15);

    const auto m4 = collective_expectations(prepare_coherent_y(4));
    CHECK(m4.mean[1] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(m4.var(Axis::z) == doctest::Approx(1.0).epsilon(1e-14));

    const auto r = squeezing_record(prepare_coherent_y(9), 0.0);
    CHECK(std::abs(r.xi2 - 1.0) < 1e-12);
    CHECK(std::abs(r.xi2_dB) < 1e-11);
    CHECK_THROWS_AS(prepare_coherent_y(0), ConfigError);
}

TEST_CASE("instantaneous rotations") {
    const int n = 4;
    const auto prepared = apply_pulse(pulses::preparation(), StateVector::all_up(n));
    CHECK(fidelity(prepared, prepare_coherent_y(n)) == doctest::Approx(1.0).epsilon(1e-14));

    // a pi/2 about +x lands on -y
    const auto px = apply_pulse(Pulse{0.0, pi / 2, {}}, StateVector::all_up(n));
    CHECK(collective_expectations(px).mean[1] == doctest::Approx(-2.0).epsilon(1e-13));

    const auto v = testsupport::random_state(n, 3);
    const Pulse half{0.3, pi / 2, {}}, full{0.3, pi, {}};
    CHECK(testsupport::max_abs_diff(apply_pulse(half, apply_pulse(half, v)), apply_pulse(full, v)) < 1e-14);
}

TEST_CASE("pulse durations and areas") {
    const Pulse sq{0.0, pi / 2, PulseModel::square(22.2)};
    CHECK(sq.duration_us() == doctest::Approx((pi / 2) / (2 * pi * 22.2)).epsilon(1e-14));
    CHECK(sq.area_until(sq.duration_us()) == doctest::Approx(pi / 2).epsilon(1e-12));
    const Pulse g{0.0, pi / 2, PulseModel::gaussian(6.5)};
    CHECK(g.area_until(g.duration_us()) == doctest::Approx(pi / 2).epsilon(1e-10));
    CHECK(g.area_until(0.5 * g.duration_us()) == doctest::Approx(pi / 4).epsilon(1e-10));
    CHECK(g.rabi_at(0.5 * g.duration_us()) > g.rabi_at(0.1 * g.duration_us()));
    CHECK(Pulse{}.duration_us() == 0.0);
    CHECK_THROWS_AS((Pulse{0.0, 1.0, PulseModel::square(-1.0)}.duration_us()), ConfigError);
}

TEST_CASE("finite pulses without interactions equal instantaneous ones") {
    const auto v = testsupport::random_state(3, 5);
    const Pulse inst{0.7, 1.1, {}};
    for (const auto& model : {PulseModel::square(22.2, false), PulseModel::gaussian(6.5, false)}) {
        const Pulse fin{0.7, 1.1, model};
        CHECK(fidelity(apply_pulse(fin, v), apply_pulse(inst, v)) == doctest::Approx(1.0).epsilon(1e-12));
    }
    // with zero couplings the interacting pulse is also a pure rotation
    const auto h0 = HamiltonianSpec::xy(CouplingMatrix(3), 0.25);
    const Pulse fin{0.7, 1.1, PulseModel::square(22.2)};
    CHECK(fidelity(apply_pulse(fin, v, &h0), apply_pulse(inst, v)) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(apply_pulse(fin, v), ConfigError);
}

TEST_CASE("interactions during a finite preparation pulse reduce the polarization") {
    const auto h = xy(3, 3);
    for (const auto& model : {PulseModel::square(22.2), PulseModel::gaussian(6.5)}) {
        const auto v = apply_pulse(pulses::preparation(model), StateVector::all_up(9), &h);
        const double pol = collective_expectations(v).mean[1] / 4.5;
        CHECK(pol < 1.0 - 1e-6);
        CHECK(pol > 0.9);
    }
}

TEST_CASE("run_schedule") {
    const auto h = xy(2, 2);
    const auto v0 = prepare_coherent_y(4);

    const auto empty = run_schedule(ProtocolSchedule{}, v0, {0.0});
    CHECK(testsupport::max_abs_diff(empty.at(0), v0) == 0.0);

    const auto s = standard_schedule(h, 1.0);
    const auto out = run_schedule(s, v0, {0.0, 0.25, 0.6, 1.0});
    REQUIRE(out.size() == 4);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double t = std::vector<double>{0.0, 0.25, 0.6, 1.0}[k];
        CHECK(fidelity(out[k], evolve_dense_oracle(h, v0, t)) >= 1.0 - 1e-9);
    }
    CHECK_THROWS_AS(run_schedule(s, v0, {0.0, 1.5}), ConfigError);
    CHECK_THROWS_AS(run_schedule(s, v0, {0.5, 0.2}), ConfigError);
}

TEST_CASE("multistep schedule composes its segments") {
    const auto h = xy(2, 2);
    const auto v0 = prepare_coherent_y(4);
    const double a = 25.0 * pi / 180.0;
    const auto s = multistep_schedule(h, 0.13, a, 0.5);
    CHECK(s.duration_us() == doctest::Approx(0.63));
    auto ref = evolve_dense_oracle(h, v0, 0.13);
    rotate_global(ref, in_plane_axis(pi / 2), a);
    const auto mid = ref;
    ref = evolve_dense_oracle(h, ref, 0.3);
    const auto out = run_schedule(s, v0, {0.13, 0.43});
    CHECK(fidelity(out[0], mid) >= 1.0 - 1e-9);
    CHECK(fidelity(out[1], ref) >= 1.0 - 1e-9);

    // a finite pulse shifts the remaining segment and checkpoints inside it are allowed
    const auto sf = multistep_schedule(h, 0.13, a, 0.5, PulseModel::square(22.2));
    const double dp = Pulse{pi / 2, a, PulseModel::square(22.2)}.duration_us();
    CHECK(sf.duration_us() == doctest::Approx(0.63 + dp));
    const auto of = run_schedule(sf, v0, {0.13 + 0.5 * dp, 0.63 + dp});
    CHECK(of.size() == 2);
    CHECK(std::abs(of[1].norm() - 1.0) < 1e-9);
}

TEST_CASE("wahuha cycle structure") {
    const auto h = xy(2, 2);
    const auto c = wahuha_cycle(h, 0.36);
    CHECK(c.duration_us() == doctest::Approx(0.36).epsilon(1e-14));
    int n_pulses = 0;
    for (const auto& st : c.steps) n_pulses += std::holds_alternative<Pulse>(st) ? 1 : 0;
    CHECK(n_pulses == 4);

    // without interactions the four rotations compose to the identity up to a global phase
    const auto h0 = HamiltonianSpec::xy(CouplingMatrix(4), 0.25);
    const auto v = testsupport::random_state(4, 17);
    const auto w = run_to_end(wahuha_cycle(h0, 0.36), v);
    CHECK(fidelity(w, v) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(run_to_end(c, v).norm() - 1.0) < 1e-9);

    // finite pulses keep the total duration
    const auto cf = wahuha_cycle(h, 0.36, PulseModel::gaussian(6.5));
    CHECK(cf.duration_us() == doctest::Approx(0.36).epsilon(1e-12));
    CHECK_THROWS_AS(wahuha_cycle(h, 0.01, PulseModel::square(5.0)), ConfigError);
    CHECK_THROWS_AS(wahuha_cycle(h, 0.0), ConfigError);
    WahuhaSpacing bad;
    bad.fractions = {0.5, 0.5, 0.5, 0.0, 0.0};
    CHECK_THROWS_AS(wahuha_cycle(h, 0.36, {}, bad), ConfigError);
}

TEST_CASE("wahuha approaches the averaged Heisenberg evolution as the cycle shrinks") {
    const auto h = xy(2, 2);
    const auto v = apply_pulse(Pulse{pi / 2, 0.4, {}}, evolve_dense_oracle(h, prepare_coherent_y(4), 0.3));
    double prev = 1.0;
    for (double tf : {0.36, 0.18, 0.09}) {
        const double dev = 1.0 - fidelity(run_to_end(wahuha_cycle(h, tf), v), evolve_dense_oracle(heis(2, 2, 0.125), v, tf));
        CHECK(dev < prev);
        prev = dev;
    }
    CHECK(prev < 1e-4);
}

TEST_CASE("global rotations commute with Heisenberg evolution") {
    const auto h = heis(2, 3);
    const auto v = testsupport::random_state(6, 41);
    const Pulse p{0.9, 1.3, {}};
    const auto a = apply_pulse(p, evolve_dense_oracle(h, v, 0.4));
    const auto b = evolve_dense_oracle(h, apply_pulse(p, v), 0.4);
    CHECK(testsupport::max_abs_diff(a, b) < 1e-10);
}

TEST_CASE("Heisenberg evolution freezes collective moments") {
    const auto h = heis(2, 3);
    const auto v = evolve_dense_oracle(xy(2, 3), prepare_coherent_y(6), 0.3);
    const auto m0 = collective_expectations(v);
    for (double t : {0.2, 0.7, 1.5}) {
        const auto m = collective_expectations(evolve(h, v, t));
        for (int a = 0; a < 3; ++a) {
            CHECK(std::abs(m.mean[a] - m0.mean[a]) < 1e-8);
            for (int b = 0; b < 3; ++b) CHECK(std::abs(m.second[a][b] - m0.second[a][b]) < 1e-8);
        }
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qteleport/protocol.hpp"

using namespace qteleport;

namespace {

ProtocolConfig fast_config() {
    ProtocolConfig cfg;
    cfg.compute_adiabaticity = false;  // skip the integrator when not under test
    return cfg;
}

}  // namespace

TEST_CASE("config validation") {
    ProtocolConfig cfg = fast_config();
    cfg.a = Complex(1.0, 0.0);
    cfg.b = Complex(0.5, 0.0);
    CHECK_THROWS_AS(run_teleportation(cfg), std::invalid_argument);
    cfg.b = Complex(0.0, 0.0);
    cfg.n_trajectories = 0;
    CHECK_THROWS_AS(run_teleportation(cfg), std::invalid_argument);
}

TEST_CASE("ideal interference: unit fidelity at half success probability") {
    ProtocolConfig cfg = fast_config();
    cfg.a = Complex(0.6, 0.0);
    cfg.b = Complex(0.0, 0.8);
    cfg.force_overlap_one = true;
    ProtocolReport r = run_teleportation(cfg);
    CHECK(r.p_success == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r.fidelity == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.p_plus == doctest::Approx(r.p_minus).epsilon(1e-9));
}

TEST_CASE("default run reproduces the frozen reference numbers") {
    ProtocolConfig cfg = fast_config();
    cfg.a = cfg.b = Complex(1.0 / std::sqrt(2.0), 0.0);
    ProtocolReport r = run_teleportation(cfg);
    CHECK(r.delta == doctest::Approx(0.00836156604826).epsilon(1e-9));
    CHECK(r.fidelity == doctest::Approx(0.99790741904).epsilon(1e-9));
    CHECK(r.p_success == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r.fidelity == doctest::Approx(r.eq_formula_prediction).epsilon(1e-12));
    CHECK(r.emit_prob_A0 == doctest::Approx(0.986275666025).epsilon(1e-9));
    CHECK(r.emit_prob_B == doctest::Approx(0.995672337087).epsilon(1e-9));
}

TEST_CASE("Minus correction aligns the two success branches at O = 1") {
    ProtocolConfig cfg = fast_config();
    cfg.a = Complex(0.6, 0.0);
    cfg.b = Complex(0.48, -0.64);
    cfg.force_overlap_one = true;
    ProtocolReport r = run_teleportation(cfg);
    // After correction the pooled conditional state must be the pure target.
    Eigen::Vector2cd target(cfg.a, cfg.b);
    Eigen::Matrix2cd pure = target * target.adjoint();
    CHECK((r.conditional_state - pure).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("global phase on (a, b) changes no report field") {
    ProtocolConfig cfg = fast_config();
    cfg.a = Complex(0.6, 0.0);
    cfg.b = Complex(0.0, 0.8);
    ProtocolReport r1 = run_teleportation(cfg);
    Complex phase = std::polar(1.0, 1.234);
    cfg.a *= phase;
    cfg.b *= phase;
    ProtocolReport r2 = run_teleportation(cfg);
    CHECK(r1.fidelity == doctest::Approx(r2.fidelity).epsilon(1e-12));
    CHECK(r1.p_plus == doctest::Approx(r2.p_plus).epsilon(1e-12));
    CHECK(r1.p_minus == doctest::Approx(r2.p_minus).epsilon(1e-12));
    CHECK(r1.delta == doctest::Approx(r2.delta).epsilon(1e-12));
}

TEST_CASE("fidelity is non-decreasing in the mode overlap") {
    for (auto [a, b] : bloch_grid8()) {
        double prev = 0.0;
        for (int k = 1; k <= 10; ++k) {
            double f = fidelity_formula(a, b, 0.1 * k);
            CHECK(f >= prev - 1e-12);
            prev = f;
        }
        CHECK(fidelity_formula(a, b, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("position robustness: s_A and s_B shifts stay under 1e-3") {
    ProtocolConfig base = fast_config();
    base.a = Complex(0.6, 0.0);
    base.b = Complex(0.0, 0.8);
    double ref = run_teleportation(base).fidelity;
    for (double s : {0.4, 0.7}) {
        ProtocolConfig cfg = base;
        cfg.alice.spatial_mode_value = s;
        CHECK(std::abs(run_teleportation(cfg).fidelity - ref) < 1e-3);
        cfg = base;
        cfg.bob.spatial_mode_value = s;
        CHECK(std::abs(run_teleportation(cfg).fidelity - ref) < 1e-3);
    }
}

TEST_CASE("detector efficiency leaves the fidelity untouched") {
    ProtocolConfig base = fast_config();
    base.a = Complex(0.8, 0.0);
    base.b = Complex(0.0, 0.6);
    ProtocolReport ref = run_teleportation(base);
    for (double eta : {0.2, 0.5}) {
        ProtocolConfig cfg = base;
        cfg.detection.set_uniform_efficiency(eta);
        ProtocolReport r = run_teleportation(cfg);
        CHECK(std::abs(r.fidelity - ref.fidelity) < 1e-6);
        CHECK(r.p_success ==
              doctest::Approx(ref.p_success * eta * eta).epsilon(1e-9));
    }
}

TEST_CASE("pulse-ratio perturbation moves the fidelity by less than 0.01") {
    ProtocolConfig base = fast_config();
    base.a = base.b = Complex(1.0 / std::sqrt(2.0), 0.0);
    double matched = run_teleportation(base).fidelity;
    for (double f : {0.9, 1.1}) {
        ProtocolConfig cfg = base;
        cfg.pulse_ratio = f * std::sqrt(2.0 / 3.0);
        CHECK(std::abs(run_teleportation(cfg).fidelity - matched) < 0.01);
    }
}

TEST_CASE("trajectory mode agrees with the analytic channel") {
    ProtocolConfig cfg = fast_config();
    cfg.a = cfg.b = Complex(1.0 / std::sqrt(2.0), 0.0);
    cfg.mode = ProtocolMode::Trajectory;
    cfg.n_trajectories = 20000;
    cfg.seed = 11;
    ProtocolReport r = run_teleportation(cfg);
    REQUIRE(r.trajectory.has_value());
    const TrajectoryStats& s = *r.trajectory;
    CHECK(s.n_shots == 20000);
    CHECK(s.n_both_emitted > 19000);
    CHECK(std::abs(s.empirical_success - r.p_success) < 3.0 * s.success_error);
    CHECK(s.mean_fidelity == doctest::Approx(r.fidelity).epsilon(1e-6));

    // Deterministic given the seed.
    ProtocolReport r2 = run_teleportation(cfg);
    CHECK(r2.trajectory->n_success == s.n_success);
    CHECK(r2.trajectory->n_plus == s.n_plus);
}

TEST_CASE("audit rows reproduce the closed form on trivial slices") {
    std::vector<AuditRow> rows =
        paper_formula_audit({{Complex(1.0, 0.0), Complex(0.0, 0.0)}}, {0.3, 1.0});
    for (const auto& row : rows) {
        CHECK(row.oracle_fidelity == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(row.formula_fidelity == doctest::Approx(1.0).epsilon(1e-10));
    }
    std::vector<AuditRow> grid = paper_formula_audit(bloch_grid8(), {1.0});
    for (const auto& row : grid)
        CHECK(std::abs(row.deviation) < 1e-10);
}

TEST_CASE("adiabaticity fixtures for the reference configuration") {
    ProtocolConfig cfg;
    cfg.a = cfg.b = Complex(1.0 / std::sqrt(2.0), 0.0);
    cfg.compute_adiabaticity = true;
    ProtocolReport r = run_teleportation(cfg);
    // Reported, not asserted against a physics target: frozen as regression
    // fixtures at the default coupling g = kappa.
    CHECK(r.adiabaticity_alice == doctest::Approx(0.8709664609).epsilon(1e-6));
    CHECK(r.adiabaticity_bob == doctest::Approx(0.943012783507).epsilon(1e-6));
}

TEST_CASE("strong coupling restores the adiabatic transfer regime") {
    // Input (1, 0) isolates the passage itself; for superpositions the
    // branch-dependent decay reweights the no-jump state relative to the
    // fixed-(a,b) reference, flooring the metric near 0.93 regardless of g.
    ProtocolConfig cfg;
    cfg.a = Complex(1.0, 0.0);
    cfg.b = Complex(0.0, 0.0);
    cfg.compute_adiabaticity = true;
    cfg.alice.cg.C_g1 *= 3.0;
    cfg.alice.cg.C_g2 *= 3.0;
    cfg.bob.cg = cfg.alice.cg;
    cfg.grid = TimeGrid(40.0, 24000);
    cfg.pulse_width = std::sqrt(2.0) * 4.0;
    ProtocolReport r = run_teleportation(cfg);
    CHECK(r.adiabaticity_alice > 0.98);
    CHECK(r.adiabaticity_bob > 0.98);
    // The analytic mode mismatch is invariant under the common scaling (up
    // to the quadrature difference of the finer grid).
    CHECK(std::abs(r.delta - 0.00836156604826) < 1e-4);
}

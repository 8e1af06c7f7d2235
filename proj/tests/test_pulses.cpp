#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "qteleport/pulses.hpp"

using namespace qteleport;

namespace {

// Fig.-5-style reference configuration: T = 40/kappa, Gaussian peak at T/2,
// 1/e half-width sqrt(2)*T/10, peak amplitude C_g1/C_Omega0.
struct Reference {
    TimeGrid grid{40.0, 4000};
    CgTable cg = CgTable::defaults();
    DrivePulse pulse;
    Reference() {
        pulse = gaussian_pulse(grid, 20.0, std::sqrt(2.0) * 4.0,
                               cg.C_g1 / cg.C_Omega0);
    }
};

double min_branch_overlap(const Reference& ref, double ratio) {
    DrivePulse pulse2 = scale_pulse(ref.pulse, ratio);
    PhotonMode f_b =
        normalize_mode(photon_pulse_shape(mixing_angle_bob(pulse2, ref.cg), 1.0));
    double o0 = overlap(normalize_mode(photon_pulse_shape(
                            mixing_angle_alice(ref.pulse, ref.cg, 0), 1.0)),
                        f_b);
    double o1 = overlap(normalize_mode(photon_pulse_shape(
                            mixing_angle_alice(ref.pulse, ref.cg, 1), 1.0)),
                        f_b);
    return std::min(o0, o1);
}

}  // namespace

TEST_CASE("grid sampling and trapezoid rule") {
    TimeGrid grid(2.0, 1000);
    CHECK(grid.dt() == doctest::Approx(0.002));
    CHECK(grid.n_samples() == 1001);
    CHECK(grid.t(1000) == doctest::Approx(2.0));
    CHECK_THROWS_AS(TimeGrid(1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid(-1.0, 100), std::invalid_argument);

    std::vector<double> quadratic(grid.n_samples());
    for (int i = 0; i < grid.n_samples(); ++i) quadratic[i] = grid.t(i) * grid.t(i);
    CHECK(trapezoid(quadratic, grid.dt()) == doctest::Approx(8.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("CG defaults reproduce the matched pulse ratio") {
    CgTable cg = CgTable::defaults();
    CHECK(cg.C_Omega0 == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-14));
    CHECK(cg.C_Omega1 == doctest::Approx(std::sqrt(1.0 / 2.0)).epsilon(1e-14));
    CHECK(cg.bob_pulse_ratio() == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("gaussian pulse boundary invariant") {
    TimeGrid grid(40.0, 2000);
    DrivePulse p = gaussian_pulse(grid, 20.0, 5.0, 2.0);
    double peak = *std::max_element(p.envelope.begin(), p.envelope.end());
    CHECK(peak == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(p.envelope.front() <= 1e-3 * peak);
    CHECK(p.envelope.back() <= 1e-3 * peak);
    // A pulse too wide for the grid violates the turn-off invariant.
    CHECK_THROWS_AS(gaussian_pulse(grid, 20.0, 30.0, 2.0), std::invalid_argument);
}

TEST_CASE("mixing angle tracks are consistent") {
    Reference ref;
    for (int branch : {0, 1}) {
        MixingAngleTrack track = mixing_angle_alice(ref.pulse, ref.cg, branch);
        for (int i = 0; i < track.grid.n_samples(); ++i) {
            double s = track.sin_theta[i], c = track.cos_theta[i];
            CHECK(std::abs(s * s + c * c - 1.0) < 1e-12);
            CHECK(s >= 0.0);
            CHECK(s < 1.0);
        }
    }
    MixingAngleTrack bob = mixing_angle_bob(scale_pulse(ref.pulse, 0.8), ref.cg);
    for (int i = 0; i < bob.grid.n_samples(); ++i)
        CHECK(std::abs(bob.sin_theta[i] * bob.sin_theta[i] +
                       bob.cos_theta[i] * bob.cos_theta[i] - 1.0) < 1e-12);
}

TEST_CASE("photon modes normalize to unit L2 norm") {
    Reference ref;
    PhotonMode raw =
        photon_pulse_shape(mixing_angle_alice(ref.pulse, ref.cg, 0), 1.0);
    CHECK(raw.emission_probability > 0.9);
    CHECK(!raw.normalized);
    PhotonMode f = normalize_mode(raw);
    CHECK(f.normalized);
    std::vector<double> sq(f.samples.size());
    for (size_t i = 0; i < sq.size(); ++i) sq[i] = f.samples[i] * f.samples[i];
    CHECK(trapezoid(sq, f.grid.dt()) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(overlap(f, f) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("emission probability identity") {
    // integral f^2 = 1 - exp(-kappa * integral sin^2 theta)
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> width(2.0, 6.0), amp(0.5, 3.0),
        kap(0.3, 2.0);
    // Fine grid so second-order quadrature error sits well below the 1e-8
    // identity tolerance.
    TimeGrid grid(40.0, 100000);
    CgTable cg = CgTable::defaults();
    for (int k = 0; k < 20; ++k) {
        DrivePulse p = gaussian_pulse(grid, 20.0, width(rng), amp(rng));
        MixingAngleTrack track = mixing_angle_alice(p, cg, k % 2);
        double kappa = kap(rng);
        PhotonMode raw = photon_pulse_shape(track, kappa);
        std::vector<double> s2(track.sin_theta.size());
        for (size_t i = 0; i < s2.size(); ++i)
            s2[i] = track.sin_theta[i] * track.sin_theta[i];
        double expected = 1.0 - std::exp(-kappa * trapezoid(s2, grid.dt()));
        CHECK(std::abs(raw.emission_probability - expected) < 1e-8);
    }
}

TEST_CASE("reference mode overlap lands on the frozen figure value") {
    Reference ref;
    PhotonMode f0 =
        normalize_mode(photon_pulse_shape(mixing_angle_alice(ref.pulse, ref.cg, 0), 1.0));
    PhotonMode f1 =
        normalize_mode(photon_pulse_shape(mixing_angle_alice(ref.pulse, ref.cg, 1), 1.0));
    double one_minus_delta = overlap(f0, f1);
    CHECK(std::abs(one_minus_delta - 0.992) < 0.002);
    // regression fixture at full precision
    CHECK(one_minus_delta == doctest::Approx(0.991638433952).epsilon(1e-9));
}

TEST_CASE("short-pulse overlap regression fixture") {
    TimeGrid grid(10.0, 4000);
    CgTable cg = CgTable::defaults();
    DrivePulse pulse =
        gaussian_pulse(grid, 5.0, std::sqrt(2.0), cg.C_g1 / cg.C_Omega0);
    PhotonMode f0 =
        normalize_mode(photon_pulse_shape(mixing_angle_alice(pulse, cg, 0), 1.0));
    PhotonMode f1 =
        normalize_mode(photon_pulse_shape(mixing_angle_alice(pulse, cg, 1), 1.0));
    CHECK(overlap(f0, f1) == doctest::Approx(0.998565056563).epsilon(1e-9));
}

TEST_CASE("overlap of disjointly supported modes vanishes") {
    TimeGrid grid(40.0, 2000);
    PhotonMode a, b;
    a.grid = b.grid = grid;
    a.samples.assign(grid.n_samples(), 0.0);
    b.samples.assign(grid.n_samples(), 0.0);
    for (int i = 100; i < 300; ++i) a.samples[i] = 1.0;
    for (int i = 800; i < 1000; ++i) b.samples[i] = 1.0;
    a.emission_probability = b.emission_probability = 1.0;
    CHECK(overlap(normalize_mode(a), normalize_mode(b)) == doctest::Approx(0.0));
}

TEST_CASE("spatial-mode invariance: common scale of g and Omega cancels") {
    Reference ref;
    PhotonMode base =
        normalize_mode(photon_pulse_shape(mixing_angle_alice(ref.pulse, ref.cg, 0), 1.0));
    for (double s : {0.5, 0.8, 1.2, 1.5}) {
        CgTable scaled = ref.cg;
        scaled.C_g1 *= s;
        scaled.C_Omega0 *= s;
        scaled.C_Omega1 *= s;
        PhotonMode f = normalize_mode(
            photon_pulse_shape(mixing_angle_alice(ref.pulse, scaled, 0), 1.0));
        for (size_t i = 0; i < f.samples.size(); ++i)
            CHECK(std::abs(f.samples[i] - base.samples[i]) < 1e-12);
    }
}

TEST_CASE("monotone mismatch in the CG gap") {
    Reference ref;
    double prev = 2.0;
    for (int k = 0; k < 10; ++k) {
        // widen the gap between the two branch couplings
        CgTable cg = ref.cg;
        double gap = 0.05 * k;
        cg.C_Omega0 = std::sqrt(1.0 / 3.0) - gap * 0.3;
        cg.C_Omega1 = std::sqrt(1.0 / 3.0) + gap;
        PhotonMode f0 = normalize_mode(
            photon_pulse_shape(mixing_angle_alice(ref.pulse, cg, 0), 1.0));
        PhotonMode f1 = normalize_mode(
            photon_pulse_shape(mixing_angle_alice(ref.pulse, cg, 1), 1.0));
        double o = overlap(f0, f1);
        CHECK(o <= prev + 1e-12);
        prev = o;
    }
}

TEST_CASE("quadrature convergence: doubling n_steps moves delta by < 1e-4") {
    auto delta_at = [](int n) {
        TimeGrid grid(40.0, n);
        CgTable cg = CgTable::defaults();
        DrivePulse pulse =
            gaussian_pulse(grid, 20.0, std::sqrt(2.0) * 4.0, cg.C_g1 / cg.C_Omega0);
        PhotonMode f0 =
            normalize_mode(photon_pulse_shape(mixing_angle_alice(pulse, cg, 0), 1.0));
        PhotonMode f1 =
            normalize_mode(photon_pulse_shape(mixing_angle_alice(pulse, cg, 1), 1.0));
        return 1.0 - overlap(f0, f1);
    };
    CHECK(std::abs(delta_at(8000) - delta_at(4000)) < 1e-4);
}

TEST_CASE("ratio insensitivity around the matched value") {
    Reference ref;
    double matched = min_branch_overlap(ref, ref.cg.bob_pulse_ratio());
    for (double f : {0.9, 1.1}) {
        double perturbed = min_branch_overlap(ref, f * ref.cg.bob_pulse_ratio());
        CHECK(std::abs(perturbed - matched) < 0.01);
    }
}

TEST_CASE("normalize_mode rejects empty emission") {
    TimeGrid grid(40.0, 100);
    PhotonMode zero;
    zero.grid = grid;
    zero.samples.assign(grid.n_samples(), 0.0);
    CHECK_THROWS_AS(normalize_mode(zero), std::runtime_error);
}

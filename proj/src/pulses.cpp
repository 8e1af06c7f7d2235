#include "qteleport/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qteleport {

TimeGrid::TimeGrid(double duration, int steps) : T(duration), n_steps(steps) {
    if (duration <= 0.0 || steps < 1)
        throw std::invalid_argument("TimeGrid: need T > 0 and n_steps >= 1");
}

CgTable CgTable::defaults() {
    CgTable cg;
    cg.C_Omega0 = std::sqrt(1.0 / 3.0);
    cg.C_Omega1 = std::sqrt(1.0 / 2.0);
    cg.C_g1 = 1.0;
    cg.C_g2 = 1.0;
    // Chosen so the matched Bob pulse ratio is sqrt(2/3).
    cg.C_Omega2 = std::sqrt(2.0) * cg.C_g2 * cg.C_Omega1 / (cg.C_g1 * std::sqrt(2.0 / 3.0));
    return cg;
}

double CgTable::bob_pulse_ratio() const {
    return std::sqrt(2.0) * C_g2 * C_Omega1 / (C_g1 * C_Omega2);
}

double trapezoid(const std::vector<double>& values, double dt) {
    if (values.size() < 2) return 0.0;
    double sum = 0.5 * (values.front() + values.back());
    for (size_t i = 1; i + 1 < values.size(); ++i) sum += values[i];
    return sum * dt;
}

DrivePulse gaussian_pulse(const TimeGrid& grid, double t_peak, double t_w,
                          double E_max) {
    if (t_peak <= 0.0 || t_peak >= grid.T)
        throw std::invalid_argument("gaussian_pulse: t_peak outside (0, T)");
    if (t_w <= 0.0 || E_max <= 0.0)
        throw std::invalid_argument("gaussian_pulse: t_w and E_max must be positive");

    DrivePulse pulse;
    pulse.grid = grid;
    pulse.shape_name = "gaussian";
    pulse.peak = t_peak;
    pulse.width = t_w;
    pulse.envelope.resize(grid.n_samples());
    for (int i = 0; i < grid.n_samples(); ++i) {
        double x = (grid.t(i) - t_peak) / t_w;  // 1/e half-width convention
        pulse.envelope[i] = E_max * std::exp(-x * x);
    }
    double emax = *std::max_element(pulse.envelope.begin(), pulse.envelope.end());
    if (pulse.envelope.front() > 1e-3 * emax || pulse.envelope.back() > 1e-3 * emax)
        throw std::invalid_argument(
            "gaussian_pulse: envelope not off at the grid boundaries (pulse too wide)");
    return pulse;
}

DrivePulse scale_pulse(const DrivePulse& pulse, double factor) {
    DrivePulse out = pulse;
    for (auto& v : out.envelope) v *= factor;
    return out;
}

namespace {

MixingAngleTrack track_from_ratio(const DrivePulse& pulse, double c_omega,
                                  double g_eff_sq) {
    // sin(theta) = c_omega*E / sqrt(g_eff_sq + c_omega^2 E^2); any common
    // spatial-mode factor on drive and coupling cancels here.
    MixingAngleTrack track;
    track.grid = pulse.grid;
    track.sin_theta.resize(pulse.envelope.size());
    track.cos_theta.resize(pulse.envelope.size());
    for (size_t i = 0; i < pulse.envelope.size(); ++i) {
        double om = c_omega * pulse.envelope[i];
        double denom = std::sqrt(g_eff_sq + om * om);
        track.sin_theta[i] = om / denom;
        track.cos_theta[i] = std::sqrt(g_eff_sq) / denom;
    }
    return track;
}

}  // namespace

MixingAngleTrack mixing_angle_alice(const DrivePulse& pulse, const CgTable& cg,
                                    int branch) {
    if (branch != 0 && branch != 1)
        throw std::invalid_argument("mixing_angle_alice: branch must be 0 or 1");
    double c_omega = branch == 0 ? cg.C_Omega0 : cg.C_Omega1;
    return track_from_ratio(pulse, c_omega, cg.C_g1 * cg.C_g1);
}

MixingAngleTrack mixing_angle_bob(const DrivePulse& pulse, const CgTable& cg) {
    return track_from_ratio(pulse, cg.C_Omega2, 2.0 * cg.C_g2 * cg.C_g2);
}

PhotonMode photon_pulse_shape(const MixingAngleTrack& track, double kappa,
                              char polarization) {
    if (kappa <= 0.0)
        throw std::invalid_argument("photon_pulse_shape: kappa must be positive");
    PhotonMode mode;
    mode.grid = track.grid;
    mode.polarization = polarization;
    mode.samples.resize(track.sin_theta.size());
    double dt = track.grid.dt();
    double cum = 0.0;  // int_0^t sin^2(theta)
    double prev_sq = track.sin_theta[0] * track.sin_theta[0];
    mode.samples[0] = std::sqrt(kappa) * track.sin_theta[0];
    for (size_t i = 1; i < track.sin_theta.size(); ++i) {
        double sq = track.sin_theta[i] * track.sin_theta[i];
        cum += 0.5 * (prev_sq + sq) * dt;
        prev_sq = sq;
        mode.samples[i] =
            std::sqrt(kappa) * track.sin_theta[i] * std::exp(-0.5 * kappa * cum);
    }
    std::vector<double> f_sq(mode.samples.size());
    for (size_t i = 0; i < mode.samples.size(); ++i)
        f_sq[i] = mode.samples[i] * mode.samples[i];
    mode.emission_probability = trapezoid(f_sq, dt);
    mode.normalized = false;
    return mode;
}

PhotonMode normalize_mode(const PhotonMode& mode) {
    std::vector<double> f_sq(mode.samples.size());
    for (size_t i = 0; i < mode.samples.size(); ++i)
        f_sq[i] = mode.samples[i] * mode.samples[i];
    double p = trapezoid(f_sq, mode.grid.dt());
    if (p <= 1e-6)
        throw std::runtime_error("normalize_mode: near-zero mode");
    PhotonMode out = mode;
    double scale = 1.0 / std::sqrt(p);
    for (auto& v : out.samples) v *= scale;
    out.normalized = true;
    return out;
}

double overlap(const PhotonMode& f, const PhotonMode& g) {
    if (f.samples.size() != g.samples.size() ||
        std::abs(f.grid.T - g.grid.T) > 1e-12)
        throw std::invalid_argument("overlap: grid mismatch");
    std::vector<double> prod(f.samples.size());
    for (size_t i = 0; i < f.samples.size(); ++i)
        prod[i] = f.samples[i] * g.samples[i];
    return trapezoid(prod, f.grid.dt());
}

}  // namespace qteleport

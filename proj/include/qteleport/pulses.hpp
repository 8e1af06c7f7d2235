#ifndef QTELEPORT_PULSES_HPP
#define QTELEPORT_PULSES_HPP

#include <string>
#include <vector>

namespace qteleport {

/// Uniform time grid on [0, T], in units of 1/kappa. Holds n_steps+1 samples.
struct TimeGrid {
    double T = 40.0;
    int n_steps = 4000;

    TimeGrid() = default;
    TimeGrid(double duration, int steps);

    double dt() const { return T / n_steps; }
    int n_samples() const { return n_steps + 1; }
    double t(int i) const { return T * i / n_steps; }
};

/// Slowly-varying drive envelope E~(t), sampled on a TimeGrid.
struct DrivePulse {
    TimeGrid grid;
    std::vector<double> envelope;
    std::string shape_name;
    double peak = 0.0;
    double width = 0.0;
};

/// sin/cos of the dark-state mixing angle along the grid.
struct MixingAngleTrack {
    TimeGrid grid;
    std::vector<double> sin_theta;
    std::vector<double> cos_theta;
};

/// Temporal mode function f(t) of a leaked photon.
struct PhotonMode {
    TimeGrid grid;
    std::vector<double> samples;
    char polarization = 'L';
    bool normalized = false;
    double emission_probability = 0.0;  // integral of f^2 before normalization
};

/// Clebsch-Gordan coefficients of the driven and cavity-coupled transitions.
struct CgTable {
    double C_Omega0;
    double C_Omega1;
    double C_Omega2;
    double C_g1;
    double C_g2;

    // Defaults fix C_g1 = C_g2 = 1 and fold physical magnitudes into the
    // envelope; the Bob-side pulse ratio sqrt(2)*C_g2*C_Omega1/(C_g1*C_Omega2)
    // then equals sqrt(2/3).
    static CgTable defaults();
    // sqrt(2)*C_g2*C_Omega1 / (C_g1*C_Omega2)
    double bob_pulse_ratio() const;
};

// Composite trapezoid rule over uniformly sampled values.
double trapezoid(const std::vector<double>& values, double dt);

DrivePulse gaussian_pulse(const TimeGrid& grid, double t_peak, double t_w,
                          double E_max);
DrivePulse scale_pulse(const DrivePulse& pulse, double factor);

MixingAngleTrack mixing_angle_alice(const DrivePulse& pulse, const CgTable& cg,
                                    int branch);
MixingAngleTrack mixing_angle_bob(const DrivePulse& pulse, const CgTable& cg);

// f(t) = sqrt(kappa) sin(theta) exp(-(kappa/2) int_0^t sin^2(theta)),
// returned raw with the emission probability attached.
PhotonMode photon_pulse_shape(const MixingAngleTrack& track, double kappa,
                              char polarization = 'L');
PhotonMode normalize_mode(const PhotonMode& mode);
double overlap(const PhotonMode& f, const PhotonMode& g);

}  // namespace qteleport

#endif

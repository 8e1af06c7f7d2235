#ifndef QTELEPORT_EVOLUTION_HPP
#define QTELEPORT_EVOLUTION_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qteleport/atom_cavity.hpp"
#include "qteleport/hilbert.hpp"
#include "qteleport/pulses.hpp"

namespace qteleport {

enum class EvolutionMethod { NoJump, Trajectory };

struct EvolutionConfig {
    TimeGrid grid;
    EvolutionMethod method = EvolutionMethod::NoJump;
    int n_trajectories = 1;
    std::uint64_t seed = 1;
    bool store_states = true;
    // Fixed-step RK4; guard dt*||H||_inf < stability_limit checked every step.
    double stability_limit = 0.05;
};

/// A driven atom-cavity system with decay, H(t) = E(t)*H_drive + H_static.
struct OpenSystem {
    HilbertSpace space;
    Matrix h_drive;
    Matrix h_static;
    std::vector<double> envelope;  // drive samples on the evolution grid
    TimeGrid grid;

    struct Channel {
        std::string name;     // cavA-L, cavA-R, cavB-L, cavB-R, spontaneous
        Matrix jump_op;       // already scaled by sqrt(rate)
        int mode_index = -1;  // flat basis index of the one-photon component, -1 if n/a
    };
    std::vector<Channel> channels;

    double envelope_at(double t) const;  // linear interpolation
    Matrix hamiltonian(double t) const;
    Matrix effective_hamiltonian(double t) const;  // H - (i/2) sum c^dag c
};

OpenSystem make_alice_system(const SystemParams& params, const DrivePulse& pulse);
OpenSystem make_bob_system(const SystemParams& params, const DrivePulse& pulse);

struct NoJumpResult {
    StateVector final_state;  // unnormalized; norm^2 = survival probability
    double survival_probability = 1.0;
    std::map<std::string, PhotonMode> emitted_modes;  // raw, with P_emit attached
    std::vector<double> norm_sq;                      // per grid sample
    std::vector<Vector> states;                       // per grid sample (if stored)
    // Per-channel instantaneous jump rate <psi|c^dag c|psi> (unnormalized).
    std::map<std::string, std::vector<double>> channel_rates;
};

NoJumpResult evolve_no_jump(const OpenSystem& sys, const StateVector& psi0,
                            const EvolutionConfig& config);

struct JumpEvent {
    double time;
    std::string channel;
};

struct TrajectoryRecord {
    std::vector<JumpEvent> jumps;
    double survival_probability;  // no-jump probability of this system
};

/// Monte-Carlo wavefunction unraveling. Jumps lead to stationary states in
/// this one-excitation model, so trajectories are sampled exactly from the
/// shared no-jump solution (first-jump time from the norm decay, channel from
/// the instantaneous rates).
std::vector<TrajectoryRecord> evolve_trajectories(const OpenSystem& sys,
                                                  const StateVector& psi0,
                                                  const EvolutionConfig& config);

/// Min over time of the squared overlap between the renormalized no-jump
/// state and a reference track.
double adiabaticity_report(const NoJumpResult& result,
                           const std::vector<StateVector>& reference);

}  // namespace qteleport

#endif

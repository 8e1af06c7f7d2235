#ifndef QTELEPORT_PROTOCOL_HPP
#define QTELEPORT_PROTOCOL_HPP

#include <optional>
#include <vector>

#include "qteleport/atom_cavity.hpp"
#include "qteleport/bsm.hpp"
#include "qteleport/evolution.hpp"
#include "qteleport/pulses.hpp"

namespace qteleport {

enum class ProtocolMode { Analytic, Trajectory };

struct ProtocolConfig {
    Complex a{1.0, 0.0};
    Complex b{0.0, 0.0};
    SystemParams alice;
    SystemParams bob;

    TimeGrid grid{40.0, 4000};
    double pulse_peak = 20.0;              // t_peak, defaults to T/2
    double pulse_width = std::sqrt(2.0) * 4.0;  // t_w = sqrt(2)*T/10
    double pulse_amplitude = 0.0;          // E_1m; 0 -> C_g1/C_Omega0
    double pulse_ratio = 0.0;              // E2/E1; 0 -> sqrt(2)*Cg2*COm1/(Cg1*COm2)
    double pulse_delay = 0.0;              // relative Bob delay (equal fibers: 0)

    bsm::DetectionModel detection;
    ProtocolMode mode = ProtocolMode::Analytic;
    int n_trajectories = 10000;
    std::uint64_t seed = 1;

    bool force_overlap_one = false;  // ideal-interference reference
    bool compute_adiabaticity = true;

    void validate() const;
    double effective_amplitude() const;
    double effective_ratio() const;
};

struct TrajectoryStats {
    int n_shots = 0;
    int n_both_emitted = 0;
    int n_success = 0;
    int n_plus = 0;
    int n_minus = 0;
    int n_spontaneous = 0;
    double empirical_success = 0.0;  // conditioned on both photons emitted
    double success_error = 0.0;      // binomial 1-sigma
    double mean_fidelity = 0.0;
};

struct ProtocolReport {
    bsm::OutcomeClass dominant_outcome = bsm::OutcomeClass::Failure;
    double p_plus = 0.0;
    double p_minus = 0.0;
    double p_success = 0.0;
    double p_failure = 1.0;
    Eigen::Matrix2cd conditional_state;  // corrected, success-conditioned, trace 1
    double fidelity = 0.0;               // sqrt-overlap convention
    double eq_formula_prediction = 0.0;  // closed-form with effective overlap
    double delta = 0.0;                  // 1 - overlap(f_A0, f_A1)
    double overlap_A0_B = 1.0;
    double overlap_A1_B = 1.0;
    double emit_prob_A0 = 0.0;
    double emit_prob_A1 = 0.0;
    double emit_prob_B = 0.0;
    double adiabaticity_alice = 0.0;
    double adiabaticity_bob = 0.0;
    std::optional<TrajectoryStats> trajectory;
};

/// Closed-form state-dependent fidelity sqrt(|a|^4 + |b|^4 + 2|a|^2|b|^2 O^2).
double fidelity_formula(Complex a, Complex b, double mode_overlap);

ProtocolReport run_teleportation(const ProtocolConfig& config);

struct AuditRow {
    Complex a, b;
    double mode_overlap;      // O of photon A against photon B
    double oracle_fidelity;   // brute-force two-photon result
    double formula_fidelity;  // closed-form prediction
    double one_minus_delta;
    double deviation;         // oracle - formula
};

/// Compares the closed-form fidelity against the brute-force two-photon
/// oracle over a (Bloch point) x (overlap) grid; throws if any oracle value
/// drops below 1 - delta - 1e-6.
std::vector<AuditRow> paper_formula_audit(
    const std::vector<std::pair<Complex, Complex>>& bloch_points,
    const std::vector<double>& overlaps);

/// Standard 8-point Bloch grid of input amplitudes (a, b).
std::vector<std::pair<Complex, Complex>> bloch_grid8();

}  // namespace qteleport

#endif

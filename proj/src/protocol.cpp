#include "qteleport/protocol.hpp"

#include <cmath>
#include <stdexcept>

namespace qteleport {

namespace {

const bsm::BsmNetwork& shared_network() {
    static const bsm::BsmNetwork net = bsm::build_bsm_network();
    return net;
}

Eigen::Matrix2cd apply_minus_correction(const Eigen::Matrix2cd& rho) {
    Eigen::Matrix2cd z = Eigen::Matrix2cd::Identity();
    z(1, 1) = -1.0;
    return z * rho * z;
}

struct BsmSummary {
    double p_plus = 0.0;
    double p_minus = 0.0;
    Eigen::Matrix2cd corrected = Eigen::Matrix2cd::Zero();  // unnormalized
    std::vector<bsm::PatternResult> patterns;
};

BsmSummary summarize_bsm(const bsm::TwoPhotonState& input,
                         const bsm::DetectionModel& detection) {
    BsmSummary s;
    s.patterns = bsm::bsm_probabilities(input, shared_network(), detection);
    for (const auto& r : s.patterns) {
        if (r.outcome == bsm::OutcomeClass::Plus) {
            s.p_plus += r.probability;
            s.corrected += r.atom_state;
        } else if (r.outcome == bsm::OutcomeClass::Minus) {
            s.p_minus += r.probability;
            s.corrected += apply_minus_correction(r.atom_state);
        }
    }
    return s;
}

double fidelity_of(const Eigen::Matrix2cd& rho_unnormalized, Complex a, Complex b) {
    double tr = rho_unnormalized.trace().real();
    if (tr < 1e-300) return 0.0;
    Eigen::Vector2cd target(a, b);
    double p = (target.adjoint() * (rho_unnormalized / tr) * target)(0).real();
    return std::sqrt(std::max(0.0, p));
}

}  // namespace

void ProtocolConfig::validate() const {
    if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-10)
        throw std::invalid_argument("ProtocolConfig: |a|^2 + |b|^2 != 1");
    alice.validate();
    bob.validate();
    detection.validate();
    if (n_trajectories < 1)
        throw std::invalid_argument("ProtocolConfig: n_trajectories < 1");
}

double ProtocolConfig::effective_amplitude() const {
    return pulse_amplitude > 0.0 ? pulse_amplitude
                                 : alice.cg.C_g1 / alice.cg.C_Omega0;
}

double ProtocolConfig::effective_ratio() const {
    return pulse_ratio > 0.0 ? pulse_ratio : bob.cg.bob_pulse_ratio();
}

double fidelity_formula(Complex a, Complex b, double mode_overlap) {
    double pa = std::norm(a), pb = std::norm(b);
    return std::sqrt(pa * pa + pb * pb +
                     2.0 * pa * pb * mode_overlap * mode_overlap);
}

ProtocolReport run_teleportation(const ProtocolConfig& config) {
    config.validate();
    ProtocolReport report;

    // Drive pulses and analytic photon modes.
    DrivePulse pulse1 = gaussian_pulse(config.grid, config.pulse_peak,
                                       config.pulse_width,
                                       config.effective_amplitude());
    DrivePulse pulse2_shape =
        config.pulse_delay == 0.0
            ? pulse1
            : gaussian_pulse(config.grid, config.pulse_peak + config.pulse_delay,
                             config.pulse_width, config.effective_amplitude());
    DrivePulse pulse2 = scale_pulse(pulse2_shape, config.effective_ratio());

    MixingAngleTrack track0 = mixing_angle_alice(pulse1, config.alice.cg, 0);
    MixingAngleTrack track1 = mixing_angle_alice(pulse1, config.alice.cg, 1);
    MixingAngleTrack track2 = mixing_angle_bob(pulse2, config.bob.cg);

    PhotonMode raw_a0 = photon_pulse_shape(track0, config.alice.kappa, 'L');
    PhotonMode raw_a1 = photon_pulse_shape(track1, config.alice.kappa, 'R');
    PhotonMode raw_b = photon_pulse_shape(track2, config.bob.kappa, 'L');
    report.emit_prob_A0 = raw_a0.emission_probability;
    report.emit_prob_A1 = raw_a1.emission_probability;
    report.emit_prob_B = raw_b.emission_probability;

    PhotonMode f_a0 = normalize_mode(raw_a0);
    PhotonMode f_a1 = normalize_mode(raw_a1);
    PhotonMode f_b = normalize_mode(raw_b);
    report.delta = 1.0 - overlap(f_a0, f_a1);
    report.overlap_A0_B = bsm::decompose_temporal(f_a0, f_b).first;
    report.overlap_A1_B = bsm::decompose_temporal(f_a1, f_b).first;

    double o0 = config.force_overlap_one ? 1.0 : report.overlap_A0_B;
    double o1 = config.force_overlap_one ? 1.0 : report.overlap_A1_B;

    auto input = bsm::TwoPhotonState::protocol_input(config.a, config.b, o0, o1);
    BsmSummary s = summarize_bsm(input, config.detection);
    report.p_plus = s.p_plus;
    report.p_minus = s.p_minus;
    report.p_success = s.p_plus + s.p_minus;
    report.p_failure = 1.0 - report.p_success;
    double tr = s.corrected.trace().real();
    report.conditional_state =
        tr > 1e-300 ? Eigen::Matrix2cd(s.corrected / tr) : Eigen::Matrix2cd::Zero();
    report.fidelity = fidelity_of(s.corrected, config.a, config.b);
    report.eq_formula_prediction =
        fidelity_formula(config.a, config.b, std::sqrt(std::max(0.0, o0 * o1)));
    report.dominant_outcome =
        report.p_success + 1e-12 >= report.p_failure
            ? (s.p_plus >= s.p_minus ? bsm::OutcomeClass::Plus
                                     : bsm::OutcomeClass::Minus)
            : bsm::OutcomeClass::Failure;

    if (config.compute_adiabaticity) {
        EvolutionConfig evo;
        evo.grid = config.grid;
        OpenSystem alice_sys = make_alice_system(config.alice, pulse1);
        Vector psi_a = Vector::Zero(alice_sys.space.dim());
        psi_a(alice_sys.space.flat_index({atom1::g0, 0, 0})) = config.a;
        psi_a(alice_sys.space.flat_index({atom1::g1, 0, 0})) = config.b;
        NoJumpResult res_a =
            evolve_no_jump(alice_sys, StateVector(alice_sys.space, psi_a), evo);
        std::vector<StateVector> ref_a;
        ref_a.reserve(config.grid.n_samples());
        for (int i = 0; i < config.grid.n_samples(); ++i)
            ref_a.push_back(
                adiabatic_state_alice(config.a, config.b, track0, track1, i));
        report.adiabaticity_alice = adiabaticity_report(res_a, ref_a);

        OpenSystem bob_sys = make_bob_system(config.bob, pulse2);
        StateVector psi_b = StateVector::basis_state(
            bob_sys.space, bob_sys.space.flat_index({atom2::g, 0, 0}));
        NoJumpResult res_b = evolve_no_jump(bob_sys, psi_b, evo);
        std::vector<StateVector> ref_b;
        ref_b.reserve(config.grid.n_samples());
        for (int i = 0; i < config.grid.n_samples(); ++i)
            ref_b.push_back(adiabatic_state_bob(track2, i));
        report.adiabaticity_bob = adiabaticity_report(res_b, ref_b);
    }

    if (config.mode == ProtocolMode::Trajectory) {
        EvolutionConfig evo;
        evo.grid = config.grid;
        evo.n_trajectories = config.n_trajectories;
        evo.store_states = false;

        OpenSystem alice_sys = make_alice_system(config.alice, pulse1);
        Vector psi_a = Vector::Zero(alice_sys.space.dim());
        psi_a(alice_sys.space.flat_index({atom1::g0, 0, 0})) = config.a;
        psi_a(alice_sys.space.flat_index({atom1::g1, 0, 0})) = config.b;
        evo.seed = config.seed;
        auto traj_a = evolve_trajectories(
            alice_sys, StateVector(alice_sys.space, psi_a), evo);

        OpenSystem bob_sys = make_bob_system(config.bob, pulse2);
        StateVector psi_b = StateVector::basis_state(
            bob_sys.space, bob_sys.space.flat_index({atom2::g, 0, 0}));
        evo.seed = config.seed + 0x9e3779b97f4a7c15ull;
        auto traj_b = evolve_trajectories(bob_sys, psi_b, evo);

        // Detector-pattern sampling distribution (emission conditioned; the
        // analytic mode works in the same emission-complete limit).
        std::vector<double> weights;
        for (const auto& r : s.patterns) weights.push_back(r.probability);

        TrajectoryStats stats;
        stats.n_shots = config.n_trajectories;
        std::mt19937_64 rng(config.seed + 0x2545f4914f6cdd1dull);
        std::discrete_distribution<int> pick(weights.begin(), weights.end());
        double fid_sum = 0.0;
        for (int i = 0; i < config.n_trajectories; ++i) {
            auto emitted = [](const TrajectoryRecord& rec, const char* prefix) {
                bool cavity = false, spont = false;
                for (const auto& j : rec.jumps) {
                    if (j.channel.rfind("cav", 0) == 0) cavity = true;
                    if (j.channel.rfind("spont", 0) == 0) spont = true;
                }
                (void)prefix;
                return std::make_pair(cavity, spont);
            };
            auto [emit_a, spont_a] = emitted(traj_a[i], "cavA");
            auto [emit_b, spont_b] = emitted(traj_b[i], "cavB");
            if (spont_a || spont_b) {
                stats.n_spontaneous++;
                continue;
            }
            if (!emit_a || !emit_b) continue;
            stats.n_both_emitted++;
            const auto& r = s.patterns[pick(rng)];
            if (r.outcome == bsm::OutcomeClass::Failure) continue;
            stats.n_success++;
            if (r.outcome == bsm::OutcomeClass::Plus)
                stats.n_plus++;
            else
                stats.n_minus++;
            Eigen::Matrix2cd rho = r.outcome == bsm::OutcomeClass::Minus
                                       ? apply_minus_correction(r.atom_state)
                                       : r.atom_state;
            fid_sum += fidelity_of(rho, config.a, config.b);
        }
        if (stats.n_both_emitted > 0) {
            double p = static_cast<double>(stats.n_success) / stats.n_both_emitted;
            stats.empirical_success = p;
            stats.success_error =
                std::sqrt(p * (1.0 - p) / stats.n_both_emitted);
        }
        if (stats.n_success > 0) stats.mean_fidelity = fid_sum / stats.n_success;
        report.trajectory = stats;
    }

    return report;
}

std::vector<AuditRow> paper_formula_audit(
    const std::vector<std::pair<Complex, Complex>>& bloch_points,
    const std::vector<double>& overlaps) {
    std::vector<AuditRow> rows;
    bsm::DetectionModel ideal;
    for (const auto& [a, b] : bloch_points) {
        for (double o : overlaps) {
            auto input = bsm::TwoPhotonState::protocol_input(a, b, o, o);
            BsmSummary s = summarize_bsm(input, ideal);
            AuditRow row;
            row.a = a;
            row.b = b;
            row.mode_overlap = o;
            row.oracle_fidelity = fidelity_of(s.corrected, a, b);
            row.formula_fidelity = fidelity_formula(a, b, o);
            row.one_minus_delta = o;
            row.deviation = row.oracle_fidelity - row.formula_fidelity;
            if (row.oracle_fidelity < row.one_minus_delta - 1e-6)
                throw std::runtime_error(
                    "paper_formula_audit: oracle fidelity below 1 - delta bound");
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<std::pair<Complex, Complex>> bloch_grid8() {
    const double is2 = 1.0 / std::sqrt(2.0);
    const Complex i(0.0, 1.0);
    return {
        {1.0, 0.0},
        {0.0, 1.0},
        {is2, is2},
        {is2, -is2},
        {is2, i * is2},
        {is2, -i * is2},
        {std::cos(M_PI / 8.0), std::sin(M_PI / 8.0)},
        {std::sin(M_PI / 8.0), std::cos(M_PI / 8.0)},
    };
}

}  // namespace qteleport

#include "qteleport/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qteleport {

namespace {

const Complex I_unit(0.0, 1.0);

// splitmix64 scramble: consecutive integers make poor mt19937 seeds (their
// first outputs correlate), so per-trajectory seeds are hashed first.
std::uint64_t scramble_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

double inf_norm(const Matrix& m) {
    double best = 0.0;
    for (int i = 0; i < m.rows(); ++i) best = std::max(best, m.row(i).cwiseAbs().sum());
    return best;
}

Matrix ketbra(int dim, int ket, int bra) {
    Matrix m = Matrix::Zero(dim, dim);
    m(ket, bra) = 1.0;
    return m;
}

}  // namespace

double OpenSystem::envelope_at(double t) const {
    if (t <= 0.0) return envelope.front();
    if (t >= grid.T) return envelope.back();
    double x = t / grid.dt();
    int i = static_cast<int>(x);
    if (i >= grid.n_steps) return envelope.back();
    double frac = x - i;
    return envelope[i] * (1.0 - frac) + envelope[i + 1] * frac;
}

Matrix OpenSystem::hamiltonian(double t) const {
    return envelope_at(t) * h_drive + h_static;
}

Matrix OpenSystem::effective_hamiltonian(double t) const {
    Matrix h = hamiltonian(t);
    for (const auto& ch : channels)
        h -= 0.5 * I_unit * (ch.jump_op.adjoint() * ch.jump_op);
    return h;
}

OpenSystem make_alice_system(const SystemParams& params, const DrivePulse& pulse) {
    params.validate();
    OpenSystem sys;
    sys.space = alice_space();
    sys.grid = pulse.grid;
    sys.envelope = pulse.envelope;
    const int d = sys.space.dim();
    const double s = params.spatial_mode_value;

    auto lift_atom = [&](int ket, int bra) {
        return Operator::lift(sys.space, "atom1", ketbra(atom1::dim, ket, bra)).matrix();
    };
    Matrix A0 = lift_atom(atom1::g0, atom1::e0);
    Matrix A1 = lift_atom(atom1::g1, atom1::e1);
    Matrix AL = lift_atom(atom1::r, atom1::e0);
    Matrix AR = lift_atom(atom1::r, atom1::e1);
    Matrix aL = cavity_annihilation(sys.space, "cavA_L").matrix();
    Matrix aR = cavity_annihilation(sys.space, "cavA_R").matrix();

    sys.h_drive = I_unit * params.cg.C_Omega0 * s * (A0 - A0.adjoint()) +
                  I_unit * params.cg.C_Omega1 * s * (A1 - A1.adjoint());
    const double g1 = params.cg.C_g1 * s;
    sys.h_static = -I_unit * g1 * (aL.adjoint() * AL - AL.adjoint() * aL) -
                   I_unit * g1 * (aR.adjoint() * AR - AR.adjoint() * aR);

    const double sk = std::sqrt(params.kappa);
    sys.channels.push_back(
        {"cavA-L", sk * aL, sys.space.flat_index({atom1::r, 1, 0})});
    sys.channels.push_back(
        {"cavA-R", sk * aR, sys.space.flat_index({atom1::r, 0, 1})});
    if (params.gamma > 0.0) {
        const double sg = std::sqrt(params.gamma);
        sys.channels.push_back(
            {"spontaneous-e0", sg * lift_atom(atom1::lost, atom1::e0), -1});
        sys.channels.push_back(
            {"spontaneous-e1", sg * lift_atom(atom1::lost, atom1::e1), -1});
    }
    (void)d;
    return sys;
}

OpenSystem make_bob_system(const SystemParams& params, const DrivePulse& pulse) {
    params.validate();
    OpenSystem sys;
    sys.space = bob_space();
    sys.grid = pulse.grid;
    sys.envelope = pulse.envelope;
    const double s = params.spatial_mode_value;

    auto lift_atom = [&](int ket, int bra) {
        return Operator::lift(sys.space, "atom2", ketbra(atom2::dim, ket, bra)).matrix();
    };
    Matrix A2 = lift_atom(atom2::g, atom2::e);
    Matrix AL = lift_atom(atom2::s1, atom2::e);
    Matrix AR = lift_atom(atom2::s0, atom2::e);
    Matrix aL = cavity_annihilation(sys.space, "cavB_L").matrix();
    Matrix aR = cavity_annihilation(sys.space, "cavB_R").matrix();

    sys.h_drive = I_unit * params.cg.C_Omega2 * s * (A2 - A2.adjoint());
    const double g2 = params.cg.C_g2 * s;
    sys.h_static = -I_unit * g2 * (aL.adjoint() * AL - AL.adjoint() * aL) -
                   I_unit * g2 * (aR.adjoint() * AR - AR.adjoint() * aR);

    const double sk = std::sqrt(params.kappa);
    sys.channels.push_back(
        {"cavB-L", sk * aL, sys.space.flat_index({atom2::s1, 1, 0})});
    sys.channels.push_back(
        {"cavB-R", sk * aR, sys.space.flat_index({atom2::s0, 0, 1})});
    if (params.gamma > 0.0) {
        const double sg = std::sqrt(params.gamma);
        sys.channels.push_back(
            {"spontaneous-e", sg * lift_atom(atom2::lost, atom2::e), -1});
    }
    return sys;
}

NoJumpResult evolve_no_jump(const OpenSystem& sys, const StateVector& psi0,
                            const EvolutionConfig& config) {
    if (!psi0.is_normalized(1e-9))
        throw std::invalid_argument("evolve_no_jump: psi0 not normalized");
    if (psi0.space() != sys.space)
        throw std::invalid_argument("evolve_no_jump: space mismatch");
    if (sys.envelope.size() != static_cast<size_t>(config.grid.n_samples()))
        throw std::invalid_argument("evolve_no_jump: envelope/grid mismatch");

    const int n = config.grid.n_steps;
    const double dt = config.grid.dt();

    // dpsi/dt = (E(t)*Md + Ms) psi with Md = -i*H_drive and
    // Ms = -i*(H_static - (i/2) sum c^dag c).
    Matrix decay = Matrix::Zero(sys.space.dim(), sys.space.dim());
    for (const auto& ch : sys.channels)
        decay += ch.jump_op.adjoint() * ch.jump_op;
    Matrix Md = -I_unit * sys.h_drive;
    Matrix Ms = -I_unit * sys.h_static - 0.5 * decay;

    const double hd_norm = inf_norm(sys.h_drive);
    const double hs_norm = inf_norm(sys.h_static) + 0.5 * inf_norm(decay);

    // Diagonal rate weights per channel (all c^dag c here are diagonal).
    std::vector<Eigen::VectorXd> rate_diag;
    for (const auto& ch : sys.channels)
        rate_diag.push_back(
            (ch.jump_op.adjoint() * ch.jump_op).diagonal().real());

    NoJumpResult res;
    res.norm_sq.resize(n + 1);
    if (config.store_states) res.states.resize(n + 1);
    for (const auto& ch : sys.channels)
        res.channel_rates[ch.name].resize(n + 1);

    Vector psi = psi0.amplitudes();
    auto record = [&](int i) {
        res.norm_sq[i] = psi.squaredNorm();
        if (config.store_states) res.states[i] = psi;
        for (size_t c = 0; c < sys.channels.size(); ++c) {
            double rate = 0.0;
            const auto& w = rate_diag[c];
            for (int k = 0; k < psi.size(); ++k)
                if (w(k) != 0.0) rate += w(k) * std::norm(psi(k));
            res.channel_rates[sys.channels[c].name][i] = rate;
        }
    };
    record(0);

    auto deriv = [&](double t, const Vector& v) -> Vector {
        return sys.envelope_at(t) * (Md * v) + Ms * v;
    };

    for (int i = 0; i < n; ++i) {
        double t = config.grid.t(i);
        double guard = dt * (std::abs(sys.envelope_at(t)) * hd_norm + hs_norm);
        if (guard >= config.stability_limit)
            throw std::runtime_error(
                "evolve_no_jump: stability guard violated (dt*||H|| = " +
                std::to_string(guard) + ")");
        Vector k1 = deriv(t, psi);
        Vector k2 = deriv(t + 0.5 * dt, psi + 0.5 * dt * k1);
        Vector k3 = deriv(t + 0.5 * dt, psi + 0.5 * dt * k2);
        Vector k4 = deriv(t + dt, psi + dt * k3);
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        double nsq = psi.squaredNorm();
        if (nsq > res.norm_sq[i] + 1e-10)
            throw std::runtime_error("evolve_no_jump: norm increased");
        record(i + 1);
    }

    res.final_state = StateVector(sys.space, psi);
    res.survival_probability = res.norm_sq.back();

    // Emitted temporal mode per cavity channel: sqrt(kappa) times the
    // one-photon amplitude. The dynamics only rotate that amplitude by the
    // constant phase inherited from the initial state, so the mode is made
    // real by dividing out the phase at its largest sample.
    for (const auto& ch : sys.channels) {
        if (ch.mode_index < 0) continue;
        double sqrt_rate = std::sqrt(
            (ch.jump_op.adjoint() * ch.jump_op).diagonal().real().maxCoeff());
        PhotonMode mode;
        mode.grid = config.grid;
        mode.polarization = ch.name.back() == 'L' ? 'L' : 'R';
        mode.samples.resize(n + 1);
        if (config.store_states) {
            int i_ref = 0;
            double best = 0.0;
            for (int i = 0; i <= n; ++i) {
                double m = std::abs(res.states[i](ch.mode_index));
                if (m > best) {
                    best = m;
                    i_ref = i;
                }
            }
            Complex phase =
                best > 0.0 ? res.states[i_ref](ch.mode_index) / best : Complex(1.0);
            for (int i = 0; i <= n; ++i)
                mode.samples[i] =
                    sqrt_rate * (res.states[i](ch.mode_index) / phase).real();
        } else {
            // Rates track gives |f| only; sign information needs stored states.
            for (int i = 0; i <= n; ++i)
                mode.samples[i] = std::sqrt(res.channel_rates.at(ch.name)[i]);
        }
        // Exact regardless of phase: the channel rate is kappa*|amplitude|^2.
        mode.emission_probability = trapezoid(res.channel_rates.at(ch.name), dt);
        res.emitted_modes[ch.name] = std::move(mode);
    }
    return res;
}

std::vector<TrajectoryRecord> evolve_trajectories(const OpenSystem& sys,
                                                  const StateVector& psi0,
                                                  const EvolutionConfig& config) {
    if (config.n_trajectories < 1)
        throw std::invalid_argument("evolve_trajectories: n_trajectories < 1");

    EvolutionConfig nj_config = config;
    nj_config.store_states = false;
    NoJumpResult base = evolve_no_jump(sys, psi0, nj_config);

    // After any jump the state is stationary with zero further decay rate in
    // this one-excitation model, so each trajectory has at most one jump and
    // is sampled exactly: first-jump time from the norm decay (inverse CDF),
    // channel from the instantaneous rates.
    const auto& norm_sq = base.norm_sq;
    const int n = config.grid.n_steps;

    std::vector<TrajectoryRecord> records;
    records.reserve(config.n_trajectories);
    for (int traj = 0; traj < config.n_trajectories; ++traj) {
        std::mt19937_64 rng(
            scramble_seed(config.seed + static_cast<std::uint64_t>(traj)));
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        double r = uni(rng);

        TrajectoryRecord rec;
        rec.survival_probability = base.survival_probability;
        if (r >= base.survival_probability) {
            // Jump: first index where norm^2 drops below r (norm_sq decreasing).
            auto it = std::upper_bound(norm_sq.begin(), norm_sq.end(), r,
                                       std::greater<double>());
            int idx = std::max<int>(1, static_cast<int>(it - norm_sq.begin()));
            idx = std::min(idx, n);
            double t0 = config.grid.t(idx - 1), t1 = config.grid.t(idx);
            double n0 = norm_sq[idx - 1], n1 = norm_sq[idx];
            double frac = n0 > n1 ? (n0 - r) / (n0 - n1) : 0.5;
            double t_jump = t0 + frac * (t1 - t0);

            std::vector<double> weights;
            for (const auto& ch : sys.channels)
                weights.push_back(base.channel_rates.at(ch.name)[idx]);
            std::discrete_distribution<int> pick(weights.begin(), weights.end());
            rec.jumps.push_back({t_jump, sys.channels[pick(rng)].name});
        }
        records.push_back(std::move(rec));
    }
    return records;
}

double adiabaticity_report(const NoJumpResult& result,
                           const std::vector<StateVector>& reference) {
    if (result.states.empty())
        throw std::invalid_argument("adiabaticity_report: states not stored");
    if (result.states.size() != reference.size())
        throw std::invalid_argument("adiabaticity_report: grid mismatch");
    double worst = 1.0;
    for (size_t i = 0; i < reference.size(); ++i) {
        double nsq = result.states[i].squaredNorm();
        if (nsq < 1e-300) continue;
        Complex ov = reference[i].amplitudes().dot(result.states[i]);
        worst = std::min(worst, std::norm(ov) / nsq);
    }
    return worst;
}

}  // namespace qteleport

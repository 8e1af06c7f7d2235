#include "qteleport/atom_cavity.hpp"

#include <cmath>
#include <functional>
#include <map>

namespace qteleport {

namespace {

const Complex I_unit(0.0, 1.0);

Matrix ketbra(int dim, int ket, int bra) {
    Matrix m = Matrix::Zero(dim, dim);
    m(ket, bra) = 1.0;
    return m;
}

Matrix annihilation2() {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 1) = 1.0;
    return a;
}

}  // namespace

AliceLevelScheme AliceLevelScheme::standard() {
    AliceLevelScheme scheme;
    scheme.transitions = {
        {atom1::g0, atom1::e0, "drive0"},
        {atom1::g1, atom1::e1, "drive1"},
        {atom1::e0, atom1::r, "cavity_L"},
        {atom1::e1, atom1::r, "cavity_R"},
    };
    return scheme;
}

void AliceLevelScheme::validate() const {
    // Two independent Lambda branches: each excited level has exactly one
    // drive in-edge and one cavity out-edge.
    std::map<int, int> drive_in, cavity_out;
    for (const auto& tr : transitions) {
        if (tr.kind == "drive0" || tr.kind == "drive1")
            drive_in[tr.to]++;
        else
            cavity_out[tr.from]++;
    }
    for (int e : {atom1::e0, atom1::e1})
        if (drive_in[e] != 1 || cavity_out[e] != 1)
            throw std::invalid_argument(
                "AliceLevelScheme: excited level must have one drive in-edge "
                "and one cavity out-edge");
}

BobLevelScheme BobLevelScheme::standard() {
    BobLevelScheme scheme;
    scheme.transitions = {
        {atom2::g, atom2::e, "drive2"},
        {atom2::e, atom2::s1, "cavity_L"},
        {atom2::e, atom2::s0, "cavity_R"},
    };
    return scheme;
}

void BobLevelScheme::validate() const {
    int drive_in = 0, cavity_out = 0;
    for (const auto& tr : transitions) {
        if (tr.kind == "drive2" && tr.to == atom2::e) drive_in++;
        if (tr.kind != "drive2" && tr.from == atom2::e) cavity_out++;
    }
    if (drive_in != 1 || cavity_out != 2)
        throw std::invalid_argument(
            "BobLevelScheme: need one drive in-edge and two cavity out-edges");
}

void SystemParams::validate() const {
    if (kappa <= 0.0) throw std::invalid_argument("SystemParams: kappa <= 0");
    if (gamma < 0.0) throw std::invalid_argument("SystemParams: gamma < 0");
    if (spatial_mode_value <= 0.0 || spatial_mode_value > 1.0)
        throw std::invalid_argument("SystemParams: s must be in (0, 1]");
}

double spatial_mode(double x, double wavelength) {
    return std::cos(2.0 * M_PI * x / wavelength);
}

HilbertSpace alice_space() {
    return HilbertSpace({{"atom1", atom1::dim}, {"cavA_L", 2}, {"cavA_R", 2}});
}

HilbertSpace bob_space() {
    return HilbertSpace({{"atom2", atom2::dim}, {"cavB_L", 2}, {"cavB_R", 2}});
}

HilbertSpace atom1_space() { return HilbertSpace({{"atom1", atom1::dim}}); }
HilbertSpace atom2_space() { return HilbertSpace({{"atom2", atom2::dim}}); }

Operator cavity_annihilation(const HilbertSpace& space, const std::string& factor) {
    return Operator::lift(space, factor, annihilation2());
}

Operator build_H1(const SystemParams& params, double pulse_value) {
    params.validate();
    const HilbertSpace sp = alice_space();
    const double s = params.spatial_mode_value;
    const double om0 = params.cg.C_Omega0 * s * pulse_value;
    const double om1 = params.cg.C_Omega1 * s * pulse_value;
    const double g1 = params.cg.C_g1 * s;

    auto A0 = Operator::lift(sp, "atom1", ketbra(atom1::dim, atom1::g0, atom1::e0));
    auto A1 = Operator::lift(sp, "atom1", ketbra(atom1::dim, atom1::g1, atom1::e1));
    auto AL = Operator::lift(sp, "atom1", ketbra(atom1::dim, atom1::r, atom1::e0));
    auto AR = Operator::lift(sp, "atom1", ketbra(atom1::dim, atom1::r, atom1::e1));
    auto aL = cavity_annihilation(sp, "cavA_L");
    auto aR = cavity_annihilation(sp, "cavA_R");

    Matrix h = I_unit * om0 * (A0.matrix() - A0.matrix().adjoint()) +
               I_unit * om1 * (A1.matrix() - A1.matrix().adjoint()) -
               I_unit * g1 *
                   (aL.matrix().adjoint() * AL.matrix() -
                    AL.matrix().adjoint() * aL.matrix()) -
               I_unit * g1 *
                   (aR.matrix().adjoint() * AR.matrix() -
                    AR.matrix().adjoint() * aR.matrix());
    return Operator(sp, std::move(h));
}

Operator build_H2(const SystemParams& params, double pulse_value) {
    params.validate();
    const HilbertSpace sp = bob_space();
    const double s = params.spatial_mode_value;
    const double om2 = params.cg.C_Omega2 * s * pulse_value;
    const double g2 = params.cg.C_g2 * s;

    auto A2 = Operator::lift(sp, "atom2", ketbra(atom2::dim, atom2::g, atom2::e));
    auto AL = Operator::lift(sp, "atom2", ketbra(atom2::dim, atom2::s1, atom2::e));
    auto AR = Operator::lift(sp, "atom2", ketbra(atom2::dim, atom2::s0, atom2::e));
    auto aL = cavity_annihilation(sp, "cavB_L");
    auto aR = cavity_annihilation(sp, "cavB_R");

    Matrix h = I_unit * om2 * (A2.matrix() - A2.matrix().adjoint()) -
               I_unit * g2 *
                   (aL.matrix().adjoint() * AL.matrix() -
                    AL.matrix().adjoint() * aL.matrix()) -
               I_unit * g2 *
                   (aR.matrix().adjoint() * AR.matrix() -
                    AR.matrix().adjoint() * aR.matrix());
    return Operator(sp, std::move(h));
}

StateVector dark_state_alice(const SystemParams& params, double pulse_value,
                             int branch) {
    if (branch != 0 && branch != 1)
        throw std::invalid_argument("dark_state_alice: branch must be 0 or 1");
    const HilbertSpace sp = alice_space();
    const double s = params.spatial_mode_value;
    const double g1 = params.cg.C_g1 * s;
    const double om =
        (branch == 0 ? params.cg.C_Omega0 : params.cg.C_Omega1) * s * pulse_value;
    const double denom = std::sqrt(g1 * g1 + om * om);

    Vector v = Vector::Zero(sp.dim());
    int ground = branch == 0 ? atom1::g0 : atom1::g1;
    v(sp.flat_index({ground, 0, 0})) = g1 / denom;
    if (branch == 0)
        v(sp.flat_index({atom1::r, 1, 0})) = om / denom;
    else
        v(sp.flat_index({atom1::r, 0, 1})) = om / denom;
    return StateVector(sp, std::move(v));
}

StateVector dark_state_bob(const SystemParams& params, double pulse_value) {
    const HilbertSpace sp = bob_space();
    const double s = params.spatial_mode_value;
    const double g2 = params.cg.C_g2 * s;
    const double om = params.cg.C_Omega2 * s * pulse_value;
    const double denom = std::sqrt(2.0 * g2 * g2 + om * om);

    Vector v = Vector::Zero(sp.dim());
    v(sp.flat_index({atom2::g, 0, 0})) = std::sqrt(2.0) * g2 / denom;
    v(sp.flat_index({atom2::s0, 0, 1})) = om / (std::sqrt(2.0) * denom);
    v(sp.flat_index({atom2::s1, 1, 0})) = om / (std::sqrt(2.0) * denom);
    return StateVector(sp, std::move(v));
}

StateVector adiabatic_state_alice(Complex a, Complex b,
                                  const MixingAngleTrack& track0,
                                  const MixingAngleTrack& track1, int sample) {
    if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-10)
        throw std::invalid_argument("adiabatic_state_alice: |a|^2 + |b|^2 != 1");
    const HilbertSpace sp = alice_space();
    Vector v = Vector::Zero(sp.dim());
    v(sp.flat_index({atom1::g0, 0, 0})) = a * track0.cos_theta[sample];
    v(sp.flat_index({atom1::g1, 0, 0})) = b * track1.cos_theta[sample];
    v(sp.flat_index({atom1::r, 1, 0})) = a * track0.sin_theta[sample];
    v(sp.flat_index({atom1::r, 0, 1})) = b * track1.sin_theta[sample];
    return StateVector(sp, std::move(v));
}

StateVector adiabatic_state_bob(const MixingAngleTrack& track2, int sample) {
    const HilbertSpace sp = bob_space();
    Vector v = Vector::Zero(sp.dim());
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    v(sp.flat_index({atom2::g, 0, 0})) = track2.cos_theta[sample];
    v(sp.flat_index({atom2::s0, 0, 1})) = track2.sin_theta[sample] * inv_sqrt2;
    v(sp.flat_index({atom2::s1, 1, 0})) = track2.sin_theta[sample] * inv_sqrt2;
    return StateVector(sp, std::move(v));
}

PhaseCheckResult phase_check(const std::vector<StateVector>& states,
                             const std::vector<double>& energies, double dt) {
    if (states.size() < 3 || states.size() != energies.size())
        throw std::invalid_argument("phase_check: need matching tracks, >= 3 samples");
    // Berry phase: i * int <D| d/dt |D> dt, central differences inside.
    Complex connection_integral = 0.0;
    for (size_t i = 1; i + 1 < states.size(); ++i) {
        Vector deriv =
            (states[i + 1].amplitudes() - states[i - 1].amplitudes()) / (2.0 * dt);
        connection_integral += states[i].amplitudes().dot(deriv) * dt;
    }
    double berry = (I_unit * connection_integral).real();
    double dynamical = trapezoid(energies, dt);
    return {berry, dynamical};
}

namespace {

PhaseCheckResult phase_check_impl(const DrivePulse& pulse,
                                  const std::function<StateVector(double)>& dark,
                                  const std::function<Operator(double)>& ham) {
    std::vector<StateVector> states;
    std::vector<double> energies;
    states.reserve(pulse.envelope.size());
    for (size_t i = 0; i < pulse.envelope.size(); ++i) {
        StateVector d = dark(pulse.envelope[i]);
        Operator h = ham(pulse.envelope[i]);
        energies.push_back(d.amplitudes().dot(h.matrix() * d.amplitudes()).real());
        states.push_back(std::move(d));
    }
    return phase_check(states, energies, pulse.grid.dt());
}

}  // namespace

PhaseCheckResult phase_check_alice(const SystemParams& params,
                                   const DrivePulse& pulse, int branch) {
    return phase_check_impl(
        pulse,
        [&](double e) { return dark_state_alice(params, e, branch); },
        [&](double e) { return build_H1(params, e); });
}

PhaseCheckResult phase_check_bob(const SystemParams& params,
                                 const DrivePulse& pulse) {
    return phase_check_impl(
        pulse, [&](double e) { return dark_state_bob(params, e); },
        [&](double e) { return build_H2(params, e); });
}

StateVector prepare_initial_state(Complex a, Complex b) {
    if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-10)
        throw std::invalid_argument("prepare_initial_state: |a|^2 + |b|^2 != 1");
    // Intermediate space {g0, transfer level, g1}: step (1) is a two-level
    // rotation on (g0, transfer), step (2) a pi pulse swapping transfer <-> g1.
    Eigen::Vector3cd prep;
    prep << 1.0, 0.0, 0.0;
    Eigen::Matrix3cd rot = Eigen::Matrix3cd::Identity();
    rot(0, 0) = a;
    rot(1, 0) = b;
    rot(0, 1) = -std::conj(b);
    rot(1, 1) = std::conj(a);
    prep = rot * prep;
    Eigen::Matrix3cd swap = Eigen::Matrix3cd::Identity();
    swap(1, 1) = swap(2, 2) = 0.0;
    swap(2, 1) = swap(1, 2) = 1.0;
    prep = swap * prep;

    const HilbertSpace sp = atom1_space();
    Vector v = Vector::Zero(sp.dim());
    v(atom1::g0) = prep(0);
    v(atom1::g1) = prep(2);
    return StateVector(sp, std::move(v));
}

}  // namespace qteleport

#ifndef QTELEPORT_ATOM_CAVITY_HPP
#define QTELEPORT_ATOM_CAVITY_HPP

#include "qteleport/hilbert.hpp"
#include "qteleport/pulses.hpp"

namespace qteleport {

// Atom 1 levels. The terminal "lost" flag absorbs spontaneous emission.
namespace atom1 {
constexpr int g0 = 0;
constexpr int g1 = 1;
constexpr int e0 = 2;
constexpr int e1 = 3;
constexpr int r = 4;
constexpr int lost = 5;
constexpr int dim = 6;
}  // namespace atom1

// Atom 2 levels; s0/s1 are the |0> and |1> qubit states.
namespace atom2 {
constexpr int g = 0;
constexpr int e = 1;
constexpr int s0 = 2;
constexpr int s1 = 3;
constexpr int lost = 4;
constexpr int dim = 5;
}  // namespace atom2

struct AliceLevelScheme {
    struct Transition {
        int from;
        int to;
        std::string kind;  // "drive0", "drive1", "cavity_L", "cavity_R"
    };
    std::vector<Transition> transitions;

    static AliceLevelScheme standard();
    void validate() const;  // each excited level: one drive in-edge, one cavity out-edge
};

struct BobLevelScheme {
    struct Transition {
        int from;
        int to;
        std::string kind;  // "drive2", "cavity_L", "cavity_R"
    };
    std::vector<Transition> transitions;

    static BobLevelScheme standard();
    void validate() const;  // single excited level, one drive in, two cavity out
};

struct SystemParams {
    CgTable cg = CgTable::defaults();
    double kappa = 1.0;
    double gamma = 0.0;
    double spatial_mode_value = 1.0;  // s = S(r) in (0, 1]

    void validate() const;
};

// Spatial mode of a standing-wave cavity at axial position x.
double spatial_mode(double x, double wavelength);

// Composite spaces: atom factor first, then cavity-L, then cavity-R.
HilbertSpace alice_space();
HilbertSpace bob_space();
HilbertSpace atom1_space();
HilbertSpace atom2_space();

Operator build_H1(const SystemParams& params, double pulse_value);
Operator build_H2(const SystemParams& params, double pulse_value);

// Annihilation operators on the composite spaces (identity on other factors).
Operator cavity_annihilation(const HilbertSpace& space, const std::string& factor);

StateVector dark_state_alice(const SystemParams& params, double pulse_value,
                             int branch);
StateVector dark_state_bob(const SystemParams& params, double pulse_value);

StateVector adiabatic_state_alice(Complex a, Complex b,
                                  const MixingAngleTrack& track0,
                                  const MixingAngleTrack& track1, int sample);
StateVector adiabatic_state_bob(const MixingAngleTrack& track2, int sample);

struct PhaseCheckResult {
    double berry_phase;
    double dynamical_phase;
};

// Quadrature of the geometric connection <D|d/dt|D> and of <D|H|D> along a
// dark-state track; both must come out ~0 for this scheme.
PhaseCheckResult phase_check(const std::vector<StateVector>& states,
                             const std::vector<double>& energies, double dt);
PhaseCheckResult phase_check_alice(const SystemParams& params,
                                   const DrivePulse& pulse, int branch);
PhaseCheckResult phase_check_bob(const SystemParams& params,
                                 const DrivePulse& pulse);

// Two-step Raman preparation of a|g0> + b|g1> from |g0>.
StateVector prepare_initial_state(Complex a, Complex b);

}  // namespace qteleport

#endif

#ifndef QTELEPORT_BSM_HPP
#define QTELEPORT_BSM_HPP

#include <array>
#include <string>
#include <vector>

#include "qteleport/hilbert.hpp"
#include "qteleport/pulses.hpp"

namespace qteleport {
namespace bsm {

// Optical modes: (spatial port, polarization H/V, temporal index mu/mu_perp).
// Ports 0 and 1 are the Alice/Bob input arms; 2 and 3 the interferometer
// outputs feeding the detector pairs.
constexpr int kNumPorts = 4;
constexpr int kNumModes = kNumPorts * 2 * 2;

inline int mode_index(int port, int pol, int temporal) {
    return (port * 2 + pol) * 2 + temporal;
}

enum class Pol { H = 0, V = 1 };

struct OpticalElement {
    enum class Kind { QWP, HWP, PBS };
    Kind kind;
    std::vector<int> ports;
    double angle_deg = 0.0;       // HWP label angle (90 swaps H/V, 45 -> diagonal)
    Matrix unitary;               // kNumModes x kNumModes

    static OpticalElement qwp(int port);
    static OpticalElement hwp(int port, double angle_deg);
    static OpticalElement pbs(int in1, int in2, int out1, int out2);
};

/// Second-quantized two-photon state over the optical modes, tensored with
/// Bob's atomic qubit. Stored as symmetric coefficient matrices C so that
/// |psi> = sum_mn C[q](m,n) a_m^dag a_n^dag |vac> (x) |q>_atom, q in {0,1}.
struct TwoPhotonState {
    std::array<Matrix, 2> coeff;  // symmetric, kNumModes x kNumModes

    TwoPhotonState();
    double norm_sq() const;
    void normalize();
    void transform(const Matrix& unitary);

    // Joint state of the ideal protocol: photon A on port 0 carrying
    // a|L> + b|R>, photon B on port 1 entangled with the atom. Photon A's
    // temporal state per polarization branch is O_i|mu> + sqrt(1-O_i^2)|mu_perp>
    // relative to photon B's mode |mu>.
    static TwoPhotonState protocol_input(Complex a, Complex b, double overlap0,
                                         double overlap1);
    // Pure photon-polarization Bell state on the input ports, matched
    // temporal modes, atom fixed in |0>. which in {"psi+","psi-","phi+","phi-"}.
    static TwoPhotonState bell_pair(const std::string& which);
};

struct DetectionModel {
    std::array<double, 4> efficiency = {1.0, 1.0, 1.0, 1.0};  // per detector
    bool number_resolving = false;
    std::array<double, 2> arm_transmission = {1.0, 1.0};      // per input arm

    void set_uniform_efficiency(double eta);
    void validate() const;
};

enum class OutcomeClass { Plus, Minus, Failure };

std::string to_string(OutcomeClass cls);

/// Plus <=> {D1,D4} or {D2,D3}; Minus <=> {D1,D3} or {D2,D4}; else Failure.
OutcomeClass classify(const std::vector<int>& pattern);

/// Temporal decomposition of photon A's mode against photon B's:
/// returns (O, sqrt(1-O^2)).
std::pair<double, double> decompose_temporal(const PhotonMode& f_A,
                                             const PhotonMode& f_B);

struct BsmNetwork {
    std::vector<OpticalElement> elements;
    Matrix total_unitary;
    // detector id (1..4) for each output (port, pol); 0 = not a detector
    int detector_of(int port, int pol) const;
};

/// Assemble the Fig.-style analyzer and verify the Bell-discrimination
/// contract with a brute-force check; throws if the wiring violates it.
BsmNetwork build_bsm_network();

struct PatternResult {
    std::vector<int> pattern;           // sorted clicked detector ids (may be empty)
    double probability;
    Eigen::Matrix2cd atom_state;        // unnormalized conditional atom-2 state
    OutcomeClass outcome;
};

/// Propagates the two-photon state through the network, applies binomial
/// thinning for arm transmission and detector efficiency, and returns every
/// click pattern with its probability and Bob's conditional atomic state.
/// Probabilities sum to 1 (including no-click and one-click patterns).
std::vector<PatternResult> bsm_probabilities(const TwoPhotonState& state,
                                             const BsmNetwork& network,
                                             const DetectionModel& detection);

}  // namespace bsm
}  // namespace qteleport

#endif

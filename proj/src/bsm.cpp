#include "qteleport/bsm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qteleport {
namespace bsm {

namespace {

const Complex I_unit(0.0, 1.0);

// Embed a 2x2 polarization map of one port into the full mode unitary
// (identity on the temporal index and all other ports).
Matrix embed_jones(int port, const Eigen::Matrix2cd& jones) {
    Matrix u = Matrix::Identity(kNumModes, kNumModes);
    for (int t = 0; t < 2; ++t)
        for (int p1 = 0; p1 < 2; ++p1)
            for (int p2 = 0; p2 < 2; ++p2)
                u(mode_index(port, p1, t), mode_index(port, p2, t)) = jones(p1, p2);
    return u;
}

Vector pol_vector_L() {
    Vector v(2);
    v << 1.0 / std::sqrt(2.0), I_unit / std::sqrt(2.0);
    return v;
}

Vector pol_vector_R() {
    Vector v(2);
    v << 1.0 / std::sqrt(2.0), -I_unit / std::sqrt(2.0);
    return v;
}

// Single-photon creation vector: polarization state pol on `port`, temporal
// amplitudes (c_mu, c_perp).
Vector photon_vector(int port, const Vector& pol, Complex c_mu, Complex c_perp) {
    Vector v = Vector::Zero(kNumModes);
    for (int p = 0; p < 2; ++p) {
        v(mode_index(port, p, 0)) = pol(p) * c_mu;
        v(mode_index(port, p, 1)) = pol(p) * c_perp;
    }
    return v;
}

Matrix sym_outer(const Vector& x, const Vector& y) {
    return 0.5 * (x * y.transpose() + y * x.transpose());
}

}  // namespace

OpticalElement OpticalElement::qwp(int port) {
    OpticalElement e;
    e.kind = Kind::QWP;
    e.ports = {port};
    Eigen::Matrix2cd jones;  // maps |L> -> |H>, |R> -> |V>
    jones << 1.0, -I_unit, 1.0, I_unit;
    jones /= std::sqrt(2.0);
    e.unitary = embed_jones(port, jones);
    return e;
}

OpticalElement OpticalElement::hwp(int port, double angle_deg) {
    OpticalElement e;
    e.kind = Kind::HWP;
    e.ports = {port};
    e.angle_deg = angle_deg;
    double a = angle_deg * M_PI / 180.0;
    Eigen::Matrix2cd jones;
    jones << std::cos(a), std::sin(a), std::sin(a), -std::cos(a);
    e.unitary = embed_jones(port, jones);
    return e;
}

OpticalElement OpticalElement::pbs(int in1, int in2, int out1, int out2) {
    OpticalElement e;
    e.kind = Kind::PBS;
    e.ports = {in1, in2, out1, out2};
    Matrix u = Matrix::Identity(kNumModes, kNumModes);
    auto route = [&](int from, int pol_from, int to) {
        for (int t = 0; t < 2; ++t) {
            int a = mode_index(from, pol_from, t);
            int b = mode_index(to, pol_from, t);
            u(a, a) = u(b, b) = 0.0;
            u(b, a) = u(a, b) = 1.0;  // reverse direction completes the unitary
        }
    };
    route(in1, 0, out1);  // H transmits
    route(in2, 0, out2);
    route(in1, 1, out2);  // V reflects
    route(in2, 1, out1);
    e.unitary = std::move(u);
    return e;
}

TwoPhotonState::TwoPhotonState() {
    coeff[0] = Matrix::Zero(kNumModes, kNumModes);
    coeff[1] = Matrix::Zero(kNumModes, kNumModes);
}

double TwoPhotonState::norm_sq() const {
    return 2.0 * (coeff[0].squaredNorm() + coeff[1].squaredNorm());
}

void TwoPhotonState::normalize() {
    double n = std::sqrt(norm_sq());
    if (n < 1e-300) throw std::runtime_error("TwoPhotonState: zero norm");
    coeff[0] /= n;
    coeff[1] /= n;
}

void TwoPhotonState::transform(const Matrix& unitary) {
    coeff[0] = unitary * coeff[0] * unitary.transpose();
    coeff[1] = unitary * coeff[1] * unitary.transpose();
}

TwoPhotonState TwoPhotonState::protocol_input(Complex a, Complex b,
                                              double overlap0, double overlap1) {
    if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-9)
        throw std::invalid_argument("protocol_input: |a|^2 + |b|^2 != 1");
    for (double o : {overlap0, overlap1})
        if (o < -1.0 - 1e-9 || o > 1.0 + 1e-9)
            throw std::invalid_argument("protocol_input: overlap outside [-1, 1]");

    auto perp = [](double o) { return std::sqrt(std::max(0.0, 1.0 - o * o)); };
    Vector photon_a =
        a * photon_vector(0, pol_vector_L(), overlap0, perp(overlap0)) +
        b * photon_vector(0, pol_vector_R(), overlap1, perp(overlap1));
    Vector photon_b0 = photon_vector(1, pol_vector_R(), 1.0, 0.0);  // with |0>_2
    Vector photon_b1 = photon_vector(1, pol_vector_L(), 1.0, 0.0);  // with |1>_2

    TwoPhotonState state;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    state.coeff[0] = inv_sqrt2 * sym_outer(photon_a, photon_b0);
    state.coeff[1] = inv_sqrt2 * sym_outer(photon_a, photon_b1);
    return state;
}

TwoPhotonState TwoPhotonState::bell_pair(const std::string& which) {
    Vector l0 = photon_vector(0, pol_vector_L(), 1.0, 0.0);
    Vector r0 = photon_vector(0, pol_vector_R(), 1.0, 0.0);
    Vector l1 = photon_vector(1, pol_vector_L(), 1.0, 0.0);
    Vector r1 = photon_vector(1, pol_vector_R(), 1.0, 0.0);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    TwoPhotonState state;
    if (which == "psi+")
        state.coeff[0] = inv_sqrt2 * (sym_outer(l0, r1) + sym_outer(r0, l1));
    else if (which == "psi-")
        state.coeff[0] = inv_sqrt2 * (sym_outer(l0, r1) - sym_outer(r0, l1));
    else if (which == "phi+")
        state.coeff[0] = inv_sqrt2 * (sym_outer(l0, l1) + sym_outer(r0, r1));
    else if (which == "phi-")
        state.coeff[0] = inv_sqrt2 * (sym_outer(l0, l1) - sym_outer(r0, r1));
    else
        throw std::invalid_argument("bell_pair: unknown state '" + which + "'");
    return state;
}

void DetectionModel::set_uniform_efficiency(double eta) {
    efficiency = {eta, eta, eta, eta};
}

void DetectionModel::validate() const {
    for (double e : efficiency)
        if (e < 0.0 || e > 1.0)
            throw std::invalid_argument("DetectionModel: efficiency outside [0, 1]");
    for (double t : arm_transmission)
        if (t < 0.0 || t > 1.0)
            throw std::invalid_argument("DetectionModel: transmission outside [0, 1]");
}

std::string to_string(OutcomeClass cls) {
    switch (cls) {
        case OutcomeClass::Plus: return "Plus";
        case OutcomeClass::Minus: return "Minus";
        default: return "Failure";
    }
}

OutcomeClass classify(const std::vector<int>& pattern) {
    for (int d : pattern)
        if (d < 1 || d > 4)
            throw std::invalid_argument("classify: unknown detector id");
    if (pattern.size() != 2 || pattern[0] == pattern[1]) return OutcomeClass::Failure;
    int lo = std::min(pattern[0], pattern[1]);
    int hi = std::max(pattern[0], pattern[1]);
    if ((lo == 1 && hi == 4) || (lo == 2 && hi == 3)) return OutcomeClass::Plus;
    if ((lo == 1 && hi == 3) || (lo == 2 && hi == 4)) return OutcomeClass::Minus;
    return OutcomeClass::Failure;
}

std::pair<double, double> decompose_temporal(const PhotonMode& f_A,
                                             const PhotonMode& f_B) {
    if (!f_A.normalized || !f_B.normalized)
        throw std::invalid_argument("decompose_temporal: modes must be normalized");
    double o = overlap(f_A, f_B);
    if (std::abs(o) > 1.0 + 1e-9)
        throw std::runtime_error("decompose_temporal: |overlap| > 1 (quadrature fault)");
    o = std::clamp(o, -1.0, 1.0);
    return {o, std::sqrt(1.0 - o * o)};
}

int BsmNetwork::detector_of(int port, int pol) const {
    if (port == 2) return pol == 0 ? 1 : 2;  // D1 = (2,H), D2 = (2,V)
    if (port == 3) return pol == 0 ? 4 : 3;  // D4 = (3,H), D3 = (3,V)
    return 0;
}

namespace {

void verify_bell_contract(const BsmNetwork& net) {
    DetectionModel ideal;
    struct Case {
        const char* input;
        OutcomeClass expected;  // Failure means neither Plus nor Minus may fire
    };
    for (const Case& c : {Case{"psi+", OutcomeClass::Plus},
                          Case{"psi-", OutcomeClass::Minus},
                          Case{"phi+", OutcomeClass::Failure},
                          Case{"phi-", OutcomeClass::Failure}}) {
        auto results = bsm_probabilities(TwoPhotonState::bell_pair(c.input), net, ideal);
        double p_plus = 0.0, p_minus = 0.0;
        for (const auto& r : results) {
            if (r.outcome == OutcomeClass::Plus) p_plus += r.probability;
            if (r.outcome == OutcomeClass::Minus) p_minus += r.probability;
        }
        double want_plus = c.expected == OutcomeClass::Plus ? 1.0 : 0.0;
        double want_minus = c.expected == OutcomeClass::Minus ? 1.0 : 0.0;
        if (std::abs(p_plus - want_plus) > 1e-10 ||
            std::abs(p_minus - want_minus) > 1e-10)
            throw std::runtime_error(
                std::string("build_bsm_network: Bell-discrimination contract "
                            "violated for input ") +
                c.input);
    }
}

}  // namespace

BsmNetwork build_bsm_network() {
    BsmNetwork net;
    net.elements.push_back(OpticalElement::qwp(0));
    net.elements.push_back(OpticalElement::qwp(1));
    net.elements.push_back(OpticalElement::hwp(1, 90.0));
    net.elements.push_back(OpticalElement::pbs(0, 1, 2, 3));
    net.elements.push_back(OpticalElement::hwp(2, 45.0));
    net.elements.push_back(OpticalElement::hwp(3, 45.0));

    net.total_unitary = Matrix::Identity(kNumModes, kNumModes);
    for (const auto& e : net.elements)
        net.total_unitary = e.unitary * net.total_unitary;
    if ((net.total_unitary * net.total_unitary.adjoint() -
         Matrix::Identity(kNumModes, kNumModes))
            .cwiseAbs()
            .maxCoeff() > 1e-12)
        throw std::runtime_error("build_bsm_network: network not unitary");

    verify_bell_contract(net);
    return net;
}

namespace {

struct PatternAccumulator {
    std::map<std::vector<int>, std::pair<double, Eigen::Matrix2cd>> table;

    void add(std::vector<int> pattern, double prob, const Eigen::Matrix2cd& rho) {
        std::sort(pattern.begin(), pattern.end());
        auto [it, inserted] = table.try_emplace(
            std::move(pattern), 0.0, Eigen::Matrix2cd::Zero().eval());
        it->second.first += prob;
        it->second.second += rho;
    }
};

Eigen::Matrix2cd outer2(const Eigen::Vector2cd& v) { return v * v.adjoint(); }

}  // namespace

std::vector<PatternResult> bsm_probabilities(const TwoPhotonState& state,
                                             const BsmNetwork& network,
                                             const DetectionModel& detection) {
    detection.validate();
    if (std::abs(state.norm_sq() - 1.0) > 1e-9)
        throw std::invalid_argument("bsm_probabilities: state not normalized");
    // This bookkeeping assumes one photon per input arm (the protocol always
    // provides that); a shared-arm pair would need finer thinning.
    for (int q = 0; q < 2; ++q)
        for (int port : {0, 1})
            for (int p1 = 0; p1 < 2; ++p1)
                for (int t1 = 0; t1 < 2; ++t1)
                    for (int p2 = 0; p2 < 2; ++p2)
                        for (int t2 = 0; t2 < 2; ++t2)
                            if (std::abs(state.coeff[q](mode_index(port, p1, t1),
                                                        mode_index(port, p2, t2))) >
                                1e-12)
                                throw std::invalid_argument(
                                    "bsm_probabilities: both photons share an input arm");

    const double tA = detection.arm_transmission[0];
    const double tB = detection.arm_transmission[1];
    PatternAccumulator acc;
    Eigen::Matrix2cd zero2 = Eigen::Matrix2cd::Zero();

    // --- both photons transmitted ---
    {
        TwoPhotonState out = state;
        out.transform(network.total_unitary);
        const double w = tA * tB;
        for (int m = 0; m < kNumModes; ++m) {
            for (int n = m; n < kNumModes; ++n) {
                Eigen::Vector2cd amp;
                if (m == n)
                    amp << std::sqrt(2.0) * out.coeff[0](m, m),
                        std::sqrt(2.0) * out.coeff[1](m, m);
                else
                    amp << 2.0 * out.coeff[0](m, n), 2.0 * out.coeff[1](m, n);
                double p = amp.squaredNorm();
                if (p < 1e-30) continue;

                auto lm = network.detector_of(m / 4, (m / 2) % 2);
                auto ln = network.detector_of(n / 4, (n / 2) % 2);
                if (lm == 0 || ln == 0)
                    throw std::runtime_error(
                        "bsm_probabilities: photon amplitude on a non-detector port");
                double e1 = detection.efficiency[lm - 1];
                double e2 = detection.efficiency[ln - 1];
                Eigen::Matrix2cd rho = outer2(amp);

                if (lm != ln) {
                    acc.add({lm, ln}, w * e1 * e2 * p, w * e1 * e2 * rho);
                    acc.add({lm}, w * e1 * (1 - e2) * p, w * e1 * (1 - e2) * rho);
                    acc.add({ln}, w * (1 - e1) * e2 * p, w * (1 - e1) * e2 * rho);
                    acc.add({}, w * (1 - e1) * (1 - e2) * p,
                            w * (1 - e1) * (1 - e2) * rho);
                } else {
                    double p_two = e1 * e1, p_one = 2 * e1 * (1 - e1);
                    if (detection.number_resolving)
                        acc.add({lm, lm}, w * p_two * p, w * p_two * rho);
                    else
                        acc.add({lm}, w * p_two * p, w * p_two * rho);
                    acc.add({lm}, w * p_one * p, w * p_one * rho);
                    acc.add({}, w * (1 - e1) * (1 - e1) * p,
                            w * (1 - e1) * (1 - e1) * rho);
                }
            }
        }
    }

    // --- exactly one photon lost in its input arm ---
    for (int lost_arm : {0, 1}) {
        double w = lost_arm == 0 ? (1 - tA) * tB : tA * (1 - tB);
        if (w == 0.0) continue;
        for (int pol = 0; pol < 2; ++pol) {
            for (int t = 0; t < 2; ++t) {
                int l = mode_index(lost_arm, pol, t);
                // a_l applied to the pair state leaves one photon behind.
                Vector u0 = 2.0 * state.coeff[0].row(l).transpose();
                Vector u1 = 2.0 * state.coeff[1].row(l).transpose();
                if (u0.squaredNorm() + u1.squaredNorm() < 1e-30) continue;
                u0 = network.total_unitary * u0;
                u1 = network.total_unitary * u1;
                for (int m = 0; m < kNumModes; ++m) {
                    Eigen::Vector2cd amp(u0(m), u1(m));
                    double p = amp.squaredNorm();
                    if (p < 1e-30) continue;
                    int d = network.detector_of(m / 4, (m / 2) % 2);
                    double e = d > 0 ? detection.efficiency[d - 1] : 0.0;
                    Eigen::Matrix2cd rho = outer2(amp);
                    if (d > 0) acc.add({d}, w * e * p, w * e * rho);
                    acc.add({}, w * (1 - e) * p, w * (1 - e) * rho);
                }
            }
        }
    }

    // --- both photons lost ---
    {
        double w = (1 - tA) * (1 - tB);
        if (w > 0.0) acc.add({}, w, w * zero2);
    }

    std::vector<PatternResult> results;
    for (auto& [pattern, entry] : acc.table) {
        PatternResult r;
        r.pattern = pattern;
        r.probability = entry.first;
        r.atom_state = entry.second;
        r.outcome = classify(pattern);
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace bsm
}  // namespace qteleport

#ifndef QTELEPORT_HILBERT_HPP
#define QTELEPORT_HILBERT_HPP

#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qteleport {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Ordered tensor product of named finite-dimensional factors.
class HilbertSpace {
public:
    struct Factor {
        std::string name;
        int dim;
    };

    HilbertSpace() = default;
    explicit HilbertSpace(std::vector<Factor> factors);

    int dim() const { return dim_; }
    const std::vector<Factor>& factors() const { return factors_; }
    int factor_index(const std::string& name) const;
    bool has_factor(const std::string& name) const;

    // Flat index of a basis ket given one level index per factor
    // (first factor varies slowest).
    int flat_index(const std::vector<int>& levels) const;
    std::vector<int> unpack(int flat) const;

    bool operator==(const HilbertSpace& other) const;
    bool operator!=(const HilbertSpace& other) const { return !(*this == other); }

private:
    std::vector<Factor> factors_;
    int dim_ = 1;
};

HilbertSpace compose(const std::vector<HilbertSpace>& spaces);

class StateVector {
public:
    StateVector() = default;
    StateVector(HilbertSpace space, Vector amplitudes);

    static StateVector basis_state(const HilbertSpace& space, int flat);

    const HilbertSpace& space() const { return space_; }
    const Vector& amplitudes() const { return amps_; }
    Vector& amplitudes() { return amps_; }

    double norm() const { return amps_.norm(); }
    bool is_normalized(double tol = 1e-12) const;
    StateVector normalized() const;

    Complex inner(const StateVector& other) const;

private:
    HilbertSpace space_;
    Vector amps_;
};

class Operator {
public:
    Operator() = default;
    Operator(HilbertSpace space, Matrix mat);

    static Operator identity(const HilbertSpace& space);
    // Embed a factor-local matrix into the composite space.
    static Operator lift(const HilbertSpace& space, const std::string& factor,
                         const Matrix& local);

    const HilbertSpace& space() const { return space_; }
    const Matrix& matrix() const { return mat_; }
    Matrix& matrix() { return mat_; }

    bool is_hermitian(double tol = 1e-12) const;
    Operator dagger() const;

    Operator operator*(const Operator& rhs) const;
    Operator operator+(const Operator& rhs) const;
    Operator operator-(const Operator& rhs) const;
    Operator operator*(Complex scalar) const;

private:
    HilbertSpace space_;
    Matrix mat_;
};

class DensityOperator {
public:
    DensityOperator() = default;
    DensityOperator(HilbertSpace space, Matrix mat);

    static DensityOperator pure(const StateVector& psi);

    const HilbertSpace& space() const { return space_; }
    const Matrix& matrix() const { return mat_; }

    double trace_real() const { return mat_.trace().real(); }
    // Square-root (amplitude) fidelity to a pure target state.
    double fidelity_to(const StateVector& target) const;

private:
    HilbertSpace space_;
    Matrix mat_;
};

StateVector apply(const Operator& op, const StateVector& psi);

struct MeasurementResult {
    int outcome;
    StateVector collapsed;
    double probability;
};

MeasurementResult measure_projective(const StateVector& psi,
                                     const std::vector<Operator>& projectors,
                                     std::mt19937_64& rng);

DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<std::string>& keep);

}  // namespace qteleport

#endif

#include "qteleport/hilbert.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace qteleport {

HilbertSpace::HilbertSpace(std::vector<Factor> factors)
    : factors_(std::move(factors)) {
    if (factors_.empty())
        throw std::invalid_argument("HilbertSpace: no factors");
    std::set<std::string> names;
    dim_ = 1;
    for (const auto& f : factors_) {
        if (f.dim < 1)
            throw std::invalid_argument("HilbertSpace: factor dimension < 1");
        if (!names.insert(f.name).second)
            throw std::invalid_argument("HilbertSpace: duplicate factor name '" + f.name + "'");
        dim_ *= f.dim;
    }
}

int HilbertSpace::factor_index(const std::string& name) const {
    for (size_t i = 0; i < factors_.size(); ++i)
        if (factors_[i].name == name) return static_cast<int>(i);
    throw std::invalid_argument("HilbertSpace: unknown factor '" + name + "'");
}

bool HilbertSpace::has_factor(const std::string& name) const {
    return std::any_of(factors_.begin(), factors_.end(),
                       [&](const Factor& f) { return f.name == name; });
}

int HilbertSpace::flat_index(const std::vector<int>& levels) const {
    if (levels.size() != factors_.size())
        throw std::invalid_argument("flat_index: level count mismatch");
    int idx = 0;
    for (size_t i = 0; i < factors_.size(); ++i) {
        if (levels[i] < 0 || levels[i] >= factors_[i].dim)
            throw std::out_of_range("flat_index: level out of range");
        idx = idx * factors_[i].dim + levels[i];
    }
    return idx;
}

std::vector<int> HilbertSpace::unpack(int flat) const {
    std::vector<int> levels(factors_.size());
    for (int i = static_cast<int>(factors_.size()) - 1; i >= 0; --i) {
        levels[i] = flat % factors_[i].dim;
        flat /= factors_[i].dim;
    }
    return levels;
}

bool HilbertSpace::operator==(const HilbertSpace& other) const {
    if (factors_.size() != other.factors_.size()) return false;
    for (size_t i = 0; i < factors_.size(); ++i)
        if (factors_[i].name != other.factors_[i].name ||
            factors_[i].dim != other.factors_[i].dim)
            return false;
    return true;
}

HilbertSpace compose(const std::vector<HilbertSpace>& spaces) {
    if (spaces.empty())
        throw std::invalid_argument("compose: empty list");
    std::vector<HilbertSpace::Factor> factors;
    for (const auto& s : spaces)
        for (const auto& f : s.factors())
            factors.push_back(f);
    return HilbertSpace(std::move(factors));
}

StateVector::StateVector(HilbertSpace space, Vector amplitudes)
    : space_(std::move(space)), amps_(std::move(amplitudes)) {
    if (amps_.size() != space_.dim())
        throw std::invalid_argument("StateVector: amplitude length != space dimension");
}

StateVector StateVector::basis_state(const HilbertSpace& space, int flat) {
    Vector v = Vector::Zero(space.dim());
    v(flat) = 1.0;
    return StateVector(space, std::move(v));
}

bool StateVector::is_normalized(double tol) const {
    return std::abs(amps_.squaredNorm() - 1.0) <= tol;
}

StateVector StateVector::normalized() const {
    double n = amps_.norm();
    if (n < 1e-300)
        throw std::runtime_error("StateVector: cannot normalize zero vector");
    return StateVector(space_, amps_ / n);
}

Complex StateVector::inner(const StateVector& other) const {
    if (space_ != other.space_)
        throw std::invalid_argument("inner: space mismatch");
    return amps_.dot(other.amps_);
}

Operator::Operator(HilbertSpace space, Matrix mat)
    : space_(std::move(space)), mat_(std::move(mat)) {
    if (mat_.rows() != space_.dim() || mat_.cols() != space_.dim())
        throw std::invalid_argument("Operator: matrix shape != space dimension");
}

Operator Operator::identity(const HilbertSpace& space) {
    return Operator(space, Matrix::Identity(space.dim(), space.dim()));
}

Operator Operator::lift(const HilbertSpace& space, const std::string& factor,
                        const Matrix& local) {
    int fi = space.factor_index(factor);
    int d = space.factors()[fi].dim;
    if (local.rows() != d || local.cols() != d)
        throw std::invalid_argument("lift: local matrix does not match factor dimension");

    int left = 1, right = 1;
    for (int i = 0; i < fi; ++i) left *= space.factors()[i].dim;
    for (size_t i = fi + 1; i < space.factors().size(); ++i)
        right *= space.factors()[i].dim;

    Matrix out = Matrix::Zero(space.dim(), space.dim());
    for (int l = 0; l < left; ++l)
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                if (local(a, b) == Complex(0, 0)) continue;
                for (int r = 0; r < right; ++r) {
                    int row = (l * d + a) * right + r;
                    int col = (l * d + b) * right + r;
                    out(row, col) = local(a, b);
                }
            }
    return Operator(space, std::move(out));
}

bool Operator::is_hermitian(double tol) const {
    return (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Operator Operator::dagger() const { return Operator(space_, mat_.adjoint()); }

Operator Operator::operator*(const Operator& rhs) const {
    if (space_ != rhs.space_)
        throw std::invalid_argument("Operator*: space mismatch");
    return Operator(space_, mat_ * rhs.mat_);
}

Operator Operator::operator+(const Operator& rhs) const {
    if (space_ != rhs.space_)
        throw std::invalid_argument("Operator+: space mismatch");
    return Operator(space_, mat_ + rhs.mat_);
}

Operator Operator::operator-(const Operator& rhs) const {
    if (space_ != rhs.space_)
        throw std::invalid_argument("Operator-: space mismatch");
    return Operator(space_, mat_ - rhs.mat_);
}

Operator Operator::operator*(Complex scalar) const {
    return Operator(space_, mat_ * scalar);
}

DensityOperator::DensityOperator(HilbertSpace space, Matrix mat)
    : space_(std::move(space)), mat_(std::move(mat)) {
    if (mat_.rows() != space_.dim() || mat_.cols() != space_.dim())
        throw std::invalid_argument("DensityOperator: matrix shape != space dimension");
}

DensityOperator DensityOperator::pure(const StateVector& psi) {
    return DensityOperator(psi.space(),
                           psi.amplitudes() * psi.amplitudes().adjoint());
}

double DensityOperator::fidelity_to(const StateVector& target) const {
    if (space_ != target.space())
        throw std::invalid_argument("fidelity_to: space mismatch");
    Complex p = target.amplitudes().dot(mat_ * target.amplitudes());
    return std::sqrt(std::max(0.0, p.real()));
}

StateVector apply(const Operator& op, const StateVector& psi) {
    if (op.space() != psi.space())
        throw std::invalid_argument("apply: space mismatch");
    return StateVector(psi.space(), op.matrix() * psi.amplitudes());
}

MeasurementResult measure_projective(const StateVector& psi,
                                     const std::vector<Operator>& projectors,
                                     std::mt19937_64& rng) {
    if (projectors.empty())
        throw std::invalid_argument("measure_projective: no projectors");
    Matrix sum = Matrix::Zero(psi.space().dim(), psi.space().dim());
    for (const auto& p : projectors) {
        if (p.space() != psi.space())
            throw std::invalid_argument("measure_projective: projector space mismatch");
        sum += p.matrix();
    }
    if ((sum - Matrix::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("measure_projective: projectors do not resolve identity");

    std::vector<double> probs(projectors.size());
    std::vector<Vector> branches(projectors.size());
    for (size_t k = 0; k < projectors.size(); ++k) {
        branches[k] = projectors[k].matrix() * psi.amplitudes();
        probs[k] = branches[k].squaredNorm();
    }
    std::discrete_distribution<int> dist(probs.begin(), probs.end());
    int outcome = dist(rng);
    Vector collapsed = branches[outcome] / std::sqrt(probs[outcome]);
    return {outcome, StateVector(psi.space(), std::move(collapsed)), probs[outcome]};
}

DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<std::string>& keep) {
    const HilbertSpace& sp = rho.space();
    std::vector<bool> kept(sp.factors().size(), false);
    for (const auto& name : keep)
        kept[sp.factor_index(name)] = true;

    std::vector<HilbertSpace::Factor> keep_factors;
    for (size_t i = 0; i < sp.factors().size(); ++i)
        if (kept[i]) keep_factors.push_back(sp.factors()[i]);
    if (keep_factors.empty())
        throw std::invalid_argument("partial_trace: must keep at least one factor");
    HilbertSpace out_space(keep_factors);

    int n = sp.dim();
    Matrix out = Matrix::Zero(out_space.dim(), out_space.dim());
    // Precompute kept-part flat index and traced-part flat index per basis state.
    std::vector<int> kept_idx(n), traced_idx(n);
    for (int i = 0; i < n; ++i) {
        auto levels = sp.unpack(i);
        int ki = 0, ti = 0;
        for (size_t f = 0; f < levels.size(); ++f) {
            if (kept[f])
                ki = ki * sp.factors()[f].dim + levels[f];
            else
                ti = ti * sp.factors()[f].dim + levels[f];
        }
        kept_idx[i] = ki;
        traced_idx[i] = ti;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (traced_idx[i] == traced_idx[j])
                out(kept_idx[i], kept_idx[j]) += rho.matrix()(i, j);
    return DensityOperator(std::move(out_space), std::move(out));
}

}  // namespace qteleport

#include "qom/fock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace qom {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vector kron(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

std::vector<Index> concat_dims(const std::vector<Index>& a, const std::vector<Index>& b) {
    std::vector<Index> dims = a;
    dims.insert(dims.end(), b.begin(), b.end());
    return dims;
}

void require_cutoff(Index cutoff) {
    if (cutoff < 1) throw InvalidDimensionError("mode cutoff must be >= 1");
}

} // namespace

void SystemParams::validate() const {
    if (!(mech_freq > 0.0) || !std::isfinite(mech_freq))
        throw NumericDomainError("mech_freq must be positive and finite");
    if (cav_freq < 0.0 || !std::isfinite(cav_freq))
        throw NumericDomainError("cav_freq must be >= 0 and finite");
    if (coupling < 0.0 || !std::isfinite(coupling))
        throw NumericDomainError("coupling must be >= 0 and finite");
    if (photon_cutoff < 1 || phonon_cutoff < 1)
        throw InvalidDimensionError("cutoffs must be >= 1");
}

StateSpec StateSpec::fock(long n) {
    if (n < 0) throw NumericDomainError("fock index must be >= 0");
    StateSpec s;
    s.kind = Kind::Fock;
    s.fock_n = n;
    return s;
}

StateSpec StateSpec::coherent(Complex alpha) {
    StateSpec s;
    s.kind = Kind::Coherent;
    s.alpha = alpha;
    return s;
}

StateSpec StateSpec::thermal(double nbar) {
    if (nbar < 0.0 || !std::isfinite(nbar)) throw NumericDomainError("thermal nbar must be >= 0");
    StateSpec s;
    s.kind = Kind::Thermal;
    s.nbar = nbar;
    return s;
}

StateSpec StateSpec::squeezed_vacuum(double r) {
    if (!std::isfinite(r)) throw NumericDomainError("squeeze parameter must be finite");
    StateSpec s;
    s.kind = Kind::SqueezedVacuum;
    s.squeeze_r = r;
    return s;
}

double StateSpec::mean_occupation() const {
    switch (kind) {
        case Kind::Fock: return static_cast<double>(fock_n);
        case Kind::Coherent: return std::norm(alpha);
        case Kind::Thermal: return nbar;
        case Kind::SqueezedVacuum: {
            const double s = std::sinh(squeeze_r);
            return s * s;
        }
    }
    return 0.0;
}

QuantumState::QuantumState(std::variant<Vector, Matrix> repr, std::vector<Index> dims)
    : repr_(std::move(repr)), dims_(std::move(dims)) {}

QuantumState QuantumState::pure(Vector psi, std::vector<Index> dims) {
    Index total = 1;
    for (Index d : dims) total *= d;
    if (psi.size() != total) throw InvalidDimensionError("state vector does not match dims");
    return QuantumState(std::move(psi), std::move(dims));
}

QuantumState QuantumState::density(Matrix rho, std::vector<Index> dims) {
    Index total = 1;
    for (Index d : dims) total *= d;
    if (rho.rows() != total || rho.cols() != total)
        throw InvalidDimensionError("density matrix does not match dims");
    return QuantumState(std::move(rho), std::move(dims));
}

const Vector& QuantumState::vec() const {
    if (!is_pure()) throw Error("state is not pure");
    return std::get<Vector>(repr_);
}

const Matrix& QuantumState::dm() const {
    if (is_pure()) throw Error("state is pure; use density_matrix() to materialize");
    return std::get<Matrix>(repr_);
}

Matrix QuantumState::density_matrix() const {
    if (is_pure()) {
        const Vector& v = vec();
        return v * v.adjoint();
    }
    return dm();
}

Index QuantumState::dim() const {
    Index total = 1;
    for (Index d : dims_) total *= d;
    return total;
}

double QuantumState::purity() const {
    if (is_pure()) return 1.0;
    return dm().squaredNorm();
}

Complex QuantumState::expectation(const Matrix& op) const {
    if (op.rows() != dim() || op.cols() != dim())
        throw InvalidDimensionError("operator does not match state dimension");
    if (is_pure()) return vec().dot(op * vec());
    return (op.transpose().cwiseProduct(dm())).sum();
}

Eigen::VectorXd QuantumState::number_populations() const {
    if (is_pure()) return vec().cwiseAbs2();
    return dm().diagonal().real();
}

void QuantumState::validate() const {
    if (is_pure()) {
        const double n2 = vec().squaredNorm();
        if (std::abs(n2 - 1.0) > 1e-10) {
            std::ostringstream os;
            os << "pure state norm^2 deviates from 1 by " << std::abs(n2 - 1.0);
            throw NumericDomainError(os.str());
        }
        return;
    }
    const Matrix& rho = dm();
    const double herm_dev = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm_dev > 1e-12) throw NumericDomainError("density matrix not Hermitian within 1e-12");
    const double tr_dev = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
    if (tr_dev > 1e-10) throw NumericDomainError("density matrix trace deviates from 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw NumericDomainError("density matrix has eigenvalue below -1e-10");
}

Index recommended_cutoff(double mean_occupation) {
    const double mu = std::max(0.0, mean_occupation);
    return static_cast<Index>(std::ceil(mu + 8.0 * std::sqrt(mu) + 10.0));
}

DenseOperator make_annihilation(Index cutoff) {
    require_cutoff(cutoff);
    Matrix a = Matrix::Zero(cutoff, cutoff);
    for (Index n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return DenseOperator{std::move(a), {cutoff}};
}

DenseOperator make_creation(Index cutoff) {
    DenseOperator a = make_annihilation(cutoff);
    a.mat.adjointInPlace();
    return a;
}

DenseOperator make_number(Index cutoff) {
    require_cutoff(cutoff);
    Matrix n = Matrix::Zero(cutoff, cutoff);
    for (Index k = 0; k < cutoff; ++k) n(k, k) = static_cast<double>(k);
    return DenseOperator{std::move(n), {cutoff}};
}

DenseOperator make_position(Index cutoff) {
    DenseOperator a = make_annihilation(cutoff);
    Matrix x = a.mat + a.mat.adjoint();
    return DenseOperator{std::move(x), {cutoff}};
}

DenseOperator make_momentum(Index cutoff) {
    DenseOperator a = make_annihilation(cutoff);
    Matrix p = Complex(0.0, 1.0) * (a.mat.adjoint() - a.mat);
    return DenseOperator{std::move(p), {cutoff}};
}

DenseOperator make_identity(Index cutoff) {
    require_cutoff(cutoff);
    return DenseOperator{Matrix::Identity(cutoff, cutoff), {cutoff}};
}

namespace {

// Smallest cutoff that captures mass >= 1 - 1e-6 for the spec, found by
// extending the occupation series. The distribution is renormalized over a
// 1e-12 tail, so a 1e-9 slack keeps the reported cutoff sufficient for the
// raw (unnormalized) masses the constructors check.
Index required_cutoff_for(const StateSpec& spec) {
    const std::vector<double> p = number_distribution(spec, 1e-12);
    double mass = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        mass += p[n];
        if (mass >= 1.0 - 1e-6 + 1e-9) return static_cast<Index>(n + 1);
    }
    return static_cast<Index>(p.size());
}

[[noreturn]] void throw_truncation(const StateSpec& spec, Index cutoff, double captured) {
    const Index needed = std::max(required_cutoff_for(spec), recommended_cutoff(spec.mean_occupation()));
    std::ostringstream os;
    os << "cutoff " << cutoff << " captures only " << captured
       << " of the state mass (need >= 1 - 1e-6); use cutoff >= " << needed;
    throw TruncationError(os.str(), needed);
}

} // namespace

QuantumState make_state(const StateSpec& spec, Index cutoff) {
    require_cutoff(cutoff);
    switch (spec.kind) {
        case StateSpec::Kind::Fock: {
            if (spec.fock_n >= cutoff) throw_truncation(spec, cutoff, 0.0);
            Vector v = Vector::Zero(cutoff);
            v(spec.fock_n) = 1.0;
            return QuantumState::pure(std::move(v), {cutoff});
        }
        case StateSpec::Kind::Coherent: {
            Vector v(cutoff);
            // c_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!), built recursively.
            v(0) = std::exp(-0.5 * std::norm(spec.alpha));
            for (Index n = 1; n < cutoff; ++n)
                v(n) = v(n - 1) * spec.alpha / std::sqrt(static_cast<double>(n));
            const double captured = v.squaredNorm();
            if (captured < 1.0 - 1e-6) throw_truncation(spec, cutoff, captured);
            v /= std::sqrt(captured);
            return QuantumState::pure(std::move(v), {cutoff});
        }
        case StateSpec::Kind::Thermal: {
            if (spec.nbar == 0.0) {
                Matrix rho = Matrix::Zero(cutoff, cutoff);
                rho(0, 0) = 1.0;
                return QuantumState::density(std::move(rho), {cutoff});
            }
            const double z = spec.nbar / (spec.nbar + 1.0);
            Eigen::VectorXd p(cutoff);
            p(0) = 1.0 / (spec.nbar + 1.0);
            for (Index n = 1; n < cutoff; ++n) p(n) = p(n - 1) * z;
            const double captured = p.sum();
            if (captured < 1.0 - 1e-6) throw_truncation(spec, cutoff, captured);
            Matrix rho = Matrix::Zero(cutoff, cutoff);
            rho.diagonal() = (p / captured).cast<Complex>();
            return QuantumState::density(std::move(rho), {cutoff});
        }
        case StateSpec::Kind::SqueezedVacuum: {
            // Analytic even-Fock series of exp(r((b†)² - b²)/2)|0>:
            // c_{2k} = tanh(r)^k sqrt((2k)!) / (2^k k! sqrt(cosh r)).
            const double th = std::tanh(spec.squeeze_r);
            Vector v = Vector::Zero(cutoff);
            double c = 1.0 / std::sqrt(std::cosh(spec.squeeze_r));
            v(0) = c;
            for (Index k = 1; 2 * k < cutoff; ++k) {
                const double kk = static_cast<double>(k);
                c *= th * std::sqrt((2.0 * kk - 1.0) / (2.0 * kk));
                v(2 * k) = c;
            }
            const double captured = v.squaredNorm();
            if (captured < 1.0 - 1e-6) throw_truncation(spec, cutoff, captured);
            v /= std::sqrt(captured);
            return QuantumState::pure(std::move(v), {cutoff});
        }
    }
    throw Error("unknown state kind");
}

std::vector<double> number_distribution(const StateSpec& spec, double mass_tol) {
    std::vector<double> p;
    switch (spec.kind) {
        case StateSpec::Kind::Fock:
            p.assign(static_cast<std::size_t>(spec.fock_n) + 1, 0.0);
            p.back() = 1.0;
            return p;
        case StateSpec::Kind::Coherent: {
            const double mu = std::norm(spec.alpha);
            if (mu == 0.0) return {1.0};
            double term = std::exp(-mu);
            double mass = 0.0;
            long n = 0;
            while (mass < 1.0 - mass_tol) {
                p.push_back(term);
                mass += term;
                ++n;
                term *= mu / static_cast<double>(n);
                if (n > 100000000) throw ConvergenceError("coherent tail failed to close", n);
            }
            break;
        }
        case StateSpec::Kind::Thermal: {
            if (spec.nbar == 0.0) return {1.0};
            const double z = spec.nbar / (spec.nbar + 1.0);
            double term = 1.0 / (spec.nbar + 1.0);
            double mass = 0.0;
            while (mass < 1.0 - mass_tol) {
                p.push_back(term);
                mass += term;
                term *= z;
            }
            break;
        }
        case StateSpec::Kind::SqueezedVacuum: {
            if (spec.squeeze_r == 0.0) return {1.0};
            const double t2 = std::tanh(spec.squeeze_r) * std::tanh(spec.squeeze_r);
            double term = 1.0 / std::cosh(spec.squeeze_r);
            double mass = 0.0;
            long k = 0;
            while (mass < 1.0 - mass_tol) {
                p.push_back(term);
                p.push_back(0.0);
                mass += term;
                const double kk = static_cast<double>(k);
                term *= t2 * (2.0 * kk + 1.0) / (2.0 * kk + 2.0);
                ++k;
            }
            p.pop_back();
            break;
        }
    }
    const double total = pairwise_sum(p);
    for (double& x : p) x /= total;
    return p;
}

DenseOperator tensor(const DenseOperator& a, const DenseOperator& b) {
    return DenseOperator{kron(a.mat, b.mat), concat_dims(a.dims, b.dims)};
}

QuantumState tensor(const QuantumState& a, const QuantumState& b) {
    const std::vector<Index> dims = concat_dims(a.dims(), b.dims());
    if (a.is_pure() && b.is_pure()) return QuantumState::pure(kron(a.vec(), b.vec()), dims);
    return QuantumState::density(kron(a.density_matrix(), b.density_matrix()), dims);
}

namespace {

// Padé approximants of the matrix exponential (Higham 2005 coefficients).
void pade3(const Matrix& a, Matrix& u, Matrix& v) {
    static const double b[] = {120., 60., 12., 1.};
    const Matrix a2 = a * a;
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    u.noalias() = a * (b[3] * a2 + b[1] * id);
    v = b[2] * a2 + b[0] * id;
}

void pade5(const Matrix& a, Matrix& u, Matrix& v) {
    static const double b[] = {30240., 15120., 3360., 420., 30., 1.};
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    u.noalias() = a * (b[5] * a4 + b[3] * a2 + b[1] * id);
    v = b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade7(const Matrix& a, Matrix& u, Matrix& v) {
    static const double b[] = {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.};
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    u.noalias() = a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade9(const Matrix& a, Matrix& u, Matrix& v) {
    static const double b[] = {17643225600., 8821612800., 2075673600., 302702400., 30270240.,
                               2162160.,     110880.,     3960.,       90.,        1.};
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const Matrix a8 = a6 * a2;
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    u.noalias() = a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    v = b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade13(const Matrix& a, Matrix& u, Matrix& v) {
    static const double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                               1187353796428800.,  129060195264000.,   10559470521600.,
                               670442572800.,      33522128640.,       1323241920.,
                               40840800.,          960960.,            16380.,
                               182.,               1.};
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a4 * a2;
    const Matrix id = Matrix::Identity(a.rows(), a.cols());
    Matrix tmp = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
    tmp += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
    u.noalias() = a * tmp;
    v.noalias() = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
    v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

} // namespace

Matrix matrix_exponential(const Matrix& h, Complex scale) {
    if (h.rows() != h.cols()) throw InvalidDimensionError("matrix exponential needs a square matrix");
    Matrix a = scale * h;
    if (!a.allFinite()) throw NumericDomainError("matrix exponential of non-finite matrix");

    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    Matrix u, v;
    int squarings = 0;
    if (norm1 < 1.495585217958292e-2) {
        pade3(a, u, v);
    } else if (norm1 < 2.539398330063230e-1) {
        pade5(a, u, v);
    } else if (norm1 < 9.504178996162932e-1) {
        pade7(a, u, v);
    } else if (norm1 < 2.097847961257068e0) {
        pade9(a, u, v);
    } else {
        const double max_norm = 5.371920351148152;
        squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm1 / max_norm))));
        a *= std::pow(2.0, -squarings);
        pade13(a, u, v);
    }
    Matrix numer = v + u;
    Matrix denom = v - u;
    Matrix result = denom.partialPivLu().solve(numer);
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

DenseOperator matrix_exponential(const DenseOperator& h, Complex scale) {
    return DenseOperator{matrix_exponential(h.mat, scale), h.dims};
}

QuantumState partial_trace(const QuantumState& joint, std::size_t keep) {
    const std::vector<Index>& dims = joint.dims();
    if (dims.size() != 2) throw InvalidDimensionError("partial_trace supports two-mode states");
    if (keep > 1) throw IndexError("keep index out of range for a two-mode state");
    const Index da = dims[0];
    const Index db = dims[1];

    if (joint.is_pure()) {
        // psi[a*db + b] viewed as a da x db matrix.
        Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
            m(joint.vec().data(), da, db);
        if (keep == 0) {
            Matrix rho = m * m.adjoint();
            return QuantumState::density(std::move(rho), {da});
        }
        Matrix rho = (m.adjoint() * m).conjugate();
        return QuantumState::density(std::move(rho), {db});
    }

    const Matrix& rho = joint.dm();
    if (keep == 0) {
        Matrix out = Matrix::Zero(da, da);
        for (Index a = 0; a < da; ++a)
            for (Index a2 = 0; a2 < da; ++a2)
                for (Index b = 0; b < db; ++b) out(a, a2) += rho(a * db + b, a2 * db + b);
        return QuantumState::density(std::move(out), {da});
    }
    Matrix out = Matrix::Zero(db, db);
    for (Index a = 0; a < da; ++a) out += rho.block(a * db, a * db, db, db);
    return QuantumState::density(std::move(out), {db});
}

namespace {

template <typename T>
T pairwise_sum_impl(const T* data, std::size_t n) {
    if (n <= 16) {
        T acc{};
        for (std::size_t i = 0; i < n; ++i) acc += data[i];
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum_impl(data, half) + pairwise_sum_impl(data + half, n - half);
}

} // namespace

double pairwise_sum(const double* data, std::size_t n) { return pairwise_sum_impl(data, n); }
double pairwise_sum(const std::vector<double>& v) { return pairwise_sum_impl(v.data(), v.size()); }
Complex pairwise_sum(const Complex* data, std::size_t n) { return pairwise_sum_impl(data, n); }
Complex pairwise_sum(const std::vector<Complex>& v) { return pairwise_sum_impl(v.data(), v.size()); }

} // namespace qom

#ifndef QOM_FOCK_HPP
#define QOM_FOCK_HPP

#include <complex>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qom/errors.hpp"

namespace qom {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// System parameters of the quadratic-coupling model
///   H = cav_freq a†a + mech_freq b†b + coupling (a†a + 1/2)(b + b†)².
/// All frequencies are in units of the mechanical frequency (mech_freq = 1
/// convention); times are in units of 1/mech_freq.
struct SystemParams {
    double mech_freq = 1.0;
    double cav_freq = 0.0;
    double coupling = 0.0;
    Index photon_cutoff = 1;
    Index phonon_cutoff = 1;

    void validate() const;
};

/// Declarative description of a single-mode state.
struct StateSpec {
    enum class Kind { Fock, Coherent, Thermal, SqueezedVacuum };

    Kind kind = Kind::Fock;
    long fock_n = 0;
    Complex alpha{0.0, 0.0};
    double nbar = 0.0;
    double squeeze_r = 0.0;

    static StateSpec fock(long n);
    static StateSpec coherent(Complex alpha);
    static StateSpec thermal(double nbar);
    static StateSpec squeezed_vacuum(double r);

    /// Mean occupation number of the described state.
    double mean_occupation() const;
};

/// Complex matrix over a declared product of truncated modes.
struct DenseOperator {
    Matrix mat;
    std::vector<Index> dims;

    Index dim() const { return mat.rows(); }
};

/// Pure amplitude vector or density matrix over a product of truncated modes.
class QuantumState {
public:
    static QuantumState pure(Vector psi, std::vector<Index> dims);
    static QuantumState density(Matrix rho, std::vector<Index> dims);

    bool is_pure() const { return std::holds_alternative<Vector>(repr_); }
    const Vector& vec() const;
    const Matrix& dm() const;
    /// Density matrix view; materializes |psi><psi| for pure states.
    Matrix density_matrix() const;

    const std::vector<Index>& dims() const { return dims_; }
    Index dim() const;

    double purity() const;
    /// <op> in this state; op must match the full dimension.
    Complex expectation(const Matrix& op) const;
    /// Occupation probabilities in the number basis (diagonal of the state).
    Eigen::VectorXd number_populations() const;

    /// Checks normalization, Hermiticity, trace and spectral floor.
    void validate() const;

private:
    QuantumState(std::variant<Vector, Matrix> repr, std::vector<Index> dims);

    std::variant<Vector, Matrix> repr_;
    std::vector<Index> dims_;
};

/// Cutoff recommendation for a state of mean occupation mu:
/// ceil(mu + 8 sqrt(mu) + 10), which keeps Poisson/thermal tails below 1e-6.
Index recommended_cutoff(double mean_occupation);

DenseOperator make_annihilation(Index cutoff);
DenseOperator make_creation(Index cutoff);
DenseOperator make_number(Index cutoff);
/// x = b + b†
DenseOperator make_position(Index cutoff);
/// p = i(b† - b)
DenseOperator make_momentum(Index cutoff);
DenseOperator make_identity(Index cutoff);

/// Builds the described state at the given cutoff. Throws TruncationError
/// (naming the recommended cutoff) if less than 1 - 1e-6 of the state's mass
/// is representable; the returned state is renormalized.
QuantumState make_state(const StateSpec& spec, Index cutoff);

/// Occupation-number distribution of the described state, truncated once the
/// cumulative mass reaches 1 - mass_tol and renormalized.
std::vector<double> number_distribution(const StateSpec& spec, double mass_tol = 1e-10);

DenseOperator tensor(const DenseOperator& a, const DenseOperator& b);
QuantumState tensor(const QuantumState& a, const QuantumState& b);

/// exp(scale * h) by Padé scaling-and-squaring.
Matrix matrix_exponential(const Matrix& h, Complex scale = Complex(1.0, 0.0));
DenseOperator matrix_exponential(const DenseOperator& h, Complex scale);

/// Reduced state of mode `keep` of a two-mode product state.
QuantumState partial_trace(const QuantumState& joint, std::size_t keep);

/// Pairwise (cascade) summation; deterministic and accurate for long sums.
double pairwise_sum(const double* data, std::size_t n);
double pairwise_sum(const std::vector<double>& v);
Complex pairwise_sum(const Complex* data, std::size_t n);
Complex pairwise_sum(const std::vector<Complex>& v);

} // namespace qom

#endif // QOM_FOCK_HPP

// Dense complex matrix algebra: Kronecker products, partial trace,
// Hermitian eigendecomposition and eigendecomposition-based propagators.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace colmod {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx I_UNIT{0.0, 1.0};

// Fixed numerical tolerances; Tolerances{} carries the defaults and callers may
// pass an adjusted copy.
struct Tolerances {
    double hermiticity = 1e-10;
    double unitarity = 1e-10;
    double reconstruction = 1e-10;
};

struct EigenDecomposition {
    RealVector eigenvalues;      // ascending
    ComplexMatrix eigenvectors;  // column k is the k-th eigenstate

    std::size_t dim() const { return static_cast<std::size_t>(eigenvalues.size()); }
    ComplexVector state(std::size_t k) const { return eigenvectors.col(static_cast<Eigen::Index>(k)); }
};

namespace ops {

ComplexMatrix identity(std::size_t dim);
ComplexMatrix sigma_x();
ComplexMatrix sigma_y();
ComplexMatrix sigma_z();
ComplexMatrix sigma_plus();   // |0><1| = |up><down|
ComplexMatrix sigma_minus();  // |1><0| = |down><up|

// |i><j| in a dim-dimensional space.
ComplexMatrix basis_op(std::size_t dim, std::size_t i, std::size_t j);

// `op` acting on qubit `site` of an n-qubit register, qubit 0 being the slowest index.
ComplexMatrix on_site(const ComplexMatrix& op, std::size_t site, std::size_t n_qubits);

// Product of single-qubit operators on distinct sites, identity elsewhere.
ComplexMatrix on_sites(const ComplexMatrix& op_a, std::size_t site_a, const ComplexMatrix& op_b,
                       std::size_t site_b, std::size_t n_qubits);

}  // namespace ops

void require_square(const ComplexMatrix& m, const char* who);
bool is_hermitian(const ComplexMatrix& m, double tol = Tolerances{}.hermiticity);
double frobenius(const ComplexMatrix& m);

/// Kronecker product; the left factor carries the slow index.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron_all(std::span<const ComplexMatrix> factors);

/// Reduced matrix over the subsystems listed in `keep` (output ordered by
/// ascending subsystem index). Throws std::invalid_argument on dimension mismatch.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);

/// Hermitian eigendecomposition, eigenvalues ascending.
EigenDecomposition eig_hermitian(const ComplexMatrix& h, const Tolerances& tol = {});

/// exp(-i h t) via the eigendecomposition of h.
ComplexMatrix propagator(const ComplexMatrix& h, double t, const Tolerances& tol = {});
ComplexMatrix propagator(const EigenDecomposition& eig, double t);

/// U f(D) U† for a real function applied to the spectrum.
template <typename F>
ComplexMatrix spectral_map(const EigenDecomposition& eig, F&& f) {
    const auto n = eig.eigenvalues.size();
    ComplexVector d(n);
    for (Eigen::Index k = 0; k < n; ++k) d(k) = f(eig.eigenvalues(k));
    return eig.eigenvectors * d.asDiagonal() * eig.eigenvectors.adjoint();
}

}  // namespace colmod

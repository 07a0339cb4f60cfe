// Energy-eigenbasis transition machinery and the steady-state
// uniqueness criterion.
//
// Operators are decomposed into components A(omega) that move the system between
// energy levels, omega = E_l - E_k for |psi_k><psi_l|. Levels are eigenvalues
// merged within kDegeneracyTol; frequency groups are formed from level
// projectors, so results do not depend on the eigenvector choice inside a
// degenerate subspace.

#pragma once

#include "colmod/hamiltonians.hpp"
#include "colmod/linalg.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace colmod {

inline constexpr double kDegeneracyTol = 1e-9;
inline constexpr double kSecularTol = 1e-6;
inline constexpr double kNullspaceRelTol = 1e-8;

struct EnergyLevel {
    double energy;
    std::vector<std::size_t> states;  // eigenvector indices
};

std::vector<EnergyLevel> energy_levels(const EigenDecomposition& eig, double tol = kDegeneracyTol);

struct TransitionOperator {
    std::size_t k;
    std::size_t l;
    double omega;      // E_l - E_k
    ComplexMatrix op;  // |psi_k><psi_l|
    bool degenerate;   // |omega| within the degeneracy tolerance
};

std::vector<TransitionOperator> transition_operators(const ComplexMatrix& h);

struct TransitionEntry {
    std::size_t k;
    std::size_t l;
    double omega;
    cplx coefficient;  // <psi_k| o |psi_l>
};

struct TransitionTable {
    EigenDecomposition decomposition;
    std::vector<TransitionEntry> entries;

    ComplexMatrix reconstruct() const;
    // Entries with |coefficient| above `tol`.
    std::vector<TransitionEntry> nonzero(double tol = 1e-12) const;
};

TransitionTable decompose(const ComplexMatrix& o, const EigenDecomposition& decomposition);

// Operator-basis change between the eigenbasis and the computational basis:
// x = M A for row-major vectorized operators, M[(i,j),(k,l)] = U_ik conj(U_jl).
struct MMatrix {
    ComplexMatrix matrix;

    ComplexVector to_computational(const ComplexVector& eigen_vec) const { return matrix * eigen_vec; }
    ComplexVector to_eigenbasis(const ComplexVector& comp_vec) const;
};

MMatrix m_matrix(const EigenDecomposition& decomposition);
ComplexVector vectorize(const ComplexMatrix& m);  // row-major
ComplexMatrix unvectorize(const ComplexVector& v, std::size_t dim);

struct JumpGroup {
    double omega;
    ComplexMatrix op;       // sum of level-pair components P_a O P_b with E_b - E_a = omega
    std::size_t source;     // index of the coupling operator it came from
};

/// Split each coupling operator into frequency components; zero-frequency
/// components are dropped unless `include_zero_freq`.
std::vector<JumpGroup> jump_set(const ComplexMatrix& h_sys, std::span<const ComplexMatrix> coupling_ops,
                                bool include_zero_freq, double secular_tol = kSecularTol);

/// Transition operators |psi_k><psi_l|, k != l, inside each degenerate level.
std::vector<ComplexMatrix> zero_frequency_transitions(const ComplexMatrix& h);

struct UniquenessReport {
    std::size_t commutant_dim = 0;
    bool adjoint_closed = false;
    bool unique = false;
};

/// Unique relaxation iff the span of the jumps is
/// closed under adjoint and the commutant of {A, A^dagger} is trivial.
UniquenessReport uniqueness_check(std::span<const ComplexMatrix> jumps);

/// Orthonormal (Frobenius) basis of the commutant of {A, A^dagger}.
std::vector<ComplexMatrix> commutant_basis(std::span<const ComplexMatrix> jumps);

struct ZeroFrequencyObstruction {
    double energy;
    std::size_t multiplicity;
    std::vector<double> coupling_weight;  // ||P O P||_F per coupling operator
};

/// Degenerate levels, whose internal transitions cannot be driven by ancillae
/// that carry energy.
std::vector<ZeroFrequencyObstruction> zero_frequency_obstructions(const ComplexMatrix& h_sys,
                                                                  std::span<const ComplexMatrix> coupling_ops);

struct CorrelationCheck {
    double omega;
    std::vector<std::size_t> ancillae;
    ComplexMatrix matrix;  // per-collision integrated bath correlation
    double min_eigenvalue;
    bool positive_definite;
};

/// Bath correlation matrix per transition frequency over the ancillae that drive it.
std::vector<CorrelationCheck> bath_correlation_check(const ComplexMatrix& h_sys, std::span<const AncillaSpec> ancillae,
                                                     double tau_c, double secular_tol = kSecularTol);

}  // namespace colmod

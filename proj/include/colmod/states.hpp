// Density matrices, temperatures and state comparison.

#pragma once

#include "colmod/linalg.hpp"

#include <limits>

namespace colmod {

namespace constants {
inline constexpr double k_boltzmann = 1.380649e-23;  // J/K
inline constexpr double hbar = 1.054571817e-34;      // J s
// k_B / hbar expressed in rad/(ns mK).
inline constexpr double kb_over_hbar = k_boltzmann / hbar * 1e-9 * 1e-3;
}  // namespace constants

// Temperature in mK. beta = hbar/(k_B T) in ns/rad; T = +inf gives beta = 0.
class Temperature {
public:
    explicit Temperature(double millikelvin);
    static Temperature infinite() { return Temperature(std::numeric_limits<double>::infinity()); }

    double millikelvin() const { return value_; }
    double beta() const;

private:
    double value_;
};

class DensityMatrix {
public:
    // Validates Hermiticity, unit trace and positivity (tolerance 1e-10).
    explicit DensityMatrix(ComplexMatrix m, double tol = 1e-10);

    static DensityMatrix pure(const ComplexVector& psi);
    static DensityMatrix basis_state(std::size_t dim, std::size_t index);
    static DensityMatrix maximally_mixed(std::size_t dim);

    const ComplexMatrix& matrix() const { return m_; }
    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    double purity() const;
    double trace() const { return m_.trace().real(); }

private:
    ComplexMatrix m_;
};

/// Gibbs state exp(-beta h)/Z; the ground energy is shifted out before
/// exponentiation. At beta = inf the ground manifold is populated uniformly.
DensityMatrix thermal_state(const ComplexMatrix& h, const Temperature& temp);

/// Squared Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2, clamped to [0, 1].
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

/// Half the trace norm of a - b.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Diagonal of rho in the orthonormal basis given by the columns of `basis`.
std::vector<double> populations(const ComplexMatrix& rho, const ComplexMatrix& basis);

/// Ground (g) and excited (e) populations of a two-level ancilla h_b sigma_z.
struct TwoLevelPopulations {
    double excited;
    double ground;
};
TwoLevelPopulations two_level_populations(double h_b, const Temperature& temp);

}  // namespace colmod

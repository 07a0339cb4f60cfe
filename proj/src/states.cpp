#include "colmod/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace colmod {

namespace {

// PSD drift from finite arithmetic is clamped to zero.
constexpr double kClamp = 1e-10;

double clamp_nonneg(double x) { return x < 0.0 && x >= -kClamp ? 0.0 : std::max(x, 0.0); }

RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
    const ComplexMatrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b, const char* who) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument(std::string(who) + ": dimension mismatch (" + std::to_string(a.dim()) +
                                    " vs " + std::to_string(b.dim()) + ")");
    }
}

}  // namespace

Temperature::Temperature(double millikelvin) : value_(millikelvin) {
    if (!(millikelvin > 0.0)) throw std::invalid_argument("temperature must be > 0 mK");
}

double Temperature::beta() const {
    if (std::isinf(value_)) return 0.0;
    return 1.0 / (constants::kb_over_hbar * value_);
}

DensityMatrix::DensityMatrix(ComplexMatrix m, double tol) : m_(std::move(m)) {
    require_square(m_, "DensityMatrix");
    if (!m_.allFinite()) throw std::invalid_argument("DensityMatrix: non-finite entries");
    const double herm = (m_ - m_.adjoint()).norm();
    if (herm > tol) throw std::invalid_argument("DensityMatrix: not Hermitian (" + std::to_string(herm) + ")");
    const double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > tol) throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr) + " != 1");
    const double min_eig = hermitian_eigenvalues(m_).minCoeff();
    if (min_eig < -tol) {
        throw std::invalid_argument("DensityMatrix: negative eigenvalue " + std::to_string(min_eig));
    }
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
    const double n = psi.norm();
    if (!(n > 0.0)) throw std::invalid_argument("DensityMatrix::pure: zero vector");
    const ComplexVector v = psi / n;
    return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::basis_state(std::size_t dim, std::size_t index) {
    return DensityMatrix(ops::basis_op(dim, index, index));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
    return DensityMatrix(ops::identity(dim) / static_cast<double>(dim));
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

DensityMatrix thermal_state(const ComplexMatrix& h, const Temperature& temp) {
    const auto eig = eig_hermitian(h);
    const double beta = temp.beta();
    const double e0 = eig.eigenvalues.minCoeff();
    const auto n = eig.eigenvalues.size();

    RealVector w(n);
    if (std::isinf(beta)) {
        for (Eigen::Index k = 0; k < n; ++k) w(k) = eig.eigenvalues(k) - e0 <= 1e-9 ? 1.0 : 0.0;
    } else {
        for (Eigen::Index k = 0; k < n; ++k) w(k) = std::exp(-beta * (eig.eigenvalues(k) - e0));
    }
    w /= w.sum();

    ComplexMatrix rho = eig.eigenvectors * w.cast<cplx>().asDiagonal() * eig.eigenvectors.adjoint();
    rho = 0.5 * (rho + rho.adjoint());
    rho /= rho.trace().real();
    return DensityMatrix(std::move(rho));
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    require_same_dim(a, b, "fidelity");
    const auto ea = eig_hermitian(0.5 * (a.matrix() + a.matrix().adjoint()));
    const ComplexMatrix sqrt_a = spectral_map(ea, [](double x) { return std::sqrt(clamp_nonneg(x)); });
    const ComplexMatrix inner = sqrt_a * b.matrix() * sqrt_a;
    const RealVector lam = hermitian_eigenvalues(inner);
    // eigenvalues at rounding level would contribute sqrt(eps) each
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(lam.size()) *
                         lam.cwiseAbs().maxCoeff();
    double s = 0.0;
    for (Eigen::Index k = 0; k < lam.size(); ++k)
        if (lam(k) > noise) s += std::sqrt(lam(k));
    return std::clamp(s * s, 0.0, 1.0);
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    require_same_dim(a, b, "trace_distance");
    const RealVector lam = hermitian_eigenvalues(a.matrix() - b.matrix());
    return std::clamp(0.5 * lam.cwiseAbs().sum(), 0.0, 1.0);
}

std::vector<double> populations(const ComplexMatrix& rho, const ComplexMatrix& basis) {
    if (rho.rows() != basis.rows()) throw std::invalid_argument("populations: dimension mismatch");
    std::vector<double> out(static_cast<std::size_t>(basis.cols()));
    for (Eigen::Index k = 0; k < basis.cols(); ++k) {
        out[static_cast<std::size_t>(k)] = (basis.col(k).adjoint() * rho * basis.col(k))(0, 0).real();
    }
    return out;
}

TwoLevelPopulations two_level_populations(double h_b, const Temperature& temp) {
    const double beta = temp.beta();
    if (std::isinf(beta)) {
        return h_b > 0 ? TwoLevelPopulations{0.0, 1.0}
                       : (h_b < 0 ? TwoLevelPopulations{1.0, 0.0} : TwoLevelPopulations{0.5, 0.5});
    }
    // rho_gg / rho_ee = exp(2 beta h_b), written to stay finite for large arguments.
    const double x = 2.0 * beta * h_b;
    if (x >= 0) {
        const double q = std::exp(-x);
        return {q / (1.0 + q), 1.0 / (1.0 + q)};
    }
    const double q = std::exp(x);
    return {1.0 / (1.0 + q), q / (1.0 + q)};
}

}  // namespace colmod

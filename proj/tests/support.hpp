// Shared helpers for the test binaries: seeded random matrices and a few
// reference implementations written independently of the library.

#pragma once

#include "colmod/hamiltonians.hpp"
#include "colmod/linalg.hpp"
#include "colmod/states.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace testing {

using colmod::ComplexMatrix;
using colmod::ComplexVector;
using colmod::cplx;

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240917);
    return gen;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

inline ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> n(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = cplx(n(rng()), n(rng()));
    return m;
}

inline ComplexMatrix random_hermitian(Eigen::Index n) {
    const ComplexMatrix a = random_matrix(n, n);
    return 0.5 * (a + a.adjoint());
}

inline ComplexMatrix random_density(Eigen::Index n) {
    const ComplexMatrix a = random_matrix(n, n);
    ComplexMatrix rho = a * a.adjoint();
    return rho / rho.trace();
}

inline ComplexMatrix random_unitary(Eigen::Index n) {
    Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(n, n));
    return qr.householderQ();
}

inline ComplexVector random_state(Eigen::Index n) {
    ComplexVector v = random_matrix(n, 1);
    return v / v.norm();
}

// exp(-i h t) by scaling and squaring of a truncated Taylor series.
inline ComplexMatrix taylor_propagator(const ComplexMatrix& h, double t) {
    const ComplexMatrix a = cplx(0.0, -t) * h;
    int squarings = 0;
    double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    while (norm > 0.5) {
        norm /= 2.0;
        ++squarings;
    }
    const ComplexMatrix b = a / std::pow(2.0, squarings);
    ComplexMatrix term = ComplexMatrix::Identity(h.rows(), h.cols());
    ComplexMatrix sum = term;
    for (int k = 1; k < 30; ++k) {
        term = term * b / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

// Element-by-element partial trace of a bipartite matrix over the second factor.
inline ComplexMatrix trace_out_second(const ComplexMatrix& m, Eigen::Index da, Eigen::Index db) {
    ComplexMatrix out = ComplexMatrix::Zero(da, da);
    for (Eigen::Index i = 0; i < da; ++i)
        for (Eigen::Index j = 0; j < da; ++j)
            for (Eigen::Index k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
    return out;
}

// Trace norm from singular values.
inline double trace_norm(const ComplexMatrix& m) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues().sum();
}

// Thermal ancilla state written out from its populations.
inline ComplexMatrix ancilla_thermal(const colmod::AncillaSpec& a) {
    const auto p = colmod::two_level_populations(a.h_b, colmod::Temperature(a.temperature_mK));
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = p.excited;
    m(1, 1) = p.ground;
    return m;
}

// Deferred tracing: evolve system (x) ancilla_1 (x) ... (x) ancilla_m through every
// collision on the full space and trace the ancillae out only at the end.
// `slots` lists, per collision, the ancillae that take part.
inline ComplexMatrix full_space_oracle(const ComplexMatrix& rho_s, const ComplexMatrix& h_sys, std::size_t n_sys,
                                       const std::vector<colmod::AncillaSpec>& ancillae,
                                       const std::vector<std::vector<std::size_t>>& slots, double tau_c) {
    namespace ops = colmod::ops;
    const std::size_t n_total = n_sys + ancillae.size();
    ComplexMatrix rho = rho_s;
    for (const auto& a : ancillae) rho = colmod::kron(rho, ancilla_thermal(a));
    const ComplexMatrix h_s_full = colmod::kron(h_sys, ops::identity(std::size_t{1} << ancillae.size()));
    for (const auto& slot : slots) {
        ComplexMatrix h = h_s_full;
        for (std::size_t k : slot) {
            const std::size_t anc = n_sys + k;
            h += ancillae[k].h_b * ops::on_site(ops::sigma_z(), anc, n_total);
            h += ancillae[k].g * ops::on_sites(ops::sigma_x(), ancillae[k].target_site, ops::sigma_x(), anc, n_total);
        }
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
        ComplexVector phases(h.rows());
        for (Eigen::Index i = 0; i < h.rows(); ++i) phases(i) = std::exp(cplx(0.0, -tau_c * es.eigenvalues()(i)));
        const ComplexMatrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
        rho = u * rho * u.adjoint();
    }
    return trace_out_second(rho, rho_s.rows(), rho.rows() / rho_s.rows());
}

}  // namespace testing

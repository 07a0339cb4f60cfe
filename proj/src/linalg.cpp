#include "colmod/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace colmod {

namespace ops {

ComplexMatrix identity(std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("identity: dim must be > 0");
    const auto n = static_cast<Eigen::Index>(dim);
    return ComplexMatrix::Identity(n, n);
}

ComplexMatrix sigma_x() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0,
         1.0, 0.0;
    return m;
}

ComplexMatrix sigma_y() {
    ComplexMatrix m(2, 2);
    m << 0.0, -I_UNIT,
         I_UNIT, 0.0;
    return m;
}

ComplexMatrix sigma_z() {
    ComplexMatrix m(2, 2);
    m << 1.0,  0.0,
         0.0, -1.0;
    return m;
}

ComplexMatrix sigma_plus() {
    return basis_op(2, 0, 1);
}

ComplexMatrix sigma_minus() {
    return basis_op(2, 1, 0);
}

ComplexMatrix basis_op(std::size_t dim, std::size_t i, std::size_t j) {
    if (i >= dim || j >= dim) throw std::out_of_range("basis_op: index out of range");
    const auto n = static_cast<Eigen::Index>(dim);
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
    return m;
}

ComplexMatrix on_site(const ComplexMatrix& op, std::size_t site, std::size_t n_qubits) {
    if (op.rows() != 2 || op.cols() != 2) throw std::invalid_argument("on_site: expected a 2x2 operator");
    if (site >= n_qubits) throw std::out_of_range("on_site: site index out of range");
    const std::size_t left = std::size_t{1} << site;
    const std::size_t right = std::size_t{1} << (n_qubits - site - 1);
    return kron(kron(identity(left), op), identity(right));
}

ComplexMatrix on_sites(const ComplexMatrix& op_a, std::size_t site_a, const ComplexMatrix& op_b,
                       std::size_t site_b, std::size_t n_qubits) {
    if (site_a >= n_qubits || site_b >= n_qubits) throw std::out_of_range("on_sites: site index out of range");
    if (site_a == site_b) throw std::invalid_argument("on_sites: sites must differ");
    ComplexMatrix out = identity(1);
    for (std::size_t k = 0; k < n_qubits; ++k) {
        out = kron(out, k == site_a ? op_a : (k == site_b ? op_b : identity(2)));
    }
    return out;
}

}  // namespace ops

void require_square(const ComplexMatrix& m, const char* who) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument(std::string(who) + ": expected a non-empty square matrix, got " +
                                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).norm() <= tol;
}

double frobenius(const ComplexMatrix& m) { return m.norm(); }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out = Eigen::kroneckerProduct(a, b);
    return out;
}

ComplexMatrix kron_all(std::span<const ComplexMatrix> factors) {
    if (factors.empty()) throw std::invalid_argument("kron_all: no factors");
    ComplexMatrix out = factors.front();
    for (std::size_t k = 1; k < factors.size(); ++k) out = kron(out, factors[k]);
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
    require_square(m, "partial_trace");
    if (dims.empty()) throw std::invalid_argument("partial_trace: empty subsystem list");
    const std::size_t total =
        std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
    if (std::any_of(dims.begin(), dims.end(), [](std::size_t d) { return d == 0; }) ||
        total != static_cast<std::size_t>(m.rows())) {
        throw std::invalid_argument("partial_trace: product of subsystem dims (" + std::to_string(total) +
                                    ") does not match matrix dim (" + std::to_string(m.rows()) + ")");
    }
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep set must be nonempty");

    const std::size_t n_sub = dims.size();
    std::vector<bool> kept(n_sub, false);
    for (std::size_t k : keep) {
        if (k >= n_sub) throw std::invalid_argument("partial_trace: keep index out of range");
        if (kept[k]) throw std::invalid_argument("partial_trace: duplicate keep index");
        kept[k] = true;
    }

    // Row-major strides of the full index.
    std::vector<std::size_t> stride(n_sub, 1);
    for (std::size_t k = n_sub - 1; k > 0; --k) stride[k - 1] = stride[k] * dims[k];

    std::vector<std::size_t> kept_idx, traced_idx;
    for (std::size_t k = 0; k < n_sub; ++k) (kept[k] ? kept_idx : traced_idx).push_back(k);

    // Offsets into the full index for every multi-index of a subsystem group.
    auto offsets = [&](const std::vector<std::size_t>& group) {
        std::vector<std::size_t> out{0};
        for (std::size_t k : group) {
            std::vector<std::size_t> next;
            next.reserve(out.size() * dims[k]);
            for (std::size_t base : out)
                for (std::size_t v = 0; v < dims[k]; ++v) next.push_back(base + v * stride[k]);
            out = std::move(next);
        }
        return out;
    };
    const auto kept_off = offsets(kept_idx);
    const auto traced_off = offsets(traced_idx);

    const auto d_out = static_cast<Eigen::Index>(kept_off.size());
    ComplexMatrix out = ComplexMatrix::Zero(d_out, d_out);
    for (Eigen::Index a = 0; a < d_out; ++a) {
        for (Eigen::Index b = 0; b < d_out; ++b) {
            cplx acc = 0.0;
            for (std::size_t e : traced_off) {
                acc += m(static_cast<Eigen::Index>(kept_off[a] + e), static_cast<Eigen::Index>(kept_off[b] + e));
            }
            out(a, b) = acc;
        }
    }
    return out;
}

EigenDecomposition eig_hermitian(const ComplexMatrix& h, const Tolerances& tol) {
    require_square(h, "eig_hermitian");
    if (!is_hermitian(h, tol.hermiticity)) {
        throw std::invalid_argument("eig_hermitian: input is not Hermitian (||h - h^dagger||_F = " +
                                    std::to_string((h - h.adjoint()).norm()) + ")");
    }
    const ComplexMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eig_hermitian: eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix propagator(const EigenDecomposition& eig, double t) {
    if (t < 0.0) throw std::invalid_argument("propagator: negative time");
    const auto n = eig.eigenvalues.size();
    ComplexVector phase(n);
    for (Eigen::Index k = 0; k < n; ++k) phase(k) = std::exp(-I_UNIT * eig.eigenvalues(k) * t);
    return eig.eigenvectors * phase.asDiagonal() * eig.eigenvectors.adjoint();
}

ComplexMatrix propagator(const ComplexMatrix& h, double t, const Tolerances& tol) {
    return propagator(eig_hermitian(h, tol), t);
}

}  // namespace colmod

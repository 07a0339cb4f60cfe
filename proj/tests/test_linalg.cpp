#include "colmod/hamiltonians.hpp"
#include "colmod/linalg.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace colmod;
using testing::random_density;
using testing::random_hermitian;
using testing::random_matrix;

TEST_CASE("kron of sigma_z with itself is diag(1,-1,-1,1)") {
    const ComplexMatrix zz = kron(ops::sigma_z(), ops::sigma_z());
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected.diagonal() << 1, -1, -1, 1;
    CHECK((zz - expected).norm() == 0.0);
    CHECK((kron(ops::identity(2), ops::identity(2)) - ops::identity(4)).norm() == 0.0);
}

TEST_CASE("kron mixed-product identity on random factors") {
    for (int trial = 0; trial < 20; ++trial) {
        const auto n = static_cast<Eigen::Index>(2 + trial % 3);
        const ComplexMatrix a = random_matrix(n, n), b = random_matrix(2, 2);
        const ComplexMatrix c = random_matrix(n, n), d = random_matrix(2, 2);
        const ComplexMatrix lhs = kron(a, b) * kron(c, d);
        const ComplexMatrix rhs = kron(a * c, b * d);
        CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, rhs.norm()));
    }
}

TEST_CASE("kron puts the left factor on the slow index") {
    const ComplexMatrix a = random_matrix(2, 2), b = random_matrix(3, 3);
    const ComplexMatrix k = kron(a, b);
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < 2; ++j)
            for (Eigen::Index p = 0; p < 3; ++p)
                for (Eigen::Index q = 0; q < 3; ++q) CHECK(k(i * 3 + p, j * 3 + q) == a(i, j) * b(p, q));
}

TEST_CASE("partial trace of a product state") {
    const ComplexMatrix rho = random_density(2), sigma = random_density(2);
    const std::size_t dims[] = {2, 2};
    const std::size_t keep0[] = {0};
    const std::size_t keep1[] = {1};
    CHECK((partial_trace(kron(rho, sigma), dims, keep0) - rho).norm() <= 1e-14);
    CHECK((partial_trace(kron(rho, sigma), dims, keep1) - sigma).norm() <= 1e-14);
}

TEST_CASE("partial trace of a Bell state is maximally mixed") {
    ComplexVector phi = ComplexVector::Zero(4);
    phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
    const std::size_t dims[] = {2, 2};
    const std::size_t keep[] = {0};
    const ComplexMatrix reduced = partial_trace(phi * phi.adjoint(), dims, keep);
    CHECK((reduced - 0.5 * ops::identity(2)).norm() <= 1e-15);
}

TEST_CASE("partial trace agrees with element-wise contraction and is order independent") {
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix rho = random_density(8);
        const std::size_t dims3[] = {2, 2, 2};
        const std::size_t keep0[] = {0};
        const std::size_t keep01[] = {0, 1};
        const std::size_t keep02[] = {0, 2};
        const std::size_t dims2[] = {2, 2};
        const std::size_t first[] = {0};

        const ComplexMatrix direct = partial_trace(rho, dims3, keep0);
        // drop qubit 2 then qubit 1
        const ComplexMatrix via_2 = partial_trace(partial_trace(rho, dims3, keep01), dims2, first);
        // drop qubit 1 then qubit 2
        const ComplexMatrix via_1 = partial_trace(partial_trace(rho, dims3, keep02), dims2, first);
        const ComplexMatrix oracle = testing::trace_out_second(rho, 2, 4);

        CHECK((direct - oracle).norm() <= 1e-12);
        CHECK((via_2 - oracle).norm() <= 1e-12);
        CHECK((via_1 - oracle).norm() <= 1e-12);
        CHECK(std::abs(direct.trace() - rho.trace()) <= 1e-12);

        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(partial_trace(rho, dims3, keep02));
        CHECK(es.eigenvalues().minCoeff() >= -1e-12);
    }
}

TEST_CASE("partial trace keeps subsystems of unequal size") {
    const ComplexMatrix a = random_density(3), b = random_density(2), c = random_density(4);
    const ComplexMatrix abc = kron(kron(a, b), c);
    const std::size_t dims[] = {3, 2, 4};
    const std::size_t keep[] = {0, 2};
    CHECK((partial_trace(abc, dims, keep) - kron(a, c)).norm() <= 1e-13);
}

TEST_CASE("partial trace rejects bad arguments") {
    const ComplexMatrix rho = random_density(4);
    const std::size_t bad_dims[] = {2, 3};
    const std::size_t dims[] = {2, 2};
    const std::size_t keep[] = {0};
    const std::size_t out_of_range[] = {2};
    const std::size_t duplicate[] = {0, 0};
    CHECK_THROWS_AS(partial_trace(rho, bad_dims, keep), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(rho, dims, std::span<const std::size_t>{}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(rho, dims, out_of_range), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(rho, dims, duplicate), std::invalid_argument);
}

TEST_CASE("eig_hermitian on Pauli matrices") {
    const auto ez = eig_hermitian(ops::sigma_z());
    CHECK(ez.eigenvalues(0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(ez.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-15));

    const auto ex = eig_hermitian(ops::sigma_x());
    CHECK(ex.eigenvalues(0) == doctest::Approx(-1.0));
    ComplexVector minus(2), plus(2);
    minus << 1.0, -1.0;
    plus << 1.0, 1.0;
    minus /= std::sqrt(2.0);
    plus /= std::sqrt(2.0);
    CHECK(std::abs(std::abs(ex.state(0).dot(minus)) - 1.0) <= 1e-12);
    CHECK(std::abs(std::abs(ex.state(1).dot(plus)) - 1.0) <= 1e-12);
}

TEST_CASE("eig_hermitian of the XY+DM model") {
    const auto e = eig_hermitian(build(XyDmModel{1.0}));
    const double expected[] = {-2, -2, 2, 2};
    for (int k = 0; k < 4; ++k) CHECK(e.eigenvalues(k) == doctest::Approx(expected[k]).epsilon(1e-12));
}

TEST_CASE("eig_hermitian reconstructs random Hermitian matrices up to dimension 64") {
    for (Eigen::Index n : {1, 2, 5, 16, 33, 64}) {
        const ComplexMatrix h = random_hermitian(n);
        const auto e = eig_hermitian(h);
        const ComplexMatrix& u = e.eigenvectors;
        CHECK((u.adjoint() * u - ComplexMatrix::Identity(n, n)).norm() <= 1e-12);
        const ComplexMatrix rebuilt = u * e.eigenvalues.cast<cplx>().asDiagonal() * u.adjoint();
        CHECK((rebuilt - h).norm() / h.norm() <= 1e-10);
        for (Eigen::Index k = 1; k < n; ++k) CHECK(e.eigenvalues(k - 1) <= e.eigenvalues(k));
    }
}

TEST_CASE("eig_hermitian rejects non-Hermitian input") {
    ComplexMatrix m = ops::sigma_x();
    m(0, 1) = 2.0;
    CHECK_THROWS_AS(eig_hermitian(m), std::invalid_argument);
    CHECK_THROWS_AS(propagator(m, 1.0), std::invalid_argument);
}

TEST_CASE("propagator special cases") {
    const ComplexMatrix h = random_hermitian(3);
    CHECK((propagator(h, 0.0) - ops::identity(3)).norm() <= 1e-14);
    const double t = 0.7;
    const ComplexMatrix u = propagator(ops::sigma_z(), t);
    CHECK(std::abs(u(0, 0) - std::exp(cplx(0, -t))) <= 1e-15);
    CHECK(std::abs(u(1, 1) - std::exp(cplx(0, t))) <= 1e-15);
    CHECK(std::abs(u(0, 1)) == 0.0);
    CHECK_THROWS_AS(propagator(h, -1.0), std::invalid_argument);
}

TEST_CASE("propagator matches the Taylor series and is unitary") {
    for (int trial = 0; trial < 20; ++trial) {
        ComplexMatrix h = random_hermitian(4);
        const double t = testing::uniform(0.0, 1.0) / h.norm();
        const ComplexMatrix u = propagator(h, t);
        CHECK((u.adjoint() * u - ops::identity(4)).norm() <= 1e-12);
        CHECK((u - testing::taylor_propagator(h, t)).norm() <= 1e-8);
    }
}

TEST_CASE("propagator group law") {
    for (Eigen::Index n : {2, 8, 32, 64}) {
        const ComplexMatrix h = random_hermitian(n);
        const double t1 = testing::uniform(0, 3), t2 = testing::uniform(0, 3);
        const auto e = eig_hermitian(h);
        CHECK((propagator(e, t1) * propagator(e, t2) - propagator(e, t1 + t2)).norm() <= 1e-10);
    }
}

TEST_CASE("on_site and on_sites place operators by qubit") {
    const ComplexMatrix x1 = ops::on_site(ops::sigma_x(), 1, 3);
    CHECK((x1 - kron(kron(ops::identity(2), ops::sigma_x()), ops::identity(2))).norm() == 0.0);
    const ComplexMatrix xz = ops::on_sites(ops::sigma_x(), 0, ops::sigma_z(), 2, 3);
    CHECK((xz - ops::on_site(ops::sigma_x(), 0, 3) * ops::on_site(ops::sigma_z(), 2, 3)).norm() <= 1e-15);
    CHECK((ops::sigma_minus() * ops::basis_op(2, 0, 0) - ops::basis_op(2, 1, 0)).norm() == 0.0);
}

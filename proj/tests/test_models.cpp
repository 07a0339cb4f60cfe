#include "colmod/hamiltonians.hpp"
#include "colmod/states.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

using namespace colmod;

namespace {

// Classical Ising energy of a computational basis index (bit 1 = down).
double ising_energy(const IsingChain& c, std::size_t index) {
    const std::size_t n = c.size();
    auto spin = [&](std::size_t site) { return ((index >> (n - 1 - site)) & 1u) ? -1.0 : 1.0; };
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) e += c.fields[i] * spin(i);
    for (std::size_t i = 0; i + 1 < n; ++i) e += c.couplings[i] * spin(i) * spin(i + 1);
    return e;
}

IsingChain random_chain(std::size_t n) {
    IsingChain c;
    for (std::size_t i = 0; i < n; ++i) c.fields.push_back(testing::uniform(-2, 2));
    for (std::size_t i = 0; i + 1 < n; ++i) c.couplings.push_back(testing::uniform(-2, 2));
    return c;
}

}  // namespace

TEST_CASE("TLS Hamiltonian") {
    const ComplexMatrix h = build(TlsModel{1.0});
    CHECK((h - ops::sigma_z()).norm() == 0.0);
    CHECK(qubit_count(TlsModel{}) == 1);
    CHECK(model_name(TlsModel{}) == "tls");
}

TEST_CASE("two-spin Ising Hamiltonian is diag(2,-1,-1,0)") {
    const ComplexMatrix h = build(IsingChain{{0.5, 0.5}, {1.0}});
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected.diagonal() << 2, -1, -1, 0;
    CHECK((h - expected).norm() <= 1e-15);
}

TEST_CASE("Ising builds are diagonal and match classical energies") {
    for (std::size_t n = 1; n <= 6; ++n) {
        const IsingChain c = random_chain(n);
        const ComplexMatrix h = build(c);
        const ComplexMatrix off = h - ComplexMatrix(h.diagonal().asDiagonal());
        CHECK(off.norm() == 0.0);
        for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) {
            CHECK(h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real() ==
                  doctest::Approx(ising_energy(c, i)).epsilon(1e-13));
        }
    }
}

TEST_CASE("Ising model validation") {
    CHECK_THROWS_AS(validate(HamiltonianSpec{IsingChain{{}, {}}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(HamiltonianSpec{IsingChain{{1, 1}, {}}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(HamiltonianSpec{IsingChain{{1, std::nan("")}, {1}}}), std::invalid_argument);
    CHECK_NOTHROW(validate(HamiltonianSpec{IsingChain{{1}, {}}}));
}

TEST_CASE("Ising transition frequencies for the two-spin chain") {
    const IsingChain c{{0.5, 0.5}, {1.0}};
    const auto f = ising_transition_frequencies(c, 0);
    REQUIRE(f.size() == 2);
    CHECK(f.at(NeighborConfig{0, 1}) == doctest::Approx(3.0));
    CHECK(f.at(NeighborConfig{0, -1}) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(ising_transition_frequencies(c, 2), std::out_of_range);
}

TEST_CASE("zero-field bulk frequencies are symmetric about zero") {
    const IsingChain c{{0, 0, 0}, {0.7, 1.3}};
    const auto f = ising_transition_frequencies(c, 1);
    REQUIRE(f.size() == 4);
    CHECK(f.at(NeighborConfig{1, 1}) == doctest::Approx(2 * (0.7 + 1.3)));
    CHECK(f.at(NeighborConfig{1, -1}) == doctest::Approx(2 * (0.7 - 1.3)));
    CHECK(f.at(NeighborConfig{-1, 1}) == doctest::Approx(2 * (-0.7 + 1.3)));
    CHECK(f.at(NeighborConfig{-1, -1}) == doctest::Approx(-2 * (0.7 + 1.3)));
}

TEST_CASE("Ising frequencies equal brute-force flip energies") {
    for (std::size_t n = 1; n <= 6; ++n) {
        const IsingChain c = random_chain(n);
        const ComplexMatrix h = build(c);
        for (std::size_t site = 0; site < n; ++site) {
            const auto freqs = ising_transition_frequencies(c, site);
            CHECK(freqs.size() == (n == 1 ? 1u : (site == 0 || site == n - 1 ? 2u : 4u)));
            const std::size_t bit = std::size_t{1} << (n - 1 - site);
            for (std::size_t idx = 0; idx < (std::size_t{1} << n); ++idx) {
                if (idx & bit) continue;  // keep configurations with the site up
                auto neighbour = [&](std::ptrdiff_t s) -> int {
                    if (s < 0 || s >= static_cast<std::ptrdiff_t>(n)) return 0;
                    return ((idx >> (n - 1 - static_cast<std::size_t>(s))) & 1u) ? -1 : 1;
                };
                const NeighborConfig cfg{neighbour(static_cast<std::ptrdiff_t>(site) - 1),
                                         neighbour(static_cast<std::ptrdiff_t>(site) + 1)};
                const auto up = static_cast<Eigen::Index>(idx);
                const auto down = static_cast<Eigen::Index>(idx | bit);
                const double flip = h(up, up).real() - h(down, down).real();
                CHECK(freqs.at(cfg) == doctest::Approx(flip).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("Ising lowering operator is a projected sigma_minus") {
    const IsingChain c{{0.5, 0.5}, {1.0}};
    // site 0 lowered with site 1 down: |down,down><up,down| = |3><1|
    const ComplexMatrix l = ising_lowering(c, 0, NeighborConfig{0, -1});
    CHECK((l - ops::basis_op(4, 3, 1)).norm() == 0.0);
    const ComplexMatrix l_up = ising_lowering(c, 1, NeighborConfig{1, 0});
    CHECK((l_up - ops::basis_op(4, 1, 0)).norm() == 0.0);
}

TEST_CASE("XY+DM spectrum and eigenvector family") {
    for (double j : {1.0, 0.3, -2.0}) {
        const auto e = eig_hermitian(build(XyDmModel{j}));
        const double a = std::abs(j);
        CHECK(e.eigenvalues(0) == doctest::Approx(-2 * a));
        CHECK(e.eigenvalues(1) == doctest::Approx(-2 * a));
        CHECK(e.eigenvalues(2) == doctest::Approx(2 * a));
        CHECK(e.eigenvalues(3) == doctest::Approx(2 * a));
    }
    const ComplexMatrix h = build(XyDmModel{1.0});
    const double s = 1.0 / std::sqrt(2.0);
    ComplexVector v(4);
    // (|up,up> + |down,down>)/sqrt2 and (|down,up> - i|up,down>)/sqrt2 are eigenvectors
    v << s, 0, 0, s;
    CHECK((h * v - 2.0 * v).norm() <= 1e-14);
    v << s, 0, 0, -s;
    CHECK((h * v + 2.0 * v).norm() <= 1e-14);
    v << 0, cplx(0, -s), s, 0;
    CHECK((h * v + 2.0 * v).norm() <= 1e-14);
    v << 0, cplx(0, s), s, 0;
    CHECK((h * v - 2.0 * v).norm() <= 1e-14);
}

TEST_CASE("collision Hamiltonian structure") {
    const AncillaSpec anc{1.0, 10.0, 1e-3, 0};
    const AncillaSpec one[] = {anc};
    const ComplexMatrix h = collision_hamiltonian(ops::sigma_z(), one);
    REQUIRE(h.rows() == 4);
    const ComplexMatrix expected = kron(ops::sigma_z(), ops::identity(2)) + kron(ops::identity(2), ops::sigma_z()) +
                                   1e-3 * kron(ops::sigma_x(), ops::sigma_x());
    CHECK((h - expected).norm() == 0.0);
    CHECK(h(0, 3) == cplx(1e-3));
    CHECK(h(1, 2) == cplx(1e-3));

    const ComplexMatrix hs = build(IsingChain{{0.5, 0.5}, {1.0}});
    const AncillaSpec four[] = {{1.5, 10, 1e-3, 0}, {0.5, 10, 1e-3, 0}, {1.5, 10, 1e-3, 1}, {0.5, 10, 1e-3, 1}};
    const ComplexMatrix big = collision_hamiltonian(hs, four);
    CHECK(big.rows() == 64);
    CHECK((big - big.adjoint()).norm() == 0.0);

    CHECK_THROWS_AS(collision_hamiltonian(hs, std::span<const AncillaSpec>{}), std::invalid_argument);
    const AncillaSpec bad[] = {{1.0, 10, 1e-3, 2}};
    CHECK_THROWS_AS(collision_hamiltonian(hs, bad), std::invalid_argument);
}

TEST_CASE("temperature conversion") {
    CHECK(constants::kb_over_hbar == doctest::Approx(0.1309203).epsilon(1e-6));
    CHECK(Temperature(10).beta() == doctest::Approx(0.763823).epsilon(1e-6));
    CHECK(Temperature::infinite().beta() == 0.0);
    CHECK_THROWS_AS(Temperature(0.0), std::invalid_argument);
    CHECK_THROWS_AS(Temperature(-1.0), std::invalid_argument);
}

TEST_CASE("DensityMatrix validation") {
    CHECK_NOTHROW(DensityMatrix(testing::random_density(3)));
    CHECK_THROWS_AS(DensityMatrix(ops::sigma_x()), std::invalid_argument);
    CHECK_THROWS_AS(DensityMatrix(ops::identity(2)), std::invalid_argument);
    ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
    neg.diagonal() << 1.5, -0.5;
    CHECK_THROWS_AS(DensityMatrix{neg}, std::invalid_argument);
    ComplexMatrix non_herm = 0.5 * ops::identity(2);
    non_herm(0, 1) = 0.1;
    CHECK_THROWS_AS(DensityMatrix{non_herm}, std::invalid_argument);
    CHECK(DensityMatrix::maximally_mixed(4).purity() == doctest::Approx(0.25));
}

TEST_CASE("thermal TLS state at 10 mK") {
    const auto rho = thermal_state(ops::sigma_z(), Temperature(10.0));
    const double beta = 1.0 / (0.1309203 * 10.0);
    const double ground = 1.0 / (1.0 + std::exp(-2.0 * beta));
    CHECK(rho.matrix()(1, 1).real() == doctest::Approx(ground).epsilon(1e-6));
    CHECK(rho.matrix()(1, 1).real() == doctest::Approx(0.8216).epsilon(1e-4));
    CHECK(rho.matrix()(1, 1).real() / rho.matrix()(0, 0).real() ==
          doctest::Approx(std::exp(2 * Temperature(10).beta())).epsilon(1e-12));
    CHECK(std::abs(rho.matrix()(0, 1)) == 0.0);
}

TEST_CASE("thermal state limits and overflow safety") {
    const ComplexMatrix h = testing::random_hermitian(4);
    CHECK((thermal_state(h, Temperature::infinite()).matrix() - 0.25 * ops::identity(4)).norm() <= 1e-12);

    // beta * spectral radius far beyond 700
    const ComplexMatrix big = 1e3 * ops::sigma_z();
    const auto cold = thermal_state(big, Temperature(1e-3));
    CHECK(cold.matrix()(1, 1).real() == doctest::Approx(1.0));
    const auto warm = thermal_state(200.0 * ops::sigma_z(), Temperature(0.5));
    CHECK(std::isfinite(warm.matrix()(0, 0).real()));

    // Gibbs state commutes with H
    const auto rho = thermal_state(h, Temperature(3.0));
    CHECK((rho.matrix() * h - h * rho.matrix()).norm() <= 1e-12);
}

TEST_CASE("two-level KMS ratio is exact") {
    for (int trial = 0; trial < 50; ++trial) {
        const double h_b = testing::uniform(0.01, 5.0);
        const double t = testing::uniform(0.5, 100.0);
        const auto p = two_level_populations(h_b, Temperature(t));
        CHECK(p.ground / p.excited == doctest::Approx(std::exp(2 * Temperature(t).beta() * h_b)).epsilon(1e-12));
        CHECK(p.ground + p.excited == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("fidelity conventions") {
    const auto rho = DensityMatrix(testing::random_density(3));
    CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fidelity(DensityMatrix::basis_state(2, 0), DensityMatrix::basis_state(2, 1)) == doctest::Approx(0.0));

    const auto thermal = thermal_state(ops::sigma_z(), Temperature(10.0));
    CHECK(fidelity(DensityMatrix::basis_state(2, 0), thermal) == doctest::Approx(0.1784).epsilon(1e-3));
    CHECK(fidelity(DensityMatrix::basis_state(2, 1), thermal) == doctest::Approx(0.8216).epsilon(1e-3));

    for (int trial = 0; trial < 20; ++trial) {
        const ComplexVector psi = testing::random_state(4);
        const DensityMatrix b(testing::random_density(4));
        const DensityMatrix a = DensityMatrix::pure(psi);
        const double expected = (psi.adjoint() * b.matrix() * psi)(0, 0).real();
        CHECK(fidelity(a, b) == doctest::Approx(expected).epsilon(1e-8));
        const DensityMatrix c(testing::random_density(4));
        CHECK(fidelity(b, c) == doctest::Approx(fidelity(c, b)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(fidelity(DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(4)),
                    std::invalid_argument);
}

TEST_CASE("trace distance") {
    const DensityMatrix a(testing::random_density(4));
    CHECK(trace_distance(a, a) == doctest::Approx(0.0));
    CHECK(trace_distance(DensityMatrix::basis_state(2, 0), DensityMatrix::basis_state(2, 1)) ==
          doctest::Approx(1.0));
    for (int trial = 0; trial < 20; ++trial) {
        const DensityMatrix x(testing::random_density(5)), y(testing::random_density(5));
        CHECK(std::abs(trace_distance(x, y) - 0.5 * testing::trace_norm(x.matrix() - y.matrix())) <= 1e-12);
        // F = 1 exactly when the states coincide
        CHECK(fidelity(x, y) < 1.0 - 1e-8);
    }
    CHECK_THROWS_AS(trace_distance(DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(4)),
                    std::invalid_argument);
}

TEST_CASE("populations in an eigenbasis") {
    const ComplexMatrix h = testing::random_hermitian(3);
    const auto e = eig_hermitian(h);
    const ComplexMatrix rho = testing::random_density(3);
    const auto p = populations(rho, e.eigenvectors);
    double sum = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(p[k] == doctest::Approx((e.state(k).adjoint() * rho * e.state(k))(0, 0).real()));
        sum += p[k];
    }
    CHECK(sum == doctest::Approx(1.0));
}

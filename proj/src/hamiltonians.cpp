#include "colmod/hamiltonians.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace colmod {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
}

std::size_t qubits_of(const ComplexMatrix& h) {
    const auto d = static_cast<std::size_t>(h.rows());
    if (d == 0 || !std::has_single_bit(d)) throw std::invalid_argument("expected an operator on qubits (dim 2^N)");
    return static_cast<std::size_t>(std::countr_zero(d));
}

const char* spin_label(int s) { return s > 0 ? "up" : (s < 0 ? "down" : "-"); }

}  // namespace

void validate(const HamiltonianSpec& spec) {
    std::visit(overloaded{
                   [](const TlsModel& m) { require_finite(m.h_s, "h_s"); },
                   [](const IsingChain& m) {
                       if (m.fields.empty()) throw std::invalid_argument("Ising chain needs at least one spin");
                       if (m.couplings.size() + 1 != m.fields.size())
                           throw std::invalid_argument("Ising chain needs N-1 couplings for N fields");
                       for (double h : m.fields) require_finite(h, "Ising field");
                       for (double j : m.couplings) require_finite(j, "Ising coupling");
                   },
                   [](const XyDmModel& m) { require_finite(m.J, "J"); },
               },
               spec);
}

std::size_t qubit_count(const HamiltonianSpec& spec) {
    return std::visit(overloaded{
                          [](const TlsModel&) -> std::size_t { return 1; },
                          [](const IsingChain& m) -> std::size_t { return m.size(); },
                          [](const XyDmModel&) -> std::size_t { return 2; },
                      },
                      spec);
}

std::string model_name(const HamiltonianSpec& spec) {
    return std::visit(overloaded{
                          [](const TlsModel&) { return std::string("tls"); },
                          [](const IsingChain&) { return std::string("ising"); },
                          [](const XyDmModel&) { return std::string("xydm"); },
                      },
                      spec);
}

ComplexMatrix build(const HamiltonianSpec& spec) {
    validate(spec);
    return std::visit(
        overloaded{
            [](const TlsModel& m) -> ComplexMatrix { return m.h_s * ops::sigma_z(); },
            [](const IsingChain& m) -> ComplexMatrix {
                // Diagonal in the computational basis: evaluate the classical energy per state.
                const std::size_t n = m.size();
                const std::size_t dim = std::size_t{1} << n;
                ComplexMatrix h = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
                for (std::size_t b = 0; b < dim; ++b) {
                    auto spin = [&](std::size_t i) { return ((b >> (n - 1 - i)) & 1u) ? -1.0 : 1.0; };
                    double e = 0.0;
                    for (std::size_t i = 0; i < n; ++i) e += m.fields[i] * spin(i);
                    for (std::size_t i = 0; i + 1 < n; ++i) e += m.couplings[i] * spin(i) * spin(i + 1);
                    h(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)) = e;
                }
                return h;
            },
            [](const XyDmModel& m) -> ComplexMatrix {
                using namespace ops;
                const ComplexMatrix sx = sigma_x(), sy = sigma_y();
                return m.J * (kron(sx, sx) - kron(sy, sy) + kron(sx, sy) - kron(sy, sx));
            },
        },
        spec);
}

void validate(const AncillaSpec& anc, std::size_t n_sites) {
    require_finite(anc.h_b, "ancilla h_b");
    if (!(anc.g >= 0.0) || !std::isfinite(anc.g)) {
        throw std::invalid_argument("ancilla coupling g must be finite and >= 0");
    }
    if (!(anc.temperature_mK > 0.0)) throw std::invalid_argument("ancilla temperature must be > 0");
    if (anc.target_site >= n_sites) {
        throw std::invalid_argument("ancilla target site " + std::to_string(anc.target_site) +
                                    " out of range for " + std::to_string(n_sites) + " system spins");
    }
}

std::string NeighborConfig::label() const {
    return std::string(spin_label(left)) + "," + spin_label(right);
}

std::map<NeighborConfig, double> ising_transition_frequencies(const IsingChain& chain, std::size_t site) {
    validate(HamiltonianSpec{chain});
    const std::size_t n = chain.size();
    if (site >= n) throw std::out_of_range("ising_transition_frequencies: site out of range");

    const bool has_left = site > 0;
    const bool has_right = site + 1 < n;
    const double j_left = has_left ? chain.couplings[site - 1] : 0.0;
    const double j_right = has_right ? chain.couplings[site] : 0.0;

    std::vector<int> lefts = has_left ? std::vector<int>{1, -1} : std::vector<int>{0};
    std::vector<int> rights = has_right ? std::vector<int>{1, -1} : std::vector<int>{0};

    std::map<NeighborConfig, double> out;
    for (int l : lefts)
        for (int r : rights) out[{l, r}] = 2.0 * (j_left * l + chain.fields[site] + j_right * r);
    return out;
}

ComplexMatrix ising_lowering(const IsingChain& chain, std::size_t site, const NeighborConfig& config) {
    const std::size_t n = chain.size();
    if (site >= n) throw std::out_of_range("ising_lowering: site out of range");
    auto projector = [](int s) { return s > 0 ? ops::basis_op(2, 0, 0) : ops::basis_op(2, 1, 1); };

    ComplexMatrix out = ops::identity(1);
    for (std::size_t k = 0; k < n; ++k) {
        ComplexMatrix factor;
        if (k == site) {
            factor = ops::sigma_minus();
        } else if (k + 1 == site && config.left != 0) {
            factor = projector(config.left);
        } else if (k == site + 1 && config.right != 0) {
            factor = projector(config.right);
        } else {
            factor = ops::identity(2);
        }
        out = kron(out, factor);
    }
    return out;
}

ComplexMatrix collision_hamiltonian(const ComplexMatrix& h_sys, std::span<const AncillaSpec> active) {
    require_square(h_sys, "collision_hamiltonian");
    if (active.empty()) throw std::invalid_argument("collision_hamiltonian: no active ancillae");
    const std::size_t n_sys = qubits_of(h_sys);
    const std::size_t m = active.size();
    const std::size_t total = n_sys + m;

    ComplexMatrix h = kron(h_sys, ops::identity(std::size_t{1} << m));
    for (std::size_t a = 0; a < m; ++a) {
        validate(active[a], n_sys);
        const std::size_t anc_qubit = n_sys + a;
        h += active[a].h_b * ops::on_site(ops::sigma_z(), anc_qubit, total);
        h += active[a].g *
             ops::on_sites(ops::sigma_x(), active[a].target_site, ops::sigma_x(), anc_qubit, total);
    }
    return h;
}

}  // namespace colmod

// System, bath and collision Hamiltonians for the supported
// model families. Units: hbar = 1, energies/frequencies in rad/ns, time in ns.
// Spin convention: |0> = |up> is the +1 eigenstate of sigma_z; qubit 0 is the
// slowest Kronecker index.

#pragma once

#include "colmod/linalg.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace colmod {

struct TlsModel {
    double h_s = 1.0;
};

struct IsingChain {
    std::vector<double> fields;     // h_i, length N
    std::vector<double> couplings;  // J_i between spins i and i+1, length N-1

    std::size_t size() const { return fields.size(); }
};

// Two-spin XY model with a z-directed Dzyaloshinskii-Moriya term.
struct XyDmModel {
    double J = 1.0;
};

using HamiltonianSpec = std::variant<TlsModel, IsingChain, XyDmModel>;

void validate(const HamiltonianSpec& spec);
std::size_t qubit_count(const HamiltonianSpec& spec);
std::string model_name(const HamiltonianSpec& spec);

ComplexMatrix build(const HamiltonianSpec& spec);

struct AncillaSpec {
    double h_b = 1.0;           // ancilla half-gap, rad/ns
    double temperature_mK = 10.0;
    double g = 1e-3;            // coupling strength, rad/ns, >= 0
    std::size_t target_site = 0;
};

void validate(const AncillaSpec& anc, std::size_t n_sites);

// Neighbor configuration of a spin: `left`/`right` hold +1 (up), -1 (down) or 0
// when the neighbor does not exist (chain ends).
struct NeighborConfig {
    int left = 0;
    int right = 0;

    auto operator<=>(const NeighborConfig&) const = default;
    std::string label() const;  // e.g. "up,down", "-,up"
};

/// Frequencies omega(s_i) = E(site up) - E(site down) for each neighbor
/// configuration of `site`; 4 entries in the bulk, 2 at the chain ends (1 for N=1).
std::map<NeighborConfig, double> ising_transition_frequencies(const IsingChain& chain, std::size_t site);

/// |down><up|_site (x) |s><s|_neighbors on the full chain.
ComplexMatrix ising_lowering(const IsingChain& chain, std::size_t site, const NeighborConfig& config);

/// H_S (x) I + sum_n h_b sigma_z^(n) + sum_n g sigma_x^(target) sigma_x^(n) on
/// system (x) ancilla_1 (x) ... (x) ancilla_m. h_sys must act on qubits.
ComplexMatrix collision_hamiltonian(const ComplexMatrix& h_sys, std::span<const AncillaSpec> active);

}  // namespace colmod

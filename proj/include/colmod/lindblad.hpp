// Time-dependent Lindblad generators driven by collision
// windows, and a fixed-step RK4 integrator.
//
// Rates are the windowed collision spectra: zero between collisions, growing
// inside a window. Equations live in the interaction picture unless a
// Hamiltonian is supplied to lindblad_rhs.

#pragma once

#include "colmod/hamiltonians.hpp"
#include "colmod/linalg.hpp"
#include "colmod/schedule.hpp"
#include "colmod/states.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace colmod {

using RateFn = std::function<double(double)>;
using Rhs = std::function<ComplexMatrix(const ComplexMatrix&, double)>;

struct JumpTerm {
    ComplexMatrix op;
    RateFn rate;  // rad/ns, >= 0
    std::string label;
};

/// D(rho, o) = o rho o^dagger - 1/2 {o^dagger o, rho}
ComplexMatrix dissipator(const ComplexMatrix& rho, const ComplexMatrix& o);
inline ComplexMatrix dissipator(const DensityMatrix& rho, const ComplexMatrix& o) {
    return dissipator(rho.matrix(), o);
}

/// sum_k rate_k(t) D(rho, A_k), plus -i[H, rho] when `h` is given.
ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, double t, std::span<const JumpTerm> jumps,
                           const ComplexMatrix* h = nullptr);

/// Rate at system frequency `omega` supplied by ancilla `ancilla` of `schedule`,
/// nonzero only inside the slots where that ancilla collides. Slot k owns
/// [k tau_p, (k+1) tau_p); its rate uses the closed window [k tau_p, k tau_p + tau_c].
RateFn collision_rate(const CollisionSchedule& schedule, std::size_t ancilla, double omega, std::size_t rounds,
                      bool include_rotating = false);

// sigma_minus at 2 h_s and sigma_plus at -2 h_s, one pair per ancilla.
std::vector<JumpTerm> tls_jump_terms(const CollisionSchedule& schedule, double h_s, std::size_t rounds);
ComplexMatrix tls_rhs(const ComplexMatrix& rho, double t, const CollisionSchedule& schedule, double h_s);

// Ancilla -> (site, neighbour configuration) matches with |2 h_b - |omega(s)|| <= tol.
struct IsingMatch {
    std::size_t ancilla;
    std::size_t site;
    NeighborConfig config;
    double omega;
};
std::vector<IsingMatch> match_ising_ancillae(const IsingChain& chain, std::span<const AncillaSpec> ancillae,
                                             double tol = 1e-6);

std::vector<JumpTerm> ising_jump_terms(const IsingChain& chain, const CollisionSchedule& schedule,
                                       std::size_t rounds);
ComplexMatrix ising_rhs(const ComplexMatrix& rho, double t, const CollisionSchedule& schedule,
                        const IsingChain& chain);

/// Generic secular generator: every nonzero-frequency component of each
/// ancilla's coupling whose |omega| matches its gap.
std::vector<JumpTerm> secular_jump_terms(const ComplexMatrix& h_sys, const CollisionSchedule& schedule,
                                         std::size_t rounds, double tol = 1e-6);

/// Largest jump rate at time t.
double max_rate(std::span<const JumpTerm> jumps, double t);

/// ||rhs(rho, t)||_F.
double steady_state_residual(const Rhs& rhs, const ComplexMatrix& rho, double t);

struct IntegrationOptions {
    double dt = 1.0;
    std::vector<double> breakpoints;                   // steps land exactly here; samples are taken here
    std::vector<std::pair<double, double>> active;     // if non-empty, segments outside these are skipped
    std::size_t sample_stride = 0;                     // extra sample every n steps (0: off)
    double trace_tol = 1e-8;
    double negativity_tol = 1e-8;
};

struct IntegrationResult {
    std::vector<double> times;
    std::vector<ComplexMatrix> states;
};

/// Classical RK4 from t = 0 to t_end. Stored states are checked: trace drift
/// within trace_tol is renormalized, beyond it (or negativity beyond
/// negativity_tol) raises NumericalError.
IntegrationResult integrate(const Rhs& rhs, const DensityMatrix& rho0, double t_end,
                            const IntegrationOptions& options);

struct MasterOptions {
    std::optional<double> dt;     // default tau_c / 200; must be <= tau_c / 50
    bool schrodinger = false;     // add -i[H_S, rho]
    std::optional<std::size_t> rounds;
};

/// Integrate the generator built from `jumps` over the schedule and sample at
/// t = 0 and every slot end, mirroring the collision engine's sample points.
Trajectory run_master_equation(std::span<const JumpTerm> jumps, const ComplexMatrix& h_sys, const DensityMatrix& rho0,
                               const CollisionSchedule& schedule, const Sampler& sampler,
                               const MasterOptions& options = {});

}  // namespace colmod

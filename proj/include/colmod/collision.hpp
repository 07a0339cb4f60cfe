// Exact repeated-interaction dynamics. The system meets fresh
// thermal ancillae, the joint state evolves under the collision Hamiltonian
// for tau_c, and the ancillae are traced out.

#pragma once

#include "colmod/hamiltonians.hpp"
#include "colmod/schedule.hpp"
#include "colmod/states.hpp"

#include <cstddef>
#include <optional>
#include <span>

namespace colmod {

inline constexpr std::size_t kDefaultDimensionCap = std::size_t{1} << 12;

DensityMatrix collide(const DensityMatrix& rho_s, std::span<const AncillaSpec> active, double tau_c,
                      const ComplexMatrix& h_sys, std::size_t dimension_cap = kDefaultDimensionCap);

/// One sample per collision (Sequential) or per round (Simultaneous), taken at
/// the slot end, after an initial sample at t = 0. `rounds` overrides
/// schedule.count; 0 yields the initial sample only.
Trajectory run(const DensityMatrix& rho0, const CollisionSchedule& schedule, const ComplexMatrix& h_sys,
               const Sampler& sampler, std::optional<std::size_t> rounds = std::nullopt,
               std::size_t dimension_cap = kDefaultDimensionCap);

/// exp(i H t) rho exp(-i H t): removes the free rotation accumulated over `elapsed`.
ComplexMatrix to_interaction_picture(const ComplexMatrix& rho, const ComplexMatrix& h_sys, double elapsed);

}  // namespace colmod

#include "colmod/collision.hpp"

#include "colmod/errors.hpp"

#include <fmt/format.h>

#include <map>
#include <stdexcept>

namespace colmod {

namespace {

struct CollisionKernel {
    ComplexMatrix unitary;
    ComplexMatrix bath;  // product state of the fresh ancillae
    std::vector<std::size_t> dims;
};

CollisionKernel make_kernel(std::span<const AncillaSpec> active, double tau_c, const ComplexMatrix& h_sys,
                            std::size_t cap) {
    if (active.empty()) throw std::invalid_argument("collide: no active ancillae");
    if (!(tau_c > 0.0)) throw std::invalid_argument("collide: tau_c must be > 0");
    const auto dim_s = static_cast<std::size_t>(h_sys.rows());
    std::size_t joint = dim_s;
    for (std::size_t k = 0; k < active.size(); ++k) {
        joint *= 2;
        if (joint > cap) {
            throw ConfigError(fmt::format("collide: joint dimension {}x2^{} exceeds the cap {}", dim_s,
                                          active.size(), cap));
        }
    }

    CollisionKernel kernel;
    kernel.unitary = propagator(collision_hamiltonian(h_sys, active), tau_c);
    std::vector<ComplexMatrix> factors;
    kernel.dims.push_back(dim_s);
    for (const auto& a : active) {
        factors.push_back(thermal_state(a.h_b * ops::sigma_z(), Temperature(a.temperature_mK)).matrix());
        kernel.dims.push_back(2);
    }
    kernel.bath = kron_all(factors);
    return kernel;
}

DensityMatrix apply(const CollisionKernel& kernel, const DensityMatrix& rho_s) {
    if (rho_s.dim() != kernel.dims.front()) throw std::invalid_argument("collide: system dimension mismatch");
    const ComplexMatrix joint = kron(rho_s.matrix(), kernel.bath);
    const ComplexMatrix evolved = kernel.unitary * joint * kernel.unitary.adjoint();
    const std::size_t keep[] = {0};
    ComplexMatrix reduced = partial_trace(evolved, kernel.dims, keep);
    reduced = 0.5 * (reduced + reduced.adjoint());
    try {
        return DensityMatrix(std::move(reduced));
    } catch (const std::invalid_argument& e) {
        throw NumericalError(std::string("collide: reduced state invalid: ") + e.what());
    }
}

}  // namespace

DensityMatrix collide(const DensityMatrix& rho_s, std::span<const AncillaSpec> active, double tau_c,
                      const ComplexMatrix& h_sys, std::size_t dimension_cap) {
    return apply(make_kernel(active, tau_c, h_sys, dimension_cap), rho_s);
}

Trajectory run(const DensityMatrix& rho0, const CollisionSchedule& schedule, const ComplexMatrix& h_sys,
               const Sampler& sampler, std::optional<std::size_t> rounds, std::size_t dimension_cap) {
    std::size_t n_qubits = 0;
    for (auto d = static_cast<std::size_t>(h_sys.rows()); d > 1; d >>= 1) ++n_qubits;
    schedule.validate(n_qubits);
    if (rho0.dim() != static_cast<std::size_t>(h_sys.rows())) {
        throw std::invalid_argument("run: initial state and Hamiltonian dimensions differ");
    }

    Trajectory traj;
    traj.label = to_string(schedule.mode);
    DensityMatrix rho = rho0;
    traj.samples.push_back(sampler(0.0, rho));
    traj.states.push_back(rho.matrix());

    std::map<std::vector<std::size_t>, CollisionKernel> cache;
    for (const auto& slot : collision_slots(schedule, rounds.value_or(schedule.count))) {
        auto it = cache.find(slot.active);
        if (it == cache.end()) {
            std::vector<AncillaSpec> active;
            for (std::size_t a : slot.active) active.push_back(schedule.ancillae[a]);
            it = cache.emplace(slot.active, make_kernel(active, schedule.tau_c, h_sys, dimension_cap)).first;
        }
        rho = apply(it->second, rho);
        traj.samples.push_back(sampler(slot.end, rho));
        traj.states.push_back(rho.matrix());
    }
    return traj;
}

ComplexMatrix to_interaction_picture(const ComplexMatrix& rho, const ComplexMatrix& h_sys, double elapsed) {
    const ComplexMatrix u = propagator(h_sys, elapsed);
    return u.adjoint() * rho * u;
}

}  // namespace colmod

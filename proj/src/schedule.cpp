#include "colmod/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace colmod {

std::string to_string(CollisionMode mode) {
    return mode == CollisionMode::Sequential ? "sequential" : "simultaneous";
}

CollisionMode parse_mode(const std::string& text) {
    if (text == "sequential") return CollisionMode::Sequential;
    if (text == "simultaneous") return CollisionMode::Simultaneous;
    throw std::invalid_argument("unknown collision mode '" + text + "'");
}

void CollisionSchedule::validate(std::size_t n_sites) const {
    if (!(tau_c > 0.0) || !std::isfinite(tau_c)) throw std::invalid_argument("schedule: tau_c must be > 0");
    if (!(tau_p >= tau_c) || !std::isfinite(tau_p)) throw std::invalid_argument("schedule: tau_p must be >= tau_c");
    if (count < 1) throw std::invalid_argument("schedule: count must be >= 1");
    if (ancillae.empty()) throw std::invalid_argument("schedule: no ancillae");
    for (const auto& a : ancillae) colmod::validate(a, n_sites);
}

std::vector<CollisionSlot> collision_slots(const CollisionSchedule& schedule, std::size_t rounds) {
    std::vector<CollisionSlot> slots;
    const std::size_t k = schedule.ancillae.size();
    auto add = [&](std::vector<std::size_t> active) {
        const double start = static_cast<double>(slots.size()) * schedule.tau_p;
        slots.push_back({start, start + schedule.tau_c, std::move(active)});
    };
    for (std::size_t r = 0; r < rounds; ++r) {
        if (schedule.mode == CollisionMode::Sequential) {
            for (std::size_t a = 0; a < k; ++a) add({a});
        } else {
            std::vector<std::size_t> all(k);
            for (std::size_t a = 0; a < k; ++a) all[a] = a;
            add(std::move(all));
        }
    }
    return slots;
}

Sampler::Sampler(const ComplexMatrix& h_sys, DensityMatrix target) : target_(std::move(target)) {
    require_square(h_sys, "Sampler");
    if (static_cast<std::size_t>(h_sys.rows()) != target_.dim()) {
        throw std::invalid_argument("Sampler: Hamiltonian and target dimensions differ");
    }
    const ComplexMatrix off = h_sys - ComplexMatrix(h_sys.diagonal().asDiagonal());
    basis_ = off.norm() == 0.0 ? ops::identity(target_.dim()) : eig_hermitian(h_sys).eigenvectors;
}

Sample Sampler::operator()(double t, const DensityMatrix& rho) const {
    return {t, fidelity(rho, target_), populations(rho.matrix(), basis_), rho.trace(), rho.purity()};
}

}  // namespace colmod

#include "colmod/lindblad.hpp"

#include "colmod/errors.hpp"
#include "colmod/spectra.hpp"
#include "colmod/transitions.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace colmod {

ComplexMatrix dissipator(const ComplexMatrix& rho, const ComplexMatrix& o) {
    if (rho.rows() != o.rows() || rho.cols() != o.cols() || rho.rows() != rho.cols()) {
        throw std::invalid_argument(
            fmt::format("dissipator: dimension mismatch ({}x{} vs {}x{})", rho.rows(), rho.cols(), o.rows(), o.cols()));
    }
    const ComplexMatrix od = o.adjoint();
    const ComplexMatrix odo = od * o;
    return o * rho * od - 0.5 * (odo * rho + rho * odo);
}

ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, double t, std::span<const JumpTerm> jumps,
                           const ComplexMatrix* h) {
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    if (h) out = -I_UNIT * (*h * rho - rho * *h);
    for (const auto& j : jumps) {
        const double r = j.rate(t);
        if (r != 0.0) out += r * dissipator(rho, j.op);
    }
    return out;
}

RateFn collision_rate(const CollisionSchedule& schedule, std::size_t ancilla, double omega, std::size_t rounds,
                      bool include_rotating) {
    if (ancilla >= schedule.ancillae.size()) throw std::out_of_range("collision_rate: ancilla index");
    auto slots = std::make_shared<const std::vector<CollisionSlot>>(collision_slots(schedule, rounds));
    const double tau_p = schedule.tau_p;
    const AncillaSpec anc = schedule.ancillae[ancilla];
    return [slots, tau_p, anc, ancilla, omega, include_rotating](double t) {
        if (t < 0.0) return 0.0;
        if (slots->empty() || t > slots->back().end) return 0.0;
        auto k = std::min(static_cast<std::size_t>(std::floor(t / tau_p)), slots->size() - 1);
        // Division rounding can land one slot off near a boundary.
        if (k > 0 && t < (*slots)[k].start) --k;
        if (k + 1 < slots->size() && t >= (*slots)[k + 1].start) ++k;
        const auto& slot = (*slots)[k];
        if (std::find(slot.active.begin(), slot.active.end(), ancilla) == slot.active.end()) return 0.0;
        return dissipation_rate({omega, t, anc, slot.start, slot.end}, include_rotating);
    };
}

std::vector<JumpTerm> tls_jump_terms(const CollisionSchedule& schedule, double h_s, std::size_t rounds) {
    std::vector<JumpTerm> out;
    for (std::size_t a = 0; a < schedule.ancillae.size(); ++a) {
        out.push_back({ops::sigma_minus(), collision_rate(schedule, a, 2.0 * h_s, rounds), fmt::format("sm[{}]", a)});
        out.push_back({ops::sigma_plus(), collision_rate(schedule, a, -2.0 * h_s, rounds), fmt::format("sp[{}]", a)});
    }
    return out;
}

ComplexMatrix tls_rhs(const ComplexMatrix& rho, double t, const CollisionSchedule& schedule, double h_s) {
    for (const auto& a : schedule.ancillae)
        if (a.target_site != 0) throw std::invalid_argument("tls_rhs: schedule must target a single qubit");
    const auto jumps = tls_jump_terms(schedule, h_s, schedule.count);
    return lindblad_rhs(rho, t, jumps);
}

std::vector<IsingMatch> match_ising_ancillae(const IsingChain& chain, std::span<const AncillaSpec> ancillae,
                                             double tol) {
    std::vector<IsingMatch> out;
    for (std::size_t a = 0; a < ancillae.size(); ++a) {
        const auto& anc = ancillae[a];
        validate(anc, chain.size());
        bool matched = false;
        for (const auto& [config, omega] : ising_transition_frequencies(chain, anc.target_site)) {
            if (std::abs(2.0 * anc.h_b - std::abs(omega)) <= tol) {
                out.push_back({a, anc.target_site, config, omega});
                matched = true;
            }
        }
        if (!matched) {
            throw ConfigError(fmt::format("ancilla {} (h_b = {}, site {}) matches no transition of the chain", a,
                                          anc.h_b, anc.target_site));
        }
    }
    return out;
}

std::vector<JumpTerm> ising_jump_terms(const IsingChain& chain, const CollisionSchedule& schedule,
                                       std::size_t rounds) {
    std::vector<JumpTerm> out;
    for (const auto& m : match_ising_ancillae(chain, schedule.ancillae)) {
        const ComplexMatrix lower = ising_lowering(chain, m.site, m.config);
        const std::string tag = fmt::format("{}:{}[{}]", m.site, m.config.label(), m.ancilla);
        out.push_back({lower, collision_rate(schedule, m.ancilla, m.omega, rounds), "sm" + tag});
        out.push_back({lower.adjoint(), collision_rate(schedule, m.ancilla, -m.omega, rounds), "sp" + tag});
    }
    return out;
}

ComplexMatrix ising_rhs(const ComplexMatrix& rho, double t, const CollisionSchedule& schedule,
                        const IsingChain& chain) {
    const auto jumps = ising_jump_terms(chain, schedule, schedule.count);
    return lindblad_rhs(rho, t, jumps);
}

std::vector<JumpTerm> secular_jump_terms(const ComplexMatrix& h_sys, const CollisionSchedule& schedule,
                                         std::size_t rounds, double tol) {
    std::size_t n_qubits = 0;
    for (auto d = static_cast<std::size_t>(h_sys.rows()); d > 1; d >>= 1) ++n_qubits;

    std::vector<JumpTerm> out;
    for (std::size_t a = 0; a < schedule.ancillae.size(); ++a) {
        const auto& anc = schedule.ancillae[a];
        validate(anc, n_qubits);
        const ComplexMatrix coupling[] = {ops::on_site(ops::sigma_x(), anc.target_site, n_qubits)};
        bool matched = false;
        for (auto& group : jump_set(h_sys, coupling, false, tol)) {
            if (std::abs(std::abs(group.omega) - 2.0 * anc.h_b) > tol) continue;
            matched = true;
            out.push_back({std::move(group.op), collision_rate(schedule, a, group.omega, rounds),
                           fmt::format("A({:.6g})[{}]", group.omega, a)});
        }
        if (!matched) {
            throw ConfigError(fmt::format("ancilla {} (h_b = {}, site {}) matches no transition of the system", a,
                                          anc.h_b, anc.target_site));
        }
    }
    return out;
}

double max_rate(std::span<const JumpTerm> jumps, double t) {
    double m = 0.0;
    for (const auto& j : jumps) m = std::max(m, j.rate(t));
    return m;
}

double steady_state_residual(const Rhs& rhs, const ComplexMatrix& rho, double t) {
    return rhs(rho, t).norm();
}

namespace {

ComplexMatrix checked_state(ComplexMatrix rho, double t, const IntegrationOptions& opt) {
    rho = 0.5 * (rho + rho.adjoint());
    const double tr = rho.trace().real();
    if (!(std::abs(tr - 1.0) <= opt.trace_tol)) {
        throw NumericalError(fmt::format("integrate: trace drifted to {:.12g} at t = {} ns", tr, t));
    }
    rho /= tr;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho, Eigen::EigenvaluesOnly);
    const double min_eig = solver.eigenvalues().minCoeff();
    if (min_eig < -opt.negativity_tol) {
        throw NumericalError(fmt::format("integrate: eigenvalue {:.3e} below zero at t = {} ns", min_eig, t));
    }
    return rho;
}

bool overlaps_active(double a, double b, const IntegrationOptions& opt) {
    if (opt.active.empty()) return true;
    return std::any_of(opt.active.begin(), opt.active.end(),
                       [&](const auto& w) { return w.first < b && w.second > a; });
}

}  // namespace

IntegrationResult integrate(const Rhs& rhs, const DensityMatrix& rho0, double t_end,
                            const IntegrationOptions& options) {
    if (!(options.dt > 0.0) || !std::isfinite(options.dt)) throw std::invalid_argument("integrate: dt must be > 0");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("integrate: t_end must be >= 0");

    std::vector<double> nodes{0.0};
    for (double b : options.breakpoints)
        if (b > 0.0 && b < t_end) nodes.push_back(b);
    nodes.push_back(t_end);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    IntegrationResult out;
    ComplexMatrix rho = rho0.matrix();
    out.times.push_back(0.0);
    out.states.push_back(rho);

    std::size_t steps_taken = 0;
    for (std::size_t s = 0; s + 1 < nodes.size(); ++s) {
        const double a = nodes[s];
        const double b = nodes[s + 1];
        if (overlaps_active(a, b, options)) {
            const auto n = static_cast<std::size_t>(std::ceil((b - a) / options.dt - 1e-9));
            const double h = (b - a) / static_cast<double>(n);
            // Rates are piecewise; evaluate the segment end from the inside.
            const double b_inside = std::nextafter(b, a);
            auto f = [&](const ComplexMatrix& x, double t) { return rhs(x, std::min(t, b_inside)); };
            for (std::size_t i = 0; i < n; ++i) {
                const double t = a + h * static_cast<double>(i);
                const double t_next = i + 1 == n ? b : a + h * static_cast<double>(i + 1);
                const ComplexMatrix k1 = f(rho, t);
                const ComplexMatrix k2 = f(rho + 0.5 * h * k1, t + 0.5 * h);
                const ComplexMatrix k3 = f(rho + 0.5 * h * k2, t + 0.5 * h);
                const ComplexMatrix k4 = f(rho + h * k3, t_next);
                rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                ++steps_taken;
                if (options.sample_stride > 0 && steps_taken % options.sample_stride == 0 && i + 1 < n) {
                    rho = checked_state(std::move(rho), t_next, options);
                    out.times.push_back(t_next);
                    out.states.push_back(rho);
                }
            }
        }
        rho = checked_state(std::move(rho), b, options);
        out.times.push_back(b);
        out.states.push_back(rho);
    }
    return out;
}

Trajectory run_master_equation(std::span<const JumpTerm> jumps, const ComplexMatrix& h_sys, const DensityMatrix& rho0,
                               const CollisionSchedule& schedule, const Sampler& sampler,
                               const MasterOptions& options) {
    const double dt = options.dt.value_or(schedule.tau_c / 200.0);
    if (!(dt > 0.0) || dt > schedule.tau_c / 50.0 * (1.0 + 1e-12)) {
        throw ConfigError(fmt::format("master equation: dt = {} must lie in (0, tau_c/50]", dt));
    }
    if (static_cast<std::size_t>(h_sys.rows()) != rho0.dim()) {
        throw std::invalid_argument("run_master_equation: state and Hamiltonian dimensions differ");
    }
    const std::size_t rounds = options.rounds.value_or(schedule.count);
    const auto slots = collision_slots(schedule, rounds);

    IntegrationOptions opt;
    opt.dt = dt;
    for (const auto& s : slots) {
        opt.breakpoints.push_back(s.start);
        opt.breakpoints.push_back(s.end);
        if (!options.schrodinger) opt.active.emplace_back(s.start, s.end);
    }
    const double t_end = slots.empty() ? 0.0 : slots.back().end;

    const ComplexMatrix* h = options.schrodinger ? &h_sys : nullptr;
    Rhs rhs = [jumps, h](const ComplexMatrix& rho, double t) { return lindblad_rhs(rho, t, jumps, h); };
    const auto result = integrate(rhs, rho0, t_end, opt);

    Trajectory traj;
    traj.label = "master";
    auto record = [&](double t, const ComplexMatrix& m) {
        const DensityMatrix rho(m, 1e-8);
        traj.samples.push_back(sampler(t, rho));
        traj.states.push_back(m);
    };
    record(0.0, result.states.front());
    std::size_t next = 0;
    for (std::size_t i = 1; i < result.times.size() && next < slots.size(); ++i) {
        if (result.times[i] == slots[next].end) {
            record(result.times[i], result.states[i]);
            ++next;
        }
    }
    return traj;
}

}  // namespace colmod

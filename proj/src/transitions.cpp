#include "colmod/transitions.hpp"

#include "colmod/spectra.hpp"
#include "colmod/states.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace colmod {

namespace {

ComplexMatrix level_projector(const EigenDecomposition& eig, const EnergyLevel& level) {
    const auto n = static_cast<Eigen::Index>(eig.dim());
    ComplexMatrix p = ComplexMatrix::Zero(n, n);
    for (std::size_t k : level.states) {
        const ComplexVector v = eig.state(k);
        p += v * v.adjoint();
    }
    return p;
}

// Rows of the stacked maps X -> [X, A] acting on column-major vec(X).
ComplexMatrix stacked_commutator_map(std::span<const ComplexMatrix> jumps, std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    std::vector<ComplexMatrix> gens;
    for (const auto& a : jumps) {
        if (a.rows() != n || a.cols() != n) throw std::invalid_argument("uniqueness_check: jump dimension mismatch");
        const double nrm = a.norm();
        if (nrm == 0.0) continue;
        gens.push_back(a / nrm);
        gens.push_back(a.adjoint() / nrm);
    }
    ComplexMatrix stacked = ComplexMatrix::Zero(static_cast<Eigen::Index>(gens.size()) * n * n, n * n);
    for (std::size_t g = 0; g < gens.size(); ++g) {
        // vec(X A) - vec(A X) = (A^T (x) I - I (x) A) vec(X)
        stacked.middleRows(static_cast<Eigen::Index>(g) * n * n, n * n) =
            kron(gens[g].transpose(), id) - kron(id, gens[g]);
    }
    return stacked;
}

std::size_t numerical_rank(const ComplexMatrix& m) {
    if (m.size() == 0) return 0;
    Eigen::BDCSVD<ComplexMatrix> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    std::size_t r = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k)
        if (s(k) > kNullspaceRelTol * s(0)) ++r;
    return r;
}

std::size_t qubit_count_of(const ComplexMatrix& h) {
    std::size_t n = 0;
    for (auto d = static_cast<std::size_t>(h.rows()); d > 1; d >>= 1) ++n;
    return n;
}

}  // namespace

std::vector<EnergyLevel> energy_levels(const EigenDecomposition& eig, double tol) {
    std::vector<EnergyLevel> levels;
    for (std::size_t k = 0; k < eig.dim(); ++k) {
        const double e = eig.eigenvalues(static_cast<Eigen::Index>(k));
        if (!levels.empty() && e - eig.eigenvalues(static_cast<Eigen::Index>(levels.back().states.back())) <= tol) {
            levels.back().states.push_back(k);
        } else {
            levels.push_back({e, {k}});
        }
    }
    for (auto& level : levels) {
        double sum = 0.0;
        for (std::size_t k : level.states) sum += eig.eigenvalues(static_cast<Eigen::Index>(k));
        level.energy = sum / static_cast<double>(level.states.size());
    }
    return levels;
}

std::vector<TransitionOperator> transition_operators(const ComplexMatrix& h) {
    const auto eig = eig_hermitian(h);
    const auto levels = energy_levels(eig);
    std::vector<double> level_energy(eig.dim());
    for (const auto& level : levels)
        for (std::size_t k : level.states) level_energy[k] = level.energy;

    std::vector<TransitionOperator> out;
    out.reserve(eig.dim() * eig.dim());
    for (std::size_t k = 0; k < eig.dim(); ++k) {
        for (std::size_t l = 0; l < eig.dim(); ++l) {
            const double omega = level_energy[l] - level_energy[k];
            out.push_back({k, l, omega, eig.state(k) * eig.state(l).adjoint(), std::abs(omega) <= kDegeneracyTol});
        }
    }
    return out;
}

ComplexMatrix TransitionTable::reconstruct() const {
    const auto n = static_cast<Eigen::Index>(decomposition.dim());
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (const auto& e : entries) out += e.coefficient * decomposition.state(e.k) * decomposition.state(e.l).adjoint();
    return out;
}

std::vector<TransitionEntry> TransitionTable::nonzero(double tol) const {
    std::vector<TransitionEntry> out;
    std::copy_if(entries.begin(), entries.end(), std::back_inserter(out),
                 [tol](const TransitionEntry& e) { return std::abs(e.coefficient) > tol; });
    return out;
}

TransitionTable decompose(const ComplexMatrix& o, const EigenDecomposition& decomposition) {
    if (static_cast<std::size_t>(o.rows()) != decomposition.dim() || o.rows() != o.cols()) {
        throw std::invalid_argument("decompose: operator and decomposition dimensions differ");
    }
    const auto levels = energy_levels(decomposition);
    std::vector<double> level_energy(decomposition.dim());
    for (const auto& level : levels)
        for (std::size_t k : level.states) level_energy[k] = level.energy;

    const ComplexMatrix in_eigenbasis = decomposition.eigenvectors.adjoint() * o * decomposition.eigenvectors;
    TransitionTable table{decomposition, {}};
    for (std::size_t k = 0; k < decomposition.dim(); ++k) {
        for (std::size_t l = 0; l < decomposition.dim(); ++l) {
            table.entries.push_back({k, l, level_energy[l] - level_energy[k],
                                     in_eigenbasis(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l))});
        }
    }
    return table;
}

ComplexVector vectorize(const ComplexMatrix& m) {
    ComplexVector v(m.size());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
    return v;
}

ComplexMatrix unvectorize(const ComplexVector& v, std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    if (v.size() != n * n) throw std::invalid_argument("unvectorize: length is not dim^2");
    ComplexMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = v(i * n + j);
    return m;
}

ComplexVector MMatrix::to_eigenbasis(const ComplexVector& comp_vec) const {
    // M is unitary, so its inverse is the adjoint.
    return matrix.adjoint() * comp_vec;
}

MMatrix m_matrix(const EigenDecomposition& decomposition) {
    const ComplexMatrix& u = decomposition.eigenvectors;
    return {kron(u, u.conjugate())};
}

std::vector<JumpGroup> jump_set(const ComplexMatrix& h_sys, std::span<const ComplexMatrix> coupling_ops,
                                bool include_zero_freq, double secular_tol) {
    const auto eig = eig_hermitian(h_sys);
    const auto levels = energy_levels(eig);
    std::vector<ComplexMatrix> projectors;
    for (const auto& level : levels) projectors.push_back(level_projector(eig, level));

    std::vector<JumpGroup> out;
    for (std::size_t src = 0; src < coupling_ops.size(); ++src) {
        const ComplexMatrix& o = coupling_ops[src];
        if (o.rows() != h_sys.rows() || o.cols() != h_sys.cols())
            throw std::invalid_argument("jump_set: coupling operator dimension mismatch");
        if (!is_hermitian(o)) throw std::invalid_argument("jump_set: coupling operators must be Hermitian");

        std::vector<JumpGroup> groups;
        for (std::size_t a = 0; a < levels.size(); ++a) {
            for (std::size_t b = 0; b < levels.size(); ++b) {
                const double omega = levels[b].energy - levels[a].energy;
                if (!include_zero_freq && std::abs(omega) <= secular_tol) continue;
                ComplexMatrix part = projectors[a] * o * projectors[b];
                if (part.norm() <= 1e-12) continue;
                auto it = std::find_if(groups.begin(), groups.end(), [&](const JumpGroup& g) {
                    return std::abs(g.omega - omega) <= secular_tol;
                });
                if (it == groups.end()) {
                    groups.push_back({omega, std::move(part), src});
                } else {
                    it->op += part;
                }
            }
        }
        std::sort(groups.begin(), groups.end(),
                  [](const JumpGroup& x, const JumpGroup& y) { return x.omega > y.omega; });
        for (auto& g : groups) out.push_back(std::move(g));
    }
    return out;
}

std::vector<ComplexMatrix> zero_frequency_transitions(const ComplexMatrix& h) {
    std::vector<ComplexMatrix> out;
    for (const auto& t : transition_operators(h))
        if (t.degenerate && t.k != t.l) out.push_back(t.op);
    return out;
}

UniquenessReport uniqueness_check(std::span<const ComplexMatrix> jumps) {
    if (jumps.empty()) throw std::invalid_argument("uniqueness_check: empty jump set");
    const auto dim = static_cast<std::size_t>(jumps.front().rows());
    const auto n2 = static_cast<Eigen::Index>(dim * dim);

    UniquenessReport report;

    // Span closure under adjoint: adding the adjoints must not increase the rank.
    ComplexMatrix span(n2, static_cast<Eigen::Index>(jumps.size()));
    ComplexMatrix span_adj(n2, static_cast<Eigen::Index>(2 * jumps.size()));
    for (std::size_t k = 0; k < jumps.size(); ++k) {
        const double nrm = jumps[k].norm();
        const ComplexMatrix a = nrm > 0 ? ComplexMatrix(jumps[k] / nrm) : jumps[k];
        span.col(static_cast<Eigen::Index>(k)) = vectorize(a);
        span_adj.col(static_cast<Eigen::Index>(2 * k)) = vectorize(a);
        span_adj.col(static_cast<Eigen::Index>(2 * k + 1)) = vectorize(a.adjoint());
    }
    report.adjoint_closed = numerical_rank(span) == numerical_rank(span_adj);

    report.commutant_dim = commutant_basis(jumps).size();
    report.unique = report.adjoint_closed && report.commutant_dim == 1;
    return report;
}

std::vector<ComplexMatrix> commutant_basis(std::span<const ComplexMatrix> jumps) {
    if (jumps.empty()) throw std::invalid_argument("commutant_basis: empty jump set");
    const auto dim = static_cast<std::size_t>(jumps.front().rows());
    const auto n = static_cast<Eigen::Index>(dim);
    const ComplexMatrix stacked = stacked_commutator_map(jumps, dim);

    std::vector<ComplexMatrix> basis;
    if (stacked.rows() == 0) {
        for (Eigen::Index c = 0; c < n * n; ++c) {
            ComplexMatrix e = ComplexMatrix::Zero(n, n);
            e(c % n, c / n) = 1.0;
            basis.push_back(e);
        }
        return basis;
    }
    Eigen::BDCSVD<ComplexMatrix> svd(stacked, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double cutoff = kNullspaceRelTol * (s.size() > 0 ? s(0) : 0.0);
    for (Eigen::Index c = 0; c < n * n; ++c) {
        const bool null_direction = c >= s.size() || s(c) <= cutoff;
        if (!null_direction) continue;
        const ComplexVector v = svd.matrixV().col(c);
        basis.push_back(Eigen::Map<const ComplexMatrix>(v.data(), n, n));  // column-major vec
    }
    return basis;
}

std::vector<ZeroFrequencyObstruction> zero_frequency_obstructions(const ComplexMatrix& h_sys,
                                                                  std::span<const ComplexMatrix> coupling_ops) {
    const auto eig = eig_hermitian(h_sys);
    std::vector<ZeroFrequencyObstruction> out;
    for (const auto& level : energy_levels(eig)) {
        if (level.states.size() < 2) continue;
        const ComplexMatrix p = level_projector(eig, level);
        ZeroFrequencyObstruction obs{level.energy, level.states.size(), {}};
        for (const auto& o : coupling_ops) {
            // Off-diagonal weight inside the level: the part that mixes degenerate states.
            ComplexMatrix inner = p * o * p;
            const ComplexMatrix in_eig = eig.eigenvectors.adjoint() * inner * eig.eigenvectors;
            double diag = 0.0;
            for (std::size_t k : level.states) {
                const auto i = static_cast<Eigen::Index>(k);
                diag += std::norm(in_eig(i, i));
            }
            obs.coupling_weight.push_back(std::sqrt(std::max(0.0, inner.squaredNorm() - diag)));
        }
        out.push_back(std::move(obs));
    }
    return out;
}

std::vector<CorrelationCheck> bath_correlation_check(const ComplexMatrix& h_sys, std::span<const AncillaSpec> ancillae,
                                                     double tau_c, double secular_tol) {
    const std::size_t n_qubits = qubit_count_of(h_sys);

    // Which ancillae drive which frequency (sign-resolved).
    std::map<double, std::vector<std::size_t>> drivers;
    for (std::size_t a = 0; a < ancillae.size(); ++a) {
        const ComplexMatrix coupling = ops::on_site(ops::sigma_x(), ancillae[a].target_site, n_qubits);
        const ComplexMatrix single[] = {coupling};
        for (const auto& group : jump_set(h_sys, single, false, secular_tol)) {
            if (std::abs(std::abs(group.omega) - 2.0 * ancillae[a].h_b) > secular_tol) continue;
            auto it = std::find_if(drivers.begin(), drivers.end(),
                                   [&](const auto& kv) { return std::abs(kv.first - group.omega) <= secular_tol; });
            auto& list = it == drivers.end() ? drivers[group.omega] : it->second;
            if (std::find(list.begin(), list.end(), a) == list.end()) list.push_back(a);
        }
    }

    auto sigma_x_mean = [](const AncillaSpec& anc) {
        const auto rho = thermal_state(anc.h_b * ops::sigma_z(), Temperature(anc.temperature_mK));
        return (rho.matrix() * ops::sigma_x()).trace();
    };

    std::vector<CorrelationCheck> out;
    for (const auto& [omega, list] : drivers) {
        const auto m = static_cast<Eigen::Index>(list.size());
        ComplexMatrix c = ComplexMatrix::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            const auto& ai = ancillae[list[static_cast<std::size_t>(i)]];
            for (Eigen::Index j = 0; j < m; ++j) {
                const auto& aj = ancillae[list[static_cast<std::size_t>(j)]];
                if (i == j) {
                    // Integrated Lindblad coefficient over one collision window.
                    const int steps = 400;
                    double integral = 0.0;
                    for (int s = 0; s <= steps; ++s) {
                        const double t = tau_c * s / steps;
                        const double w = (s == 0 || s == steps) ? 1.0 : (s % 2 ? 4.0 : 2.0);
                        integral += w * dissipation_rate({omega, t, ai, 0.0, tau_c});
                    }
                    c(i, j) = integral * tau_c / (3.0 * steps);
                } else {
                    // Independent thermal ancillae: the connected correlation factorizes.
                    c(i, j) = ai.g * aj.g * tau_c * tau_c * std::conj(sigma_x_mean(ai)) * sigma_x_mean(aj);
                }
            }
        }
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (c + c.adjoint()), Eigen::EigenvaluesOnly);
        const double min_eig = solver.eigenvalues().minCoeff();
        out.push_back({omega, list, c, min_eig, min_eig > 0.0});
    }
    return out;
}

}  // namespace colmod

#include "colmod/experiments.hpp"

#include "colmod/collision.hpp"
#include "colmod/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <regex>
#include <thread>

namespace colmod {

namespace {

std::size_t qubits_of(const ComplexMatrix& h) {
    std::size_t n = 0;
    for (auto d = static_cast<std::size_t>(h.rows()); d > 1; d >>= 1) ++n;
    return n;
}

// Runs job(i) for i in [0, jobs) on a small pool; the first exception is rethrown.
template <typename F>
void parallel_for(std::size_t jobs, std::size_t threads, F&& job) {
    const std::size_t workers = resolve_threads(threads, jobs);
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < jobs; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

Temperature bath_temperature(const ExperimentConfig& cfg) { return Temperature(cfg.temperature_mK); }

}  // namespace

std::size_t resolve_threads(std::size_t requested, std::size_t jobs) {
    std::size_t n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
    return std::max<std::size_t>(1, std::min(n, jobs));
}

StateDescriptor parse_state(const std::string& text) {
    static const std::regex thermal(R"(thermal\(\s*([^)]+?)\s*\))");
    static const std::regex basis(R"(basis\(\s*([01]+)\s*\))");
    static const std::regex eigen(R"(eigenstate\(\s*(\d+)\s*\))");
    StateDescriptor d;
    d.text = text;
    std::smatch m;
    if (text == "excited") {
        d.kind = StateDescriptor::Kind::Excited;
    } else if (text == "ground") {
        d.kind = StateDescriptor::Kind::Ground;
    } else if (text == "infinite-temperature") {
        d.kind = StateDescriptor::Kind::InfiniteTemperature;
    } else if (std::regex_match(text, m, thermal)) {
        d.kind = StateDescriptor::Kind::Thermal;
        try {
            std::size_t used = 0;
            d.temperature_mK = std::stod(m[1].str(), &used);
            if (used != m[1].str().size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ConfigError(fmt::format("initial state '{}': bad temperature", text));
        }
        if (!(d.temperature_mK > 0.0)) throw ConfigError(fmt::format("initial state '{}': T must be > 0", text));
    } else if (std::regex_match(text, m, basis)) {
        d.kind = StateDescriptor::Kind::Basis;
        d.bits = m[1].str();
    } else if (std::regex_match(text, m, eigen)) {
        d.kind = StateDescriptor::Kind::Eigenstate;
        d.index = std::stoul(m[1].str());
    } else {
        throw ConfigError(fmt::format("unknown initial state '{}'", text));
    }
    return d;
}

DensityMatrix prepare_state(const StateDescriptor& d, const ComplexMatrix& h_sys) {
    const auto dim = static_cast<std::size_t>(h_sys.rows());
    switch (d.kind) {
        case StateDescriptor::Kind::InfiniteTemperature:
            return DensityMatrix::maximally_mixed(dim);
        case StateDescriptor::Kind::Thermal:
            return thermal_state(h_sys, Temperature(d.temperature_mK));
        case StateDescriptor::Kind::Basis: {
            if (d.bits.size() != qubits_of(h_sys)) {
                throw ConfigError(fmt::format("initial state '{}': expected {} bits", d.text, qubits_of(h_sys)));
            }
            std::size_t index = 0;
            for (char c : d.bits) index = 2 * index + static_cast<std::size_t>(c - '0');
            return DensityMatrix::basis_state(dim, index);
        }
        case StateDescriptor::Kind::Excited:
        case StateDescriptor::Kind::Ground:
        case StateDescriptor::Kind::Eigenstate: {
            const auto eig = eig_hermitian(h_sys);
            std::size_t k = d.index;
            if (d.kind == StateDescriptor::Kind::Excited) k = dim - 1;
            if (d.kind == StateDescriptor::Kind::Ground) k = 0;
            if (k >= dim) throw ConfigError(fmt::format("initial state '{}': index out of range", d.text));
            return DensityMatrix::pure(eig.state(k));
        }
    }
    throw ConfigError("unhandled initial state");
}

HamiltonianSpec model_spec(const ExperimentConfig& cfg) {
    HamiltonianSpec spec;
    if (cfg.model == "tls") {
        spec = TlsModel{cfg.h_s};
    } else if (cfg.model == "ising") {
        spec = IsingChain{cfg.fields, cfg.couplings};
    } else if (cfg.model == "xydm") {
        spec = XyDmModel{cfg.J};
    } else {
        throw ConfigError(fmt::format("unknown model '{}'", cfg.model));
    }
    try {
        validate(spec);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return spec;
}

std::vector<AncillaSpec> resolve_ancillae(const ExperimentConfig& cfg, const ComplexMatrix& h_sys) {
    const std::size_t n = qubits_of(h_sys);
    for (std::size_t s : cfg.sites)
        if (s >= n) throw ConfigError(fmt::format("bath.sites: site {} outside a {}-qubit system", s, n));

    std::vector<AncillaSpec> out;
    if (!cfg.h_b.empty()) {
        for (std::size_t k = 0; k < cfg.h_b.size(); ++k) {
            const std::size_t site = cfg.sites.size() == 1 ? cfg.sites[0] : cfg.sites[k];
            out.push_back({cfg.h_b[k], cfg.temperature_mK, cfg.g, site});
        }
        return out;
    }
    for (std::size_t site : cfg.sites) {
        const ComplexMatrix coupling[] = {ops::on_site(ops::sigma_x(), site, n)};
        std::vector<double> gaps;
        for (const auto& group : jump_set(h_sys, coupling, false)) {
            const double gap = std::abs(group.omega) / 2.0;
            if (std::none_of(gaps.begin(), gaps.end(), [&](double x) { return std::abs(x - gap) <= kSecularTol; }))
                gaps.push_back(gap);
        }
        std::sort(gaps.begin(), gaps.end(), std::greater<>());
        for (double gap : gaps) out.push_back({gap, cfg.temperature_mK, cfg.g, site});
    }
    if (out.empty()) throw ConfigError("no transition is reachable from the coupled sites");
    return out;
}

CollisionSchedule make_schedule(const ExperimentConfig& cfg, std::vector<AncillaSpec> ancillae) {
    CollisionSchedule s;
    s.tau_c = cfg.tau_c;
    s.tau_p = cfg.tau_p;
    s.count = cfg.count;
    s.mode = cfg.mode;
    s.ancillae = std::move(ancillae);
    return s;
}

std::vector<JumpTerm> model_jump_terms(const HamiltonianSpec& spec, const CollisionSchedule& schedule,
                                       std::size_t rounds) {
    if (const auto* tls = std::get_if<TlsModel>(&spec)) return tls_jump_terms(schedule, tls->h_s, rounds);
    if (const auto* chain = std::get_if<IsingChain>(&spec)) return ising_jump_terms(*chain, schedule, rounds);
    return secular_jump_terms(build(spec), schedule, rounds);
}

Trajectory run_engine(const ExperimentConfig& cfg, const HamiltonianSpec& spec, const CollisionSchedule& schedule,
                      const DensityMatrix& rho0, const Sampler& sampler) {
    const ComplexMatrix h = build(spec);
    if (cfg.engine == "master") {
        const auto jumps = model_jump_terms(spec, schedule, schedule.count);
        MasterOptions opt;
        if (cfg.dt > 0.0) opt.dt = cfg.dt;
        return run_master_equation(jumps, h, rho0, schedule, sampler, opt);
    }
    try {
        return run(rho0, schedule, h, sampler);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

std::vector<double> sweep_columns(const ExperimentConfig& cfg) {
    std::vector<double> cols;
    for (std::size_t i = 0; i < cfg.steps; ++i) {
        cols.push_back(cfg.h_b_min + (cfg.h_b_max - cfg.h_b_min) * static_cast<double>(i) /
                                         static_cast<double>(cfg.steps - 1));
    }
    for (double x : cfg.extra_h_b) cols.push_back(x);
    if (cfg.nulls) {
        // delta = 2 h_s - 2 h_b with delta tau_c = 2 pi k
        for (int k : {1, 2}) {
            for (int sign : {-1, 1}) {
                const double h_b = cfg.h_s + sign * k * std::numbers::pi / cfg.tau_c;
                if (h_b > 0.0) cols.push_back(h_b);
            }
        }
    }
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end(), [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
               cols.end());
    return cols;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
    if (cfg.model != "tls") throw ConfigError("sweep runs on the tls model");
    const HamiltonianSpec spec = model_spec(cfg);
    const ComplexMatrix h = build(spec);
    const auto rho0 = prepare_state(parse_state(cfg.states.front()), h);
    const Sampler sampler(h, thermal_state(h, bath_temperature(cfg)));

    SweepResult result;
    result.h_b = sweep_columns(cfg);
    result.fidelity.resize(result.h_b.size());
    parallel_for(result.h_b.size(), cfg.threads, [&](std::size_t i) {
        const auto schedule = make_schedule(cfg, {{result.h_b[i], cfg.temperature_mK, cfg.g, 0}});
        const auto traj = run_engine(cfg, spec, schedule, rho0, sampler);
        for (const auto& s : traj.samples) result.fidelity[i].push_back(s.fidelity);
    });
    return result;
}

std::vector<Trajectory> run_ising2(const ExperimentConfig& cfg) {
    if (cfg.model != "ising") throw ConfigError("ising2 runs on the ising model");
    const HamiltonianSpec spec = model_spec(cfg);
    const ComplexMatrix h = build(spec);
    const auto schedule_base = make_schedule(cfg, resolve_ancillae(cfg, h));
    const auto rho0 = prepare_state(parse_state(cfg.states.front()), h);
    const Sampler sampler(h, thermal_state(h, bath_temperature(cfg)));

    std::vector<Trajectory> curves(2);
    const CollisionMode modes[] = {CollisionMode::Sequential, CollisionMode::Simultaneous};
    parallel_for(2, cfg.threads, [&](std::size_t i) {
        auto schedule = schedule_base;
        schedule.mode = modes[i];
        curves[i] = run_engine(cfg, spec, schedule, rho0, sampler);
        curves[i].label = to_string(modes[i]);
    });
    return curves;
}

std::vector<Trajectory> run_xy(const ExperimentConfig& cfg) {
    const HamiltonianSpec spec = model_spec(cfg);
    const ComplexMatrix h = build(spec);
    const auto schedule = make_schedule(cfg, resolve_ancillae(cfg, h));
    const Sampler sampler(h, thermal_state(h, bath_temperature(cfg)));

    std::vector<DensityMatrix> initial;
    for (const auto& s : cfg.states) initial.push_back(prepare_state(parse_state(s), h));

    std::vector<Trajectory> curves(initial.size());
    parallel_for(initial.size(), cfg.threads, [&](std::size_t i) {
        curves[i] = run_engine(cfg, spec, schedule, initial[i], sampler);
        curves[i].label = cfg.states[i];
    });
    return curves;
}

AnalysisReport run_analyze(const ExperimentConfig& cfg) {
    const HamiltonianSpec spec = model_spec(cfg);
    const ComplexMatrix h = build(spec);
    const std::size_t n = qubits_of(h);

    AnalysisReport r;
    r.model = model_name(spec);
    r.include_zero_freq = cfg.include_zero_freq;
    const auto eig = eig_hermitian(h);
    for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) r.eigenvalues.push_back(eig.eigenvalues(k));
    r.levels = energy_levels(eig);

    std::vector<ComplexMatrix> couplings;
    for (std::size_t site : cfg.sites) {
        if (site >= n) throw ConfigError(fmt::format("bath.sites: site {} outside a {}-qubit system", site, n));
        couplings.push_back(ops::on_site(ops::sigma_x(), site, n));
        r.coupling_sites.push_back(site);
        r.tables.push_back(decompose(couplings.back(), eig));
    }
    r.groups = jump_set(h, couplings, cfg.include_zero_freq);
    if (r.groups.empty()) throw ConfigError("analysis: the couplings generate no jump operators");
    std::vector<ComplexMatrix> ops;
    for (const auto& g : r.groups) ops.push_back(g.op);
    if (cfg.include_zero_freq) {
        r.level_transitions = zero_frequency_transitions(h);
        ops.insert(ops.end(), r.level_transitions.begin(), r.level_transitions.end());
    }
    r.uniqueness = uniqueness_check(ops);
    r.obstructions = zero_frequency_obstructions(h, couplings);
    const auto ancillae = resolve_ancillae(cfg, h);
    r.correlations = bath_correlation_check(h, ancillae, cfg.tau_c);
    return r;
}

CrosscheckResult run_crosscheck(const ExperimentConfig& cfg) {
    const HamiltonianSpec spec = model_spec(cfg);
    const ComplexMatrix h = build(spec);
    const auto schedule = make_schedule(cfg, resolve_ancillae(cfg, h));
    const auto rho0 = prepare_state(parse_state(cfg.states.front()), h);
    const Sampler sampler(h, thermal_state(h, bath_temperature(cfg)));

    const Trajectory exact = run(rho0, schedule, h, sampler);
    MasterOptions opt;
    if (cfg.dt > 0.0) opt.dt = cfg.dt;
    const auto jumps = model_jump_terms(spec, schedule, schedule.count);
    const Trajectory master = run_master_equation(jumps, h, rho0, schedule, sampler, opt);
    if (exact.states.size() != master.states.size()) {
        throw NumericalError("crosscheck: engines produced different sample counts");
    }

    CrosscheckResult out;
    for (std::size_t k = 0; k < exact.states.size(); ++k) {
        // The collision engine carries the free rotation of k collisions; the
        // master equation lives in the interaction picture.
        const ComplexMatrix rotated =
            to_interaction_picture(exact.states[k], h, static_cast<double>(k) * schedule.tau_c);
        const double d = trace_distance(DensityMatrix(rotated, 1e-8), DensityMatrix(master.states[k], 1e-8));
        out.t.push_back(exact.samples[k].t);
        out.trace_distance.push_back(d);
        out.max_deviation = std::max(out.max_deviation, d);
    }
    return out;
}

DegenerateSectors degenerate_sectors(const ComplexMatrix& h_sys, const ComplexMatrix& coupling) {
    const auto eig = eig_hermitian(h_sys);
    const auto levels = energy_levels(eig);
    const ComplexMatrix single[] = {coupling};
    const auto groups = jump_set(h_sys, single, false);
    const auto lowering = std::max_element(groups.begin(), groups.end(),
                                           [](const JumpGroup& a, const JumpGroup& b) { return a.omega < b.omega; });
    if (lowering == groups.end() || lowering->omega <= 0.0) {
        throw std::invalid_argument("degenerate_sectors: coupling has no nonzero-frequency component");
    }

    const auto& top = levels.back();
    const auto m = static_cast<Eigen::Index>(top.states.size());
    ComplexMatrix w(h_sys.rows(), m);
    for (Eigen::Index c = 0; c < m; ++c) w.col(c) = eig.state(top.states[static_cast<std::size_t>(c)]);
    const ComplexMatrix& a = lowering->op;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(w.adjoint() * a.adjoint() * a * w);

    DegenerateSectors out;
    for (Eigen::Index c = 0; c < m; ++c) {
        const ComplexVector u = w * solver.eigenvectors().col(c);
        ComplexMatrix p = u * u.adjoint();
        const ComplexVector image = a * u;
        if (image.norm() > 1e-12) {
            const ComplexVector v = image / image.norm();
            p += v * v.adjoint();
        }
        out.projectors.push_back(std::move(p));
    }
    return out;
}

std::vector<double> sector_population_differences(const DegenerateSectors& sectors, const ComplexMatrix& rho) {
    std::vector<double> out;
    if (sectors.projectors.empty()) return out;
    const double base = (sectors.projectors.front() * rho).trace().real();
    for (std::size_t k = 1; k < sectors.projectors.size(); ++k) {
        out.push_back((sectors.projectors[k] * rho).trace().real() - base);
    }
    return out;
}

}  // namespace colmod

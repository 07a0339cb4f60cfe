// Configuration-driven runners for the sweep, Ising, XY,
// analysis and engine cross-check experiments.

#pragma once

#include "colmod/config.hpp"
#include "colmod/hamiltonians.hpp"
#include "colmod/lindblad.hpp"
#include "colmod/schedule.hpp"
#include "colmod/states.hpp"
#include "colmod/transitions.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace colmod {

// Initial-state descriptors:
//   excited | ground | infinite-temperature | thermal(T_mK) | basis(bits) | eigenstate(k)
// `basis` takes one bit per qubit, qubit 0 first ('0' = up). `eigenstate` counts
// eigenvectors of H_S in ascending energy.
struct StateDescriptor {
    enum class Kind { Excited, Ground, InfiniteTemperature, Thermal, Basis, Eigenstate };
    Kind kind = Kind::Excited;
    double temperature_mK = 0.0;
    std::string bits;
    std::size_t index = 0;
    std::string text;
};

StateDescriptor parse_state(const std::string& text);
DensityMatrix prepare_state(const StateDescriptor& desc, const ComplexMatrix& h_sys);

HamiltonianSpec model_spec(const ExperimentConfig& cfg);

/// Explicit bath.h_b entries, or one ancilla per distinct nonzero gap |omega|/2
/// of sigma_x on each site in bath.sites (largest gap first).
std::vector<AncillaSpec> resolve_ancillae(const ExperimentConfig& cfg, const ComplexMatrix& h_sys);

CollisionSchedule make_schedule(const ExperimentConfig& cfg, std::vector<AncillaSpec> ancillae);

/// Generator matching the model: projector jumps for Ising chains, sigma_-/sigma_+
/// for a TLS, secular frequency components otherwise.
std::vector<JumpTerm> model_jump_terms(const HamiltonianSpec& spec, const CollisionSchedule& schedule,
                                       std::size_t rounds);

/// Runs one trajectory with the engine named in cfg.engine.
Trajectory run_engine(const ExperimentConfig& cfg, const HamiltonianSpec& spec, const CollisionSchedule& schedule,
                      const DensityMatrix& rho0, const Sampler& sampler);

struct SweepResult {
    std::vector<double> h_b;                    // columns, ascending
    std::vector<std::vector<double>> fidelity;  // [column][n], n = 0..count
};

/// Grid columns plus the extra and detuned-null columns, sorted and deduplicated.
std::vector<double> sweep_columns(const ExperimentConfig& cfg);
SweepResult run_sweep(const ExperimentConfig& cfg);

std::vector<Trajectory> run_ising2(const ExperimentConfig& cfg);
std::vector<Trajectory> run_xy(const ExperimentConfig& cfg);

struct AnalysisReport {
    std::string model;
    std::vector<double> eigenvalues;
    std::vector<EnergyLevel> levels;
    std::vector<std::size_t> coupling_sites;
    std::vector<TransitionTable> tables;  // one per coupling operator
    std::vector<JumpGroup> groups;
    std::vector<ComplexMatrix> level_transitions;  // added when zero frequencies are allowed
    UniquenessReport uniqueness;
    std::vector<ZeroFrequencyObstruction> obstructions;
    std::vector<CorrelationCheck> correlations;
    bool include_zero_freq = false;
};

AnalysisReport run_analyze(const ExperimentConfig& cfg);

struct CrosscheckResult {
    std::vector<double> t;
    std::vector<double> trace_distance;
    double max_deviation = 0.0;
};

CrosscheckResult run_crosscheck(const ExperimentConfig& cfg);

/// Conserved-sector bookkeeping for a degenerate spectrum coupled through `coupling`:
/// the upper level's eigenvectors u_k are paired with the normalized images
/// A u_k of the nonzero-frequency lowering component A. Sector k holds u_k and A u_k.
struct DegenerateSectors {
    std::vector<ComplexMatrix> projectors;
};
DegenerateSectors degenerate_sectors(const ComplexMatrix& h_sys, const ComplexMatrix& coupling);
/// Population of each sector minus that of sector 0.
std::vector<double> sector_population_differences(const DegenerateSectors& sectors, const ComplexMatrix& rho);

std::size_t resolve_threads(std::size_t requested, std::size_t jobs);

}  // namespace colmod

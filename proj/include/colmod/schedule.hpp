// Collision timing shared by both engines, and the trajectory
// record both of them emit.

#pragma once

#include "colmod/hamiltonians.hpp"
#include "colmod/states.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace colmod {

enum class CollisionMode { Sequential, Simultaneous };

std::string to_string(CollisionMode mode);
CollisionMode parse_mode(const std::string& text);

struct CollisionSchedule {
    double tau_p = 200.0;  // collision period, ns
    double tau_c = 200.0;  // collision duration, ns
    std::size_t count = 1; // rounds
    CollisionMode mode = CollisionMode::Sequential;
    std::vector<AncillaSpec> ancillae;  // fresh copies of these are used every round

    void validate(std::size_t n_sites) const;
};

// One collision: the ancillae in `active` couple during [start, end].
struct CollisionSlot {
    double start;
    double end;
    std::vector<std::size_t> active;  // indices into CollisionSchedule::ancillae
};

// Sequential rounds use one slot per ancilla, simultaneous rounds one slot in
// total; slot k starts at k * tau_p.
std::vector<CollisionSlot> collision_slots(const CollisionSchedule& schedule, std::size_t rounds);

struct Sample {
    double t = 0.0;
    double fidelity = 0.0;
    std::vector<double> populations;
    double trace = 1.0;
    double purity = 1.0;
};

struct Trajectory {
    std::string label;
    std::vector<Sample> samples;
    std::vector<ComplexMatrix> states;  // system state at each sample
};

// Turns a system state into a Sample: fidelity against `target`, populations in
// the energy eigenbasis (the computational basis when h_sys is diagonal).
class Sampler {
public:
    Sampler(const ComplexMatrix& h_sys, DensityMatrix target);

    Sample operator()(double t, const DensityMatrix& rho) const;
    const ComplexMatrix& population_basis() const { return basis_; }
    const DensityMatrix& target() const { return target_; }

private:
    ComplexMatrix basis_;
    DensityMatrix target_;
};

}  // namespace colmod

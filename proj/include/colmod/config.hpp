// Experiment configuration: a line-oriented `key = value` format
// with [sections]. Comments start with '#' or ';'. Unknown keys are rejected.
//
//   experiment = sweep            # sweep | ising2 | xy | analyze | crosscheck
//   seed = 0
//   [model]     kind, h_s, fields, couplings, J
//   [schedule]  tau_c, tau_p, count, mode
//   [bath]      temperature_mK, g, h_b, sites
//   [initial]   states
//   [sweep]     h_b_min, h_b_max, steps, extra_h_b, nulls
//   [engine]    kind, dt
//   [analyze]   include_zero_freq
//   [output]    path, svg, threads
//
// List values are comma separated. An empty bath.h_b derives one ancilla per
// distinct transition gap seen by each site in bath.sites.

#pragma once

#include "colmod/schedule.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace colmod {

struct ExperimentConfig {
    std::string experiment = "sweep";
    std::uint64_t seed = 0;

    std::string model = "tls";
    double h_s = 1.0;
    std::vector<double> fields{0.5, 0.5};
    std::vector<double> couplings{1.0};
    double J = 1.0;

    double tau_c = 200.0;
    double tau_p = 200.0;
    std::size_t count = 50;
    CollisionMode mode = CollisionMode::Sequential;

    double temperature_mK = 10.0;
    double g = 1e-3;
    std::vector<double> h_b;          // empty: derived from the system's transitions
    std::vector<std::size_t> sites{0};

    std::vector<std::string> states{"basis(1)"};

    double h_b_min = 0.25;
    double h_b_max = 1.75;
    std::size_t steps = 61;
    std::vector<double> extra_h_b;
    bool nulls = true;  // add the detuned columns with delta tau_c = 2 pi and 4 pi

    std::string engine = "collision";  // collision | master
    double dt = 0.0;                   // 0: tau_c / 200

    bool include_zero_freq = false;

    std::string out = "out.csv";
    bool svg = false;
    std::size_t threads = 0;  // 0: hardware concurrency

    bool operator==(const ExperimentConfig&) const = default;
};

/// Defaults for one experiment kind.
ExperimentConfig default_config(const std::string& experiment);

/// Parse text into `key -> value` with dotted section keys ("schedule.count").
std::map<std::string, std::string> parse_entries(const std::string& text);

/// Apply one dotted key; throws ConfigError for unknown keys or bad values.
void apply_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Defaults for the experiment named in `text` (or `experiment` when given),
/// then the file's entries, then `overrides` ("section.key=value").
ExperimentConfig parse_config(const std::string& text, const std::string& experiment = "",
                              const std::vector<std::string>& overrides = {});
ExperimentConfig load_config(const std::string& path, const std::string& experiment = "",
                             const std::vector<std::string>& overrides = {});

std::string serialize(const ExperimentConfig& cfg);

void validate(const ExperimentConfig& cfg);

}  // namespace colmod

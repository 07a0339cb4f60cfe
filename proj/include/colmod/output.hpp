// CSV, SVG and text emitters. Formatting is locale-independent
// and deterministic.

#pragma once

#include "colmod/experiments.hpp"

#include <span>
#include <string>

namespace colmod {

std::string sweep_csv(const SweepResult& sweep);          // h_b,n,fidelity
std::string trajectory_csv(std::span<const Trajectory> curves);  // t_ns,label,fidelity,trace,purity,p0..
std::string crosscheck_csv(const CrosscheckResult& result);      // t_ns,trace_distance
std::string analysis_text(const AnalysisReport& report);

std::string sweep_svg(const SweepResult& sweep);
std::string trajectory_svg(std::span<const Trajectory> curves, const std::string& title);

/// Writes `content` to `path`; failures raise ConfigError naming the path.
void write_text(const std::string& path, const std::string& content);

/// `path` with its extension replaced by ".svg".
std::string svg_path_for(const std::string& path);

}  // namespace colmod

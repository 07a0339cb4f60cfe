#include "colmod/output.hpp"

#include "colmod/errors.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace colmod {

namespace {

// Snap round-off noise so reports do not print "-0" or 1e-17.
double clean(double x) { return std::abs(x) < 1e-12 ? 0.0 : x; }

std::string num(double x) { return fmt::format("{:.12g}", clean(x)); }

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string heat_color(double v) {
    // white (0) to dark blue (1)
    v = std::clamp(v, 0.0, 1.0);
    const auto r = static_cast<int>(std::lround(255 * (1.0 - 0.9 * v)));
    const auto g = static_cast<int>(std::lround(255 * (1.0 - 0.7 * v)));
    return fmt::format("#{:02x}{:02x}ff", r, g);
}

}  // namespace

std::string sweep_csv(const SweepResult& sweep) {
    std::string s = "h_b,n,fidelity\n";
    for (std::size_t c = 0; c < sweep.h_b.size(); ++c) {
        for (std::size_t n = 0; n < sweep.fidelity[c].size(); ++n) {
            s += fmt::format("{:.12g},{},{:.12g}\n", sweep.h_b[c], n, sweep.fidelity[c][n]);
        }
    }
    return s;
}

std::string trajectory_csv(std::span<const Trajectory> curves) {
    std::size_t dim = 0;
    for (const auto& c : curves)
        if (!c.samples.empty()) dim = std::max(dim, c.samples.front().populations.size());
    std::string s = "t_ns,label,fidelity,trace,purity";
    for (std::size_t k = 0; k < dim; ++k) s += fmt::format(",p{}", k);
    s += '\n';
    for (const auto& c : curves) {
        for (const auto& smp : c.samples) {
            s += fmt::format("{:.12g},{},{:.12g},{:.12g},{:.12g}", smp.t, c.label, smp.fidelity, smp.trace, smp.purity);
            for (double p : smp.populations) s += fmt::format(",{:.12g}", clean(p));
            s += '\n';
        }
    }
    return s;
}

std::string crosscheck_csv(const CrosscheckResult& result) {
    std::string s = "t_ns,trace_distance\n";
    for (std::size_t k = 0; k < result.t.size(); ++k) {
        s += fmt::format("{:.12g},{:.6e}\n", result.t[k], result.trace_distance[k]);
    }
    return s;
}

std::string analysis_text(const AnalysisReport& r) {
    std::string s;
    auto line = [&s](int indent, const std::string& text) { s += std::string(2 * indent, ' ') + text + '\n'; };
    line(0, "model: " + r.model);
    std::vector<std::string> ev;
    for (double e : r.eigenvalues) ev.push_back(num(e));
    line(0, fmt::format("eigenvalues: [{}]", fmt::join(ev, ", ")));
    line(0, "levels:");
    for (const auto& lv : r.levels) {
        line(1, fmt::format("- energy: {}  multiplicity: {}  states: [{}]", num(lv.energy), lv.states.size(),
                            fmt::join(lv.states, ", ")));
    }
    line(0, "couplings:");
    for (std::size_t c = 0; c < r.tables.size(); ++c) {
        line(1, fmt::format("- operator: sigma_x on site {}", r.coupling_sites[c]));
        line(2, "transitions:");
        for (const auto& e : r.tables[c].nonzero(1e-10)) {
            line(3, fmt::format("- k: {}  l: {}  omega: {}  coefficient: ({}, {})  modulus: {}", e.k, e.l,
                                num(e.omega), num(e.coefficient.real()), num(e.coefficient.imag()),
                                num(std::abs(e.coefficient))));
        }
    }
    line(0, "jump_groups:");
    line(1, fmt::format("include_zero_freq: {}", r.include_zero_freq));
    line(1, fmt::format("count: {}", r.groups.size()));
    for (const auto& g : r.groups) {
        line(1, fmt::format("- omega: {}  source: {}  norm: {}", num(g.omega), g.source, num(g.op.norm())));
    }
    if (r.include_zero_freq) line(1, fmt::format("level_transitions: {}", r.level_transitions.size()));
    line(0, "uniqueness:");
    line(1, fmt::format("commutant_dim: {}", r.uniqueness.commutant_dim));
    line(1, fmt::format("adjoint_closed: {}", r.uniqueness.adjoint_closed));
    line(1, fmt::format("unique: {}", r.uniqueness.unique));
    line(0, "zero_frequency_obstructions:");
    if (r.obstructions.empty()) line(1, "none");
    for (const auto& o : r.obstructions) {
        std::vector<std::string> w;
        for (double x : o.coupling_weight) w.push_back(num(x));
        line(1, fmt::format("- energy: {}  multiplicity: {}  in_level_coupling: [{}]", num(o.energy), o.multiplicity,
                            fmt::join(w, ", ")));
    }
    line(0, "bath_correlation:");
    for (const auto& c : r.correlations) {
        line(1, fmt::format("- omega: {}  ancillae: [{}]  min_eigenvalue: {:.6e}  positive_definite: {}", num(c.omega),
                            fmt::join(c.ancillae, ", "), c.min_eigenvalue, c.positive_definite));
    }
    return s;
}

std::string sweep_svg(const SweepResult& sweep) {
    const double cell_w = 8.0;
    const double cell_h = 6.0;
    const double margin = 40.0;
    const std::size_t cols = sweep.h_b.size();
    const std::size_t rows = sweep.fidelity.empty() ? 0 : sweep.fidelity.front().size();
    const double width = 2 * margin + cell_w * static_cast<double>(cols);
    const double height = 2 * margin + cell_h * static_cast<double>(rows);
    std::string s = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:g}\" height=\"{:g}\" viewBox=\"0 0 {:g} {:g}\">\n", width,
        height, width, height);
    for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t n = 0; n < sweep.fidelity[c].size(); ++n) {
            const double x = margin + cell_w * static_cast<double>(c);
            const double y = height - margin - cell_h * static_cast<double>(n + 1);
            s += fmt::format("<rect x=\"{:g}\" y=\"{:g}\" width=\"{:g}\" height=\"{:g}\" fill=\"{}\"/>\n", x, y, cell_w,
                             cell_h, heat_color(sweep.fidelity[c][n]));
        }
    }
    s += fmt::format("<text x=\"{:g}\" y=\"{:g}\" font-size=\"12\">h_b (rad/ns)</text>\n", width / 2 - 30,
                     height - 10);
    s += fmt::format("<text x=\"10\" y=\"{:g}\" font-size=\"12\">n</text>\n", height / 2);
    if (cols > 0) {
        s += fmt::format("<text x=\"{:g}\" y=\"{:g}\" font-size=\"10\">{:.3g}</text>\n", margin, height - margin + 14,
                         sweep.h_b.front());
        s += fmt::format("<text x=\"{:g}\" y=\"{:g}\" font-size=\"10\">{:.3g}</text>\n", width - margin - 20,
                         height - margin + 14, sweep.h_b.back());
    }
    s += "</svg>\n";
    return s;
}

std::string trajectory_svg(std::span<const Trajectory> curves, const std::string& title) {
    const double width = 640.0;
    const double height = 400.0;
    const double margin = 50.0;
    double t_max = 0.0;
    for (const auto& c : curves)
        if (!c.samples.empty()) t_max = std::max(t_max, c.samples.back().t);
    if (t_max <= 0.0) t_max = 1.0;

    std::string s = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:g}\" height=\"{:g}\" viewBox=\"0 0 {:g} {:g}\">\n", width,
        height, width, height);
    s += fmt::format("<text x=\"{:g}\" y=\"20\" font-size=\"14\">{}</text>\n", margin, title);
    s += fmt::format("<rect x=\"{:g}\" y=\"{:g}\" width=\"{:g}\" height=\"{:g}\" fill=\"none\" stroke=\"black\"/>\n",
                     margin, margin, width - 2 * margin, height - 2 * margin);
    for (std::size_t i = 0; i < curves.size(); ++i) {
        std::string pts;
        for (const auto& smp : curves[i].samples) {
            const double x = margin + (width - 2 * margin) * smp.t / t_max;
            const double y = height - margin - (height - 2 * margin) * std::clamp(smp.fidelity, 0.0, 1.0);
            pts += fmt::format("{:.2f},{:.2f} ", x, y);
        }
        const char* color = kPalette[i % std::size(kPalette)];
        s += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n", color, pts);
        s += fmt::format("<text x=\"{:g}\" y=\"{:g}\" font-size=\"11\" fill=\"{}\">{}</text>\n", width - margin + 4,
                         margin + 14.0 * static_cast<double>(i + 1), color, curves[i].label);
    }
    s += fmt::format("<text x=\"{:g}\" y=\"{:g}\" font-size=\"12\">t (ns), max {:g}</text>\n", width / 2 - 40,
                     height - 15, t_max);
    s += fmt::format("<text x=\"5\" y=\"{:g}\" font-size=\"12\">F</text>\n", height / 2);
    s += "</svg>\n";
    return s;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError(fmt::format("cannot open '{}' for writing", path));
    out << content;
    out.flush();
    if (!out) throw ConfigError(fmt::format("write to '{}' failed", path));
}

std::string svg_path_for(const std::string& path) {
    std::filesystem::path p(path);
    p.replace_extension(".svg");
    return p.string();
}

}  // namespace colmod

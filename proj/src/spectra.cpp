#include "colmod/spectra.hpp"

#include "colmod/states.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace colmod {

std::complex<double> oscillating_integral(double x, double t) {
    if (std::abs(x) < kResonanceThreshold) return t;
    if (std::abs(x) < kSeriesThreshold) {
        // sum_k (i x)^k t^{k+1} / (k+1)!
        std::complex<double> term = t;
        std::complex<double> sum = term;
        for (int k = 1; k < 200; ++k) {
            term *= I_UNIT * x * t / static_cast<double>(k + 1);
            sum += term;
            if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
        }
        return sum;
    }
    return -I_UNIT * (std::exp(I_UNIT * x * t) - 1.0) / x;
}

namespace {

bool in_window(const SpectrumQuery& q) {
    if (!(q.collision_end > q.collision_start)) throw std::invalid_argument("spectrum query: empty collision window");
    return q.t >= q.collision_start && q.t <= q.collision_end;
}

}  // namespace

std::complex<double> gamma(const SpectrumQuery& q) {
    if (!in_window(q)) return 0.0;
    const double t_local = q.t - q.collision_start;
    const auto pop = two_level_populations(q.ancilla.h_b, Temperature(q.ancilla.temperature_mK));
    const double g2 = q.ancilla.g * q.ancilla.g;
    return g2 * (pop.excited * oscillating_integral(q.omega + 2.0 * q.ancilla.h_b, t_local) +
                 pop.ground * oscillating_integral(q.omega - 2.0 * q.ancilla.h_b, t_local));
}

double dissipation_rate(const SpectrumQuery& q, bool include_rotating) {
    if (include_rotating) return 2.0 * gamma(q).real();
    if (!in_window(q)) return 0.0;
    const double t_local = q.t - q.collision_start;
    const auto pop = two_level_populations(q.ancilla.h_b, Temperature(q.ancilla.temperature_mK));
    const double g2 = q.ancilla.g * q.ancilla.g;
    const double up = q.omega + 2.0 * q.ancilla.h_b;    // absorbs from an excited ancilla
    const double down = q.omega - 2.0 * q.ancilla.h_b;  // emits into a ground ancilla
    const auto near = std::abs(up) < std::abs(down) ? pop.excited * oscillating_integral(up, t_local)
                                                     : pop.ground * oscillating_integral(down, t_local);
    return 2.0 * g2 * near.real();
}

double detuned_rate(double delta, double t_local, double pop, double g) {
    if (t_local < 0.0) throw std::invalid_argument("detuned_rate: negative local time");
    const double g2 = g * g;
    if (delta == 0.0) return pop * g2 * t_local;
    return pop * g2 * std::sin(delta * t_local) / delta;
}

double kms_ratio(double h_s, const AncillaSpec& ancilla) {
    SpectrumQuery q{2.0 * h_s, 1.0, ancilla, 0.0, 2.0};
    const double emission = dissipation_rate(q);
    q.omega = -2.0 * h_s;
    const double absorption = dissipation_rate(q);
    if (absorption == 0.0) return std::numeric_limits<double>::infinity();
    return emission / absorption;
}

}  // namespace colmod

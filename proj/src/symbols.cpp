#include "couette/symbols.hpp"

#include <cmath>
#include <stdexcept>

namespace couette {

SymbolValues symbol_values(double t, const Mode& mode) {
    SymbolValues s;
    const double k = mode.k;
    const double l = mode.l;
    s.xi = mode.eta - k * t;
    s.p = k * k + s.xi * s.xi + l * l;
    s.p_prime = -2.0 * k * s.xi;
    s.iota = {cplx(0.0, k), cplx(0.0, s.xi), cplx(0.0, l)};
    return s;
}

std::size_t eta_count(const ModeGrid& g) {
    if (!(g.delta_eta > 0.0) || !std::isfinite(g.delta_eta))
        throw std::invalid_argument("delta_eta must be positive");
    if (!(g.eta_max >= g.delta_eta))
        throw std::invalid_argument("eta_max must be >= delta_eta");
    if (g.k_max < 0 || g.l_max < 0)
        throw std::invalid_argument("k_max and l_max must be non-negative");
    const double r = g.eta_max / g.delta_eta;
    const double n = std::round(r);
    if (std::abs(r - n) > 1e-9 * std::max(1.0, r))
        throw std::invalid_argument("eta_max must be an integer multiple of delta_eta");
    return static_cast<std::size_t>(2.0 * n) + 1;
}

std::vector<Mode> build_grid(const ModeGrid& g) {
    const std::size_t n = eta_count(g);
    const long half = static_cast<long>(n / 2);
    std::vector<Mode> modes;
    modes.reserve(static_cast<std::size_t>((2 * g.k_max + 1) * (2 * g.l_max + 1)) * n);
    for (int k = -g.k_max; k <= g.k_max; ++k)
        for (int l = -g.l_max; l <= g.l_max; ++l)
            for (std::size_t j = 0; j < n; ++j) {
                Mode m;
                m.k = k;
                m.l = l;
                m.eta = static_cast<double>(static_cast<long>(j) - half) * g.delta_eta;
                m.weight = (j == 0 || j + 1 == n) ? 0.5 * g.delta_eta : g.delta_eta;
                modes.push_back(m);
            }
    return modes;
}

}  // namespace couette

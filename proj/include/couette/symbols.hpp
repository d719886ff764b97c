#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace couette {

using cplx = std::complex<double>;
using cvec3 = std::array<cplx, 3>;

struct Mode {
    int k = 0;
    double eta = 0.0;
    int l = 0;
    double weight = 1.0;
};

struct ModeGrid {
    int k_max = 2;
    int l_max = 2;
    double eta_max = 8.0;
    double delta_eta = 0.05;
};

struct SymbolValues {
    double p = 0.0;
    double p_prime = 0.0;
    double xi = 0.0;  // eta - k t
    cvec3 iota{};     // (ik, i xi, il)
};

SymbolValues symbol_values(double t, const Mode& mode);

// Number of eta samples; throws if delta_eta <= 0 or 2*eta_max/delta_eta is not an integer.
std::size_t eta_count(const ModeGrid& g);

// Order: k ascending, then l, then eta. Trapezoid weights in eta.
std::vector<Mode> build_grid(const ModeGrid& g);

}  // namespace couette

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "couette/dynamics_derived.hpp"
#include "couette/multipliers.hpp"

namespace couette {

// Sum in a fixed binary-tree order; the result depends only on the input sequence.
double pairwise_sum(const double* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

enum class Component { b, u1, u2, u3, B1, B2, B3, D1, D2, D3, W1, W2, W3 };

struct Selector {
    Component comp = Component::b;
    bool sqrt_p = false;   // multiply by sqrt(p), i.e. sqrt(-Delta_L)
    bool over_eps = false; // divide by eps
};

// Grammar: ["sqrtp*"] NAME ["/eps"], NAME in {b,u1,u2,u3,B1..B3,D1..D3,W1..W3}.
Selector parse_selector(std::string_view text);

enum class WeightKind { M, M1, SqrtDlogM_M, SqrtDlogM1_M, SqrtDlogM2_M, SqrtDlogM3_M, Plain };

double weighted_l2(const FieldEnsemble& ens, double t, const Selector& sel, WeightKind w,
                   const PhysicalParams& phys, const MultiplierParams& mp);

struct EnergyReport {
    double t = 0.0;
    double E1 = 0.0, calE1 = 0.0, E2 = 0.0, calE2 = 0.0;
    double combined = 0.0;    // calE1 + c0 mu^(2/3) calE2
    double combined_E = 0.0;  // E1 + c0 mu^(2/3) E2
    std::map<std::string, double> theorem_norms;
};

EnergyReport energy_report(const FieldEnsemble& ens, double t, const PhysicalParams& phys,
                           const MultiplierParams& mp);

double energy_E1(const FieldEnsemble& ens, double t, const PhysicalParams& phys, const MultiplierParams& mp);
double energy_calE1(const FieldEnsemble& ens, double t, const PhysicalParams& phys, const MultiplierParams& mp);
double energy_E2(const FieldEnsemble& ens, double t, const PhysicalParams& phys, const MultiplierParams& mp);
double energy_calE2(const FieldEnsemble& ens, double t, const PhysicalParams& phys, const MultiplierParams& mp);
double combined_lyapunov(const FieldEnsemble& ens, double t, const PhysicalParams& phys, const MultiplierParams& mp);

enum class Projection { All, LNonzero, LZero };

// (||d^alpha b0 / eps||, ||d^alpha u~0||) over k = 0 modes, u~ = (u2, u3); alpha = (eta power, l power).
std::pair<double, double> zero_mode_norm(const FieldEnsemble& ens, double eps, std::pair<int, int> alpha,
                                         Projection proj, bool h1_weight = false);

// Names of the norms placed in EnergyReport::theorem_norms, in CSV column order.
const std::vector<std::string>& theorem_norm_names();

// Nonzero-mode norms rebuilt from derived unknowns only; keys match the primitive ones
// ("b_nz", "xx_u1_nz", "dxz_u2_nz", "dxz_u3_nz").
std::map<std::string, double> derived_route_norms(const FieldEnsemble& ens, double t, const PhysicalParams& phys);
std::map<std::string, double> primitive_route_norms(const FieldEnsemble& ens, double t, const PhysicalParams& phys);

}  // namespace couette

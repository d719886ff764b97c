#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "couette/functionals.hpp"

namespace couette {

using Series = std::vector<std::pair<double, double>>;  // (t, value)
using Window = std::pair<double, double>;

struct RateFit {
    double rate_or_exponent = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    Window window{0.0, 0.0};
    std::size_t n_points = 0;
};

// rate = -slope of log(value) against t
RateFit fit_exponential_rate(const Series& series, Window window);
// exponent = slope of log(value) against log(1+t)
RateFit fit_power_law(const Series& series, Window window);

// max over consecutive samples of (next*e^{r dt} - prev)/max(prev, floor)
double monotonicity_audit(const Series& series, double envelope_rate, double floor = 1e-300);

struct LiftupNorms {
    double u1_in = 0.0;      // ||(u1_in)_0||
    double lnz_in = 0.0;     // ||P_{l!=0}(b_in/eps, u~_in)_0||
    double b00u2_l2l1 = 0.0; // ||(b_in00/eps, u2_in00)||_{L2} + ||.||_{L1}
};

struct LiftupAudit {
    double C = 0.0;  // smallest C >= 1 closing the bound on every sample (inf if none)
    bool pass = false;
    Series margin;   // LHS - RHS(C)
};

// lhs = ||u1_0(t)|| + mu^(1/2) (int_0^t ||grad u1_0||^2)^(1/2), time integral by trapezoid on the samples.
LiftupAudit liftup_bound_audit(const Series& u1_norm, const Series& grad_u1_norm, const LiftupNorms& in,
                               const PhysicalParams& phys);

struct ClaimSpec {
    std::string id;
    std::string series;  // theorem norm name
    bool power_law = false;
    double required = 0.0;  // decay rate (exponential) or exponent (power law)
};

ClaimSpec claim_spec(const std::string& id, const PhysicalParams& phys);
const std::vector<std::string>& claim_ids();

struct AuditReport {
    std::string claim;
    std::string series;
    double fitted = 0.0;
    double required = 0.0;
    double r2 = 0.0;
    Window window{0.0, 0.0};
    std::size_t n_points = 0;
    bool pass = false;
    bool inconclusive = false;
    std::string note;
};

// Default windows: exponential claims skip t < 2 mu^(-1/3); L3.2 uses [0.1 T, T];
// power laws end where mu t delta_eta^2 > 0.1 and start 20x earlier.
Window default_window(const ClaimSpec& c, const PhysicalParams& phys, double t_end, double delta_eta);

AuditReport theorem_rate_audit(const std::map<std::string, Series>& norms, const std::string& claim,
                               const PhysicalParams& phys, double delta_eta,
                               std::optional<Window> window = std::nullopt);

struct EnergyBalance {
    double relative_residual = 0.0;  // |e(T) - e(0) + int D| / e(0)
    double e0 = 0.0, eT = 0.0, dissipated = 0.0;
};

// Zero-mode energy identity on k = 0 modes: time integral by 8-point Gauss-Legendre panels of length <= panel.
EnergyBalance zero_mode_energy_balance(const FieldEnsemble& ens, double T, const PhysicalParams& phys,
                                       double tol, double panel = 0.5, unsigned threads = 0);

}  // namespace couette

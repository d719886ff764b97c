#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "couette/params.hpp"
#include "couette/symbols.hpp"

namespace couette {

struct MValue {
    double m = 1.0;
    double dlog_m = 0.0;
};

struct M123Values {
    double m1 = 1.0, m2 = 1.0, m3 = 1.0;
    double dlog_m1 = 0.0, dlog_m2 = 0.0, dlog_m3 = 0.0;
};

struct MultiplierWeights {
    double m = 1.0, m1 = 1.0, m2 = 1.0, m3 = 1.0;
    double dlog_m = 0.0;
    double M = 0.0, M1 = 0.0, h = 0.0, g = 0.0;
};

MValue m_value(double t, const Mode& mode, double mu);
M123Values m123_values(double t, const Mode& mode, double mu, double N);
MultiplierWeights weights(double t, const Mode& mode, const PhysicalParams& phys,
                          const MultiplierParams& mp);

// Sampling box for the audits. Half the draws use the wide box, half the narrow one.
struct AuditRanges {
    int k_max = 5;
    int l_max = 5;
    double t_wide = 200.0;    // in units of mu^(-1/3)
    double eta_wide = 150.0;  // in units of mu^(-1/3), times k_max
    double t_narrow = 30.0;
    double eta_narrow = 20.0;
};

struct AuditSample {
    double t = 0.0, mu = 0.0;
    int k = 0;
    double eta = 0.0;
    int l = 0;
    double m = 0.0, m1 = 0.0, m2 = 0.0, m3 = 0.0;
    double margin_233 = 0.0;  // (dlog_m2 + mu p) / (mu^(1/3)/2) - 1
};

std::vector<AuditSample> draw_audit_samples(std::size_t count, const std::vector<double>& mu_list,
                                            std::uint64_t seed, const AuditRanges& ranges = {});

struct Claim233Report {
    std::size_t samples = 0;
    std::size_t violations = 0;
    double min_margin = 0.0;
    std::vector<std::size_t> histogram;  // decades of margin: [0,1e-3),[1e-3,1e-2),...,[1e2,inf)
    std::vector<AuditSample> violating;
};

Claim233Report audit_claim_233(std::size_t sample_count, const std::vector<double>& mu_list,
                               std::uint64_t seed, const AuditRanges& ranges = {},
                               std::vector<AuditSample>* record = nullptr);

struct InequalityReport {
    std::size_t samples = 0;
    std::map<std::string, std::size_t> violations;  // keyed by inequality name
    double max_m_mu23 = 0.0;                        // empirical constant in m <~ mu^(-2/3)
    std::size_t total_violations() const;
};

// Full pointwise suite at default N = 9(1+eps)^2.
InequalityReport audit_multiplier_inequalities(std::size_t sample_count,
                                               const std::vector<double>& mu_list, double eps,
                                               std::uint64_t seed, const AuditRanges& ranges = {});

}  // namespace couette

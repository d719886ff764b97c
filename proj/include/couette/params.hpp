#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace couette {

struct PhysicalParams {
    double mu = 1e-3;
    double lambda = 0.0;
    double eps = 1.0;
};

struct MultiplierParams {
    double N = 9.0;
    double c = 0.0;
    double c0 = 1.0 / 145600.0;
    double s = 0.0;
};

enum class Regime { NonzeroMode, ZeroMode, Both, TestInviscid };

struct ValidationReport {
    bool accepted = true;
    std::vector<std::string> violations;
};

ValidationReport validate_params(const PhysicalParams& p, Regime regime);

MultiplierParams default_multiplier_params(const PhysicalParams& p);

// Checks N > 0, c >= 0, c0 >= 0, s >= 0 and finiteness.
ValidationReport validate_multiplier_params(const MultiplierParams& mp);

std::string_view regime_name(Regime r);
Regime parse_regime(std::string_view name);

}  // namespace couette

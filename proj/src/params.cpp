#include "couette/params.hpp"

#include <cmath>
#include <stdexcept>

namespace couette {

namespace {

void require(ValidationReport& rep, bool ok, const char* what) {
    if (!ok) {
        rep.accepted = false;
        rep.violations.emplace_back(what);
    }
}

void check_nonzero_mode(ValidationReport& rep, const PhysicalParams& p) {
    const double nu = p.lambda + 2.0 * p.mu;
    const double m13 = std::cbrt(p.mu);
    require(rep, nu <= 1.0, "lambda+2mu <= 1");
    require(rep, m13 * p.eps <= 0.25, "mu^(1/3)*eps <= 1/4");
    require(rep, m13 * nu * p.eps * p.eps <= 1.0, "mu^(1/3)*(lambda+2mu)*eps^2 <= 1");
}

void check_zero_mode(ValidationReport& rep, const PhysicalParams& p) {
    const double nu = p.lambda + 2.0 * p.mu;
    require(rep, nu <= 1.0, "lambda+2mu <= 1");
    require(rep, nu * p.eps <= 1.0, "(lambda+2mu)*eps <= 1");
    require(rep, p.mu * (p.lambda + p.mu) * p.eps * p.eps <= 1.0,
            "mu*(lambda+mu)*eps^2 <= 1");
}

}  // namespace

ValidationReport validate_params(const PhysicalParams& p, Regime regime) {
    ValidationReport rep;
    if (!std::isfinite(p.mu) || !std::isfinite(p.lambda) || !std::isfinite(p.eps)) {
        require(rep, false, "finite mu, lambda, eps");
        return rep;
    }
    require(rep, p.eps > 0.0, "eps > 0");

    const bool inviscid = regime == Regime::TestInviscid && p.mu == 0.0 && p.lambda == 0.0;
    if (!inviscid) {
        require(rep, p.mu > 0.0, "mu > 0");
        require(rep, 2.0 * p.mu + 3.0 * p.lambda >= 0.0, "2mu+3lambda >= 0");
    }

    switch (regime) {
    case Regime::NonzeroMode: check_nonzero_mode(rep, p); break;
    case Regime::ZeroMode: check_zero_mode(rep, p); break;
    case Regime::Both: {
        ValidationReport tmp;
        check_nonzero_mode(tmp, p);
        check_zero_mode(tmp, p);
        // lambda+2mu <= 1 is listed by both regimes; report once
        for (auto& v : tmp.violations) {
            bool seen = false;
            for (auto& w : rep.violations) seen = seen || (w == v);
            if (!seen) require(rep, false, v.c_str());
        }
        break;
    }
    case Regime::TestInviscid:
        if (!inviscid) check_zero_mode(rep, p);
        break;
    }
    return rep;
}

MultiplierParams default_multiplier_params(const PhysicalParams& p) {
    MultiplierParams mp;
    mp.N = 9.0 * (1.0 + p.eps) * (1.0 + p.eps);
    mp.c = std::cbrt(p.mu) / 8.0;
    mp.c0 = 1.0 / (32.0 * 4550.0);
    mp.s = 0.0;
    return mp;
}

ValidationReport validate_multiplier_params(const MultiplierParams& mp) {
    ValidationReport rep;
    require(rep, std::isfinite(mp.N) && mp.N > 0.0, "N > 0");
    require(rep, std::isfinite(mp.c) && mp.c >= 0.0, "c >= 0");
    require(rep, std::isfinite(mp.c0) && mp.c0 >= 0.0, "c0 >= 0");
    require(rep, std::isfinite(mp.s) && mp.s >= 0.0, "s >= 0");
    return rep;
}

std::string_view regime_name(Regime r) {
    switch (r) {
    case Regime::NonzeroMode: return "nonzero-mode";
    case Regime::ZeroMode: return "zero-mode";
    case Regime::Both: return "both";
    case Regime::TestInviscid: return "test-inviscid";
    }
    return "both";
}

Regime parse_regime(std::string_view name) {
    if (name == "nonzero-mode") return Regime::NonzeroMode;
    if (name == "zero-mode") return Regime::ZeroMode;
    if (name == "both") return Regime::Both;
    if (name == "test-inviscid") return Regime::TestInviscid;
    throw std::invalid_argument("unknown regime: " + std::string(name));
}

}  // namespace couette

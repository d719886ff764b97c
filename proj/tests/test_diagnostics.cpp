#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "couette/diagnostics.hpp"
#include "couette/experiments.hpp"

using namespace couette;

namespace {
Series make(double t0, double t1, int n, auto f) {
    Series s;
    for (int i = 0; i <= n; ++i) {
        const double t = t0 + (t1 - t0) * i / n;
        s.emplace_back(t, f(t));
    }
    return s;
}
}  // namespace

TEST_CASE("exponential fits") {
    auto s = make(0, 50, 500, [](double t) { return 2.0 * std::exp(-0.3 * t); });
    auto f = fit_exponential_rate(s, {0, 50});
    CHECK(f.rate_or_exponent == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(f.r_squared == doctest::Approx(1.0));
    auto c = make(0, 10, 50, [](double) { return 4.0; });
    CHECK(fit_exponential_rate(c, {0, 10}).rate_or_exponent == doctest::Approx(0.0).scale(1.0));
    auto o = make(0, 20 * 3.14159265358979, 4000, [](double t) { return std::exp(-0.3 * t) * (2 + std::cos(t)); });
    CHECK(std::abs(fit_exponential_rate(o, {0, 20 * 3.14159265358979}).rate_or_exponent - 0.3) <= 0.02);
    CHECK_THROWS(fit_exponential_rate(s, {100, 200}));
}

TEST_CASE("fits are invariant under rescaling") {
    auto s = make(0, 30, 100, [](double t) { return std::exp(-0.2 * t) * (1 + 0.1 * std::sin(t)); });
    auto s2 = s;
    for (auto& [t, v] : s2) v *= 37.5;
    auto a = fit_exponential_rate(s, {0, 30});
    auto b = fit_exponential_rate(s2, {0, 30});
    CHECK(a.rate_or_exponent == doctest::Approx(b.rate_or_exponent).epsilon(1e-12));
    CHECK(a.intercept != doctest::Approx(b.intercept));
}

TEST_CASE("power-law fits") {
    auto s = make(0, 1000, 1000, [](double t) { return std::pow(1 + t, -0.25); });
    CHECK(fit_power_law(s, {1, 1000}).rate_or_exponent == doctest::Approx(-0.25).epsilon(1e-12));
    auto g = make(0, 1000, 1000, [](double t) { return 3 * std::pow(1 + t, 0.75); });
    CHECK(fit_power_law(g, {1, 1000}).rate_or_exponent == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("heat-kernel series on the eta grid gives the quarter exponent") {
    const double mu = 1e-2, de = 0.05, sigma = 0.75;
    const auto modes = build_grid({0, 0, 8.0, de});
    Series s;
    for (int i = 0; i <= 400; ++i) {
        const double t = std::expm1(std::log1p(4000.0) * i / 400.0);
        double acc = 0;
        for (const auto& m : modes) {
            const double g = gaussian00_hat(m.eta, sigma, 1.0);
            acc += m.weight * g * g * std::exp(-2 * mu * m.eta * m.eta * t);
        }
        s.emplace_back(t, std::sqrt(acc));
    }
    const auto w = default_window({"L3.3-k0", "b00u200", true, -0.25}, {mu, 0, 1}, 4000.0, de);
    CHECK(w.second <= 0.1 / (mu * de * de) + 1e-9);
    CHECK(std::abs(fit_power_law(s, w).rate_or_exponent + 0.25) <= 0.03);
}

TEST_CASE("monotonicity audit") {
    auto s = make(0, 10, 100, [](double t) { return std::exp(-0.5 * t); });
    CHECK(monotonicity_audit(s, 0.5) <= 1e-14);
    auto up = make(0, 10, 100, [](double t) { return 1 + t; });
    CHECK(monotonicity_audit(up, 0.0) > 0.0);
}

TEST_CASE("lift-up bound holds with C = 1 for decaying data") {
    const PhysicalParams ph{1e-3, 0, 1};
    auto u = make(0, 100, 100, [](double t) { return std::exp(-0.01 * t); });
    auto g = make(0, 100, 100, [](double t) { return 0.1 * std::exp(-0.01 * t); });
    auto a = liftup_bound_audit(u, g, {1.0, 0.0, 1.0}, ph);
    CHECK(a.pass);
    CHECK(a.C == 1.0);
    for (auto& [t, m] : a.margin) CHECK(m <= 0.0);
    // quadratic growth needs a larger constant but stays finite
    auto lin = make(0, 100, 100, [](double t) { return t * t; });
    auto zero = make(0, 100, 100, [](double) { return 0.0; });
    auto b = liftup_bound_audit(lin, zero, {0.0, 0.0, 1.0}, ph);
    CHECK(b.pass);
    CHECK(b.C > 1.0);
    CHECK_THROWS(liftup_bound_audit(lin, zero, {0.0, 0.0, -1.0}, ph));
}

TEST_CASE("claim table") {
    const PhysicalParams ph{1e-3, 0, 1};
    CHECK(claim_ids().size() == 10);
    for (const auto& id : claim_ids()) CHECK(claim_spec(id, ph).id == id);
    CHECK(claim_spec("T1.1-b", ph).required == doctest::Approx(0.1 / 44));
    CHECK(claim_spec("L3.2", ph).required == doctest::Approx(1e-3 / 3));
    CHECK_THROWS(claim_spec("nope", ph));
}

TEST_CASE("rate audit on synthetic series") {
    const PhysicalParams ph{1e-3, 0, 1};
    std::map<std::string, Series> norms;
    norms["b_nz"] = make(0, 40, 400, [](double t) { return std::exp(-0.05 * t); });
    auto r = theorem_rate_audit(norms, "T1.1-b", ph, 0.05);
    CHECK(r.pass);
    CHECK(r.window.first == doctest::Approx(20.0));
    norms["b_nz"] = make(0, 40, 400, [](double t) { return std::exp(-0.001 * t); });
    CHECK_FALSE(theorem_rate_audit(norms, "T1.1-b", ph, 0.05).pass);
    norms["u3_nz"] = make(0, 40, 400, [](double) { return 0.0; });
    auto z = theorem_rate_audit(norms, "T1.1-u3", ph, 0.05);
    CHECK(z.pass);
    CHECK(z.inconclusive);
    auto missing = theorem_rate_audit(norms, "T1.2", ph, 0.05);
    CHECK(missing.inconclusive);
    CHECK_FALSE(missing.pass);
    norms["b00u200"] = make(0, 4000, 4000, [](double t) { return std::pow(1 + t, -0.31); });
    CHECK_FALSE(theorem_rate_audit(norms, "L3.3-k0", {1e-2, 0, 1}, 0.05).pass);
    norms["b00u200"] = make(0, 4000, 4000, [](double t) { return std::pow(1 + t, -0.29); });
    CHECK(theorem_rate_audit(norms, "L3.3-k0", {1e-2, 0, 1}, 0.05).pass);
}

TEST_CASE("zero-mode energy balance closes") {
    FieldEnsemble e{{0, 1, 1.0, 0.25}, build_grid({0, 1, 1.0, 0.25}), {}};
    for (std::size_t i = 0; i < e.modes.size(); ++i) e.states.push_back(random_state(6, i, 1.0));
    auto r = zero_mode_energy_balance(e, 100.0, {1e-2, 0.0, 1.0}, 1e-12);
    MESSAGE("relative residual " << r.relative_residual);
    CHECK(r.relative_residual <= 1e-8);
    CHECK(r.dissipated > 0);
}

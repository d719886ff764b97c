// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "couette/experiments.hpp"
#include "couette/multipliers.hpp"
#include "couette/rng.hpp"

using namespace couette;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s | %s\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... a) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path root() {
    static const fs::path r = [] {
        auto p = fs::temp_directory_path() / "couette_acceptance";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return r;
}

ExperimentConfig preset_at(const std::string& name, const std::string& dir) {
    auto c = preset_config(name);
    c.output_dir = (root() / dir).string();
    return c;
}

// ------------------------------------------------------------------ 1
void criterion1() {
    const auto t0 = Clock::now();
    const std::vector<double> mus{1e-2, 1e-3, 1e-4};
    const auto a = audit_claim_233(100000, mus, 101);
    const auto b = audit_multiplier_inequalities(100000, mus, 1.0, 202);
    const double sec = since(t0);
    const bool ok = a.violations == 0 && b.total_violations() == 0 && b.samples >= 100000 && sec < 10.0;
    report(1, ok, "multiplier inequality suite on 1e5 samples, zero violations, < 10 s",
           fmt("violations %zu + %zu, min growth margin %.3g, %.2f s", a.violations, b.total_violations(),
               a.min_margin, sec));
}

// ------------------------------------------------------------------ 2
void criterion2() {
    using boost::math::quadrature::gauss_kronrod;
    CounterRng rng(4242);
    double worst = 0;
    for (int s = 0; s < 1000; ++s) {
        const double mu = std::pow(10.0, -rng.uniform(1.0, 4.0));
        int k = 0;
        while (k == 0) k = int(rng.integer(-5, 5));
        const Mode m{k, rng.uniform(-100.0, 100.0), int(rng.integer(-5, 5))};
        const double t = rng.uniform(0.0, 200.0);
        const double N = 9.0 * (1 + rng.uniform(0.0, 1.0)) * (1 + rng.uniform(0.0, 1.0));
        const double m13 = std::cbrt(mu);
        const double k2 = double(k) * k, kl = std::sqrt(1.0 + k2 * m.l * m.l);
        auto p = [&](double x) { const double xi = m.eta - k * x; return k2 + xi * xi + double(m.l) * m.l; };
        std::vector<double> pts{0.0};
        if (m.eta / k > 0 && m.eta / k < t) pts.push_back(m.eta / k);
        pts.push_back(t);
        double I1 = 0, I2 = 0, I3 = 0;
        for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
            I1 += gauss_kronrod<double, 61>::integrate([&](double x) { return N * k2 / p(x); }, pts[j], pts[j + 1], 20, 1e-15);
            I3 += gauss_kronrod<double, 61>::integrate([&](double x) { return N * kl / p(x); }, pts[j], pts[j + 1], 20, 1e-15);
            I2 += gauss_kronrod<double, 61>::integrate(
                [&](double x) { const double y = m13 * (x - m.eta / k); return m13 / (1 + y * y); }, pts[j], pts[j + 1],
                20, 1e-15);
        }
        const auto v = m123_values(t, m, mu, N);
        worst = std::max({worst, std::abs(v.m1 / std::exp(I1) - 1), std::abs(v.m2 / std::exp(I2) - 1),
                          std::abs(v.m3 / std::exp(I3) - 1)});
    }
    report(2, worst <= 1e-10, "closed-form m1, m2, m3 vs adaptive quadrature on 1e3 points, rel err <= 1e-10",
           fmt("max relative error %.3e", worst));
}

// ------------------------------------------------------------------ 3, 4
std::vector<fs::path> oracle_dirs;
void criteria3and4() {
    double worst = 0, div = 0, sec = 0;
    std::size_t pairs = 0;
    for (double mu : {1e-2, 1e-3}) {
        auto c = preset_at("oracle", fmt("oracle_mu%g", mu));
        c.phys.mu = mu;
        c.tol = 1e-10;
        c.samples = 100;
        const auto t0 = Clock::now();
        RunResult r;
        try {
            r = run(c);
        } catch (const std::exception&) {
        }
        sec += since(t0);
        const auto j = nlohmann::json::parse(slurp(fs::path(c.output_dir) / "main" / "consistency.json"));
        worst = std::max(worst, j["max"].get<double>());
        div = std::max(div, j["max_divergence_residual"].get<double>());
        pairs += j["pairs"].get<std::size_t>();
        oracle_dirs.push_back(c.output_dir);
    }
    report(3, worst <= 1e-6 && sec < 30.0 && pairs == 200,
           "derived systems vs primitive system, 100 pairs at each mu in {1e-2, 1e-3}, residual <= 1e-6, < 30 s",
           fmt("max relative residual %.3e over %zu pairs, %.1f s", worst, pairs, sec));
    report(4, div <= 1e-10, "divergence-free residual of reconstructed w along the same trajectories <= 1e-10",
           fmt("max relative divergence residual %.3e", div));
}

// ------------------------------------------------------------------ 5
void criterion5() {
    double worst_inc = -1e300;
    bool equiv = true;
    int n = 0;
    const double mus[] = {1e-2, 1e-3, 1e-4};
    for (int s = 0; s < 20; ++s) {
        auto c = preset_config("enhanced-dissipation");
        c.seed = 1000 + s;
        c.phys = {mus[s % 3], 0.0, 0.5 + 0.025 * s};
        if (!validate_params(c.phys, Regime::NonzeroMode).accepted) continue;
        c.grid = {2, 2, 3.0, 0.25};
        c.initial.band_eta = 2.0;
        const auto mp = default_multiplier_params(c.phys);
        const auto ens = make_initial_data(c);
        const auto tg = make_time_grid(0, 4 / std::cbrt(c.phys.mu), 300, Spacing::Log);
        const auto tr = integrate_ensemble(ens, tg, c.phys, c.tol);
        Series comb;
        for (std::size_t k = 0; k < tg.output_times.size(); ++k) {
            const auto rep = energy_report(tr.snapshot(c.grid, k), tg.output_times[k], c.phys, mp);
            comb.emplace_back(rep.t, rep.combined);
            equiv = equiv && rep.calE1 >= 0.625 * rep.E1 && rep.calE1 <= 1.375 * rep.E1 &&
                    rep.calE2 >= 0.625 * rep.E2 && rep.calE2 <= 1.375 * rep.E2;
        }
        worst_inc = std::max(worst_inc, monotonicity_audit(comb, std::cbrt(c.phys.mu) / 44.0));
        ++n;
    }
    report(5, n == 20 && worst_inc <= 1e-6 && equiv,
           "weighted Lyapunov functional non-increasing on 20 random ensembles; 5/8 <= calE/E <= 11/8",
           fmt("%d ensembles, max relative increment %.3e, equivalence %s", n, worst_inc, equiv ? "holds" : "violated"));
}

// ------------------------------------------------------------------ 6
fs::path sweep_dir;
void criterion6() {
    auto c = preset_at("mu-sweep", "sweep");
    const auto t0 = Clock::now();
    const auto r = sweep(c, {1e-2, 1e-3, 1e-4});
    const double sec = since(t0);
    sweep_dir = r.dir;
    bool rates_ok = true;
    std::string rates;
    for (auto& s : r.subruns)
        for (auto& a : s.audits)
            if (a.claim == "T1.1-b") {
                rates_ok = rates_ok && a.fitted >= 0.95 * a.required;
                rates += fmt("%.4g(>=%.3g) ", a.fitted, a.required);
            }
    const double slope = r.manifest["scaling"]["slope"].get<double>();
    report(6, rates_ok && std::abs(slope - 1.0 / 3.0) <= 0.1 && sec < 180.0,
           "enhanced dissipation rate of b per mu and log-log slope 1/3 +- 0.1, < 3 min",
           "rates " + rates + fmt("slope %.4f, %.1f s", slope, sec));
}

// ------------------------------------------------------------------ 7
fs::path zero_dir;
void criterion7() {
    auto c = preset_at("zero-decay", "zero");
    const auto r = run(c);
    zero_dir = r.dir;
    bool ok = true;
    std::string d;
    for (auto& s : r.subruns)
        for (auto& a : s.audits) {
            ok = ok && a.pass;
            d += fmt("%s %.4f (req %.4g) ", a.claim.c_str(), a.fitted, a.required);
        }
    report(7, ok && r.subruns.size() == 2, "zero-mode decay: l != 0 rate >= mu/3; 00 exponents -1/4, -3/4, u3 -1/4", d);
}

// ------------------------------------------------------------------ 8
fs::path lift_dir;
void criterion8() {
    auto c = preset_at("lift-up", "lift");
    const auto r = run(c);
    lift_dir = r.dir;
    const auto& e = r.subruns.front().extra;
    const double ex = e["liftup_growth"].value("fitted", std::nan(""));
    const bool grow = e["liftup_growth"]["pass"].get<bool>();
    const bool bound = e["liftup_bound"]["pass"].get<bool>();
    const double duh = e["duhamel"]["max_relative"].get<double>();
    report(8, grow && bound && duh <= 1e-6,
           "lift-up: u1_0 growth exponent 0.75 +- 0.1 on [10, 0.1/mu], finite bound constant, Duhamel agreement <= 1e-6",
           fmt("exponent %.4f, C = %s, Duhamel rel diff %.3e", ex, e["liftup_bound"]["C"].dump().c_str(), duh));
}

// ------------------------------------------------------------------ 9
void criterion9() {
    const ModeGrid g{0, 2, 2.0, 0.125};
    FieldEnsemble e{g, build_grid(g), {}};
    for (std::size_t i = 0; i < e.modes.size(); ++i) e.states.push_back(random_state(909, i, 1.0));
    double worst = 0;
    for (double mu : {1e-2, 1e-3}) {
        const auto b = zero_mode_energy_balance(e, 1.0 / mu, {mu, 0.5 * mu, 1.0}, 1e-12);
        worst = std::max(worst, b.relative_residual);
    }
    const double tol = 1e-10;
    const auto inv = zero_mode_energy_balance(e, 20.0, {0.0, 0.0, 1.0}, tol);
    report(9, worst <= 1e-8 && inv.relative_residual <= tol,
           "zero-mode energy identity closes over T = 1/mu; inviscid conservation within integrator tol",
           fmt("viscous residual %.3e, inviscid drift %.3e (tol %.0e)", worst, inv.relative_residual, tol));
}

// ------------------------------------------------------------------ 10
void criterion10() {
    bool same = true;
    int files = 0;
    auto compare = [&](const fs::path& a, const fs::path& b) {
        for (auto& f : fs::recursive_directory_iterator(a)) {
            if (f.path().extension() != ".csv") continue;
            const auto rel = fs::relative(f.path(), a);
            same = same && fs::exists(b / rel) && slurp(f.path()) == slurp(b / rel);
            ++files;
        }
    };
    auto rerun = [&](const std::string& preset, const fs::path& orig, const std::string& tag,
                     auto&& tweak) {
        auto c = preset_at(preset, tag);
        tweak(c);
        c.threads = 4;
        try {
            run(c);
        } catch (const std::exception&) {
        }
        compare(orig, c.output_dir);
    };
    rerun("zero-decay", zero_dir, "zero_again", [](auto&) {});
    rerun("lift-up", lift_dir, "lift_again", [](auto&) {});
    rerun("oracle", oracle_dirs.at(0), "oracle_again", [](auto& c) { c.phys.mu = 1e-2; c.samples = 100; });
    rerun("enhanced-dissipation", sweep_dir / "mu_0p001", "ed_again", [](auto& c) { c.phys.mu = 1e-3; });
    auto c = preset_at("multiplier-audit", "ma1");
    run(c);
    rerun("multiplier-audit", c.output_dir, "ma2", [](auto&) {});
    report(10, same && files >= 8, "same config and seed reproduce byte-identical CSV outputs under parallel execution",
           fmt("%d CSV files compared, %s", files, same ? "all identical" : "MISMATCH"));
}

}  // namespace

int main() {
    const auto t0 = Clock::now();
    auto guard = [](int id, auto&& f) {
        try {
            f();
        } catch (const std::exception& e) {
            report(id, false, "aborted", e.what());
        }
    };
    guard(1, criterion1);
    guard(2, criterion2);
    guard(3, criteria3and4);
    guard(5, criterion5);
    guard(6, criterion6);
    guard(7, criterion7);
    guard(8, criterion8);
    guard(9, criterion9);
    guard(10, criterion10);
    std::printf("acceptance: %d failing criteria, %.1f s total\n", failures, since(t0));
    return failures == 0 ? 0 : 1;
}

#include "couette/multipliers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "couette/rng.hpp"

namespace couette {

MValue m_value(double t, const Mode& mode, double mu) {
    if (mode.k == 0) return {};
    const double k = mode.k, l = mode.l, eta = mode.eta;
    const double R = 64.0 / std::cbrt(mu);
    const double q = eta / k;
    const auto sv = symbol_values(t, mode);
    const double kl2 = k * k + l * l;
    const double top = k * k + (R * k) * (R * k) + l * l;

    if (q <= -R) return {};
    if (q <= 0.0) {
        const double base = kl2 + eta * eta;
        if (t <= q + R) return {sv.p / base, sv.p_prime / sv.p};
        return {top / base, 0.0};
    }
    if (t < q) return {};
    if (t <= q + R) return {sv.p / kl2, sv.p_prime / sv.p};
    return {top / kl2, 0.0};
}

M123Values m123_values(double t, const Mode& mode, double mu, double N) {
    M123Values r;
    if (mode.k == 0) return r;
    const double k = mode.k, l = mode.l, eta = mode.eta;
    const double a = std::sqrt(k * k + l * l);
    const double sg = k > 0 ? 1.0 : -1.0;
    const double ak = std::abs(k);
    const double p = symbol_values(t, mode).p;

    // integral of 1/p over [0,t], times |k| a
    const double arc = std::atan((k * t - eta) * sg / a) + std::atan(eta * sg / a);
    const double kl = std::sqrt(1.0 + k * k * l * l);
    r.m1 = std::exp(N * ak / a * arc);
    r.m3 = std::exp(N * kl / (ak * a) * arc);
    r.dlog_m1 = N * k * k / p;
    r.dlog_m3 = N * kl / p;

    const double m13 = std::cbrt(mu);
    const double s = m13 * (t - eta / k);
    r.m2 = std::exp(std::atan(s) + std::atan(m13 * eta / k));
    r.dlog_m2 = m13 / (1.0 + s * s);
    return r;
}

MultiplierWeights weights(double t, const Mode& mode, const PhysicalParams& phys,
                          const MultiplierParams& mp) {
    MultiplierWeights w;
    const auto mv = m_value(t, mode, phys.mu);
    const auto mi = m123_values(t, mode, phys.mu, mp.N);
    w.m = mv.m;
    w.dlog_m = mv.dlog_m;
    w.m1 = mi.m1;
    w.m2 = mi.m2;
    w.m3 = mi.m3;
    if (mode.k == 0) return w;
    const double k = mode.k, l = mode.l, eta = mode.eta;
    const double bracket = mp.s == 0.0 ? 1.0 : std::pow(1.0 + k * k + eta * eta + l * l, 0.5 * mp.s);
    const double inv123 = 1.0 / (mi.m1 * mi.m2 * mi.m3);
    w.M = bracket * std::pow(mv.m, -0.75) * inv123;
    w.M1 = bracket / mv.m * inv123;
    w.h = std::sqrt(mp.c) * w.M;
    w.g = 0.5 * std::sqrt(mv.dlog_m) * w.M;
    return w;
}

std::vector<AuditSample> draw_audit_samples(std::size_t count, const std::vector<double>& mu_list,
                                            std::uint64_t seed, const AuditRanges& rg) {
    std::vector<AuditSample> out;
    out.reserve(count);
    CounterRng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        AuditSample s;
        s.mu = mu_list[i % mu_list.size()];
        const double scale = 1.0 / std::cbrt(s.mu);
        int k = 0;
        while (k == 0) k = static_cast<int>(rng.integer(-rg.k_max, rg.k_max));
        s.k = k;
        s.l = static_cast<int>(rng.integer(-rg.l_max, rg.l_max));
        if (i % 2 == 0) {
            s.t = rng.uniform(0.0, rg.t_wide * scale);
            const double e = rg.eta_wide * scale * rg.k_max;
            s.eta = rng.uniform(-e, e);
        } else {
            s.t = rng.uniform(0.0, rg.t_narrow);
            s.eta = rng.uniform(-rg.eta_narrow, rg.eta_narrow);
        }
        out.push_back(s);
    }
    return out;
}

namespace {

double margin_233(const AuditSample& s, const Mode& mode) {
    const auto mi = m123_values(s.t, mode, s.mu, 1.0);
    const double p = symbol_values(s.t, mode).p;
    const double rhs = 0.5 * std::cbrt(s.mu);
    return (mi.dlog_m2 + s.mu * p) / rhs - 1.0;
}

constexpr double kSlack = 1e-12;

}  // namespace

Claim233Report audit_claim_233(std::size_t sample_count, const std::vector<double>& mu_list,
                               std::uint64_t seed, const AuditRanges& ranges,
                               std::vector<AuditSample>* record) {
    Claim233Report rep;
    rep.histogram.assign(7, 0);
    rep.min_margin = std::numeric_limits<double>::infinity();
    auto samples = draw_audit_samples(sample_count, mu_list, seed, ranges);
    for (auto& s : samples) {
        const Mode mode{s.k, s.eta, s.l, 1.0};
        s.margin_233 = margin_233(s, mode);
        const auto mv = m_value(s.t, mode, s.mu);
        const auto mi = m123_values(s.t, mode, s.mu, 1.0);
        s.m = mv.m;
        s.m1 = mi.m1;
        s.m2 = mi.m2;
        s.m3 = mi.m3;
        rep.min_margin = std::min(rep.min_margin, s.margin_233);
        if (s.margin_233 < -kSlack) {
            ++rep.violations;
            rep.violating.push_back(s);
        }
        const double mg = std::max(s.margin_233, 0.0);
        std::size_t bin = 0;
        if (mg >= 1e-3) bin = std::min<std::size_t>(6, 1 + static_cast<std::size_t>(std::floor(std::log10(mg) + 3.0)));
        ++rep.histogram[bin];
        ++rep.samples;
    }
    if (record) *record = std::move(samples);
    return rep;
}

std::size_t InequalityReport::total_violations() const {
    std::size_t n = 0;
    for (auto& [_, v] : violations) n += v;
    return n;
}

InequalityReport audit_multiplier_inequalities(std::size_t sample_count,
                                               const std::vector<double>& mu_list, double eps,
                                               std::uint64_t seed, const AuditRanges& ranges) {
    InequalityReport rep;
    const double N = 9.0 * (1.0 + eps) * (1.0 + eps);
    const char* names[] = {"m>=1", "m<=p/(k2+l2)", "m1 in [1,e^(N pi)]", "m3 in [1,e^(N pi)]",
                           "m2 in [1,e^pi]", "dlog_m2+mu p>=mu^(1/3)/2", "dlog_m>=0",
                           "dlog_m<=|p'|/p", "|p'|/p<=1", "1/p<=dlog_m1/N"};
    for (auto* n : names) rep.violations[n] = 0;
    auto check = [&](bool ok, const char* name) {
        if (!ok) ++rep.violations[name];
    };
    const double up = 1.0 + kSlack;
    const double lo = 1.0 - kSlack;
    const auto samples = draw_audit_samples(sample_count, mu_list, seed, ranges);
    for (const auto& s : samples) {
        const Mode mode{s.k, s.eta, s.l, 1.0};
        const auto sv = symbol_values(s.t, mode);
        const auto mv = m_value(s.t, mode, s.mu);
        const auto mi = m123_values(s.t, mode, s.mu, N);
        const double kl2 = double(s.k) * s.k + double(s.l) * s.l;
        const double eNpi = std::exp(N * std::numbers::pi);
        const double ratio = std::abs(sv.p_prime) / sv.p;
        check(mv.m >= lo, names[0]);
        check(mv.m <= sv.p / kl2 * up, names[1]);
        check(mi.m1 >= lo && mi.m1 <= eNpi * up, names[2]);
        check(mi.m3 >= lo && mi.m3 <= eNpi * up, names[3]);
        check(mi.m2 >= lo && mi.m2 <= std::exp(std::numbers::pi) * up, names[4]);
        check(mi.dlog_m2 + s.mu * sv.p >= 0.5 * std::cbrt(s.mu) * lo, names[5]);
        check(mv.dlog_m >= 0.0, names[6]);
        check(mv.dlog_m <= ratio * up, names[7]);
        check(ratio <= up, names[8]);
        check(1.0 / sv.p <= mi.dlog_m1 / N * up, names[9]);
        rep.max_m_mu23 = std::max(rep.max_m_mu23, mv.m * std::pow(s.mu, 2.0 / 3.0));
        ++rep.samples;
    }
    return rep;
}

}  // namespace couette

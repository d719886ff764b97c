#include "couette/diagnostics.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace couette {

namespace {

RateFit linear_fit(const Series& series, Window window, bool log_time) {
    std::vector<double> xs, ys;
    for (const auto& [t, v] : series) {
        if (t < window.first || t > window.second) continue;
        if (!(v > 0.0)) throw std::invalid_argument("fit requires positive values in the window");
        xs.push_back(log_time ? std::log1p(t) : t);
        ys.push_back(std::log(v));
    }
    const std::size_t n = xs.size();
    if (n < 5) throw std::invalid_argument("fit requires at least 5 points in the window");
    const double mx = pairwise_sum(xs) / double(n), my = pairwise_sum(ys) / double(n);
    std::vector<double> sxy(n), sxx(n), syy(n);
    for (std::size_t i = 0; i < n; ++i) {
        sxy[i] = (xs[i] - mx) * (ys[i] - my);
        sxx[i] = (xs[i] - mx) * (xs[i] - mx);
        syy[i] = (ys[i] - my) * (ys[i] - my);
    }
    const double Sxy = pairwise_sum(sxy), Sxx = pairwise_sum(sxx), Syy = pairwise_sum(syy);
    if (Sxx == 0.0) throw std::invalid_argument("degenerate fit window");
    const double slope = Sxy / Sxx;
    RateFit f;
    f.intercept = my - slope * mx;
    f.rate_or_exponent = log_time ? slope : -slope;
    // a constant series is fitted exactly
    f.r_squared = Syy <= 1e-300 ? 1.0 : std::clamp(Sxy * Sxy / (Sxx * Syy), 0.0, 1.0);
    f.window = window;
    f.n_points = n;
    return f;
}

}  // namespace

RateFit fit_exponential_rate(const Series& series, Window window) { return linear_fit(series, window, false); }
RateFit fit_power_law(const Series& series, Window window) { return linear_fit(series, window, true); }

double monotonicity_audit(const Series& s, double r, double floor) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < s.size(); ++i) {
        const double dt = s[i].first - s[i - 1].first;
        const double inc = (s[i].second * std::exp(r * dt) - s[i - 1].second) / std::max(s[i - 1].second, floor);
        worst = std::max(worst, inc);
    }
    return s.size() < 2 ? 0.0 : worst;
}

LiftupAudit liftup_bound_audit(const Series& u1, const Series& grad, const LiftupNorms& in,
                               const PhysicalParams& phys) {
    if (!(in.b00u2_l2l1 >= 0.0) || !std::isfinite(in.b00u2_l2l1))
        throw std::invalid_argument("lift-up audit needs the L2+L1 norm of the 00 data");
    if (grad.size() != u1.size()) throw std::invalid_argument("series length mismatch");
    const double nu = phys.lambda + 2.0 * phys.mu;
    std::vector<double> lhs(u1.size()), base(u1.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < u1.size(); ++i) {
        if (i > 0) {
            const double dt = u1[i].first - u1[i - 1].first;
            acc += 0.5 * dt * (grad[i].second * grad[i].second + grad[i - 1].second * grad[i - 1].second);
        }
        lhs[i] = u1[i].second + std::sqrt(phys.mu * acc);
        base[i] = in.b00u2_l2l1 * std::pow(nu, -0.25) * std::pow(1.0 + u1[i].first, 0.75) + in.lnz_in / phys.mu;
    }
    LiftupAudit a;
    a.C = 1.0;
    for (std::size_t i = 0; i < u1.size(); ++i) {
        const double excess = lhs[i] - in.u1_in;
        if (excess <= 0.0) continue;
        if (base[i] <= 0.0) {
            a.C = std::numeric_limits<double>::infinity();
            break;
        }
        a.C = std::max(a.C, excess / base[i]);
    }
    a.pass = std::isfinite(a.C);
    for (std::size_t i = 0; i < u1.size(); ++i)
        a.margin.emplace_back(u1[i].first, lhs[i] - (in.u1_in + a.C * base[i]));
    return a;
}

const std::vector<std::string>& claim_ids() {
    static const std::vector<std::string> ids = {"T1.1-b", "T1.1-u1", "T1.1-u2", "T1.1-u3", "L3.2",
                                                 "L3.3-k0", "L3.3-k1", "L3.3-u3", "P4.1", "T1.2"};
    return ids;
}

ClaimSpec claim_spec(const std::string& id, const PhysicalParams& phys) {
    const double m13 = std::cbrt(phys.mu);
    if (id == "T1.1-b") return {id, "b_nz", false, m13 / 44.0};
    if (id == "T1.1-u1") return {id, "u1_nz", false, m13 / 88.0};
    if (id == "T1.1-u2") return {id, "u2_nz", false, m13 / 88.0};
    if (id == "T1.1-u3") return {id, "u3_nz", false, m13 / 44.0};
    if (id == "L3.2") return {id, "b0u0_lnz", false, phys.mu / 3.0};
    if (id == "L3.3-k0") return {id, "b00u200", true, -0.25};
    if (id == "L3.3-k1") return {id, "dy_b00u200", true, -0.75};
    if (id == "L3.3-u3") return {id, "u3_00", true, -0.25};
    if (id == "P4.1") return {id, "P41", false, m13 / 22.0};
    if (id == "T1.2") return {id, "T12", false, m13 / 22.0};
    std::string all;
    for (auto& c : claim_ids()) all += " " + c;
    throw std::invalid_argument("unknown claim id '" + id + "'; known:" + all);
}

Window default_window(const ClaimSpec& c, const PhysicalParams& phys, double t_end, double delta_eta) {
    if (c.power_law) {
        const double hi = std::min(t_end, 0.1 / (phys.mu * delta_eta * delta_eta));
        return {hi / 20.0, hi};
    }
    if (c.id == "L3.2") return {0.1 * t_end, t_end};
    return {2.0 / std::cbrt(phys.mu), t_end};
}

AuditReport theorem_rate_audit(const std::map<std::string, Series>& norms, const std::string& claim,
                               const PhysicalParams& phys, double delta_eta, std::optional<Window> window) {
    const auto spec = claim_spec(claim, phys);
    AuditReport r;
    r.claim = claim;
    r.series = spec.series;
    r.required = spec.required;
    auto it = norms.find(spec.series);
    if (it == norms.end() || it->second.empty()) {
        r.note = "series '" + spec.series + "' missing from run outputs";
        r.inconclusive = true;
        return r;
    }
    const auto& s = it->second;
    const Window w = window ? *window : default_window(spec, phys, s.back().first, delta_eta);
    r.window = w;
    bool all_zero = true;
    for (const auto& [t, v] : s)
        if (t >= w.first && t <= w.second && v != 0.0) all_zero = false;
    if (all_zero && !spec.power_law) {
        // an identically vanishing component satisfies any decay bound
        r.pass = true;
        r.inconclusive = true;
        r.note = "series identically zero in the window";
        return r;
    }
    RateFit f;
    try {
        f = spec.power_law ? fit_power_law(s, w) : fit_exponential_rate(s, w);
    } catch (const std::invalid_argument& e) {
        r.note = std::string("window too short or invalid: ") + e.what();
        r.inconclusive = true;
        return r;
    }
    r.fitted = f.rate_or_exponent;
    r.r2 = f.r_squared;
    r.n_points = f.n_points;
    if (spec.power_law)
        r.pass = std::abs(r.fitted - spec.required) <= 0.05;
    else
        r.pass = r.fitted >= 0.95 * spec.required;
    if (r.r2 < 0.95) {
        r.inconclusive = true;
        r.note = "r^2 below 0.95";
    }
    return r;
}

EnergyBalance zero_mode_energy_balance(const FieldEnsemble& ens, double T, const PhysicalParams& phys,
                                       double tol, double panel, unsigned threads) {
    using GL = boost::math::quadrature::gauss<double, 8>;
    const auto& ab = GL::abscissa();
    const auto& wt = GL::weights();
    std::vector<double> xs, ws;  // nodes on [-1,1]
    for (std::size_t i = ab.size(); i-- > 0;) {
        if (ab[i] == 0.0) continue;
        xs.push_back(-ab[i]);
        ws.push_back(wt[i]);
    }
    for (std::size_t i = 0; i < ab.size(); ++i) {
        xs.push_back(ab[i]);
        ws.push_back(wt[i]);
    }
    const std::size_t np = static_cast<std::size_t>(std::ceil(T / panel));
    const double H = T / double(np);
    TimeGrid tg{0.0, T, {}};
    std::vector<double> qw;  // quadrature weight per output time (0 at panel ends)
    for (std::size_t j = 0; j < np; ++j) {
        const double a = H * double(j);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            tg.output_times.push_back(a + 0.5 * H * (xs[i] + 1.0));
            qw.push_back(0.5 * H * ws[i]);
        }
        tg.output_times.push_back(j + 1 == np ? T : a + H);
        qw.push_back(0.0);
    }
    const std::size_t n = ens.modes.size();
    std::vector<double> e0(n, 0.0), eT(n, 0.0), diss(n, 0.0);
    const double ie2 = 1.0 / (phys.eps * phys.eps);
    parallel_for(n, threads, [&](std::size_t i) {
        const auto& m = ens.modes[i];
        if (m.k != 0) return;
        const auto tr = integrate_mode(m, ens.states[i], tg, phys, tol);
        auto energy = [&](const PrimitiveState& s) {
            return std::norm(s.b_hat) * ie2 + std::norm(s.u_hat[1]) + std::norm(s.u_hat[2]);
        };
        const double p = m.eta * m.eta + double(m.l) * m.l;
        std::vector<double> contrib(tr.size());
        for (std::size_t j = 0; j < tr.size(); ++j) {
            const auto& u = tr[j].u_hat;
            const double uu = std::norm(u[1]) + std::norm(u[2]);
            const double dv = std::norm(m.eta * u[1] + double(m.l) * u[2]);
            contrib[j] = qw[j] * (2.0 * phys.mu * p * uu + 2.0 * (phys.lambda + phys.mu) * dv);
        }
        e0[i] = m.weight * energy(ens.states[i]);
        eT[i] = m.weight * energy(tr.back());
        diss[i] = m.weight * pairwise_sum(contrib);
    });
    EnergyBalance b;
    b.e0 = pairwise_sum(e0);
    b.eT = pairwise_sum(eT);
    b.dissipated = pairwise_sum(diss);
    b.relative_residual = b.e0 > 0.0 ? std::abs(b.eT - b.e0 + b.dissipated) / b.e0 : 0.0;
    return b;
}

}  // namespace couette

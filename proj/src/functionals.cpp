#include "couette/functionals.hpp"

#include <cmath>
#include <stdexcept>

namespace couette {

double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

Selector parse_selector(std::string_view text) {
    Selector s;
    std::string_view t = text;
    if (t.starts_with("sqrtp*")) {
        s.sqrt_p = true;
        t.remove_prefix(6);
    }
    if (t.ends_with("/eps")) {
        s.over_eps = true;
        t.remove_suffix(4);
    }
    static const std::map<std::string_view, Component> names = {
        {"b", Component::b},   {"u1", Component::u1}, {"u2", Component::u2}, {"u3", Component::u3},
        {"B1", Component::B1}, {"B2", Component::B2}, {"B3", Component::B3}, {"D1", Component::D1},
        {"D2", Component::D2}, {"D3", Component::D3}, {"W1", Component::W1}, {"W2", Component::W2},
        {"W3", Component::W3}};
    auto it = names.find(t);
    if (it == names.end()) throw std::invalid_argument("unknown selector: " + std::string(text));
    s.comp = it->second;
    return s;
}

namespace {

cplx select(const Component c, const PrimitiveState& st, const DerivedState& d) {
    switch (c) {
    case Component::b: return st.b_hat;
    case Component::u1: return st.u_hat[0];
    case Component::u2: return st.u_hat[1];
    case Component::u3: return st.u_hat[2];
    case Component::B1: return d.B[0];
    case Component::B2: return d.B[1];
    case Component::B3: return d.B[2];
    case Component::D1: return d.D[0];
    case Component::D2: return d.D[1];
    case Component::D3: return d.D[2];
    case Component::W1: return d.W[0];
    case Component::W2: return d.W[1];
    case Component::W3: return d.W[2];
    }
    return 0.0;
}

double weight_value(WeightKind w, double t, const Mode& mode, const PhysicalParams& phys,
                    const MultiplierParams& mp) {
    if (w == WeightKind::Plain) return 1.0;
    const auto mw = weights(t, mode, phys, mp);
    switch (w) {
    case WeightKind::M: return mw.M;
    case WeightKind::M1: return mw.M1;
    case WeightKind::SqrtDlogM_M: return std::sqrt(mw.dlog_m) * mw.M;
    default: break;
    }
    const auto mi = m123_values(t, mode, phys.mu, mp.N);
    if (mode.k == 0) return 0.0;
    if (w == WeightKind::SqrtDlogM1_M) return std::sqrt(mi.dlog_m1) * mw.M;
    if (w == WeightKind::SqrtDlogM2_M) return std::sqrt(mi.dlog_m2) * mw.M;
    return std::sqrt(mi.dlog_m3) * mw.M;
}

// Per-mode accumulation buffer: one vector per named quantity, reduced pairwise at the end.
struct Buffers {
    std::map<std::string, std::vector<double>> v;
    std::size_t n;
    explicit Buffers(std::size_t n_) : n(n_) {}
    std::vector<double>& operator[](const std::string& k) {
        auto it = v.find(k);
        if (it == v.end()) it = v.emplace(k, std::vector<double>(n, 0.0)).first;
        return it->second;
    }
    double sum(const std::string& k) { return pairwise_sum((*this)[k]); }
};

}  // namespace

double weighted_l2(const FieldEnsemble& ens, double t, const Selector& sel, WeightKind w,
                   const PhysicalParams& phys, const MultiplierParams& mp) {
    std::vector<double> acc(ens.modes.size());
    for (std::size_t i = 0; i < ens.modes.size(); ++i) {
        const auto& mode = ens.modes[i];
        const double wt = weight_value(w, t, mode, phys, mp);
        if (wt == 0.0) continue;
        const auto d = derive(t, mode, ens.states[i]);
        double a = std::abs(select(sel.comp, ens.states[i], d));
        if (sel.sqrt_p) a *= std::sqrt(symbol_values(t, mode).p);
        if (sel.over_eps) a /= phys.eps;
        acc[i] = wt * wt * a * a * mode.weight;
    }
    return std::sqrt(pairwise_sum(acc));
}

const std::vector<std::string>& theorem_norm_names() {
    static const std::vector<std::string> names = {
        "b_nz", "u1_nz", "u2_nz", "u3_nz", "xx_u1_nz", "dxz_u2_nz", "dxz_u3_nz",
        "b0u0", "b0u0_lnz", "u1_0", "grad_u1_0", "b00u200", "dy_b00u200", "u3_00", "dy_u3_00",
        "P41", "T12"};
    return names;
}

EnergyReport energy_report(const FieldEnsemble& ens, double t, const PhysicalParams& phys,
                           const MultiplierParams& mp) {
    const std::size_t n = ens.modes.size();
    Buffers B(n);
    const double ie2 = 1.0 / (phys.eps * phys.eps);
    for (const auto& name : theorem_norm_names()) B[name];
    for (const char* k : {"E1", "X1", "E2", "X2"}) B[k];
    for (std::size_t i = 0; i < n; ++i) {
        const auto& mode = ens.modes[i];
        const auto& st = ens.states[i];
        const double w = mode.weight;
        const auto sv = symbol_values(t, mode);
        const double nb = std::norm(st.b_hat);
        const double n1 = std::norm(st.u_hat[0]), n2 = std::norm(st.u_hat[1]), n3 = std::norm(st.u_hat[2]);
        if (mode.k != 0) {
            const double k2 = double(mode.k) * mode.k, kl2 = k2 + double(mode.l) * mode.l;
            B["b_nz"][i] = w * nb;
            B["u1_nz"][i] = w * n1;
            B["u2_nz"][i] = w * n2;
            B["u3_nz"][i] = w * n3;
            B["xx_u1_nz"][i] = w * k2 * k2 * n1;
            B["dxz_u2_nz"][i] = w * kl2 * kl2 * n2;
            B["dxz_u3_nz"][i] = w * kl2 * kl2 * n3;

            const auto d = derive(t, mode, st);
            const auto mw = weights(t, mode, phys, mp);
            const double M2 = mw.M * mw.M, M12 = mw.M1 * mw.M1;
            const double g2 = mw.g * mw.g, h2 = mw.h * mw.h;
            double e1 = 0.0, x1 = 0.0;
            for (int j : {0, 2}) {
                const double bb = std::norm(d.B[j]);
                e1 += M2 * sv.p * bb * ie2 + mw.dlog_m * M2 * bb + M2 * std::norm(d.D[j]);
                x1 += 2.0 * (g2 - h2) * std::real(d.B[j] * std::conj(d.D[j]));
            }
            e1 += M2 * std::norm(d.W[1]) + M12 * std::norm(d.W[2]);
            const double bb2 = std::norm(d.B[1]);
            const double e2 = M2 * sv.p * bb2 * ie2 + mw.dlog_m * M2 * bb2 + M2 * std::norm(d.D[1]) +
                              M12 * std::norm(d.W[0]);
            const double x2 = 2.0 * (g2 - h2) * std::real(d.B[1] * std::conj(d.D[1]));
            B["E1"][i] = w * e1;
            B["X1"][i] = w * x1;
            B["E2"][i] = w * e2;
            B["X2"][i] = w * x2;

            const double m34 = std::pow(mw.m, -1.5);  // (m^(-3/4))^2
            double p41 = 0.0;
            for (int j : {0, 2}) p41 += m34 * (sv.p * std::norm(d.B[j]) * ie2 + std::norm(d.D[j]));
            p41 += m34 * std::norm(d.W[1]) + std::norm(d.W[2]) / (mw.m * mw.m);
            B["P41"][i] = w * p41;
            const double q = sv.p * (std::norm(d.B[0]) + std::norm(d.B[2])) * ie2 + std::norm(d.D[0]) +
                             std::norm(d.D[2]) + std::norm(d.W[1] - d.B[0]);
            B["T12"][i] = w * (phys.mu * q + std::pow(phys.mu, 4.0 / 3.0) * std::norm(d.W[2]));
        } else {
            const double eta2 = mode.eta * mode.eta, l2 = double(mode.l) * mode.l;
            const double e0 = nb * ie2 + n2 + n3;
            B["b0u0"][i] = w * e0;
            if (mode.l != 0) B["b0u0_lnz"][i] = w * e0;
            B["u1_0"][i] = w * n1;
            B["grad_u1_0"][i] = w * (eta2 + l2) * n1;
            if (mode.l == 0) {
                B["b00u200"][i] = w * (nb * ie2 + n2);
                B["dy_b00u200"][i] = w * eta2 * (nb * ie2 + n2);
                B["u3_00"][i] = w * n3;
                B["dy_u3_00"][i] = w * eta2 * n3;
            }
        }
    }
    EnergyReport r;
    r.t = t;
    r.E1 = B.sum("E1");
    r.calE1 = r.E1 + B.sum("X1");
    r.E2 = B.sum("E2");
    r.calE2 = r.E2 + B.sum("X2");
    const double cc = mp.c0 * std::pow(phys.mu, 2.0 / 3.0);
    r.combined = r.calE1 + cc * r.calE2;
    r.combined_E = r.E1 + cc * r.E2;
    for (const auto& name : theorem_norm_names()) {
        const double s = B.sum(name);
        // P41 and T12 are squared quantities, the rest are norms
        r.theorem_norms[name] = (name == "P41" || name == "T12") ? s : std::sqrt(s);
    }
    return r;
}

double energy_E1(const FieldEnsemble& e, double t, const PhysicalParams& p, const MultiplierParams& mp) {
    return energy_report(e, t, p, mp).E1;
}
double energy_calE1(const FieldEnsemble& e, double t, const PhysicalParams& p, const MultiplierParams& mp) {
    return energy_report(e, t, p, mp).calE1;
}
double energy_E2(const FieldEnsemble& e, double t, const PhysicalParams& p, const MultiplierParams& mp) {
    return energy_report(e, t, p, mp).E2;
}
double energy_calE2(const FieldEnsemble& e, double t, const PhysicalParams& p, const MultiplierParams& mp) {
    return energy_report(e, t, p, mp).calE2;
}
double combined_lyapunov(const FieldEnsemble& e, double t, const PhysicalParams& p, const MultiplierParams& mp) {
    return energy_report(e, t, p, mp).combined;
}

std::pair<double, double> zero_mode_norm(const FieldEnsemble& ens, double eps, std::pair<int, int> alpha,
                                         Projection proj, bool h1_weight) {
    const auto [a1, a2] = alpha;
    if (a1 < 0 || a1 > 1 || a2 < 0 || a2 > 1) throw std::invalid_argument("alpha entries must be 0 or 1");
    std::vector<double> bb(ens.modes.size(), 0.0), uu(ens.modes.size(), 0.0);
    for (std::size_t i = 0; i < ens.modes.size(); ++i) {
        const auto& m = ens.modes[i];
        if (m.k != 0) continue;
        if (proj == Projection::LNonzero && m.l == 0) continue;
        if (proj == Projection::LZero && m.l != 0) continue;
        double f = 1.0;
        if (a1) f *= m.eta * m.eta;
        if (a2) f *= double(m.l) * m.l;
        if (h1_weight) f *= 1.0 + m.eta * m.eta + double(m.l) * m.l;
        const auto& st = ens.states[i];
        bb[i] = m.weight * f * std::norm(st.b_hat) / (eps * eps);
        uu[i] = m.weight * f * (std::norm(st.u_hat[1]) + std::norm(st.u_hat[2]));
    }
    return {std::sqrt(pairwise_sum(bb)), std::sqrt(pairwise_sum(uu))};
}

std::map<std::string, double> primitive_route_norms(const FieldEnsemble& ens, double t,
                                                    const PhysicalParams& phys) {
    const auto r = energy_report(ens, t, phys, default_multiplier_params(phys));
    std::map<std::string, double> out;
    for (const char* k : {"b_nz", "xx_u1_nz", "dxz_u2_nz", "dxz_u3_nz"}) out[k] = r.theorem_norms.at(k);
    return out;
}

std::map<std::string, double> derived_route_norms(const FieldEnsemble& ens, double t, const PhysicalParams&) {
    const std::size_t n = ens.modes.size();
    std::vector<double> b(n, 0.0), u1(n, 0.0), u2(n, 0.0), u3(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& mode = ens.modes[i];
        if (mode.k == 0) continue;
        const auto sv = symbol_values(t, mode);
        const auto d = derive(t, mode, ens.states[i]);
        const double k = mode.k, l = mode.l, kl2 = k * k + l * l, w = mode.weight;
        // b from B1 = ik b
        b[i] = w * std::norm(d.B[0]) / (k * k);
        // d_xx u1 = (k^2 D1 - k xi W2 + k xi B1 - k l W3) / p
        const cplx xx = (k * k * d.D[0] - k * sv.xi * d.W[1] + k * sv.xi * d.B[0] - k * l * d.W[2]) / sv.p;
        u1[i] = w * std::norm(xx);
        // Delta_xz u2 = (k^2+l^2)/p (W2 - B1 + D2)
        u2[i] = w * std::norm(kl2 / sv.p * (d.W[1] - d.B[0] + d.D[1]));
        // Delta_xz u3 = (k^2+l^2)/p (W3 + D3)
        u3[i] = w * std::norm(kl2 / sv.p * (d.W[2] + d.D[2]));
    }
    return {{"b_nz", std::sqrt(pairwise_sum(b))},
            {"xx_u1_nz", std::sqrt(pairwise_sum(u1))},
            {"dxz_u2_nz", std::sqrt(pairwise_sum(u2))},
            {"dxz_u3_nz", std::sqrt(pairwise_sum(u3))}};
}

}  // namespace couette

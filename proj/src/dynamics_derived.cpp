#include "couette/dynamics_derived.hpp"

#include <cmath>
#include <stdexcept>

namespace couette {

namespace {

void require_nonzero_k(const Mode& mode) {
    if (mode.k == 0) throw std::invalid_argument("derived systems are defined for k != 0 only");
}

using State9 = std::array<cplx, 9>;

State9 pack(const DerivedState& s) {
    return {s.B[0], s.B[1], s.B[2], s.D[0], s.D[1], s.D[2], s.W[0], s.W[1], s.W[2]};
}
DerivedState unpack(const State9& y) {
    return {{y[0], y[1], y[2]}, {y[3], y[4], y[5]}, {y[6], y[7], y[8]}};
}

}  // namespace

DerivedState derive(double t, const Mode& mode, const PrimitiveState& st) {
    const auto sv = symbol_values(t, mode);
    const auto& io = sv.iota;
    const auto& u = st.u_hat;
    const cplx d = io[0] * u[0] + io[1] * u[1] + io[2] * u[2];
    DerivedState s;
    cvec3 w;
    for (int i = 0; i < 3; ++i) {
        s.B[i] = io[i] * st.b_hat;
        s.D[i] = io[i] * d;
        w[i] = -sv.p * u[i] - io[i] * d;
    }
    s.W = {w[0] - s.B[1], w[1] + s.B[0], w[2]};
    return s;
}

Triple rhs_Lx(double t, const Mode& mode, const Triple& s, const PhysicalParams& p) {
    require_nonzero_k(mode);
    const auto sv = symbol_values(t, mode);
    const double k = mode.k;
    const auto& [B1, D1, W2] = s;
    const double nu = p.lambda + 2.0 * p.mu;
    return {-D1,
            sv.p_prime / sv.p * D1 - 2.0 * k * k / sv.p * (W2 - B1) + sv.p / (p.eps * p.eps) * B1 - nu * sv.p * D1,
            -p.mu * sv.p * W2 + p.mu * sv.p * B1};
}

Triple rhs_Lz(double t, const Mode& mode, const Triple& s, const std::array<cplx, 2>& coupling,
              const PhysicalParams& p) {
    require_nonzero_k(mode);
    const auto sv = symbol_values(t, mode);
    const double kl = double(mode.k) * mode.l;
    const auto& [B3, D3, W3] = s;
    const cplx v = coupling[1] - coupling[0];
    const double nu = p.lambda + 2.0 * p.mu;
    const double r = sv.p_prime / sv.p;
    return {-D3,
            r * D3 - 2.0 * kl / sv.p * v + sv.p / (p.eps * p.eps) * B3 - nu * sv.p * D3,
            r * W3 + 2.0 * kl / sv.p * v - p.mu * sv.p * W3};
}

Triple rhs_Ly(double t, const Mode& mode, const Triple& s, const ForcingTriple& fo,
              const PhysicalParams& p) {
    require_nonzero_k(mode);
    const auto sv = symbol_values(t, mode);
    const auto& [B2, D2, W1] = s;
    const double nu = p.lambda + 2.0 * p.mu;
    const double r = sv.p_prime / sv.p;
    return {-D2 + fo.F,
            r * D2 + sv.p / (p.eps * p.eps) * B2 - nu * sv.p * D2 + fo.G,
            r * (W1 + B2) - p.mu * sv.p * W1 - p.mu * sv.p * B2 + fo.H};
}

ForcingTriple forcing_FGH(double t, const Mode& mode, const Triple& s) {
    require_nonzero_k(mode);
    const auto sv = symbol_values(t, mode);
    const double k = mode.k;
    const auto& [B1, D1, W2] = s;
    const cplx v = W2 - B1;
    return {-B1, -D1 + sv.p_prime / sv.p * v, 2.0 * B1 - W2 + 2.0 * k * k / sv.p * v};
}

DerivedState rhs_derived(double t, const Mode& mode, const DerivedState& s, const PhysicalParams& p) {
    const Triple x{s.B[0], s.D[0], s.W[1]};
    const auto dx = rhs_Lx(t, mode, x, p);
    const auto dz = rhs_Lz(t, mode, {s.B[2], s.D[2], s.W[2]}, {s.B[0], s.W[1]}, p);
    const auto dy = rhs_Ly(t, mode, {s.B[1], s.D[1], s.W[0]}, forcing_FGH(t, mode, x), p);
    return {{dx[0], dy[0], dz[0]}, {dx[1], dy[1], dz[1]}, {dy[2], dx[2], dz[2]}};
}

std::vector<DerivedState> integrate_derived(const Mode& mode, const DerivedState& s0, const TimeGrid& tg,
                                            const PhysicalParams& p, double tol) {
    require_nonzero_k(mode);
    auto f = [&](const State9& y, State9& dy, double t) { dy = pack(rhs_derived(t, mode, unpack(y), p)); };
    const auto ys = integrate_adaptive<9>(f, pack(s0), tg.t0, tg.output_times, tol);
    std::vector<DerivedState> out;
    out.reserve(ys.size());
    for (const auto& y : ys) out.push_back(unpack(y));
    return out;
}

double derived_norm(const DerivedState& s) { return l2norm(pack(s)); }

double divergence_residual(double t, const Mode& mode, const DerivedState& s) {
    const auto sv = symbol_values(t, mode);
    const cvec3 w{s.W[0] + s.B[1], s.W[1] - s.B[0], s.W[2]};
    const double kap[3] = {double(mode.k), sv.xi, double(mode.l)};
    cplx dot = 0.0;
    double wn = 0.0;
    for (int i = 0; i < 3; ++i) {
        dot += kap[i] * w[i];
        wn += std::norm(w[i]);
    }
    if (wn == 0.0) return 0.0;
    return std::abs(dot) / (std::sqrt(sv.p) * std::sqrt(wn));
}

ConsistencyResult consistency_check_full(const Mode& mode, const PrimitiveState& st0, const TimeGrid& tg,
                                         const PhysicalParams& p, double tol) {
    require_nonzero_k(mode);
    const auto prim = integrate_mode(mode, st0, tg, p, tol);
    const auto der = integrate_derived(mode, derive(tg.t0, mode, st0), tg, p, tol);
    ConsistencyResult r;
    for (std::size_t n = 0; n < prim.size(); ++n) {
        const double t = tg.output_times[n];
        const auto ref = derive(t, mode, prim[n]);
        const double rn = derived_norm(ref);
        DerivedState diff;
        for (int i = 0; i < 3; ++i) {
            diff.B[i] = der[n].B[i] - ref.B[i];
            diff.D[i] = der[n].D[i] - ref.D[i];
            diff.W[i] = der[n].W[i] - ref.W[i];
        }
        const double dn = derived_norm(diff);
        r.residual = std::max(r.residual, rn > 0.0 ? dn / rn : dn);
        r.divergence = std::max(r.divergence, divergence_residual(t, mode, der[n]));
    }
    return r;
}

double consistency_check(const Mode& mode, const PrimitiveState& st0, const TimeGrid& tg,
                         const PhysicalParams& p, double tol) {
    return consistency_check_full(mode, st0, tg, p, tol).residual;
}

}  // namespace couette

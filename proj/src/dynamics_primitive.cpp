#include "couette/dynamics_primitive.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace couette {

namespace {

using State4 = std::array<cplx, 4>;

State4 pack(const PrimitiveState& s) { return {s.b_hat, s.u_hat[0], s.u_hat[1], s.u_hat[2]}; }
PrimitiveState unpack(const State4& y) { return {y[0], {y[1], y[2], y[3]}}; }

}  // namespace

TimeGrid make_time_grid(double t0, double t1, std::size_t n, Spacing spacing) {
    if (n < 2 || !(t1 > t0) || t0 < 0.0) throw std::invalid_argument("time grid needs n >= 2 and 0 <= t0 < t1");
    TimeGrid tg{t0, t1, {}};
    tg.output_times.resize(n);
    const double a = std::log1p(t0), b = std::log1p(t1);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(n - 1);
        tg.output_times[i] = spacing == Spacing::Linear ? t0 + (t1 - t0) * f : std::expm1(a + (b - a) * f);
    }
    tg.output_times.front() = t0;
    tg.output_times.back() = t1;
    return tg;
}

FieldEnsemble EnsembleTrajectory::snapshot(const ModeGrid& grid, std::size_t n) const {
    FieldEnsemble e{grid, modes, {}};
    e.states.reserve(modes.size());
    for (const auto& tr : per_mode) e.states.push_back(tr[n]);
    return e;
}

PrimitiveState rhs_primitive(double t, const Mode& mode, const PrimitiveState& st,
                             const PhysicalParams& p) {
    const auto sv = symbol_values(t, mode);
    const auto& io = sv.iota;
    const auto& u = st.u_hat;
    const cplx d = io[0] * u[0] + io[1] * u[1] + io[2] * u[2];
    const double inv_e2 = 1.0 / (p.eps * p.eps);
    const double visc = p.mu * sv.p;
    const double bulk = p.lambda + p.mu;
    PrimitiveState r;
    r.b_hat = -d;
    for (int j = 0; j < 3; ++j) r.u_hat[j] = -io[j] * st.b_hat * inv_e2 - visc * u[j] + bulk * io[j] * d;
    r.u_hat[0] -= u[1];
    return r;
}

Trajectory integrate_mode(const Mode& mode, const PrimitiveState& st0, const TimeGrid& tg,
                          const PhysicalParams& p, double tol, IntegratorStats* stats) {
    auto f = [&](const State4& y, State4& dy, double t) { dy = pack(rhs_primitive(t, mode, unpack(y), p)); };
    const auto ys = integrate_adaptive<4>(f, pack(st0), tg.t0, tg.output_times, tol, stats);
    Trajectory out;
    out.reserve(ys.size());
    for (const auto& y : ys) out.push_back(unpack(y));
    return out;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& f) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard lk(mu);
                    if (!first) first = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (first) std::rethrow_exception(first);
}

EnsembleTrajectory integrate_ensemble(const FieldEnsemble& ens, const TimeGrid& tg,
                                      const PhysicalParams& p, double tol, unsigned threads) {
    if (ens.states.size() != ens.modes.size()) throw std::invalid_argument("ensemble states/modes size mismatch");
    EnsembleTrajectory out{tg.output_times, ens.modes, std::vector<Trajectory>(ens.modes.size())};
    std::vector<std::string> failures(ens.modes.size());
    parallel_for(ens.modes.size(), threads, [&](std::size_t i) {
        try {
            out.per_mode[i] = integrate_mode(ens.modes[i], ens.states[i], tg, p, tol);
        } catch (const IntegrationError& e) {
            std::ostringstream os;
            os << "mode (" << ens.modes[i].k << "," << ens.modes[i].eta << "," << ens.modes[i].l
               << "): " << e.what() << " at t=" << e.t();
            failures[i] = os.str();
        }
    });
    std::string msg;
    std::size_t nfail = 0;
    for (auto& s : failures)
        if (!s.empty()) {
            ++nfail;
            if (nfail <= 5) msg += s + "; ";
        }
    if (nfail) throw IntegrationError(std::to_string(nfail) + " mode(s) failed: " + msg, 0.0);
    return out;
}

std::vector<cplx> duhamel_u1_zero(const Mode& mode, cplx u1_in, const std::vector<double>& times,
                                  const std::vector<cplx>& u2_series, double mu) {
    if (mode.k != 0) throw std::invalid_argument("duhamel_u1_zero requires k = 0");
    const std::size_t n = times.size();
    if (u2_series.size() != n || n < 3) throw std::invalid_argument("need >= 3 samples matching times");
    const double h = times[1] - times[0];
    for (std::size_t j = 1; j < n; ++j)
        if (std::abs(times[j] - times[0] - h * double(j)) > 1e-9 * std::max(1.0, std::abs(times[j])))
            throw std::invalid_argument("duhamel_u1_zero needs a uniform grid");
    const double a = mu * (mode.eta * mode.eta + double(mode.l) * mode.l);
    const double e1 = std::exp(-a * h);
    // J[j] = integral over [t0, t_j] of exp(-a (t_j - s)) u2(s) ds
    std::vector<cplx> J(n);
    J[0] = 0.0;
    auto g = [&](std::size_t end, std::size_t j) { return std::exp(-a * h * double(end - j)) * u2_series[j]; };
    // quadratic through t0,t1,t2 integrated over [t0,t1]
    J[1] = h / 12.0 * (5.0 * e1 * u2_series[0] + 8.0 * u2_series[1] - std::exp(a * h) * u2_series[2]);
    for (std::size_t j = 2; j < n; j += 2)
        J[j] = e1 * e1 * J[j - 2] + h / 3.0 * (g(j, j - 2) + 4.0 * g(j, j - 1) + g(j, j));
    for (std::size_t j = 3; j < n; j += 2)
        J[j] = e1 * e1 * e1 * J[j - 3] + 3.0 * h / 8.0 * (g(j, j - 3) + 3.0 * g(j, j - 2) + 3.0 * g(j, j - 1) + g(j, j));
    std::vector<cplx> u1(n);
    for (std::size_t j = 0; j < n; ++j) u1[j] = std::exp(-a * (times[j] - times[0])) * u1_in - J[j];
    return u1;
}

}  // namespace couette

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

namespace couette {

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double t) : std::runtime_error(what), t_(t) {}
    double t() const { return t_; }

private:
    double t_;
};

struct IntegratorStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

inline constexpr std::size_t kMaxSteps = 10'000'000;
// tol is a target for the global relative error; each step is held to tol * kLocalFraction,
// which keeps accumulated error within a few tol over the oscillatory horizons used here.
inline constexpr double kLocalFraction = 1.0 / 20.0;
inline constexpr double kLocalFloor = 5e-15;

template <std::size_t N>
double l2norm(const std::array<std::complex<double>, N>& y) {
    double s = 0.0;
    for (const auto& v : y) s += std::norm(v);
    return std::sqrt(s);
}

// Adaptive Fehlberg 7(8), mixed componentwise error test (RMS over components):
// |err_i| measured against lt*max(|y_i|, |y_new_i|) + floor, lt = max(tol*kLocalFraction, kLocalFloor),
// floor = lt*(1e-14*||y0|| + 1e-8*max(||y||, ||y_new||)).
// Steps land exactly on every requested output time. f(y, dydt, t).
template <std::size_t N, class Rhs>
std::vector<std::array<std::complex<double>, N>> integrate_adaptive(
    Rhs&& f, const std::array<std::complex<double>, N>& y0, double t0,
    const std::vector<double>& times, double tol, IntegratorStats* stats = nullptr) {
    using State = std::array<std::complex<double>, N>;
    if (!(tol >= 1e-13 && tol <= 1e-4)) throw std::invalid_argument("tol must lie in [1e-13, 1e-4]");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < t0 || (i > 0 && !(times[i] > times[i - 1])))
            throw std::invalid_argument("output times must be strictly increasing and >= t0");
    }

    std::vector<State> out;
    out.reserve(times.size());
    const double n0 = l2norm(y0);
    if (n0 == 0.0) {
        out.assign(times.size(), y0);
        return out;
    }
    const double lt = std::max(tol * kLocalFraction, kLocalFloor);
    const double atol = lt * 1e-14 * n0;

    boost::numeric::odeint::runge_kutta_fehlberg78<State> stepper;
    State y = y0, trial, err, dydt;
    double t = t0;
    std::size_t steps = 0;

    f(y, dydt, t);
    const double d1 = l2norm(dydt);
    double dt = d1 > 0.0 ? 0.05 * n0 / d1 : 1.0;

    for (double target : times) {
        while (t < target) {
            const bool last = dt >= target - t;
            const double h = last ? target - t : dt;
            trial = y;
            stepper.do_step(f, trial, t, h, err);
            const double floor = atol + 1e-8 * lt * std::max(l2norm(y), l2norm(trial));
            double e2 = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                const double sc = floor + lt * std::max(std::abs(y[i]), std::abs(trial[i]));
                e2 += std::norm(err[i]) / (sc * sc);
            }
            const double e = std::sqrt(e2 / double(N));
            if (!std::isfinite(e)) throw IntegrationError("non-finite state", t);
            if (e <= 1.0) {
                y = trial;
                t = last ? target : t + h;
                if (stats) ++stats->accepted;
                const double fac = e == 0.0 ? 4.0 : std::clamp(0.9 * std::pow(e, -1.0 / 8.0), 0.2, 4.0);
                // keep the learned step when the last step was shortened to hit an output time
                if (!last || h >= dt) dt = h * fac;
            } else {
                if (stats) ++stats->rejected;
                dt = h * std::max(0.2, 0.9 * std::pow(e, -1.0 / 8.0));
            }
            if (dt < 1e-14 * std::max(1.0, std::abs(t)))
                throw IntegrationError("step-size underflow", t);
            if (++steps > kMaxSteps)
                throw IntegrationError("stiffness: more than 1e7 steps required", t);
        }
        out.push_back(y);
    }
    return out;
}

}  // namespace couette

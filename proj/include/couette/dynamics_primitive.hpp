#pragma once

#include <functional>
#include <vector>

#include "couette/ode.hpp"
#include "couette/params.hpp"
#include "couette/symbols.hpp"

namespace couette {

struct PrimitiveState {
    cplx b_hat{};
    cvec3 u_hat{};
};

enum class Spacing { Linear, Log };

struct TimeGrid {
    double t0 = 0.0;
    double t1 = 0.0;
    std::vector<double> output_times;
};

// Log spacing is uniform in log(1+t); both include t0 and t1.
TimeGrid make_time_grid(double t0, double t1, std::size_t n, Spacing spacing);

using Trajectory = std::vector<PrimitiveState>;

struct FieldEnsemble {
    ModeGrid grid;
    std::vector<Mode> modes;
    std::vector<PrimitiveState> states;
};

struct EnsembleTrajectory {
    std::vector<double> times;
    std::vector<Mode> modes;
    std::vector<Trajectory> per_mode;  // per_mode[i][n] = state of mode i at times[n]
    FieldEnsemble snapshot(const ModeGrid& grid, std::size_t n) const;
};

PrimitiveState rhs_primitive(double t, const Mode& mode, const PrimitiveState& st,
                             const PhysicalParams& p);

Trajectory integrate_mode(const Mode& mode, const PrimitiveState& st0, const TimeGrid& tg,
                          const PhysicalParams& p, double tol, IntegratorStats* stats = nullptr);

// threads == 0 picks hardware concurrency. Output is in input mode order regardless of scheduling.
EnsembleTrajectory integrate_ensemble(const FieldEnsemble& ens, const TimeGrid& tg,
                                      const PhysicalParams& p, double tol, unsigned threads = 0);

// u1 on the uniform grid times[j] = j*h from the sampled u2 series (composite Simpson).
std::vector<cplx> duhamel_u1_zero(const Mode& mode, cplx u1_in, const std::vector<double>& times,
                                  const std::vector<cplx>& u2_series, double mu);

// Runs f(i) for i in [0,n) on a small worker pool; exceptions are rethrown after joining.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& f);

}  // namespace couette

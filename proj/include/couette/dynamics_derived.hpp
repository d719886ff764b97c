#pragma once

#include <vector>

#include "couette/dynamics_primitive.hpp"

namespace couette {

struct DerivedState {
    cvec3 B{};
    cvec3 D{};
    cvec3 W{};
};

struct ForcingTriple {
    cplx F{}, G{}, H{};
};

using Triple = std::array<cplx, 3>;

DerivedState derive(double t, const Mode& mode, const PrimitiveState& st);

// s = (B1, D1, W2)
Triple rhs_Lx(double t, const Mode& mode, const Triple& s, const PhysicalParams& p);
// s = (B3, D3, W3), coupling = (B1, W2)
Triple rhs_Lz(double t, const Mode& mode, const Triple& s, const std::array<cplx, 2>& coupling,
              const PhysicalParams& p);
// s = (B2, D2, W1)
Triple rhs_Ly(double t, const Mode& mode, const Triple& s, const ForcingTriple& forcing,
              const PhysicalParams& p);
// s = (B1, D1, W2)
ForcingTriple forcing_FGH(double t, const Mode& mode, const Triple& s);

// Full 9-component derivative assembled from the three subsystems.
DerivedState rhs_derived(double t, const Mode& mode, const DerivedState& s, const PhysicalParams& p);

std::vector<DerivedState> integrate_derived(const Mode& mode, const DerivedState& s0, const TimeGrid& tg,
                                            const PhysicalParams& p, double tol);

// |k w1 + xi w2 + l w3| / (|(k,xi,l)| |w|) for the w rebuilt from (B, W); 0 when w = 0.
double divergence_residual(double t, const Mode& mode, const DerivedState& s);

double derived_norm(const DerivedState& s);

struct ConsistencyResult {
    double residual = 0.0;        // max over outputs of |derived_integrated - derive(primitive)| / |derive(primitive)|
    double divergence = 0.0;      // max divergence residual along the integrated derived trajectory
};

ConsistencyResult consistency_check_full(const Mode& mode, const PrimitiveState& st0, const TimeGrid& tg,
                                         const PhysicalParams& p, double tol);

double consistency_check(const Mode& mode, const PrimitiveState& st0, const TimeGrid& tg,
                         const PhysicalParams& p, double tol);

}  // namespace couette

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "frif/rb_global.hpp"

namespace frif {

// Sequence of RB operators k -> T_k with certified uniform bounds: uniform_s
// bounds every per-operator contraction factor, uniform_m every ||q_{i,k}||.
// Certification samples k up to `horizon` and relies on the declared period
// beyond it (0 = generator already periodic within the horizon).
struct OperatorSchedule {
    std::function<RBOperator(int)> generator;  // k >= 1, pure
    double uniform_s = 0.0;
    double uniform_m = 0.0;
    int horizon = 200;
    int period = 0;

    const RBOperator& op(int k) const;

  private:
    mutable std::map<int, RBOperator> cache_;
};

OperatorSchedule make_schedule(std::function<RBOperator(int)> generator,
                               int horizon = 200, int period = 0);

// M / (1 - s); throws NotContractive for s >= 1.
double invariant_ball_radius(double M, double s);

// Verifies prod_{j<=k} Lip(T_j) <= uniform_s^k up to k_max and reports the
// geometric tail s/(1-s).
ConditionReport summability_check(const OperatorSchedule& schedule, int k_max);

struct TrajectoryResult {
    GridFunction psi;
    int depth = 0;
    bool backward = true;
    double tail_bound = 0.0;  // uniform_s^k * ball diameter (backward only)
    bool inside_ball = true;  // f0 within the invariant ball
};

// Psi_k(f0) = T_1(T_2(...T_k(f0))); the convergence certificate applies here.
TrajectoryResult backward_trajectory(const OperatorSchedule& schedule,
                                     const GridFunction& f0, int k);

// Phi_k(f0) = T_k(...T_1(f0)); no convergence certificate attached.
TrajectoryResult forward_trajectory(const OperatorSchedule& schedule,
                                    const GridFunction& f0, int k);

// The worked examples: two tent-type operators whose iterates produce the
// Takagi-type function and the parabola 4x(1-x), and the Kiesswetter/Casino
// pair on four and two branches.
RBOperator builtin_operator(const std::string& name);

// 10-periodic block schedules alternating the pairs above: five steps of the
// first operator, five of the second.
OperatorSchedule builtin_schedule(const std::string& name);

// Interpolating schedules: T_k g = f + s_{i,k} o l^-1 * (g - b) o l^-1 on
// each piece, with b the chord of f. Each operator pins f at its own
// partition nodes.
struct InterpolatingLevel {
    std::vector<AffineMap> maps;        // l_{1,k}(0) = 0, l_{n,k}(1) = 1 required
    std::vector<CoefficientFn> scales;  // one per map
};

struct InterpolatingSchedule {
    CoefficientFn base;                     // f, continuous on [0,1]
    std::vector<InterpolatingLevel> levels; // cycled when k exceeds the list
};

// Chord b(x) = (f(1) - f(0)) x + f(0) as an expression.
ExprPtr chord_expr(const CoefficientFn& base);

OperatorSchedule build_interpolating_schedule(const InterpolatingSchedule& spec);

// Partition nodes of level k (sorted endpoints of the level's images).
std::vector<double> level_nodes(const InterpolatingSchedule& spec, int k);

ConditionReport check_interpolation(const GridFunction& psi,
                                    const std::vector<std::pair<double, double>>& nodes,
                                    double tol);

}  // namespace frif

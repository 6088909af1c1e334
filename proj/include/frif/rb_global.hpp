#pragma once

#include <utility>
#include <vector>

#include "frif/expr.hpp"
#include "frif/geometry.hpp"
#include "frif/grid.hpp"
#include "frif/report.hpp"

namespace frif {

// Default tolerance for junction / compatibility gaps.
inline constexpr double kJunctionTol = 1e-9;
// Contraction guard band: factors above 1 - kContractionGuard are rejected.
inline constexpr double kContractionGuard = 1e-12;

// Read-Bajractarevic operator on grid functions: on each partition piece
// l_i(X),  T f = q_i o l_i^{-1} + (s_i o l_i^{-1}) * (f o l_i^{-1}).
struct RBOperator {
    Partition partition;
    std::vector<CoefficientFn> q;  // F-valued, value_dim components
    std::vector<CoefficientFn> s;  // real-valued
    int value_dim = 1;

    static RBOperator create(Partition partition, std::vector<CoefficientFn> q,
                             std::vector<CoefficientFn> s);
};

// max_i sup |s_i|, certified; Lipschitz bound of T in the sup norm.
double contraction_factor(const RBOperator& T, int n_samples = 4097);

GridFunction apply(const RBOperator& T, const GridFunction& f);

struct FixedPointResult {
    GridFunction psi;
    int iterations = 0;
    double contraction_s = 0.0;
    double apriori_bound = 0.0;  // s^k/(1-s) * |psi1 - psi0|
    double residual = 0.0;       // sup |T psi - psi|, diagnostic
    bool converged = false;
};

// Banach iteration psi_k = T psi_{k-1}; the a-priori bound is the stopping
// certificate, the residual is reported for diagnostics only.
FixedPointResult iterate_to_fixed_point(const RBOperator& T, const GridFunction& f0,
                                        double eps, int k_max);

// Fixed number of steps, no convergence requirement (property tests).
GridFunction iterate_n(const RBOperator& T, const GridFunction& f0, int steps);

struct AddressValue {
    Value value;
    double error_bound = 0.0;
    std::vector<int> address;  // outermost piece first
};

// Grid-free evaluation: resolve the address of x by repeated inverse-map
// location to the given depth and telescope the self-referential equation,
// closing with f0_value. Error bound: product of the |s| sup-bounds times the
// candidate-ball diameter.
AddressValue evaluate_by_address(const RBOperator& T, std::span<const double> x,
                                 int depth, const Value& f0_value);

// Compatibility conditions at shared points of distinct images, checked for a
// candidate (or converged) psi.
ConditionReport check_compatibility(const RBOperator& T, const GridFunction& psi,
                                    double tol = kJunctionTol);

// Closed-form fixed-point values at the domain endpoints (1-D; the first map
// must fix the left endpoint and the last the right one).
std::vector<std::pair<double, Value>> boundary_values(const RBOperator& T);

// Join-up equalities at interior junction points, using the closed-form
// endpoint values of psi.
ConditionReport check_continuity(const RBOperator& T, double tol = kJunctionTol);

// L^p contraction certificate: sum_i lambda_i * (sup|s_i|)^p < 1 with
// lambda_i = 1/|a_i|; p = infinity reduces to the sup-norm gate.
ConditionReport lp_certificate(const RBOperator& T, double p);

// Classical fractal interpolation: affine maps onto the data intervals and
// affine q_i solving the endpoint interpolation conditions.
RBOperator build_fif(const std::vector<std::pair<double, double>>& data,
                     const std::vector<CoefficientFn>& scales);

// --- exact-rational path ---------------------------------------------------

// True when every map coefficient is rational, every coefficient expression
// evaluates rationally, and inverse maps carry grid nodes to grid nodes.
bool exact_apply_available(const RBOperator& T, const RationalGrid& f);

RationalGrid apply_exact(const RBOperator& T, const RationalGrid& f);

struct ExactFixedPointResult {
    RationalGrid psi;
    int iterations = 0;
    Rational contraction_s;   // exact sup of |s_i| (constant scales only)
    Rational first_step;      // |psi1 - psi0|
    Rational apriori_bound;   // s^k/(1-s) * first_step
};

// Exact Banach iteration for rational-affine operators on aligned grids.
ExactFixedPointResult iterate_exact(const RBOperator& T, const RationalGrid& f0,
                                    int steps);

namespace detail {

// One piece of an apply kernel: image box, inverse map, coefficient pair and
// the subset the preimage must live in. Global and local operators both
// funnel through this so their results are bit-identical.
struct PieceRef {
    const Box* image;
    AffineMap inverse;
    const CoefficientFn* q;
    const CoefficientFn* s;
};

GridFunction apply_pieces(const Box& domain, const std::vector<PieceRef>& pieces,
                          const GridFunction& f, int value_dim);

int locate_piece(const std::vector<PieceRef>& pieces, std::span<const double> x);

}  // namespace detail
}  // namespace frif

#pragma once

#include <utility>
#include <vector>

#include "frif/rb_global.hpp"

namespace frif {

// Local RB operator: each coefficient pair lives on its own subset X_i and
// l_i maps X_i onto one partition piece. Subsets may repeat and the l_i need
// not be contractions.
struct LocalPiece {
    Box subset;      // X_i
    AffineMap map;   // l_i : X_i -> X
    CoefficientFn q;
    CoefficientFn s;
};

struct LocalRBOperator {
    Box domain;
    std::vector<LocalPiece> pieces;
    std::vector<Box> images;  // cached l_i(X_i), half-open except at the right end
    int value_dim = 1;

    static LocalRBOperator create(Box domain, std::vector<LocalPiece> pieces);
};

PartitionReport verify_local_partition(const LocalRBOperator& op);

GridFunction apply_local(const LocalRBOperator& op, const GridFunction& f);

// max over pieces of the certified sup of |s_i| over X_i.
double local_contraction(const LocalRBOperator& op, int n_samples = 4097);

// (sum_i a_i ||s_i||^p)^(1/p) < 1 with a_i = sup |(l_i^-1)'|; p = inf reduces
// to the sup gate.
ConditionReport local_lp_certificate(const LocalRBOperator& op, double p);

FixedPointResult iterate_local(const LocalRBOperator& op, const GridFunction& f0,
                               double eps, int k_max);

GridFunction iterate_local_n(const LocalRBOperator& op, const GridFunction& f0,
                             int steps);

// Global operator viewed locally (X_i := X); applies bit-identically.
LocalRBOperator lift_global(const RBOperator& T);

// Even-n interpolation construction on [0,1]: subsets [(2j-2)/n, 2j/n] each
// used twice, maps x/2 + (j-1)/n and x/2 + j/n, and affine q_i solving the
// even-knot interpolation conditions plus the odd-knot join-up.
struct EvenNConstruction {
    int n = 2;
    std::vector<double> knots;                        // i/n, i = 0..n
    std::vector<double> contact_points;               // interior knots i/n
    std::vector<std::pair<double, double>> data;      // (x_{2j}, y_j)
    LocalRBOperator op;
    ConditionReport joinup;  // interpolation + join-up residuals of the built q
};

EvenNConstruction build_even_n(const std::vector<std::pair<double, double>>& data,
                               const std::vector<CoefficientFn>& scales);

// Interpolation + join-up conditions for an operator against data; usable on
// hand-built operators with constant coefficients as well.
ConditionReport check_even_n_conditions(const LocalRBOperator& op,
                                        const std::vector<std::pair<double, double>>& data,
                                        double tol = kJunctionTol);

}  // namespace frif

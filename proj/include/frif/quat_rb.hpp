#pragma once

#include <array>
#include <string>
#include <vector>

#include "frif/quaternion.hpp"
#include "frif/rb_global.hpp"

namespace frif {

// RB operator with quaternion-valued coefficients. The scale multiplies f
// from the left by default; the order of the factors is load-bearing.
struct QuatRBOperator {
    enum class Side { left, right };

    Partition partition;  // 1-D segment or 4-D cube
    std::vector<CoefficientFn> q;  // quaternion-valued
    std::vector<CoefficientFn> s;  // quaternion-valued
    Side side = Side::left;

    static QuatRBOperator create(Partition partition, std::vector<CoefficientFn> q,
                                 std::vector<CoefficientFn> s,
                                 Side side = Side::left);
};

// max_i sup |s_i| in the quaternion norm.
double quat_contraction_factor(const QuatRBOperator& T, int n_samples = 4097);

GridFunction quat_apply(const QuatRBOperator& T, const GridFunction& f);

FixedPointResult quat_fixed_point(const QuatRBOperator& T, const GridFunction& f0,
                                  double eps, int k_max);

GridFunction quat_iterate_n(const QuatRBOperator& T, const GridFunction& f0, int steps);

// Ordered-product evaluation of the m-fold application along an explicit
// address (outermost piece first): the value at l_{a_1} o ... o l_{a_m}(x)
// of T^m f for f == f0_value, with all partial products left-multiplied.
Quaternion m_fold_eval(const QuatRBOperator& T, std::span<const int> address,
                       std::span<const double> x, const Quaternion& f0_value);

// Literal nested application along the same address; the independent route
// the ordered-product formula is checked against.
Quaternion nested_eval(const QuatRBOperator& T, std::span<const int> address,
                       std::span<const double> x, const Quaternion& f0_value);

// (x, psi_axis) pairs over a 1-D grid.
std::vector<std::array<double, 2>> graph_projection(const GridFunction& psi, int axis);

// Rows of psi components selected by `axes` (2 or 3 of them), node order.
std::vector<std::vector<double>> component_projection(const GridFunction& psi,
                                                      std::span<const int> axes);

// The worked 1-D example operator with quaternion constants
//   q1 = e0 + 2e1 - e2 + 3e3, q2 = -e0 - 2e1 + 2e2 + e3,
//   s1 = (1 + 5e1 - 2e2 - e3)/10, s2 = (-2 + 2e1 - 6e2 + e3)/10,
// maps x/2 and (x+1)/2, q-functions (1-q1)x and q2 x^2.
QuatRBOperator builtin_quat_example(QuatRBOperator::Side side = QuatRBOperator::Side::left);

// The 16 half-scale subcube maps of [-1,1]^4: l_c(x) = x/2 + c/2,
// c in {-1,+1}^4.
Partition quaternion_cube_partition();

}  // namespace frif

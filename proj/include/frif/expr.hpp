#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frif/geometry.hpp"
#include "frif/interval.hpp"
#include "frif/quaternion.hpp"
#include "frif/rational.hpp"

namespace frif {

// Small scalar / vector / quaternion value; dim 1 is a plain real, dim 4 is
// either an R^4 vector or a quaternion depending on who multiplies it.
struct Value {
    int dim = 1;
    std::array<double, 4> c{};

    Value() = default;
    explicit Value(double x) : dim(1) { c[0] = x; }
    Value(int d, std::array<double, 4> comps) : dim(d), c(comps) {}

    static Value quat(const Quaternion& q) { return Value(4, {q.a, q.v1, q.v2, q.v3}); }
    Quaternion as_quat() const { return {c[0], c[1], c[2], c[3]}; }
    double scalar() const { return c[0]; }

    double norm() const {
        double s = 0.0;
        for (int i = 0; i < dim; ++i) s += c[i] * c[i];
        return std::sqrt(s);
    }

    friend Value operator+(const Value& a, const Value& b);
    friend Value operator-(const Value& a, const Value& b);
    bool finite() const;
};

enum class ExprKind {
    Number, Var, VarIndex, Pi,
    Neg, Add, Sub, Mul, Div, Pow,
    Sin, Cos, Abs,
    QuatLit,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    ExprKind kind;
    Scalar number;             // Number
    int index = 0;             // VarIndex
    std::vector<ExprPtr> kids;
};

namespace ex {
ExprPtr num(Scalar v);
inline ExprPtr num(double v) { return num(Scalar(v)); }
inline ExprPtr num(long long n, long long d) { return num(Scalar::ratio(n, d)); }
inline ExprPtr integer(long long n) { return num(Scalar::integer(n)); }
ExprPtr var();
ExprPtr var_index(int j);
ExprPtr pi();
ExprPtr neg(ExprPtr a);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr div(ExprPtr a, ExprPtr b);
ExprPtr pow(ExprPtr a, ExprPtr b);
ExprPtr sin(ExprPtr a);
ExprPtr cos(ExprPtr a);
ExprPtr abs(ExprPtr a);
ExprPtr quat_lit(ExprPtr a, ExprPtr b, ExprPtr c, ExprPtr d);
// a*x + b as an expression tree.
ExprPtr affine(Scalar a, Scalar b);
// Substitute x := a*x + b (unary composition with an affine map).
ExprPtr compose_affine(const ExprPtr& e, Scalar a, Scalar b);
}  // namespace ex

Value eval_expr(const Expr& e, std::span<const double> x);

// Exact evaluation over rationals; nullopt where sin/cos/pi/irrational
// constants or non-integer powers enter. 1-D scalar expressions only.
std::optional<Rational> eval_expr_rational(const Expr& e, const Rational& x);

// Minimal-paren rendering; parse(format(e)) reproduces the tree.
std::string format_expr(const Expr& e);

// Evaluable coefficient function over a box domain.
struct CoefficientFn {
    ExprPtr body;
    Box domain;
    int value_dim = 1;

    static CoefficientFn make(ExprPtr body, Box domain, int value_dim = 1);
};

Value eval_coefficient(const CoefficientFn& c, std::span<const double> x);

// Upper bound on sup |c| over the domain: sampled max inflated by L*h/2 with
// L an interval-arithmetic Lipschitz bound. Never under-reports.
double certify_sup_bound(const CoefficientFn& c, int n_samples = 4097);

// Range/Lipschitz enclosure of the expression over a box (per component).
struct ExprEnclosure {
    int dim = 1;
    std::array<Interval, 4> range{};
    std::array<double, 4> lip{};  // w.r.t. the max-norm on the domain
    double norm_bound() const;
    double lip_bound() const;
};
ExprEnclosure analyze_expr(const Expr& e, const Box& domain);

}  // namespace frif

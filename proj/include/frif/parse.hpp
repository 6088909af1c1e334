#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "frif/expr.hpp"

namespace frif {

// Coefficient-expression grammar:
//   expr   := sum
//   sum    := prod (('+'|'-') prod)*
//   prod   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?              (right associative)
//   atom   := number | 'x' ('[' digit ']')? | 'pi'
//           | ('sin'|'cos'|'abs') '(' expr ')'
//           | '(' expr (',' expr ',' expr ',' expr)? ')'
// '^' binds tighter than unary minus; unary minus tighter than '*' and '/'.
ExprPtr parse_expr(std::string_view text);

// Single numeric literal or constant expression ("1/3", "0.25", "-2/5");
// exact whenever the arithmetic is rational.
Scalar parse_scalar(std::string_view text);

struct ProblemConfig {
    std::string mode;  // global | local | nonstationary | quaternion

    Scalar dom_lo = Scalar::integer(0);
    Scalar dom_hi = Scalar::integer(1);
    bool half_open = false;
    int resolution = 0;  // 0 = mode default
    double eps = 1e-9;
    int k_max = 200;

    std::vector<std::pair<Scalar, Scalar>> maps;     // (scale, offset)
    std::vector<std::pair<Scalar, Scalar>> subsets;  // local pieces
    std::vector<ExprPtr> qs;
    std::vector<ExprPtr> ss;
    std::vector<std::pair<double, double>> data;     // interpolation data

    std::string builtin;        // builtin operator/schedule/example name
    std::string schedule_kind;  // "builtin" | "interpolating"
    ExprPtr base_f;
    std::vector<std::pair<int, ExprPtr>> levels;  // (dyadic piece count, scale)
    int depth = 25;
    std::string f0;  // zero | chord | identity

    bool want_continuity = false;
    bool want_compatibility = false;
    std::optional<double> lp_p;

    std::string csv_path;
    std::string svg_path;
    std::string graph_csv;
    std::vector<std::pair<int, std::string>> graphs;  // per-axis graph CSVs
    std::vector<std::pair<std::vector<int>, std::string>> parametric;
    std::string side = "left";
};

ProblemConfig parse_config(std::string_view text);
ProblemConfig load_config(const std::string& path);

}  // namespace frif

#pragma once

#include <functional>
#include <span>
#include <vector>

#include "frif/expr.hpp"
#include "frif/geometry.hpp"

namespace frif {

// Uniform sampling of a function on the closure of a box: `resolution` nodes
// per dimension including both endpoints, `value_dim` components per node.
struct GridFunction {
    Box domain;
    int resolution = 2;
    int value_dim = 1;
    std::vector<double> values;  // value_dim * resolution^d, node-major

    int dim() const { return domain.dim(); }
    long long node_count() const;

    static GridFunction zero(Box domain, int resolution, int value_dim = 1);
    static GridFunction constant(Box domain, int resolution, const Value& v);
    static GridFunction sample(Box domain, int resolution,
                               const std::function<Value(std::span<const double>)>& f,
                               int value_dim = 1);

    void node_point(long long idx, std::span<double> out) const;
    Value node_value(long long idx) const;
    void set_node(long long idx, const Value& v);
};

// Multilinear interpolation between neighboring nodes; exact at nodes.
Value grid_eval(const GridFunction& f, std::span<const double> x);

// Max over nodes of the Euclidean norm of the pointwise difference.
double sup_distance(const GridFunction& f, const GridFunction& g);

// Max over nodes of the value norm.
double sup_norm(const GridFunction& f);

// Exact-rational counterpart for 1-D scalar grids; used where certificates
// sit below the double rounding floor.
struct RationalGrid {
    Box domain;  // endpoints must be exact
    int resolution = 2;
    std::vector<Rational> values;

    static RationalGrid zero(Box domain, int resolution);
    Rational node_point(int i) const;
    GridFunction to_grid() const;
};

Rational sup_distance(const RationalGrid& f, const RationalGrid& g);
Rational sup_norm(const RationalGrid& f);

}  // namespace frif

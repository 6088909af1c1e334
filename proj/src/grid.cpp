#include "frif/grid.hpp"

#include <algorithm>
#include <cmath>

namespace frif {

long long GridFunction::node_count() const {
    long long n = 1;
    for (int j = 0; j < dim(); ++j) n *= resolution;
    return n;
}

GridFunction GridFunction::zero(Box domain, int resolution, int value_dim) {
    if (resolution < 2) throw DomainError("grid resolution must be at least 2");
    GridFunction g;
    g.domain = std::move(domain);
    g.resolution = resolution;
    g.value_dim = value_dim;
    g.values.assign(g.node_count() * value_dim, 0.0);
    return g;
}

GridFunction GridFunction::constant(Box domain, int resolution, const Value& v) {
    GridFunction g = zero(std::move(domain), resolution, v.dim);
    for (long long i = 0; i < g.node_count(); ++i) g.set_node(i, v);
    return g;
}

GridFunction GridFunction::sample(Box domain, int resolution,
                                  const std::function<Value(std::span<const double>)>& f,
                                  int value_dim) {
    GridFunction g = zero(std::move(domain), resolution, value_dim);
    std::vector<double> x(g.dim());
    for (long long i = 0; i < g.node_count(); ++i) {
        g.node_point(i, x);
        Value v = f(x);
        if (!v.finite()) throw EvalError("non-finite sample value");
        g.set_node(i, v);
    }
    return g;
}

void GridFunction::node_point(long long idx, std::span<double> out) const {
    long long rem = idx;
    for (int j = 0; j < dim(); ++j) {
        int i = static_cast<int>(rem % resolution);
        rem /= resolution;
        // endpoints bitwise exact; interior nodes cannot escape the box
        if (i == 0) out[j] = domain.lo[j].value();
        else if (i == resolution - 1) out[j] = domain.hi[j].value();
        else out[j] = domain.lo[j].value() + (domain.length(j) * i) / (resolution - 1);
    }
}

Value GridFunction::node_value(long long idx) const {
    Value v;
    v.dim = value_dim;
    for (int k = 0; k < value_dim; ++k) v.c[k] = values[idx * value_dim + k];
    return v;
}

void GridFunction::set_node(long long idx, const Value& v) {
    for (int k = 0; k < value_dim; ++k) values[idx * value_dim + k] = v.c[k];
}

Value grid_eval(const GridFunction& f, std::span<const double> x) {
    const int d = f.dim();
    if (static_cast<int>(x.size()) != d)
        throw ShapeMismatch("point dimension does not match grid");
    if (!f.domain.contains(x)) throw DomainError("grid evaluated outside its domain");

    // Per-dim cell index and interpolation weight.
    int cell[4];
    double t[4];
    for (int j = 0; j < d; ++j) {
        double lo = f.domain.lo[j].value();
        double h = f.domain.length(j) / (f.resolution - 1);
        double u = (x[j] - lo) / h;
        int i = static_cast<int>(std::floor(u));
        i = std::clamp(i, 0, f.resolution - 2);
        cell[j] = i;
        t[j] = std::clamp(u - i, 0.0, 1.0);
    }

    Value out;
    out.dim = f.value_dim;
    const int corners = 1 << d;
    for (int c = 0; c < corners; ++c) {
        double w = 1.0;
        long long idx = 0, stride = 1;
        for (int j = 0; j < d; ++j) {
            int bit = (c >> j) & 1;
            w *= bit ? t[j] : 1.0 - t[j];
            idx += stride * (cell[j] + bit);
            stride *= f.resolution;
        }
        if (w == 0.0) continue;
        for (int k = 0; k < f.value_dim; ++k)
            out.c[k] += w * f.values[idx * f.value_dim + k];
    }
    return out;
}

double sup_distance(const GridFunction& f, const GridFunction& g) {
    if (f.dim() != g.dim() || f.resolution != g.resolution ||
        f.value_dim != g.value_dim)
        throw ShapeMismatch("sup distance requires identical grid shapes");
    for (int j = 0; j < f.dim(); ++j) {
        if (!scalar_eq(f.domain.lo[j], g.domain.lo[j]) ||
            !scalar_eq(f.domain.hi[j], g.domain.hi[j]))
            throw ShapeMismatch("sup distance requires identical domains");
    }
    double best = 0.0;
    for (long long i = 0; i < f.node_count(); ++i) {
        double s = 0.0;
        for (int k = 0; k < f.value_dim; ++k) {
            double dk = f.values[i * f.value_dim + k] - g.values[i * f.value_dim + k];
            s += dk * dk;
        }
        best = std::max(best, s);
    }
    return std::sqrt(best);
}

double sup_norm(const GridFunction& f) {
    double best = 0.0;
    for (long long i = 0; i < f.node_count(); ++i) {
        double s = 0.0;
        for (int k = 0; k < f.value_dim; ++k) {
            double v = f.values[i * f.value_dim + k];
            s += v * v;
        }
        best = std::max(best, s);
    }
    return std::sqrt(best);
}

RationalGrid RationalGrid::zero(Box domain, int resolution) {
    if (domain.dim() != 1) throw ExactUnavailable("rational grids are 1-D");
    if (!domain.lo[0].exact() || !domain.hi[0].exact())
        throw ExactUnavailable("rational grid requires exact endpoints");
    RationalGrid g;
    g.domain = std::move(domain);
    g.resolution = resolution;
    g.values.assign(resolution, Rational(0));
    return g;
}

Rational RationalGrid::node_point(int i) const {
    auto len = sub(domain.hi[0].rat(), domain.lo[0].rat());
    if (!len) throw ExactUnavailable("rational node overflow");
    auto num = mul(*len, Rational(i));
    if (!num) throw ExactUnavailable("rational node overflow");
    auto step = div(*num, Rational(resolution - 1));
    if (!step) throw ExactUnavailable("rational node overflow");
    auto r = add(domain.lo[0].rat(), *step);
    if (!r) throw ExactUnavailable("rational node overflow");
    return *r;
}

GridFunction RationalGrid::to_grid() const {
    GridFunction g = GridFunction::zero(domain, resolution, 1);
    for (int i = 0; i < resolution; ++i) g.values[i] = values[i].to_double();
    return g;
}

Rational sup_distance(const RationalGrid& f, const RationalGrid& g) {
    if (f.resolution != g.resolution)
        throw ShapeMismatch("sup distance requires identical grid shapes");
    Rational best(0);
    for (int i = 0; i < f.resolution; ++i) {
        auto d = sub(f.values[i], g.values[i]);
        if (!d) throw ExactUnavailable("rational difference overflow");
        Rational a = d->abs();
        if (best < a) best = a;
    }
    return best;
}

Rational sup_norm(const RationalGrid& f) {
    Rational best(0);
    for (const Rational& v : f.values) {
        Rational a = v.abs();
        if (best < a) best = a;
    }
    return best;
}

}  // namespace frif

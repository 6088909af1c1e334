#include "frif/quat_rb.hpp"

#include <algorithm>
#include <cmath>

namespace frif {

QuatRBOperator QuatRBOperator::create(Partition partition, std::vector<CoefficientFn> q,
                                      std::vector<CoefficientFn> s, Side side) {
    if (q.size() != partition.maps.size() || s.size() != partition.maps.size())
        throw ShapeMismatch("operator requires one (q, s) pair per map");
    QuatRBOperator T;
    T.partition = std::move(partition);
    T.q = std::move(q);
    T.s = std::move(s);
    T.side = side;
    return T;
}

double quat_contraction_factor(const QuatRBOperator& T, int n_samples) {
    double m = 0.0;
    for (const auto& si : T.s) {
        m = std::max(m, certify_sup_bound(
                            CoefficientFn::make(si.body, T.partition.domain, 4),
                            n_samples));
    }
    return m;
}

static Quaternion to_quat(const Value& v) {
    if (v.dim == 1) return Quaternion::scalar(v.c[0]);
    return v.as_quat();
}

GridFunction quat_apply(const QuatRBOperator& T, const GridFunction& f) {
    if (f.value_dim != 4)
        throw ShapeMismatch("quaternionic application needs 4-component grids");
    for (int j = 0; j < T.partition.domain.dim(); ++j) {
        if (!scalar_eq(f.domain.lo[j], T.partition.domain.lo[j]) ||
            !scalar_eq(f.domain.hi[j], T.partition.domain.hi[j]))
            throw ShapeMismatch("grid domain does not match the operator domain");
    }
    GridFunction out = GridFunction::zero(T.partition.domain, f.resolution, 4);
    const int d = T.partition.domain.dim();
    std::vector<double> x(d), xi(d);
    std::vector<AffineMap> inverses;
    inverses.reserve(T.partition.size());
    for (const AffineMap& m : T.partition.maps) inverses.push_back(affine_inverse(m));

    for (long long idx = 0; idx < out.node_count(); ++idx) {
        out.node_point(idx, x);
        int i = T.partition.locate(x);
        if (i < 0) throw PartitionGap("grid node lies in no partition image");
        inverses[i].apply(x, xi);
        for (int j = 0; j < d; ++j)
            xi[j] = std::clamp(xi[j], T.partition.domain.lo[j].value(),
                               T.partition.domain.hi[j].value());
        Quaternion qv = to_quat(eval_expr(*T.q[i].body, xi));
        Quaternion sv = to_quat(eval_expr(*T.s[i].body, xi));
        Quaternion fv = grid_eval(f, xi).as_quat();
        Quaternion r = T.side == QuatRBOperator::Side::left ? qv + sv * fv
                                                            : qv + fv * sv;
        out.set_node(idx, Value::quat(r));
    }
    return out;
}

FixedPointResult quat_fixed_point(const QuatRBOperator& T, const GridFunction& f0,
                                  double eps, int k_max) {
    if (eps <= 0.0) throw DomainError("eps must be positive");
    double s = quat_contraction_factor(T);
    if (s >= 1.0 - kContractionGuard)
        throw NotContractive("certified contraction factor " + std::to_string(s) +
                             " is not below 1");
    FixedPointResult res;
    res.contraction_s = s;

    GridFunction psi = quat_apply(T, f0);
    double first_step = sup_distance(psi, f0);
    int k = 1;
    double apriori = s / (1.0 - s) * first_step;
    while (apriori > eps && k < k_max) {
        psi = quat_apply(T, psi);
        ++k;
        apriori = std::pow(s, k) / (1.0 - s) * first_step;
    }
    if (apriori > eps)
        throw MaxIterations("a-priori bound " + std::to_string(apriori) +
                            " above eps after " + std::to_string(k) + " iterations");
    res.residual = sup_distance(quat_apply(T, psi), psi);
    res.psi = std::move(psi);
    res.iterations = k;
    res.apriori_bound = apriori;
    res.converged = true;
    return res;
}

GridFunction quat_iterate_n(const QuatRBOperator& T, const GridFunction& f0, int steps) {
    GridFunction g = f0;
    for (int i = 0; i < steps; ++i) g = quat_apply(T, g);
    return g;
}

// Chain of preimage points for an address: chain[k] is the argument of the
// k-th outer application; chain[m-1] == x.
static std::vector<std::vector<double>> address_chain(const QuatRBOperator& T,
                                                      std::span<const int> address,
                                                      std::span<const double> x) {
    const int m = static_cast<int>(address.size());
    const int d = static_cast<int>(x.size());
    std::vector<std::vector<double>> chain(m);
    chain[m - 1].assign(x.begin(), x.end());
    for (int k = m - 2; k >= 0; --k) {
        chain[k].resize(d);
        T.partition.maps[address[k + 1]].apply(chain[k + 1], chain[k]);
    }
    return chain;
}

Quaternion m_fold_eval(const QuatRBOperator& T, std::span<const int> address,
                       std::span<const double> x, const Quaternion& f0_value) {
    if (address.empty()) throw DomainError("address must be nonempty");
    for (int a : address)
        if (a < 0 || a >= T.partition.size())
            throw DomainError("address entry out of range");
    auto chain = address_chain(T, address, x);

    Quaternion value;           // running sum
    Quaternion prefix = Quaternion::scalar(1.0);  // empty product = 1
    const bool left = T.side == QuatRBOperator::Side::left;
    for (size_t k = 0; k < address.size(); ++k) {
        Quaternion qv = to_quat(eval_expr(*T.q[address[k]].body, chain[k]));
        Quaternion sv = to_quat(eval_expr(*T.s[address[k]].body, chain[k]));
        value = value + (left ? prefix * qv : qv * prefix);
        prefix = left ? prefix * sv : sv * prefix;
    }
    return value + (left ? prefix * f0_value : f0_value * prefix);
}

Quaternion nested_eval(const QuatRBOperator& T, std::span<const int> address,
                       std::span<const double> x, const Quaternion& f0_value) {
    if (address.empty()) throw DomainError("address must be nonempty");
    auto chain = address_chain(T, address, x);
    Quaternion v = f0_value;
    const bool left = T.side == QuatRBOperator::Side::left;
    for (int k = static_cast<int>(address.size()) - 1; k >= 0; --k) {
        Quaternion qv = to_quat(eval_expr(*T.q[address[k]].body, chain[k]));
        Quaternion sv = to_quat(eval_expr(*T.s[address[k]].body, chain[k]));
        v = left ? qv + sv * v : qv + v * sv;
    }
    return v;
}

std::vector<std::array<double, 2>> graph_projection(const GridFunction& psi, int axis) {
    if (axis < 0 || axis >= psi.value_dim)
        throw BadAxis("axis " + std::to_string(axis) + " out of range");
    if (psi.dim() != 1)
        throw DomainError("graph projections need a 1-D domain");
    std::vector<std::array<double, 2>> out;
    out.reserve(psi.node_count());
    std::vector<double> x(1);
    for (long long i = 0; i < psi.node_count(); ++i) {
        psi.node_point(i, x);
        out.push_back({x[0], psi.values[i * psi.value_dim + axis]});
    }
    return out;
}

std::vector<std::vector<double>> component_projection(const GridFunction& psi,
                                                      std::span<const int> axes) {
    for (int a : axes)
        if (a < 0 || a >= psi.value_dim)
            throw BadAxis("axis " + std::to_string(a) + " out of range");
    std::vector<std::vector<double>> rows;
    rows.reserve(psi.node_count());
    for (long long i = 0; i < psi.node_count(); ++i) {
        std::vector<double> row;
        row.reserve(axes.size());
        for (int a : axes) row.push_back(psi.values[i * psi.value_dim + a]);
        rows.push_back(std::move(row));
    }
    return rows;
}

QuatRBOperator builtin_quat_example(QuatRBOperator::Side side) {
    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1), false);
    std::vector<AffineMap> maps{
        AffineMap::make(Scalar::ratio(1, 2), Scalar::integer(0)),
        AffineMap::make(Scalar::ratio(1, 2), Scalar::ratio(1, 2))};

    auto r = [](long long n, long long d) { return ex::num(n, d); };
    // 1 - q1 = -2e1 + e2 - 3e3
    ExprPtr one_minus_q1 = ex::quat_lit(r(0, 1), r(-2, 1), r(1, 1), r(-3, 1));
    ExprPtr q2_const = ex::quat_lit(r(-1, 1), r(-2, 1), r(2, 1), r(1, 1));
    ExprPtr q1_fn = ex::mul(one_minus_q1, ex::var());
    ExprPtr q2_fn = ex::mul(q2_const, ex::pow(ex::var(), ex::integer(2)));
    ExprPtr s1 = ex::quat_lit(r(1, 10), r(1, 2), r(-1, 5), r(-1, 10));
    ExprPtr s2 = ex::quat_lit(r(-1, 5), r(1, 5), r(-3, 5), r(1, 10));

    std::vector<CoefficientFn> q{CoefficientFn::make(q1_fn, domain, 4),
                                 CoefficientFn::make(q2_fn, domain, 4)};
    std::vector<CoefficientFn> s{CoefficientFn::make(s1, domain, 4),
                                 CoefficientFn::make(s2, domain, 4)};
    return QuatRBOperator::create(Partition::create(domain, std::move(maps)),
                                  std::move(q), std::move(s), side);
}

Partition quaternion_cube_partition() {
    Box domain = Box::cube(4, Scalar::integer(-1), Scalar::integer(1));
    std::vector<AffineMap> maps;
    std::vector<Scalar> half(4, Scalar::ratio(1, 2));
    for (int c = 0; c < 16; ++c) {
        std::vector<Scalar> offset;
        for (int j = 0; j < 4; ++j)
            offset.push_back((c >> j) & 1 ? Scalar::ratio(1, 2) : Scalar::ratio(-1, 2));
        maps.push_back(AffineMap::make4(half, offset));
    }
    return Partition::create(std::move(domain), std::move(maps));
}

}  // namespace frif

#include "frif/rb_global.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace frif {

namespace {

// q domains must cover the partition domain (or the piece subset, locally).
void require_covering_domain(const CoefficientFn& c, const Box& domain,
                             const char* what) {
    for (int j = 0; j < domain.dim(); ++j) {
        if (scalar_lt(domain.lo[j], c.domain.lo[j]) ||
            scalar_lt(c.domain.hi[j], domain.hi[j]))
            throw DomainError(std::string(what) +
                              " coefficient domain does not cover the partition domain");
    }
}

void clamp_into(std::span<double> x, const Box& box) {
    for (size_t j = 0; j < x.size(); ++j) {
        x[j] = std::clamp(x[j], box.lo[j].value(), box.hi[j].value());
    }
}

}  // namespace

namespace detail {

int locate_piece(const std::vector<PieceRef>& pieces, std::span<const double> x) {
    for (int i = 0; i < static_cast<int>(pieces.size()); ++i) {
        const Box& img = *pieces[i].image;
        bool inside = true;
        for (int j = 0; j < img.dim() && inside; ++j) {
            double lo = img.lo[j].value(), hi = img.hi[j].value();
            if (x[j] < lo) inside = false;
            else if (img.closed_right[j] ? x[j] > hi : x[j] >= hi) inside = false;
        }
        if (inside) return i;
    }
    return -1;
}

GridFunction apply_pieces(const Box& domain, const std::vector<PieceRef>& pieces,
                          const GridFunction& f, int value_dim) {
    GridFunction out = GridFunction::zero(domain, f.resolution, value_dim);
    const int d = domain.dim();
    std::vector<double> x(d), xi(d);
    for (long long idx = 0; idx < out.node_count(); ++idx) {
        out.node_point(idx, x);
        int i = locate_piece(pieces, x);
        if (i < 0)
            throw PartitionGap("grid node lies in no partition image");
        const PieceRef& piece = pieces[i];
        piece.inverse.apply(x, xi);
        clamp_into(xi, piece.q->domain);
        Value qv = eval_expr(*piece.q->body, xi);
        Value sv = eval_expr(*piece.s->body, xi);
        if (sv.dim != 1) throw EvalError("scale coefficient must be scalar");
        Value fv = grid_eval(f, xi);
        Value r;
        r.dim = value_dim;
        for (int k = 0; k < value_dim; ++k)
            r.c[k] = (k < qv.dim ? qv.c[k] : 0.0) + sv.c[0] * fv.c[k];
        out.set_node(idx, r);
    }
    return out;
}

}  // namespace detail

RBOperator RBOperator::create(Partition partition, std::vector<CoefficientFn> q,
                              std::vector<CoefficientFn> s) {
    if (q.size() != partition.maps.size() || s.size() != partition.maps.size())
        throw ShapeMismatch("operator requires one (q, s) pair per map");
    RBOperator T;
    T.value_dim = q.empty() ? 1 : q.front().value_dim;
    for (const auto& c : q) {
        require_covering_domain(c, partition.domain, "q");
        if (c.value_dim != T.value_dim)
            throw ShapeMismatch("q coefficients must share one value dimension");
    }
    for (const auto& c : s) {
        require_covering_domain(c, partition.domain, "s");
        if (c.value_dim != 1)
            throw ShapeMismatch("s coefficients must be real-valued");
    }
    T.partition = std::move(partition);
    T.q = std::move(q);
    T.s = std::move(s);
    return T;
}

double contraction_factor(const RBOperator& T, int n_samples) {
    double m = 0.0;
    for (const auto& si : T.s) {
        CoefficientFn over_domain = CoefficientFn::make(si.body, T.partition.domain, 1);
        m = std::max(m, certify_sup_bound(over_domain, n_samples));
    }
    return m;
}

static std::vector<detail::PieceRef> global_pieces(const RBOperator& T) {
    std::vector<detail::PieceRef> pieces;
    pieces.reserve(T.partition.size());
    for (int i = 0; i < T.partition.size(); ++i) {
        pieces.push_back({&T.partition.images[i], affine_inverse(T.partition.maps[i]),
                          &T.q[i], &T.s[i]});
    }
    return pieces;
}

GridFunction apply(const RBOperator& T, const GridFunction& f) {
    for (int j = 0; j < T.partition.domain.dim(); ++j) {
        if (!scalar_eq(f.domain.lo[j], T.partition.domain.lo[j]) ||
            !scalar_eq(f.domain.hi[j], T.partition.domain.hi[j]))
            throw ShapeMismatch("grid domain does not match the operator domain");
    }
    return detail::apply_pieces(T.partition.domain, global_pieces(T), f, T.value_dim);
}

FixedPointResult iterate_to_fixed_point(const RBOperator& T, const GridFunction& f0,
                                        double eps, int k_max) {
    if (eps <= 0.0) throw DomainError("eps must be positive");
    double s = contraction_factor(T);
    if (s >= 1.0 - kContractionGuard)
        throw NotContractive("certified contraction factor " + std::to_string(s) +
                             " is not below 1");
    FixedPointResult res;
    res.contraction_s = s;

    GridFunction psi = apply(T, f0);
    double first_step = sup_distance(psi, f0);
    int k = 1;
    double apriori = s / (1.0 - s) * first_step;
    while (apriori > eps && k < k_max) {
        psi = apply(T, psi);
        ++k;
        apriori = std::pow(s, k) / (1.0 - s) * first_step;
    }
    if (apriori > eps)
        throw MaxIterations("a-priori bound " + std::to_string(apriori) +
                            " above eps after " + std::to_string(k) + " iterations");
    res.residual = sup_distance(apply(T, psi), psi);
    res.psi = std::move(psi);
    res.iterations = k;
    res.apriori_bound = apriori;
    res.converged = true;
    return res;
}

GridFunction iterate_n(const RBOperator& T, const GridFunction& f0, int steps) {
    GridFunction g = f0;
    for (int i = 0; i < steps; ++i) g = apply(T, g);
    return g;
}

AddressValue evaluate_by_address(const RBOperator& T, std::span<const double> x,
                                 int depth, const Value& f0_value) {
    if (depth < 1) throw DomainError("address depth must be at least 1");
    auto pieces = global_pieces(T);

    double s_sup = 0.0, q_sup = 0.0;
    std::vector<double> sbound(pieces.size());
    for (size_t i = 0; i < pieces.size(); ++i) {
        sbound[i] = certify_sup_bound(
            CoefficientFn::make(T.s[i].body, T.partition.domain, 1));
        s_sup = std::max(s_sup, sbound[i]);
        q_sup = std::max(q_sup, certify_sup_bound(CoefficientFn::make(
                                    T.q[i].body, T.partition.domain, T.value_dim)));
    }
    if (s_sup >= 1.0 - kContractionGuard)
        throw NotContractive("address evaluation needs a contractive operator");
    double ball = q_sup / (1.0 - s_sup);

    AddressValue out;
    out.value.dim = T.value_dim;
    std::vector<double> cur(x.begin(), x.end()), xi(x.size());
    double prefix = 1.0;       // product of s values along the chain
    double prefix_bound = 1.0; // product of certified sup-bounds
    for (int k = 0; k < depth; ++k) {
        int i = detail::locate_piece(pieces, cur);
        if (i < 0) throw PartitionGap("point lies in no partition image");
        pieces[i].inverse.apply(cur, xi);
        clamp_into(xi, T.partition.domain);
        Value qv = eval_expr(*T.q[i].body, xi);
        Value sv = eval_expr(*T.s[i].body, xi);
        for (int c = 0; c < T.value_dim; ++c)
            out.value.c[c] += prefix * (c < qv.dim ? qv.c[c] : 0.0);
        prefix *= sv.c[0];
        prefix_bound *= sbound[i];
        out.address.push_back(i);
        cur = xi;
    }
    for (int c = 0; c < T.value_dim; ++c)
        out.value.c[c] += prefix * (c < f0_value.dim ? f0_value.c[c] : 0.0);
    out.error_bound = prefix_bound * (ball + f0_value.norm());
    return out;
}

ConditionReport check_compatibility(const RBOperator& T, const GridFunction& psi,
                                    double tol) {
    if (T.partition.domain.dim() != 1)
        throw DomainError("compatibility checking is 1-D");
    ConditionReport rep;
    rep.kind = ConditionReport::Kind::compatibility;
    rep.tolerance = tol;

    // Membership in the actual image set: l_i(X) inherits the domain's
    // right-endpoint convention (closures are used for reversing maps).
    auto in_image_set = [&](int i, double t) {
        const Box& img = T.partition.images[i];
        double lo = img.lo[0].value(), hi = img.hi[0].value();
        if (t < lo - kFloatTol || t > hi + kFloatTol) return false;
        if (std::fabs(t - hi) <= kFloatTol) {
            bool set_closed = T.partition.domain.closed_right[0] ||
                              T.partition.maps[i].scale[0].value() < 0.0;
            return set_closed;
        }
        return true;
    };

    const int n = T.partition.size();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Box& a = T.partition.images[i];
            const Box& b = T.partition.images[j];
            double lo = std::max(a.lo[0].value(), b.lo[0].value());
            double hi = std::min(a.hi[0].value(), b.hi[0].value());
            if (lo > hi + kFloatTol) continue;
            std::vector<double> candidates;
            if (hi - lo <= kFloatTol) {
                candidates.push_back(lo);
            } else {
                // overlapping images: probe endpoints plus interior samples
                const int m = 9;
                for (int t = 0; t <= m; ++t)
                    candidates.push_back(lo + (hi - lo) * t / m);
            }
            std::vector<double> shared;
            for (double t : candidates)
                if (in_image_set(i, t) && in_image_set(j, t)) shared.push_back(t);
            for (double t : shared) {
                std::vector<double> x1{(t - T.partition.maps[i].offset[0].value()) /
                                       T.partition.maps[i].scale[0].value()};
                std::vector<double> x2{(t - T.partition.maps[j].offset[0].value()) /
                                       T.partition.maps[j].scale[0].value()};
                clamp_into(x1, T.partition.domain);
                clamp_into(x2, T.partition.domain);
                Value lhs = eval_expr(*T.q[i].body, x1);
                Value rhs = eval_expr(*T.q[j].body, x2);
                double si = eval_expr(*T.s[i].body, x1).c[0];
                double sj = eval_expr(*T.s[j].body, x2).c[0];
                Value pi_v = grid_eval(psi, x1);
                Value pj_v = grid_eval(psi, x2);
                Value l, r;
                l.dim = r.dim = T.value_dim;
                for (int c = 0; c < T.value_dim; ++c) {
                    l.c[c] = (c < lhs.dim ? lhs.c[c] : 0.0) + si * pi_v.c[c];
                    r.c[c] = (c < rhs.dim ? rhs.c[c] : 0.0) + sj * pj_v.c[c];
                }
                ConditionWitness w;
                w.label = "l_" + std::to_string(i + 1) + " vs l_" + std::to_string(j + 1);
                w.location = t;
                w.lhs = l.norm();
                w.rhs = r.norm();
                w.gap = (l - r).norm();
                rep.witnesses.push_back(w);
                if (w.gap > tol) rep.verdict = false;
            }
        }
    }
    return rep;
}

std::vector<std::pair<double, Value>> boundary_values(const RBOperator& T) {
    if (T.partition.domain.dim() != 1)
        throw DomainError("boundary values are 1-D");

    // Degenerate single-map case: the closed form applies at the unique
    // fixed point of l_1 instead of the interval endpoints.
    if (T.partition.size() == 1) {
        const AffineMap& m = T.partition.maps[0];
        double a = m.scale[0].value();
        if (std::fabs(a) >= 1.0)
            throw DomainError("single-map boundary values need a strict contraction");
        double x_star = m.offset[0].value() / (1.0 - a);
        std::vector<double> p{x_star};
        Value qv = eval_expr(*T.q[0].body, p);
        double sv = eval_expr(*T.s[0].body, p).c[0];
        if (std::fabs(1.0 - sv) < kContractionGuard)
            throw DegenerateScale("1 - s vanishes at the map fixed point");
        Value r;
        r.dim = T.value_dim;
        for (int c = 0; c < T.value_dim; ++c)
            r.c[c] = (c < qv.dim ? qv.c[c] : 0.0) / (1.0 - sv);
        return {{x_star, r}};
    }

    // Identify the pieces owning the leftmost / rightmost image.
    int left = 0, right = 0;
    for (int i = 1; i < T.partition.size(); ++i) {
        if (T.partition.images[i].lo[0] < T.partition.images[left].lo[0]) left = i;
        if (T.partition.images[right].hi[0] < T.partition.images[i].hi[0]) right = i;
    }
    double lo = T.partition.domain.lo[0].value();
    double hi = T.partition.domain.hi[0].value();

    auto endpoint_value = [&](int piece, double t) {
        const AffineMap& m = T.partition.maps[piece];
        double xi = (t - m.offset[0].value()) / m.scale[0].value();
        if (std::fabs(xi - t) > 1e-9)
            throw DomainError("endpoint map must fix the domain endpoint");
        std::vector<double> x{t};
        Value qv = eval_expr(*T.q[piece].body, x);
        double sv = eval_expr(*T.s[piece].body, x).c[0];
        if (std::fabs(1.0 - sv) < kContractionGuard)
            throw DegenerateScale("1 - s vanishes at a domain endpoint");
        Value r;
        r.dim = T.value_dim;
        for (int c = 0; c < T.value_dim; ++c)
            r.c[c] = (c < qv.dim ? qv.c[c] : 0.0) / (1.0 - sv);
        return r;
    };

    return {{lo, endpoint_value(left, lo)}, {hi, endpoint_value(right, hi)}};
}

ConditionReport check_continuity(const RBOperator& T, double tol) {
    if (T.partition.domain.dim() != 1)
        throw DomainError("continuity checking is 1-D");
    ConditionReport rep;
    rep.kind = ConditionReport::Kind::continuous;
    rep.tolerance = tol;
    if (T.partition.size() == 1) return rep;  // no junctions

    auto bvals = boundary_values(T);
    double lo = bvals[0].first, hi = bvals[1].first;

    auto psi_at_endpoint = [&](double x) -> const Value& {
        if (std::fabs(x - lo) <= 1e-9) return bvals[0].second;
        if (std::fabs(x - hi) <= 1e-9) return bvals[1].second;
        throw DomainError("junction preimage is not a domain endpoint");
    };

    // Sort pieces by image position; junctions are consecutive meeting points.
    std::vector<int> order(T.partition.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return T.partition.images[a].lo[0] < T.partition.images[b].lo[0];
    });

    for (size_t k = 0; k + 1 < order.size(); ++k) {
        int i = order[k], j = order[k + 1];
        double t = T.partition.images[i].hi[0].value();
        const AffineMap& mi = T.partition.maps[i];
        const AffineMap& mj = T.partition.maps[j];
        double x1 = (t - mi.offset[0].value()) / mi.scale[0].value();
        double x2 = (t - mj.offset[0].value()) / mj.scale[0].value();
        std::vector<double> p1{std::clamp(x1, lo, hi)}, p2{std::clamp(x2, lo, hi)};
        Value q1 = eval_expr(*T.q[i].body, p1);
        Value q2 = eval_expr(*T.q[j].body, p2);
        double s1 = eval_expr(*T.s[i].body, p1).c[0];
        double s2 = eval_expr(*T.s[j].body, p2).c[0];
        const Value& psi1 = psi_at_endpoint(p1[0]);
        const Value& psi2 = psi_at_endpoint(p2[0]);
        Value l, r;
        l.dim = r.dim = T.value_dim;
        for (int c = 0; c < T.value_dim; ++c) {
            l.c[c] = (c < q1.dim ? q1.c[c] : 0.0) + s1 * psi1.c[c];
            r.c[c] = (c < q2.dim ? q2.c[c] : 0.0) + s2 * psi2.c[c];
        }
        ConditionWitness w;
        w.label = "junction";
        w.location = t;
        w.lhs = l.norm();
        w.rhs = r.norm();
        w.gap = (l - r).norm();
        rep.witnesses.push_back(w);
        if (w.gap > tol) rep.verdict = false;
    }
    return rep;
}

ConditionReport lp_certificate(const RBOperator& T, double p) {
    if (T.partition.domain.dim() != 1)
        throw DomainError("Lp certification is 1-D");
    if (!(p >= 1.0))
        throw DomainError("p must lie in [1, infinity]");
    ConditionReport rep;
    rep.kind = ConditionReport::Kind::lp;
    rep.tolerance = 0.0;

    bool infinite = std::isinf(p);
    double total = 0.0, worst = 0.0;
    for (int i = 0; i < T.partition.size(); ++i) {
        double lambda = 1.0 / T.partition.maps[i].lipschitz();
        double sigma = certify_sup_bound(
            CoefficientFn::make(T.s[i].body, T.partition.domain, 1));
        ConditionWitness w;
        w.label = "map " + std::to_string(i + 1);
        if (infinite) {
            w.lhs = sigma;
            worst = std::max(worst, sigma);
        } else {
            w.lhs = lambda * std::pow(sigma, p);
            total += w.lhs;
        }
        w.rhs = 1.0;
        rep.witnesses.push_back(w);
    }
    ConditionWitness sum;
    sum.label = infinite ? "max_i sup|s_i|" : "sum_i lambda_i sup|s_i|^p";
    sum.lhs = infinite ? worst : total;
    sum.rhs = 1.0;
    sum.gap = std::max(0.0, sum.lhs - 1.0);
    rep.witnesses.push_back(sum);
    rep.verdict = sum.lhs < 1.0;
    return rep;
}

RBOperator build_fif(const std::vector<std::pair<double, double>>& data,
                     const std::vector<CoefficientFn>& scales) {
    if (data.size() < 2) throw UnsortedData("interpolation needs at least 2 points");
    for (size_t i = 0; i + 1 < data.size(); ++i)
        if (!(data[i].first < data[i + 1].first))
            throw UnsortedData("interpolation abscissae must be strictly increasing");
    const size_t n = data.size() - 1;
    if (scales.size() != n)
        throw ShapeMismatch("one scale function per data interval required");

    Scalar x0 = Scalar::exact_from_double(data.front().first);
    Scalar xn = Scalar::exact_from_double(data.back().first);
    Box domain = Box::interval(x0, xn);
    double x0v = x0.value(), xnv = xn.value();
    double y0 = data.front().second, yn = data.back().second;

    std::vector<AffineMap> maps;
    std::vector<CoefficientFn> qs, ss;
    for (size_t i = 0; i < n; ++i) {
        double sup = certify_sup_bound(
            CoefficientFn::make(scales[i].body, domain, 1));
        if (sup >= 1.0 - kContractionGuard)
            throw ScaleTooLarge("scale " + std::to_string(i + 1) +
                                " has certified sup " + std::to_string(sup));
        Scalar xi0 = Scalar::exact_from_double(data[i].first);
        Scalar xi1 = Scalar::exact_from_double(data[i + 1].first);
        Scalar a = (xi1 - xi0) / (xn - x0);
        Scalar b = xi0 - a * x0;
        maps.push_back(AffineMap::make(a, b));

        // q_i is affine through the two endpoint interpolation conditions
        //   q_i(x0) = y_{i-1} - s_i(x0) y0,   q_i(xn) = y_i - s_i(xn) yn.
        std::vector<double> pl{x0v}, pr{xnv};
        double s_at_l = eval_expr(*scales[i].body, pl).c[0];
        double s_at_r = eval_expr(*scales[i].body, pr).c[0];
        double qa = data[i].second - s_at_l * y0;
        double qb = data[i + 1].second - s_at_r * yn;
        double c = (qb - qa) / (xnv - x0v);
        double d = qa - c * x0v;
        qs.push_back(CoefficientFn::make(
            ex::affine(Scalar::exact_from_double(c), Scalar::exact_from_double(d)),
            domain, 1));
        ss.push_back(CoefficientFn::make(scales[i].body, domain, 1));
    }
    return RBOperator::create(Partition::create(domain, std::move(maps)),
                              std::move(qs), std::move(ss));
}

// ---------------------------------------------------------------------------
// Exact-rational path
// ---------------------------------------------------------------------------

namespace {

Rational exact_node_index(const RationalGrid& g, const Rational& xi) {
    // (xi - lo) * (N-1) / (hi - lo)
    auto num = sub(xi, g.domain.lo[0].rat());
    if (!num) throw ExactUnavailable("rational overflow");
    auto scaled = mul(*num, Rational(g.resolution - 1));
    if (!scaled) throw ExactUnavailable("rational overflow");
    auto len = sub(g.domain.hi[0].rat(), g.domain.lo[0].rat());
    if (!len) throw ExactUnavailable("rational overflow");
    auto idx = div(*scaled, *len);
    if (!idx) throw ExactUnavailable("rational overflow");
    return *idx;
}

}  // namespace

RationalGrid apply_exact(const RBOperator& T, const RationalGrid& f) {
    if (T.partition.domain.dim() != 1)
        throw ExactUnavailable("exact application is 1-D");
    for (const AffineMap& m : T.partition.maps)
        if (!m.exact()) throw ExactUnavailable("map coefficients are not rational");

    RationalGrid out = RationalGrid::zero(T.partition.domain, f.resolution);
    for (int i = 0; i < f.resolution; ++i) {
        Rational x = out.node_point(i);
        int piece = T.partition.locate_exact(x);
        if (piece < 0) throw PartitionGap("grid node lies in no partition image");
        const AffineMap& m = T.partition.maps[piece];
        auto shifted = sub(x, m.offset[0].rat());
        if (!shifted) throw ExactUnavailable("rational overflow");
        auto xi = div(*shifted, m.scale[0].rat());
        if (!xi) throw ExactUnavailable("rational overflow");

        Rational idx = exact_node_index(f, *xi);
        if (!idx.is_integer())
            throw ExactUnavailable("inverse map does not carry nodes to nodes");
        long long j = static_cast<long long>(idx.num());
        if (j < 0 || j >= f.resolution)
            throw ExactUnavailable("inverse image node out of range");

        auto qv = eval_expr_rational(*T.q[piece].body, *xi);
        auto sv = eval_expr_rational(*T.s[piece].body, *xi);
        if (!qv || !sv)
            throw ExactUnavailable("coefficients do not evaluate rationally");
        auto prod = mul(*sv, f.values[j]);
        if (!prod) throw ExactUnavailable("rational overflow");
        auto val = add(*qv, *prod);
        if (!val) throw ExactUnavailable("rational overflow");
        out.values[i] = *val;
    }
    return out;
}

bool exact_apply_available(const RBOperator& T, const RationalGrid& f) {
    try {
        apply_exact(T, f);
        return true;
    } catch (const ExactUnavailable&) {
        return false;
    }
}

static bool depends_on_x(const Expr& e) {
    if (e.kind == ExprKind::Var || e.kind == ExprKind::VarIndex) return true;
    for (const auto& k : e.kids)
        if (depends_on_x(*k)) return true;
    return false;
}

ExactFixedPointResult iterate_exact(const RBOperator& T, const RationalGrid& f0,
                                    int steps) {
    if (steps < 1) throw DomainError("at least one step required");
    Rational s(0);
    for (const auto& si : T.s) {
        if (depends_on_x(*si.body))
            throw ExactUnavailable("exact iteration requires constant scales");
        auto v = eval_expr_rational(*si.body, Rational(0));
        if (!v) throw ExactUnavailable("scale does not evaluate rationally");
        Rational a = v->abs();
        if (s < a) s = a;
    }
    if (!(s < Rational(1)))
        throw NotContractive("exact contraction factor is not below 1");

    ExactFixedPointResult res;
    res.contraction_s = s;
    RationalGrid psi = apply_exact(T, f0);
    res.first_step = sup_distance(psi, f0);
    for (int k = 1; k < steps; ++k) psi = apply_exact(T, psi);
    res.iterations = steps;

    Rational s_pow(1);
    for (int k = 0; k < steps; ++k) {
        auto p = mul(s_pow, s);
        if (!p) throw ExactUnavailable("rational overflow");
        s_pow = *p;
    }
    auto one_minus = sub(Rational(1), s);
    if (!one_minus) throw ExactUnavailable("rational overflow");
    auto factor = div(s_pow, *one_minus);
    if (!factor) throw ExactUnavailable("rational overflow");
    auto bound = mul(*factor, res.first_step);
    if (!bound) throw ExactUnavailable("rational overflow");
    res.apriori_bound = *bound;
    res.psi = std::move(psi);
    return res;
}

}  // namespace frif

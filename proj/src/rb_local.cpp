#include "frif/rb_local.hpp"

#include <algorithm>
#include <cmath>

namespace frif {

LocalRBOperator LocalRBOperator::create(Box domain, std::vector<LocalPiece> pieces) {
    if (pieces.empty()) throw EmptyFamily("local operator requires at least one piece");
    LocalRBOperator op;
    op.domain = std::move(domain);
    op.value_dim = pieces.front().q.value_dim;
    for (const LocalPiece& p : pieces) {
        for (const Scalar& s : p.map.scale)
            if (s.value() == 0.0)
                throw NonInjectiveMap("affine map with zero scale component");
        if (p.q.value_dim != op.value_dim)
            throw ShapeMismatch("q coefficients must share one value dimension");
        if (p.s.value_dim != 1)
            throw ShapeMismatch("s coefficients must be real-valued");
        Box img = p.map.image_of(p.subset);
        for (int j = 0; j < img.dim(); ++j)
            img.closed_right[j] = scalar_eq(img.hi[j], op.domain.hi[j]);
        op.images.push_back(std::move(img));
    }
    op.pieces = std::move(pieces);
    return op;
}

PartitionReport verify_local_partition(const LocalRBOperator& op) {
    std::vector<double> lips;
    bool expanding = false;
    for (const LocalPiece& p : op.pieces) {
        lips.push_back(p.map.lipschitz());
        if (p.map.lipschitz() >= 1.0) expanding = true;
    }
    PartitionReport rep = verify_images(op.images, lips, op.domain);
    if (expanding)
        rep.notes.push_back("some maps are not contractions (allowed locally)");
    return rep;
}

static std::vector<detail::PieceRef> local_pieces(const LocalRBOperator& op) {
    std::vector<detail::PieceRef> pieces;
    pieces.reserve(op.pieces.size());
    for (size_t i = 0; i < op.pieces.size(); ++i) {
        pieces.push_back({&op.images[i], affine_inverse(op.pieces[i].map),
                          &op.pieces[i].q, &op.pieces[i].s});
    }
    return pieces;
}

GridFunction apply_local(const LocalRBOperator& op, const GridFunction& f) {
    for (int j = 0; j < op.domain.dim(); ++j) {
        if (!scalar_eq(f.domain.lo[j], op.domain.lo[j]) ||
            !scalar_eq(f.domain.hi[j], op.domain.hi[j]))
            throw ShapeMismatch("grid domain does not match the operator domain");
    }
    return detail::apply_pieces(op.domain, local_pieces(op), f, op.value_dim);
}

double local_contraction(const LocalRBOperator& op, int n_samples) {
    double m = 0.0;
    for (const LocalPiece& p : op.pieces)
        m = std::max(m, certify_sup_bound(p.s, n_samples));
    return m;
}

ConditionReport local_lp_certificate(const LocalRBOperator& op, double p) {
    if (op.domain.dim() != 1) throw DomainError("Lp certification is 1-D");
    if (!(p >= 1.0)) throw DomainError("p must lie in [1, infinity]");
    ConditionReport rep;
    rep.kind = ConditionReport::Kind::lp;

    bool infinite = std::isinf(p);
    double total = 0.0, worst = 0.0;
    for (size_t i = 0; i < op.pieces.size(); ++i) {
        double a_i = 1.0 / op.pieces[i].map.lipschitz();
        double sigma = certify_sup_bound(op.pieces[i].s);
        ConditionWitness w;
        w.label = "piece " + std::to_string(i + 1);
        if (infinite) {
            w.lhs = sigma;
            worst = std::max(worst, sigma);
        } else {
            w.lhs = a_i * std::pow(sigma, p);
            total += w.lhs;
        }
        w.rhs = 1.0;
        rep.witnesses.push_back(w);
    }
    ConditionWitness sum;
    if (infinite) {
        sum.label = "max_i ||s_i||";
        sum.lhs = worst;
    } else {
        sum.label = "(sum_i a_i ||s_i||^p)^(1/p)";
        sum.lhs = std::pow(total, 1.0 / p);
    }
    sum.rhs = 1.0;
    sum.gap = std::max(0.0, sum.lhs - 1.0);
    rep.witnesses.push_back(sum);
    rep.verdict = sum.lhs < 1.0;
    return rep;
}

FixedPointResult iterate_local(const LocalRBOperator& op, const GridFunction& f0,
                               double eps, int k_max) {
    if (eps <= 0.0) throw DomainError("eps must be positive");
    double s = local_contraction(op);
    if (s >= 1.0 - kContractionGuard)
        throw NotContractive("certified local contraction factor " +
                             std::to_string(s) + " is not below 1");
    FixedPointResult res;
    res.contraction_s = s;

    GridFunction psi = apply_local(op, f0);
    double first_step = sup_distance(psi, f0);
    int k = 1;
    double apriori = s / (1.0 - s) * first_step;
    while (apriori > eps && k < k_max) {
        psi = apply_local(op, psi);
        ++k;
        apriori = std::pow(s, k) / (1.0 - s) * first_step;
    }
    if (apriori > eps)
        throw MaxIterations("a-priori bound " + std::to_string(apriori) +
                            " above eps after " + std::to_string(k) + " iterations");
    res.residual = sup_distance(apply_local(op, psi), psi);
    res.psi = std::move(psi);
    res.iterations = k;
    res.apriori_bound = apriori;
    res.converged = true;
    return res;
}

GridFunction iterate_local_n(const LocalRBOperator& op, const GridFunction& f0,
                             int steps) {
    GridFunction g = f0;
    for (int i = 0; i < steps; ++i) g = apply_local(op, g);
    return g;
}

LocalRBOperator lift_global(const RBOperator& T) {
    std::vector<LocalPiece> pieces;
    for (int i = 0; i < T.partition.size(); ++i)
        pieces.push_back({T.partition.domain, T.partition.maps[i], T.q[i], T.s[i]});
    return LocalRBOperator::create(T.partition.domain, std::move(pieces));
}

EvenNConstruction build_even_n(const std::vector<std::pair<double, double>>& data,
                               const std::vector<CoefficientFn>& scales) {
    if (data.size() < 2) throw UnsortedData("interpolation needs at least 2 points");
    for (size_t j = 0; j + 1 < data.size(); ++j)
        if (!(data[j].first < data[j + 1].first))
            throw UnsortedData("interpolation abscissae must be strictly increasing");
    const int half = static_cast<int>(data.size()) - 1;  // n/2
    const int n = 2 * half;
    if (static_cast<int>(scales.size()) != n)
        throw ShapeMismatch("even-n construction needs n scale functions");
    for (int j = 0; j <= half; ++j) {
        if (std::fabs(data[j].first - static_cast<double>(2 * j) / n) > 1e-12)
            throw DomainError("data abscissae must sit on the even knots 2j/n");
    }

    EvenNConstruction out;
    out.n = n;
    out.data = data;
    for (int i = 0; i <= n; ++i)
        out.knots.push_back(static_cast<double>(i) / n);
    for (int i = 1; i < n; ++i)
        out.contact_points.push_back(static_cast<double>(i) / n);

    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
    std::vector<LocalPiece> pieces;
    for (int j = 1; j <= half; ++j) {
        Box subset = Box::interval(Scalar::ratio(2 * j - 2, n), Scalar::ratio(2 * j, n));
        double xl = subset.lo[0].value();   // x_{2(j-1)}, fixed by l_{2j-1}
        double xr = subset.hi[0].value();   // x_{2j}, fixed by l_{2j}
        double yl = data[j - 1].second;
        double yr = data[j].second;
        double z = 0.5 * (yl + yr);  // odd-knot value: chord midpoint

        for (int parity = 0; parity < 2; ++parity) {
            int i = 2 * j - 2 + parity;  // 0-based piece index
            const CoefficientFn& sc = scales[i];
            double sup = certify_sup_bound(CoefficientFn::make(sc.body, subset, 1));
            if (sup >= 1.0 - kContractionGuard)
                throw ScaleTooLarge("scale " + std::to_string(i + 1) +
                                    " has certified sup " + std::to_string(sup));
            AffineMap map = AffineMap::make(
                Scalar::ratio(1, 2),
                parity == 0 ? Scalar::ratio(j - 1, n) : Scalar::ratio(j, n));

            std::vector<double> pl{xl}, pr{xr};
            double s_l = eval_expr(*sc.body, pl).c[0];
            double s_r = eval_expr(*sc.body, pr).c[0];
            // Both targets pin Tf at the image endpoints: the even knot keeps
            // its data value, the odd knot takes the chord midpoint.
            double q_l = parity == 0 ? yl * (1.0 - s_l) : z - s_l * yl;
            double q_r = parity == 0 ? z - s_r * yr : yr * (1.0 - s_r);
            double c = (q_r - q_l) / (xr - xl);
            double d = q_l - c * xl;
            CoefficientFn q = CoefficientFn::make(
                ex::affine(Scalar::exact_from_double(c), Scalar::exact_from_double(d)),
                subset, 1);
            pieces.push_back({subset, map, q, CoefficientFn::make(sc.body, subset, 1)});
        }
    }
    out.op = LocalRBOperator::create(domain, std::move(pieces));
    out.joinup = check_even_n_conditions(out.op, data);
    if (!out.joinup.verdict)
        throw InconsistentJoinUp("constructed q family violates the join-up conditions; "
                                 "max residual " + std::to_string(out.joinup.max_gap()));
    return out;
}

ConditionReport check_even_n_conditions(
    const LocalRBOperator& op, const std::vector<std::pair<double, double>>& data,
    double tol) {
    ConditionReport rep;
    rep.kind = ConditionReport::Kind::joinup;
    rep.tolerance = tol;
    const int n = static_cast<int>(op.pieces.size());
    if (n % 2 != 0 || static_cast<int>(data.size()) != n / 2 + 1)
        throw ShapeMismatch("even-n conditions need n pieces and n/2 + 1 data points");

    auto eval1 = [](const CoefficientFn& c, double x) {
        std::vector<double> p{x};
        return eval_expr(*c.body, p).c[0];
    };

    for (int j = 1; j <= n / 2; ++j) {
        const LocalPiece& odd = op.pieces[2 * j - 2];
        const LocalPiece& even = op.pieces[2 * j - 1];
        double xl = odd.subset.lo[0].value();
        double xr = odd.subset.hi[0].value();
        double yl = data[j - 1].second;
        double yr = data[j].second;

        ConditionWitness w1;
        w1.label = "interpolation at even knot, piece " + std::to_string(2 * j - 1);
        w1.location = xl;
        w1.lhs = eval1(odd.q, xl) + (eval1(odd.s, xl) - 1.0) * yl;
        w1.gap = std::fabs(w1.lhs);
        rep.witnesses.push_back(w1);

        ConditionWitness w2;
        w2.label = "interpolation at even knot, piece " + std::to_string(2 * j);
        w2.location = xr;
        w2.lhs = eval1(even.q, xr) + (eval1(even.s, xr) - 1.0) * yr;
        w2.gap = std::fabs(w2.lhs);
        rep.witnesses.push_back(w2);

        ConditionWitness w3;
        w3.label = "join-up at odd knot " + std::to_string(2 * j - 1);
        w3.location = 0.5 * (xl + xr);
        w3.lhs = eval1(even.q, xl) + eval1(even.s, xl) * yl;
        w3.rhs = eval1(odd.q, xr) + eval1(odd.s, xr) * yr;
        w3.gap = std::fabs(w3.lhs - w3.rhs);
        rep.witnesses.push_back(w3);
    }
    for (const auto& w : rep.witnesses)
        if (w.gap > tol) rep.verdict = false;
    return rep;
}

}  // namespace frif

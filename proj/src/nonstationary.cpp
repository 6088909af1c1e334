#include "frif/nonstationary.hpp"

#include <algorithm>
#include <cmath>

namespace frif {

const RBOperator& OperatorSchedule::op(int k) const {
    if (k < 1) throw DomainError("schedule index starts at 1");
    int key = k;
    if (period > 0 && k > horizon) key = (k - 1) % period + 1;
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, generator(key)).first;
    return it->second;
}

OperatorSchedule make_schedule(std::function<RBOperator(int)> generator,
                               int horizon, int period) {
    OperatorSchedule sch;
    sch.generator = std::move(generator);
    sch.horizon = horizon;
    sch.period = period;
    int upto = period > 0 ? std::min(horizon, period) : horizon;
    for (int k = 1; k <= upto; ++k) {
        const RBOperator& T = sch.op(k);
        sch.uniform_s = std::max(sch.uniform_s, contraction_factor(T));
        for (const auto& qi : T.q) {
            sch.uniform_m = std::max(
                sch.uniform_m,
                certify_sup_bound(CoefficientFn::make(qi.body, T.partition.domain,
                                                      T.value_dim)));
        }
    }
    if (sch.uniform_s >= 1.0 - kContractionGuard)
        throw NotContractive("schedule has uniform contraction bound " +
                             std::to_string(sch.uniform_s));
    return sch;
}

double invariant_ball_radius(double M, double s) {
    if (!(s >= 0.0) || s >= 1.0) throw NotContractive("ball radius needs 0 <= s < 1");
    if (M < 0.0) throw DomainError("M must be nonnegative");
    return M / (1.0 - s);
}

ConditionReport summability_check(const OperatorSchedule& schedule, int k_max) {
    ConditionReport rep;
    rep.kind = ConditionReport::Kind::summability;
    double product = 1.0;
    double s_pow = 1.0;
    for (int k = 1; k <= k_max; ++k) {
        double lip = contraction_factor(schedule.op(k));
        product *= lip;
        s_pow *= schedule.uniform_s;
        ConditionWitness w;
        w.label = "prod Lip(T_j), j <= " + std::to_string(k);
        w.location = k;
        w.lhs = product;
        w.rhs = s_pow;
        w.gap = std::max(0.0, product - s_pow);
        rep.witnesses.push_back(w);
        if (lip >= 1.0 || product > s_pow + kFloatTol) rep.verdict = false;
    }
    ConditionWitness tail;
    tail.label = "geometric tail s/(1-s)";
    tail.lhs = schedule.uniform_s / (1.0 - schedule.uniform_s);
    rep.witnesses.push_back(tail);
    return rep;
}

static TrajectoryResult run_trajectory(const OperatorSchedule& schedule,
                                       const GridFunction& f0, int k, bool backward) {
    if (k < 1) throw DomainError("trajectory depth must be at least 1");
    TrajectoryResult res;
    res.depth = k;
    res.backward = backward;
    double r = invariant_ball_radius(schedule.uniform_m, schedule.uniform_s);
    res.inside_ball = sup_norm(f0) <= r + kFloatTol;

    GridFunction g = f0;
    if (backward) {
        for (int j = k; j >= 1; --j) g = apply(schedule.op(j), g);
        res.tail_bound = std::pow(schedule.uniform_s, k) * 2.0 * r;
    } else {
        for (int j = 1; j <= k; ++j) g = apply(schedule.op(j), g);
        res.tail_bound = 0.0;
    }
    res.psi = std::move(g);
    return res;
}

TrajectoryResult backward_trajectory(const OperatorSchedule& schedule,
                                     const GridFunction& f0, int k) {
    return run_trajectory(schedule, f0, k, true);
}

TrajectoryResult forward_trajectory(const OperatorSchedule& schedule,
                                    const GridFunction& f0, int k) {
    return run_trajectory(schedule, f0, k, false);
}

// ---------------------------------------------------------------------------
// Built-in operators and schedules
// ---------------------------------------------------------------------------

namespace {

RBOperator tent_operator(const Scalar& s_value) {
    // l_1 = x/2, l_2 = (x+1)/2 on [0,1]; q_1 = x, q_2 = 1 - x.
    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
    std::vector<AffineMap> maps{
        AffineMap::make(Scalar::ratio(1, 2), Scalar::integer(0)),
        AffineMap::make(Scalar::ratio(1, 2), Scalar::ratio(1, 2))};
    std::vector<CoefficientFn> q{
        CoefficientFn::make(ex::var(), domain, 1),
        CoefficientFn::make(ex::sub(ex::integer(1), ex::var()), domain, 1)};
    std::vector<CoefficientFn> s{
        CoefficientFn::make(ex::num(s_value), domain, 1),
        CoefficientFn::make(ex::num(s_value), domain, 1)};
    return RBOperator::create(Partition::create(domain, std::move(maps)),
                              std::move(q), std::move(s));
}

RBOperator kiesswetter_operator() {
    // Four branches on [0,1]: -1/2 f(4x); -1/2 + 1/2 f(4x-1); 1/2 f(4x-2);
    // 1/2 + 1/2 f(4x-3).
    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
    std::vector<AffineMap> maps;
    for (int i = 0; i < 4; ++i)
        maps.push_back(AffineMap::make(Scalar::ratio(1, 4), Scalar::ratio(i, 4)));
    auto c = [&](long long num, long long den) {
        return CoefficientFn::make(ex::num(num, den), domain, 1);
    };
    std::vector<CoefficientFn> q{c(0, 1), c(-1, 2), c(0, 1), c(1, 2)};
    std::vector<CoefficientFn> s{c(-1, 2), c(1, 2), c(1, 2), c(1, 2)};
    return RBOperator::create(Partition::create(domain, std::move(maps)),
                              std::move(q), std::move(s));
}

RBOperator casino_operator() {
    // Two branches: 3/4 f(2x); 3/4 + 1/4 f(2x-1).
    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
    std::vector<AffineMap> maps{
        AffineMap::make(Scalar::ratio(1, 2), Scalar::integer(0)),
        AffineMap::make(Scalar::ratio(1, 2), Scalar::ratio(1, 2))};
    auto c = [&](long long num, long long den) {
        return CoefficientFn::make(ex::num(num, den), domain, 1);
    };
    std::vector<CoefficientFn> q{c(0, 1), c(3, 4)};
    std::vector<CoefficientFn> s{c(3, 4), c(1, 4)};
    return RBOperator::create(Partition::create(domain, std::move(maps)),
                              std::move(q), std::move(s));
}

}  // namespace

RBOperator builtin_operator(const std::string& name) {
    if (name == "takagi") return tent_operator(Scalar::ratio(1, 2));
    if (name == "parabola") return tent_operator(Scalar::ratio(1, 4));
    if (name == "kiesswetter") return kiesswetter_operator();
    if (name == "casino") return casino_operator();
    throw UnknownName("unknown builtin operator '" + name + "'");
}

OperatorSchedule builtin_schedule(const std::string& name) {
    std::string first, second;
    if (name == "takagi_parabola") {
        first = "takagi";
        second = "parabola";
    } else if (name == "kiesswetter_casino") {
        first = "kiesswetter";
        second = "casino";
    } else {
        throw UnknownName("unknown builtin schedule '" + name + "'");
    }
    auto gen = [first, second](int k) {
        // T_1 for 10(j-1) < k <= 10j-5, T_2 for 10j-5 < k <= 10j
        int r = (k - 1) % 10;
        return builtin_operator(r < 5 ? first : second);
    };
    return make_schedule(gen, 10, 10);
}

// ---------------------------------------------------------------------------
// Interpolating schedules
// ---------------------------------------------------------------------------

ExprPtr chord_expr(const CoefficientFn& base) {
    std::vector<double> p0{base.domain.lo[0].value()}, p1{base.domain.hi[0].value()};
    double f0 = eval_expr(*base.body, p0).c[0];
    double f1 = eval_expr(*base.body, p1).c[0];
    return ex::affine(Scalar::exact_from_double(f1 - f0),
                      Scalar::exact_from_double(f0));
}

OperatorSchedule build_interpolating_schedule(const InterpolatingSchedule& spec) {
    if (spec.levels.empty()) throw EmptyFamily("schedule requires at least one level");
    const Box& domain = spec.base.domain;
    if (domain.dim() != 1)
        throw DomainError("interpolating schedules are 1-D");
    ExprPtr b = chord_expr(spec.base);

    // Pre-build one operator per level; the generator cycles through them.
    auto ops = std::make_shared<std::vector<RBOperator>>();
    for (const InterpolatingLevel& level : spec.levels) {
        if (level.maps.empty() || level.maps.size() != level.scales.size())
            throw ShapeMismatch("level needs one scale per map");
        // endpoint pinning: some map must fix 0, some map must fix 1
        double lo = domain.lo[0].value(), hi = domain.hi[0].value();
        bool fixes_lo = false, fixes_hi = false;
        for (const AffineMap& m : level.maps) {
            if (std::fabs(m.apply1(lo) - lo) <= kFloatTol) fixes_lo = true;
            if (std::fabs(m.apply1(hi) - hi) <= kFloatTol) fixes_hi = true;
        }
        if (!fixes_lo || !fixes_hi)
            throw EndpointMismatch("level maps must fix both domain endpoints");

        std::vector<CoefficientFn> q, s;
        for (size_t i = 0; i < level.maps.size(); ++i) {
            // q_i = f o l_i - s_i * b
            ExprPtr fol = ex::compose_affine(spec.base.body, level.maps[i].scale[0],
                                             level.maps[i].offset[0]);
            ExprPtr qi = ex::sub(fol, ex::mul(level.scales[i].body, b));
            q.push_back(CoefficientFn::make(qi, domain, 1));
            s.push_back(CoefficientFn::make(level.scales[i].body, domain, 1));
        }
        ops->push_back(RBOperator::create(Partition::create(domain, level.maps),
                                          std::move(q), std::move(s)));
    }
    int period = static_cast<int>(ops->size());
    auto gen = [ops, period](int k) { return (*ops)[(k - 1) % period]; };
    return make_schedule(gen, period, period);
}

std::vector<double> level_nodes(const InterpolatingSchedule& spec, int k) {
    const InterpolatingLevel& level =
        spec.levels[(k - 1) % static_cast<int>(spec.levels.size())];
    std::vector<double> nodes;
    double lo = spec.base.domain.lo[0].value();
    double hi = spec.base.domain.hi[0].value();
    for (const AffineMap& m : level.maps) {
        nodes.push_back(m.apply1(lo));
        nodes.push_back(m.apply1(hi));
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end(),
                            [](double a, double b) { return std::fabs(a - b) <= kFloatTol; }),
                nodes.end());
    return nodes;
}

ConditionReport check_interpolation(const GridFunction& psi,
                                    const std::vector<std::pair<double, double>>& nodes,
                                    double tol) {
    ConditionReport rep;
    rep.kind = ConditionReport::Kind::interpolation;
    rep.tolerance = tol;
    for (const auto& [x, y] : nodes) {
        std::vector<double> p{x};
        Value v = grid_eval(psi, p);
        ConditionWitness w;
        w.label = "node";
        w.location = x;
        w.lhs = v.c[0];
        w.rhs = y;
        w.gap = std::fabs(v.c[0] - y);
        rep.witnesses.push_back(w);
        if (w.gap > tol) rep.verdict = false;
    }
    return rep;
}

}  // namespace frif

#include <doctest.h>

#include <cmath>
#include <random>

#include "frif/nonstationary.hpp"
#include "helpers.hpp"

using namespace frif;

namespace {

GridFunction identity_grid(const Box& domain, int res) {
    return GridFunction::sample(domain, res,
                                [](std::span<const double> x) { return Value(x[0]); });
}

}  // namespace

TEST_SUITE("nonstationary") {

TEST_CASE("invariant ball radius formula") {
    CHECK(invariant_ball_radius(1.0, 0.5) == 2.0);
    CHECK(invariant_ball_radius(0.0, 0.9) == 0.0);
    CHECK_THROWS_AS(invariant_ball_radius(1.0, 1.0), NotContractive);
}

TEST_CASE("interpolating-ball radius matches (|f| + s|b|)/(1-s)") {
    // for |f| = 1/2, |b| = 1/2, s = 1/2 the bound is (1/2 + 1/4)/(1/2) = 3/2
    double f_sup = 0.5, b_sup = 0.5, s = 0.5;
    CHECK(invariant_ball_radius(f_sup + s * b_sup, s) == doctest::Approx(1.5));
}

TEST_CASE("summability of the tent-pair schedule") {
    OperatorSchedule sch = builtin_schedule("takagi_parabola");
    ConditionReport rep = summability_check(sch, 25);
    CHECK(rep.verdict);
    CHECK(rep.witnesses.back().lhs == doctest::Approx(1.0));  // 0.5/(1-0.5)
}

TEST_CASE("summability tail for uniform s = 3/4 is 3") {
    OperatorSchedule sch = builtin_schedule("kiesswetter_casino");
    CHECK(sch.uniform_s == doctest::Approx(0.75));
    ConditionReport rep = summability_check(sch, 10);
    CHECK(rep.verdict);
    CHECK(rep.witnesses.back().lhs == doctest::Approx(3.0));
}

TEST_CASE("geometric tail is 2 for a uniform factor of 2/3") {
    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
    auto gen = [domain](int) {
        std::vector<AffineMap> maps{
            AffineMap::make(Scalar::ratio(1, 2), Scalar::integer(0)),
            AffineMap::make(Scalar::ratio(1, 2), Scalar::ratio(1, 2))};
        std::vector<CoefficientFn> q{CoefficientFn::make(ex::integer(0), domain, 1),
                                     CoefficientFn::make(ex::integer(0), domain, 1)};
        std::vector<CoefficientFn> s{CoefficientFn::make(ex::num(2, 3), domain, 1),
                                     CoefficientFn::make(ex::num(2, 3), domain, 1)};
        return RBOperator::create(Partition::create(domain, std::move(maps)),
                                  std::move(q), std::move(s));
    };
    OperatorSchedule sch = make_schedule(gen, 1, 1);
    ConditionReport rep = summability_check(sch, 8);
    CHECK(rep.verdict);
    CHECK(rep.witnesses.back().lhs == doctest::Approx(2.0));
}

TEST_CASE("a member with Lip >= 1 fails the summability verdict") {
    // bypass make_schedule certification by assembling the schedule directly
    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
    OperatorSchedule sch;
    sch.generator = [domain](int k) {
        std::vector<AffineMap> maps{
            AffineMap::make(Scalar::ratio(1, 2), Scalar::integer(0)),
            AffineMap::make(Scalar::ratio(1, 2), Scalar::ratio(1, 2))};
        Scalar sv = k == 2 ? Scalar::integer(1) : Scalar::ratio(1, 2);
        std::vector<CoefficientFn> q{CoefficientFn::make(ex::integer(0), domain, 1),
                                     CoefficientFn::make(ex::integer(0), domain, 1)};
        std::vector<CoefficientFn> s{CoefficientFn::make(ex::num(sv), domain, 1),
                                     CoefficientFn::make(ex::num(sv), domain, 1)};
        return RBOperator::create(Partition::create(domain, std::move(maps)),
                                  std::move(q), std::move(s));
    };
    sch.uniform_s = 0.5;  // claimed bound the member at k = 2 violates
    ConditionReport rep = summability_check(sch, 4);
    CHECK(!rep.verdict);
}

TEST_CASE("schedules with an expanding member are refused") {
    auto gen = [](int k) {
        Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
        std::vector<AffineMap> maps{
            AffineMap::make(Scalar::ratio(1, 2), Scalar::integer(0)),
            AffineMap::make(Scalar::ratio(1, 2), Scalar::ratio(1, 2))};
        double sv = k == 3 ? 1.5 : 0.5;
        std::vector<CoefficientFn> q{CoefficientFn::make(ex::integer(0), domain, 1),
                                     CoefficientFn::make(ex::integer(0), domain, 1)};
        std::vector<CoefficientFn> s{
            CoefficientFn::make(ex::num(Scalar::exact_from_double(sv)), domain, 1),
            CoefficientFn::make(ex::num(Scalar::exact_from_double(sv)), domain, 1)};
        return RBOperator::create(Partition::create(domain, std::move(maps)),
                                  std::move(q), std::move(s));
    };
    CHECK_THROWS_AS(make_schedule(gen, 10, 10), NotContractive);
}

TEST_CASE("backward depth 1 is a single application") {
    OperatorSchedule sch = builtin_schedule("takagi_parabola");
    const Box& domain = sch.op(1).partition.domain;
    GridFunction f0 = identity_grid(domain, 129);
    TrajectoryResult bt = backward_trajectory(sch, f0, 1);
    TrajectoryResult ft = forward_trajectory(sch, f0, 1);
    GridFunction once = apply(sch.op(1), f0);
    CHECK(bt.psi.values == once.values);
    CHECK(ft.psi.values == once.values);
}

TEST_CASE("constant schedules reduce to stationary iteration") {
    RBOperator T = builtin_operator("parabola");
    OperatorSchedule sch = make_schedule([&](int) { return T; }, 1, 1);
    GridFunction f0 = GridFunction::zero(T.partition.domain, 257, 1);
    for (int k : {1, 5, 9}) {
        TrajectoryResult bt = backward_trajectory(sch, f0, k);
        TrajectoryResult ft = forward_trajectory(sch, f0, k);
        GridFunction direct = iterate_n(T, f0, k);
        CHECK(bt.psi.values == direct.values);
        CHECK(ft.psi.values == direct.values);
    }
}

TEST_CASE("forward and backward orders differ at depth 2") {
    // alternating schedule: Psi_2 = T_1(T_2 f), Phi_2 = T_2(T_1 f)
    RBOperator takagi = builtin_operator("takagi");
    RBOperator parabola = builtin_operator("parabola");
    auto gen = [&](int k) { return k % 2 == 1 ? takagi : parabola; };
    OperatorSchedule sch = make_schedule(gen, 2, 2);
    const Box& domain = takagi.partition.domain;
    GridFunction f0 = identity_grid(domain, 129);
    TrajectoryResult bt = backward_trajectory(sch, f0, 2);
    TrajectoryResult ft = forward_trajectory(sch, f0, 2);
    CHECK(sup_distance(bt.psi, ft.psi) > 1e-3);
}

TEST_CASE("alternating backward trajectories stay within the tail bound") {
    OperatorSchedule sch = builtin_schedule("takagi_parabola");
    const Box& domain = sch.op(1).partition.domain;
    GridFunction f0 = GridFunction::zero(domain, 1025, 1);
    TrajectoryResult t20 = backward_trajectory(sch, f0, 20);
    TrajectoryResult t25 = backward_trajectory(sch, f0, 25);
    CHECK(sup_distance(t20.psi, t25.psi) <= t20.tail_bound);
}

TEST_CASE("builtin operators carry their stated factors") {
    CHECK(contraction_factor(builtin_operator("parabola")) == 0.25);
    CHECK(contraction_factor(builtin_operator("kiesswetter")) == 0.5);
    CHECK(contraction_factor(builtin_operator("casino")) == 0.75);
    CHECK_THROWS_AS(builtin_operator("nope"), UnknownName);
}

TEST_CASE("tent fixed point peaks at one") {
    RBOperator T = builtin_operator("takagi");
    GridFunction f0 = GridFunction::zero(T.partition.domain, 1025, 1);
    FixedPointResult fp = iterate_to_fixed_point(T, f0, 1e-9, 200);
    std::vector<double> p{0.5};
    CHECK(grid_eval(fp.psi, p).scalar() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("block schedule pattern: five then five") {
    OperatorSchedule sch = builtin_schedule("takagi_parabola");
    auto factor_at = [&](int k) { return contraction_factor(sch.op(k)); };
    for (int k = 1; k <= 5; ++k) CHECK(factor_at(k) == 0.5);
    for (int k = 6; k <= 10; ++k) CHECK(factor_at(k) == 0.25);
    CHECK(factor_at(11) == 0.5);
    CHECK(sch.uniform_s == 0.5);
    CHECK(builtin_schedule("kiesswetter_casino").uniform_s == 0.75);
    CHECK_THROWS_AS(builtin_schedule("nope"), UnknownName);
}

TEST_CASE("interpolating schedule with zero scales returns f itself") {
    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
    InterpolatingSchedule spec;
    spec.base = CoefficientFn::make(
        ex::mul(ex::var(), ex::sub(ex::integer(1), ex::var())), domain, 1);
    InterpolatingLevel level;
    for (int i = 0; i < 2; ++i) {
        level.maps.push_back(AffineMap::make(Scalar::ratio(1, 2), Scalar::ratio(i, 2)));
        level.scales.push_back(CoefficientFn::make(ex::integer(0), domain, 1));
    }
    spec.levels.push_back(level);
    OperatorSchedule sch = build_interpolating_schedule(spec);
    std::mt19937_64 rng(83);
    GridFunction g = frif::testing::random_grid(rng, domain, 129);
    GridFunction out = apply(sch.op(1), g);
    GridFunction f_grid = GridFunction::sample(domain, 129, [&](std::span<const double> x) {
        return eval_expr(*spec.base.body, x);
    });
    CHECK(sup_distance(out, f_grid) <= 1e-14);
}

TEST_CASE("chord of a function with f(0)=0, f(1)=1 is the identity") {
    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
    // f(x) = x + x(1-x): f(0) = 0, f(1) = 1
    CoefficientFn base = CoefficientFn::make(
        ex::add(ex::var(), ex::mul(ex::var(), ex::sub(ex::integer(1), ex::var()))),
        domain, 1);
    ExprPtr b = chord_expr(base);
    std::vector<double> x{0.37};
    CHECK(eval_expr(*b, x).scalar() == doctest::Approx(0.37));
}

TEST_CASE("operator-level node pinning for interpolating levels") {
    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
    InterpolatingSchedule spec;
    spec.base = CoefficientFn::make(
        ex::div(ex::sin(ex::mul(ex::pi(), ex::var())), ex::integer(2)), domain, 1);
    InterpolatingLevel level;
    for (int i = 0; i < 4; ++i) {
        level.maps.push_back(AffineMap::make(Scalar::ratio(1, 4), Scalar::ratio(i, 4)));
        level.scales.push_back(CoefficientFn::make(ex::num(1, 2), domain, 1));
    }
    spec.levels.push_back(level);
    OperatorSchedule sch = build_interpolating_schedule(spec);

    std::mt19937_64 rng(89);
    GridFunction g = frif::testing::random_grid(rng, domain, 257);
    // membership in C_*: pin the endpoint values to f's
    g.values.front() = 0.0;
    g.values.back() = eval_expr(*spec.base.body, std::vector<double>{1.0}).scalar();
    GridFunction out = apply(sch.op(1), g);
    for (double node : level_nodes(spec, 1)) {
        std::vector<double> p{node};
        double f_at = eval_expr(*spec.base.body, p).scalar();
        CHECK(grid_eval(out, p).scalar() == doctest::Approx(f_at).epsilon(1e-12));
    }
}

TEST_CASE("fractalizing f(x) = x still interpolates it at level nodes") {
    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
    InterpolatingSchedule spec;
    spec.base = CoefficientFn::make(ex::var(), domain, 1);  // f = b = x
    InterpolatingLevel level;
    for (int i = 0; i < 4; ++i) {
        level.maps.push_back(AffineMap::make(Scalar::ratio(1, 4), Scalar::ratio(i, 4)));
        level.scales.push_back(CoefficientFn::make(ex::num(2, 5), domain, 1));
    }
    spec.levels.push_back(level);
    OperatorSchedule sch = build_interpolating_schedule(spec);
    GridFunction f0 = GridFunction::zero(domain, 257, 1);
    TrajectoryResult traj = backward_trajectory(sch, f0, 30);
    for (double node : level_nodes(spec, 1)) {
        std::vector<double> p{node};
        CHECK(grid_eval(traj.psi, p).scalar() == doctest::Approx(node).epsilon(1e-9));
    }
}

TEST_CASE("maps that miss an endpoint are rejected") {
    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
    InterpolatingSchedule spec;
    spec.base = CoefficientFn::make(ex::var(), domain, 1);
    InterpolatingLevel level;
    level.maps.push_back(AffineMap::make(Scalar::ratio(1, 2), Scalar::ratio(1, 4)));
    level.scales.push_back(CoefficientFn::make(ex::integer(0), domain, 1));
    spec.levels.push_back(level);
    CHECK_THROWS_AS(build_interpolating_schedule(spec), EndpointMismatch);
}

TEST_CASE("check_interpolation verdicts") {
    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
    GridFunction psi = identity_grid(domain, 65);
    ConditionReport ok = check_interpolation(
        psi, {{0.0, 0.0}, {0.25, 0.25}, {1.0, 1.0}}, 1e-12);
    CHECK(ok.verdict);
    ConditionReport bad = check_interpolation(psi, {{0.5, 0.75}}, 1e-12);
    CHECK(!bad.verdict);
    CHECK(bad.max_gap() == doctest::Approx(0.25));
}

}  // nonstationary

TEST_SUITE("nonstationary properties") {

TEST_CASE("the certified ball is invariant under every scheduled operator") {
    OperatorSchedule sch = builtin_schedule("takagi_parabola");
    double r = invariant_ball_radius(sch.uniform_m, sch.uniform_s);
    const Box& domain = sch.op(1).partition.domain;
    std::mt19937_64 rng(97);
    std::uniform_real_distribution<double> dist(-r, r);
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        GridFunction f = GridFunction::zero(domain, 33, 1);
        for (double& v : f.values) v = dist(rng);
        for (int k = 1; k <= 50; ++k) {
            GridFunction Tf = apply(sch.op(k), f);
            if (sup_norm(Tf) > r + 1e-12) ++violations;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("backward trajectories are Cauchy at the certified rate") {
    OperatorSchedule sch = builtin_schedule("takagi_parabola");
    double r = invariant_ball_radius(sch.uniform_m, sch.uniform_s);
    const Box& domain = sch.op(1).partition.domain;
    GridFunction f0 = GridFunction::zero(domain, 513, 1);
    for (int k : {5, 10, 15}) {
        TrajectoryResult base = backward_trajectory(sch, f0, k);
        for (int m : {1, 4, 9}) {
            TrajectoryResult deeper = backward_trajectory(sch, f0, k + m);
            CHECK(sup_distance(base.psi, deeper.psi) <=
                  std::pow(sch.uniform_s, k) * 2.0 * r + 1e-13);
        }
    }
}

TEST_CASE("initial-condition independence at the contraction rate") {
    OperatorSchedule sch = builtin_schedule("takagi_parabola");
    const Box& domain = sch.op(1).partition.domain;
    GridFunction zero = GridFunction::zero(domain, 513, 1);
    GridFunction ident = identity_grid(domain, 513);
    for (int k : {5, 10, 20}) {
        TrajectoryResult a = backward_trajectory(sch, zero, k);
        TrajectoryResult b = backward_trajectory(sch, ident, k);
        CHECK(sup_distance(a.psi, b.psi) <=
              std::pow(sch.uniform_s, k) * sup_distance(zero, ident) + 1e-13);
    }
}

TEST_CASE("iterating the parabola operator converges to 4x(1-x)") {
    RBOperator T = builtin_operator("parabola");
    GridFunction f0 = GridFunction::zero(T.partition.domain, 257, 1);
    FixedPointResult fp = iterate_to_fixed_point(T, f0, 1e-12, 200);
    std::vector<double> x(1);
    double worst = 0.0;
    for (long long i = 0; i < fp.psi.node_count(); ++i) {
        fp.psi.node_point(i, x);
        worst = std::max(worst, std::fabs(fp.psi.values[i] - 4.0 * x[0] * (1.0 - x[0])));
    }
    CHECK(worst <= fp.apriori_bound + 1e-14);
}

TEST_CASE("interpolating trajectories pin the endpoints exactly") {
    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
    InterpolatingSchedule spec;
    spec.base = CoefficientFn::make(
        ex::div(ex::sin(ex::mul(ex::pi(), ex::var())), ex::integer(2)), domain, 1);
    for (long long sv : {2, 4}) {
        InterpolatingLevel level;
        for (int i = 0; i < 8; ++i) {
            level.maps.push_back(AffineMap::make(Scalar::ratio(1, 8), Scalar::ratio(i, 8)));
            level.scales.push_back(CoefficientFn::make(ex::num(1, sv), domain, 1));
        }
        spec.levels.push_back(level);
    }
    OperatorSchedule sch = build_interpolating_schedule(spec);
    ExprPtr b = chord_expr(spec.base);
    GridFunction f0 = GridFunction::sample(domain, 1025, [&](std::span<const double> x) {
        return eval_expr(*b, x);
    });
    TrajectoryResult traj = backward_trajectory(sch, f0, 12);
    double f_at_0 = eval_expr(*spec.base.body, std::vector<double>{0.0}).scalar();
    double f_at_1 = eval_expr(*spec.base.body, std::vector<double>{1.0}).scalar();
    CHECK(traj.psi.values.front() == f_at_0);
    CHECK(traj.psi.values.back() == f_at_1);
}

}  // nonstationary properties

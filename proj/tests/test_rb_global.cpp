#include <doctest.h>

#include <cmath>
#include <random>

#include "frif/pipeline.hpp"
#include "frif/rb_global.hpp"
#include "helpers.hpp"

using namespace frif;

namespace {

RBOperator constant_scale_operator(double s1v, double s2v) {
    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
    std::vector<AffineMap> maps{
        AffineMap::make(Scalar::ratio(1, 2), Scalar::integer(0)),
        AffineMap::make(Scalar::ratio(1, 2), Scalar::ratio(1, 2))};
    std::vector<CoefficientFn> q{
        CoefficientFn::make(ex::var(), domain, 1),
        CoefficientFn::make(ex::sub(ex::integer(1), ex::var()), domain, 1)};
    std::vector<CoefficientFn> s{
        CoefficientFn::make(ex::num(Scalar::exact_from_double(s1v)), domain, 1),
        CoefficientFn::make(ex::num(Scalar::exact_from_double(s2v)), domain, 1)};
    return RBOperator::create(Partition::create(domain, std::move(maps)),
                              std::move(q), std::move(s));
}

}  // namespace

TEST_SUITE("rb_global") {

TEST_CASE("contraction factor of the sine demo operator is about 2/3") {
    double s = contraction_factor(sample_sine_operator(false));
    CHECK(s >= 0.6667);
    CHECK(s <= 0.6677);
}

TEST_CASE("zero scales give a constant operator with factor 0") {
    RBOperator T = constant_scale_operator(0.0, 0.0);
    CHECK(contraction_factor(T) == 0.0);
    // apply is then independent of the argument
    std::mt19937_64 rng(3);
    GridFunction f = frif::testing::random_grid(rng, T.partition.domain, 33);
    GridFunction g = frif::testing::random_grid(rng, T.partition.domain, 33);
    CHECK(sup_distance(apply(T, f), apply(T, g)) == 0.0);
}

TEST_CASE("constant scales certify to their max") {
    CHECK(contraction_factor(constant_scale_operator(0.5, 0.25)) == 0.5);
}

TEST_CASE("applying to zero isolates the q part") {
    RBOperator T = sample_sine_operator(false);
    GridFunction zero = GridFunction::zero(T.partition.domain, 2188, 1);
    GridFunction t0 = apply(T, zero);
    CHECK(t0.values[0] == -1.0);  // q_1(0) at x = 0
    // interior node in the second piece: q_2(xi) = xi = (3x-1)/2
    std::vector<double> x(1);
    for (long long i = 0; i < t0.node_count(); ++i) {
        t0.node_point(i, x);
        if (x[0] >= 1.0 / 3.0) {
            double xi = (3.0 * x[0] - 1.0) / 2.0;
            CHECK(t0.values[i] == doctest::Approx(xi).epsilon(1e-12));
            break;
        }
    }
}

TEST_CASE("fixed point of the sine demo pins psi(0) = -1") {
    RBOperator T = sample_sine_operator(false);
    GridFunction f0 = GridFunction::zero(T.partition.domain, 2188, 1);
    FixedPointResult fp = iterate_to_fixed_point(T, f0, 1e-8, 200);
    CHECK(fp.converged);
    CHECK(fp.iterations <= 60);
    CHECK(fp.psi.values[0] == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(fp.apriori_bound <= 1e-8);
}

TEST_CASE("zero q functions collapse to the zero fixed point") {
    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
    std::vector<AffineMap> maps{
        AffineMap::make(Scalar::ratio(1, 2), Scalar::integer(0)),
        AffineMap::make(Scalar::ratio(1, 2), Scalar::ratio(1, 2))};
    std::vector<CoefficientFn> q{CoefficientFn::make(ex::integer(0), domain, 1),
                                 CoefficientFn::make(ex::integer(0), domain, 1)};
    std::vector<CoefficientFn> s{CoefficientFn::make(ex::num(1, 2), domain, 1),
                                 CoefficientFn::make(ex::num(1, 2), domain, 1)};
    RBOperator T = RBOperator::create(Partition::create(domain, std::move(maps)),
                                      std::move(q), std::move(s));
    std::mt19937_64 rng(5);
    GridFunction f0 = frif::testing::random_grid(rng, T.partition.domain, 65);
    FixedPointResult fp = iterate_to_fixed_point(T, f0, 1e-10, 200);
    CHECK(sup_norm(fp.psi) <= 1e-10);
}

TEST_CASE("iteration count respects the geometric estimate") {
    RBOperator T = sample_sine_operator(false);
    GridFunction f0 = GridFunction::zero(T.partition.domain, 2188, 1);
    double eps = 1e-8;
    FixedPointResult fp = iterate_to_fixed_point(T, f0, eps, 200);
    double s = fp.contraction_s;
    GridFunction psi1 = apply(T, f0);
    double delta = sup_distance(psi1, f0);
    int k_bound = static_cast<int>(
        std::ceil(std::log(eps * (1.0 - s) / delta) / std::log(s)));
    CHECK(fp.iterations <= k_bound + 1);
}

TEST_CASE("non-covering partitions surface as a gap during application") {
    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
    std::vector<AffineMap> maps{
        AffineMap::make(Scalar::ratio(1, 2), Scalar::integer(0)),
        AffineMap::make(Scalar::ratio(1, 4), Scalar::ratio(3, 4))};
    std::vector<CoefficientFn> q{CoefficientFn::make(ex::integer(0), domain, 1),
                                 CoefficientFn::make(ex::integer(0), domain, 1)};
    std::vector<CoefficientFn> s{CoefficientFn::make(ex::num(1, 2), domain, 1),
                                 CoefficientFn::make(ex::num(1, 2), domain, 1)};
    RBOperator T = RBOperator::create(Partition::create(domain, std::move(maps)),
                                      std::move(q), std::move(s));
    GridFunction f = GridFunction::zero(T.partition.domain, 33, 1);
    CHECK_THROWS_AS(apply(T, f), PartitionGap);
}

TEST_CASE("a non-contractive operator is refused") {
    RBOperator T = constant_scale_operator(1.5, 0.5);
    GridFunction f0 = GridFunction::zero(T.partition.domain, 33, 1);
    CHECK_THROWS_AS(iterate_to_fixed_point(T, f0, 1e-8, 100), NotContractive);
}

TEST_CASE("running out of iterations raises") {
    RBOperator T = sample_sine_operator(false);
    GridFunction f0 = GridFunction::zero(T.partition.domain, 2188, 1);
    CHECK_THROWS_AS(iterate_to_fixed_point(T, f0, 1e-12, 3), MaxIterations);
}

TEST_CASE("address evaluation at depth 1 is one application") {
    RBOperator T = sample_sine_operator(false);
    std::vector<double> x{0.5};
    AddressValue av = evaluate_by_address(T, x, 1, Value(0.25));
    // x = 0.5 lies in the second piece, xi = (3x-1)/2 = 0.25
    double xi = 0.25;
    double expected = xi + (-2.0 / 3.0 * std::cos(xi)) * 0.25;
    CHECK(av.value.scalar() == doctest::Approx(expected).epsilon(1e-14));
    CHECK(av.address == std::vector<int>{1});
}

TEST_CASE("address evaluation at the fixed origin gives -1 at every depth") {
    RBOperator T = sample_sine_operator(false);
    std::vector<double> x{0.0};
    for (int depth : {1, 2, 5, 9}) {
        AddressValue av = evaluate_by_address(T, x, depth, Value(0.0));
        CHECK(av.value.scalar() == -1.0);  // sin(0) kills every later term
        CHECK(std::all_of(av.address.begin(), av.address.end(),
                          [](int i) { return i == 0; }));
    }
}

TEST_CASE("address error bound telescopes like s^m") {
    RBOperator T = constant_scale_operator(2.0 / 3.0, 2.0 / 3.0);
    double s = contraction_factor(T);
    double q_sup = certify_sup_bound(
        CoefficientFn::make(T.q[0].body, T.partition.domain, 1));
    double ball = q_sup / (1.0 - s);
    std::vector<double> x{0.3};
    for (int m : {1, 3, 6}) {
        AddressValue av = evaluate_by_address(T, x, m, Value(0.0));
        CHECK(av.error_bound == doctest::Approx(std::pow(s, m) * ball).epsilon(1e-9));
    }
}

TEST_CASE("compatibility is vacuous for truly disjoint half-open images") {
    RBOperator T = sample_sine_operator(false);
    GridFunction psi = GridFunction::zero(T.partition.domain, 65, 1);
    ConditionReport rep = check_compatibility(T, psi);
    CHECK(rep.verdict);
    CHECK(rep.witnesses.empty());
}

TEST_CASE("the continuous demo satisfies the junction identity") {
    RBOperator T = sample_sine_operator(true);
    GridFunction f0 = GridFunction::zero(T.partition.domain, 2188, 1);
    FixedPointResult fp = iterate_to_fixed_point(T, f0, 1e-10, 200);
    ConditionReport rep = check_compatibility(T, fp.psi);
    CHECK(rep.verdict);
    REQUIRE(rep.witnesses.size() == 1);
    CHECK(rep.witnesses[0].location == doctest::Approx(1.0 / 3.0));
    CHECK(rep.witnesses[0].lhs == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.witnesses[0].gap <= 1e-9);
}

TEST_CASE("perturbing q2 by 0.1 opens a compatibility gap of exactly 0.1") {
    RBOperator T = sample_sine_operator(true);
    GridFunction f0 = GridFunction::zero(T.partition.domain, 2188, 1);
    FixedPointResult fp = iterate_to_fixed_point(T, f0, 1e-10, 200);

    RBOperator perturbed = T;
    perturbed.q[1] = CoefficientFn::make(
        ex::add(T.q[1].body, ex::num(1, 10)), T.partition.domain, 1);
    ConditionReport rep = check_compatibility(perturbed, fp.psi);
    CHECK(!rep.verdict);
    REQUIRE(rep.witnesses.size() == 1);
    CHECK(rep.witnesses[0].gap == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("boundary values of the continuous demo vanish") {
    RBOperator T = sample_sine_operator(true);
    auto bvals = boundary_values(T);
    CHECK(bvals[0].first == 0.0);
    CHECK(bvals[0].second.scalar() == 0.0);
    CHECK(bvals[1].first == 1.0);
    CHECK(bvals[1].second.scalar() == 0.0);
}

TEST_CASE("boundary values of the discontinuous demo pin psi(0) = -1") {
    RBOperator T = sample_sine_operator(false);
    auto bvals = boundary_values(T);
    CHECK(bvals[0].second.scalar() == -1.0);
}

TEST_CASE("boundary formula q/(1-s)") {
    RBOperator T = constant_scale_operator(0.5, 0.5);
    // q_1(x) = x has q_1(0) = 0; build one with q_1 = 1 instead
    T.q[0] = CoefficientFn::make(ex::integer(1), T.partition.domain, 1);
    auto bvals = boundary_values(T);
    CHECK(bvals[0].second.scalar() == doctest::Approx(2.0));  // 1/(1-1/2)
}

TEST_CASE("degenerate 1 - s at an endpoint is refused") {
    RBOperator T = constant_scale_operator(1.0, 0.5);
    CHECK_THROWS_AS(boundary_values(T), DegenerateScale);
}

TEST_CASE("a single-map operator reports the value at the map's fixed point") {
    // l(x) = x/2 + 1/4 fixes x* = 1/2; psi(x*) = q(x*)/(1 - s(x*)) = 1/(1/2)
    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
    std::vector<AffineMap> maps{
        AffineMap::make(Scalar::ratio(1, 2), Scalar::ratio(1, 4))};
    std::vector<CoefficientFn> q{CoefficientFn::make(ex::integer(1), domain, 1)};
    std::vector<CoefficientFn> s{CoefficientFn::make(ex::num(1, 2), domain, 1)};
    RBOperator T = RBOperator::create(Partition::create(domain, std::move(maps)),
                                      std::move(q), std::move(s));
    auto bvals = boundary_values(T);
    REQUIRE(bvals.size() == 1);
    CHECK(bvals[0].first == doctest::Approx(0.5));
    CHECK(bvals[0].second.scalar() == doctest::Approx(2.0));
    CHECK(check_continuity(T).verdict);  // no junctions to violate
}

TEST_CASE("continuity of the continuous demo") {
    ConditionReport rep = check_continuity(sample_sine_operator(true));
    CHECK(rep.verdict);
    REQUIRE(rep.witnesses.size() == 1);
    CHECK(rep.witnesses[0].gap <= 1e-9);
}

TEST_CASE("a 0.2 shift in q2 breaks continuity by the self-consistent gap") {
    RBOperator T = sample_sine_operator(true);
    T.q[1] = CoefficientFn::make(ex::add(T.q[1].body, ex::num(1, 5)),
                                 T.partition.domain, 1);
    ConditionReport rep = check_continuity(T);
    CHECK(!rep.verdict);
    // with the perturbed operator's own boundary values:
    // psi(1) = 0.2/(1 - s2(1)), gap = |1 + s1(1) psi(1) - 1.2|
    double s1_at_1 = 0.5 * std::sin(1.0);
    double s2_at_1 = -2.0 / 3.0 * std::cos(1.0);
    double psi1 = 0.2 / (1.0 - s2_at_1);
    double expected_gap = std::fabs(1.0 + s1_at_1 * psi1 - 1.2);
    CHECK(rep.witnesses[0].gap == doctest::Approx(expected_gap).epsilon(1e-9));
}

TEST_CASE("tent coefficients join up at one half") {
    ConditionReport rep = check_continuity(constant_scale_operator(0.5, 0.5));
    CHECK(rep.verdict);
}

TEST_CASE("Lp certificate sums lambda_i sigma_i^p") {
    // demo maps with constant scales 1/2 and 2/3: lambda = (3, 3/2),
    // p = 1 sum: 3 * 1/2 + 1.5 * 2/3 = 2.5
    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1), false);
    std::vector<AffineMap> maps{
        AffineMap::make(Scalar::ratio(1, 3), Scalar::integer(0)),
        AffineMap::make(Scalar::ratio(2, 3), Scalar::ratio(1, 3))};
    std::vector<CoefficientFn> q{CoefficientFn::make(ex::integer(0), domain, 1),
                                 CoefficientFn::make(ex::integer(0), domain, 1)};
    std::vector<CoefficientFn> s{CoefficientFn::make(ex::num(1, 2), domain, 1),
                                 CoefficientFn::make(ex::num(2, 3), domain, 1)};
    RBOperator T = RBOperator::create(Partition::create(domain, std::move(maps)),
                                      std::move(q), std::move(s));
    ConditionReport rep = lp_certificate(T, 1.0);
    CHECK(!rep.verdict);
    CHECK(rep.witnesses.back().lhs == doctest::Approx(2.5).epsilon(1e-12));

    ConditionReport inf = lp_certificate(T, std::numeric_limits<double>::infinity());
    CHECK(inf.verdict);
    CHECK(inf.witnesses.back().lhs == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("zero scales pass every p") {
    RBOperator T = constant_scale_operator(0.0, 0.0);
    for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()})
        CHECK(lp_certificate(T, p).verdict);
}

TEST_CASE("the sine demo passes only at p = infinity") {
    RBOperator T = sample_sine_operator(false);
    CHECK(!lp_certificate(T, 1.0).verdict);
    CHECK(lp_certificate(T, std::numeric_limits<double>::infinity()).verdict);
}

TEST_CASE("zero-scale interpolation reduces to the polyline") {
    std::vector<std::pair<double, double>> data{{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.0}};
    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
    std::vector<CoefficientFn> scales(2, CoefficientFn::make(ex::integer(0), domain, 1));
    RBOperator T = build_fif(data, scales);
    GridFunction f0 = GridFunction::zero(T.partition.domain, 257, 1);
    FixedPointResult fp = iterate_to_fixed_point(T, f0, 1e-12, 100);
    std::vector<double> p{0.25};
    CHECK(grid_eval(fp.psi, p).scalar() == doctest::Approx(0.5).epsilon(1e-10));
    p[0] = 0.75;
    CHECK(grid_eval(fp.psi, p).scalar() == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("interpolation property survives nonzero scales") {
    std::vector<std::pair<double, double>> data{{0.0, 0.0}, {0.5, 0.5}, {1.0, 1.0}};
    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
    std::vector<CoefficientFn> scales(2, CoefficientFn::make(ex::num(1, 2), domain, 1));
    RBOperator T = build_fif(data, scales);
    GridFunction f0 = GridFunction::zero(T.partition.domain, 1025, 1);
    FixedPointResult fp = iterate_to_fixed_point(T, f0, 1e-9, 200);
    for (const auto& [x, y] : data) {
        std::vector<double> p{x};
        CHECK(grid_eval(fp.psi, p).scalar() == doctest::Approx(y).epsilon(1e-8));
    }
}

TEST_CASE("built interpolants are continuous by construction") {
    std::vector<std::pair<double, double>> data{{0.0, 1.0}, {0.5, -0.25}, {1.0, 0.5}};
    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
    std::vector<CoefficientFn> scales{
        CoefficientFn::make(ex::num(1, 4), domain, 1),
        CoefficientFn::make(ex::mul(ex::num(1, 4), ex::cos(ex::var())), domain, 1)};
    RBOperator T = build_fif(data, scales);
    CHECK(check_continuity(T).verdict);
}

TEST_CASE("interpolation works on non-unit domains and non-dyadic data") {
    std::vector<std::pair<double, double>> data{{1.0, 2.0}, {1.7, -1.0}, {3.0, 0.5}};
    Box domain = Box::interval(Scalar::exact_from_double(1.0),
                               Scalar::exact_from_double(3.0));
    std::vector<CoefficientFn> scales(2, CoefficientFn::make(ex::num(1, 5), domain, 1));
    RBOperator T = build_fif(data, scales);
    GridFunction f0 = GridFunction::zero(T.partition.domain, 2049, 1);
    FixedPointResult fp = iterate_to_fixed_point(T, f0, 1e-9, 200);
    // misaligned inverse maps leave an O(h) interpolation term
    double h = 2.0 / 2048.0;
    for (const auto& [x, y] : data) {
        std::vector<double> p{x};
        CHECK(std::fabs(grid_eval(fp.psi, p).scalar() - y) <= 1e-9 + 5.0 * h);
    }
    CHECK(check_continuity(T).verdict);
}

TEST_CASE("unsorted data and oversized scales are refused") {
    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
    std::vector<CoefficientFn> ok(1, CoefficientFn::make(ex::num(1, 2), domain, 1));
    CHECK_THROWS_AS(build_fif({{0.5, 0.0}, {0.0, 1.0}}, ok), UnsortedData);
    std::vector<CoefficientFn> big(1, CoefficientFn::make(ex::integer(2), domain, 1));
    CHECK_THROWS_AS(build_fif({{0.0, 0.0}, {1.0, 1.0}}, big), ScaleTooLarge);
}

}  // rb_global

TEST_SUITE("rb_global properties") {

TEST_CASE("grid application contracts with interpolation slack") {
    std::mt19937_64 rng(41);
    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
    for (int trial = 0; trial < 25; ++trial) {
        RBOperator T = frif::testing::random_global_operator(rng);
        double s = contraction_factor(T);
        for (int res : {129, 257}) {
            // smooth arguments with Lipschitz constant <= ~7
            GridFunction f = GridFunction::sample(domain, res, [](std::span<const double> x) {
                return Value(std::sin(6.0 * x[0]));
            });
            GridFunction g = GridFunction::sample(domain, res, [](std::span<const double> x) {
                return Value(x[0] * x[0] - 0.5 * x[0]);
            });
            double h = 1.0 / (res - 1);
            double lhs = sup_distance(apply(T, f), apply(T, g));
            CHECK(lhs <= s * sup_distance(f, g) + 20.0 * h);
        }
    }
}

TEST_CASE("a-priori bound honesty across random operators") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        RBOperator T = frif::testing::random_global_operator(rng);
        double s = contraction_factor(T);
        GridFunction f0 = GridFunction::zero(T.partition.domain, 65, 1);
        GridFunction psi1 = apply(T, f0);
        double delta = sup_distance(psi1, f0);
        for (int k : {5, 10, 20}) {
            GridFunction a = iterate_n(T, f0, k);
            GridFunction b = iterate_n(T, a, k);  // psi_{2k}
            // the 1e-13/(1-s) term is the roundoff of the floating apply
            CHECK(sup_distance(a, b) <=
                  std::pow(s, k) / (1.0 - s) * delta + 1e-13 / (1.0 - s));
        }
    }
}

TEST_CASE("fixed point does not depend on the seed function") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 10; ++trial) {
        RBOperator T = frif::testing::random_global_operator(rng);
        double eps = 1e-9;
        GridFunction z = GridFunction::zero(T.partition.domain, 65, 1);
        GridFunction o = GridFunction::constant(T.partition.domain, 65, Value(1.0));
        FixedPointResult a = iterate_to_fixed_point(T, z, eps, 500);
        FixedPointResult b = iterate_to_fixed_point(T, o, eps, 500);
        CHECK(sup_distance(a.psi, b.psi) <= 2.0 * eps);
    }
}

TEST_CASE("address evaluation agrees with the grid fixed point on aligned operators") {
    RBOperator T = constant_scale_operator(0.5, 0.5);
    GridFunction f0 = GridFunction::zero(T.partition.domain, 257, 1);
    FixedPointResult fp = iterate_to_fixed_point(T, f0, 1e-11, 200);
    std::vector<double> x(1);
    for (double xv : {0.0, 0.25, 0.375, 0.5, 0.875, 1.0}) {
        x[0] = xv;
        for (int depth : {4, 8}) {
            AddressValue av = evaluate_by_address(T, x, depth, Value(0.0));
            double grid_val = grid_eval(fp.psi, x).scalar();
            CHECK(std::fabs(av.value.scalar() - grid_val) <=
                  av.error_bound + fp.apriori_bound + 1e-12);
        }
    }
}

TEST_CASE("residual smallness certifies the self-referential identity") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 10; ++trial) {
        RBOperator T = frif::testing::random_global_operator(rng);
        GridFunction f0 = GridFunction::zero(T.partition.domain, 65, 1);
        FixedPointResult fp = iterate_to_fixed_point(T, f0, 1e-9, 500);
        CHECK(fp.residual <= 2.0 * fp.apriori_bound + 1e-14);
    }
}

TEST_CASE("exact application reproduces the float path on aligned dyadics") {
    RBOperator T = constant_scale_operator(0.25, 0.25);
    RationalGrid f0 = RationalGrid::zero(T.partition.domain, 17);
    CHECK(exact_apply_available(T, f0));
    RationalGrid one = apply_exact(T, f0);
    GridFunction f0f = GridFunction::zero(T.partition.domain, 17, 1);
    GridFunction onef = apply(T, f0f);
    for (int i = 0; i < 17; ++i)
        CHECK(one.values[i].to_double() == doctest::Approx(onef.values[i]).epsilon(1e-15));
}

TEST_CASE("exact iteration certifies the parabola limit") {
    RBOperator T = constant_scale_operator(0.25, 0.25);
    RationalGrid f0 = RationalGrid::zero(T.partition.domain, 65);
    ExactFixedPointResult r = iterate_exact(T, f0, 12);
    // limit is 4x(1-x); compare exactly at the nodes
    Rational worst(0);
    for (int i = 0; i < 65; ++i) {
        Rational x = r.psi.node_point(i);
        auto one_minus = sub(Rational(1), x);
        auto prod = mul(x, *one_minus);
        auto target = mul(Rational(4), *prod);
        auto diff = sub(r.psi.values[i], *target);
        Rational a = diff->abs();
        if (worst < a) worst = a;
    }
    CHECK(worst <= r.apriori_bound);
}

}  // rb_global properties

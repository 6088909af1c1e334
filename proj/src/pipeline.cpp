#include "frif/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>

#include "frif/export.hpp"

namespace frif {

namespace {

Box config_domain(const ProblemConfig& cfg) {
    return Box::interval(cfg.dom_lo, cfg.dom_hi, !cfg.half_open);
}

std::vector<AffineMap> config_maps(const ProblemConfig& cfg) {
    std::vector<AffineMap> maps;
    for (const auto& [a, b] : cfg.maps) maps.push_back(AffineMap::make(a, b));
    return maps;
}

bool contains_quat_literal(const Expr& e) {
    if (e.kind == ExprKind::QuatLit) return true;
    for (const auto& k : e.kids)
        if (contains_quat_literal(*k)) return true;
    return false;
}

void require_real_expressions(const ProblemConfig& cfg) {
    for (const auto& e : cfg.qs)
        if (contains_quat_literal(*e))
            throw SemanticError("quaternion literals are only valid in quaternion mode");
    for (const auto& e : cfg.ss)
        if (contains_quat_literal(*e))
            throw SemanticError("quaternion literals are only valid in quaternion mode");
}

std::vector<CoefficientFn> broadcast_scales(const std::vector<ExprPtr>& ss,
                                            size_t n, const Box& domain) {
    if (ss.size() != n && ss.size() != 1)
        throw SemanticError("expected 1 or " + std::to_string(n) + " scale expressions");
    std::vector<CoefficientFn> out;
    for (size_t i = 0; i < n; ++i)
        out.push_back(CoefficientFn::make(ss[ss.size() == 1 ? 0 : i], domain, 1));
    return out;
}

std::string join_path(const std::string& dir, const std::string& path) {
    if (dir.empty() || path.empty() || path.front() == '/') return path;
    return dir + "/" + path;
}

void report_line(std::ostream& log, const std::string& name,
                 const ConditionReport& rep) {
    log << name << ": " << (rep.verdict ? "ok" : "FAILED")
        << " (max gap " << format_shortest(rep.max_gap()) << ")\n";
}

}  // namespace

int default_resolution(const ProblemConfig& cfg) {
    if (cfg.resolution > 0) return cfg.resolution;
    if (cfg.mode == "global" && cfg.data.empty()) return 2188;  // 3^7 + 1
    return 1025;                                                // 2^10 + 1
}

RBOperator build_global_operator(const ProblemConfig& cfg) {
    require_real_expressions(cfg);
    Box domain = config_domain(cfg);
    if (!cfg.data.empty()) {
        size_t n = cfg.data.size() - 1;
        return build_fif(cfg.data, broadcast_scales(cfg.ss, n, domain));
    }
    std::vector<AffineMap> maps = config_maps(cfg);
    if (cfg.qs.size() != maps.size())
        throw SemanticError("need one q expression per map");
    std::vector<CoefficientFn> q, s;
    for (size_t i = 0; i < maps.size(); ++i)
        q.push_back(CoefficientFn::make(cfg.qs[i], domain, 1));
    s = broadcast_scales(cfg.ss, maps.size(), domain);
    return RBOperator::create(Partition::create(domain, std::move(maps)),
                              std::move(q), std::move(s));
}

LocalRBOperator build_local_operator(const ProblemConfig& cfg) {
    require_real_expressions(cfg);
    if (!cfg.data.empty()) {
        size_t n = 2 * (cfg.data.size() - 1);
        Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
        return build_even_n(cfg.data, broadcast_scales(cfg.ss, n, domain)).op;
    }
    Box domain = config_domain(cfg);
    std::vector<AffineMap> maps = config_maps(cfg);
    if (cfg.subsets.size() != maps.size() || cfg.qs.size() != maps.size())
        throw SemanticError("local mode needs matching subsets, maps and coefficients");
    std::vector<CoefficientFn> s = broadcast_scales(cfg.ss, maps.size(), domain);
    std::vector<LocalPiece> pieces;
    for (size_t i = 0; i < maps.size(); ++i) {
        Box subset = Box::interval(cfg.subsets[i].first, cfg.subsets[i].second);
        pieces.push_back({subset, maps[i],
                          CoefficientFn::make(cfg.qs[i], subset, 1),
                          CoefficientFn::make(s[i].body, subset, 1)});
    }
    return LocalRBOperator::create(domain, std::move(pieces));
}

OperatorSchedule build_schedule(const ProblemConfig& cfg) {
    if (cfg.schedule_kind == "builtin") return builtin_schedule(cfg.builtin);
    if (cfg.schedule_kind != "interpolating")
        throw SemanticError("unknown schedule kind '" + cfg.schedule_kind + "'");
    require_real_expressions(cfg);
    if (!cfg.base_f) throw SemanticError("interpolating schedule needs f");
    if (contains_quat_literal(*cfg.base_f))
        throw SemanticError("quaternion literals are only valid in quaternion mode");
    if (cfg.levels.empty()) throw SemanticError("interpolating schedule needs levels");
    for (const auto& [pieces, scale] : cfg.levels)
        if (contains_quat_literal(*scale))
            throw SemanticError("quaternion literals are only valid in quaternion mode");

    Box domain = Box::interval(Scalar::integer(0), Scalar::integer(1));
    InterpolatingSchedule spec;
    spec.base = CoefficientFn::make(cfg.base_f, domain, 1);
    for (const auto& [pieces, scale] : cfg.levels) {
        if (pieces < 1) throw SemanticError("level needs at least one piece");
        InterpolatingLevel level;
        for (int i = 0; i < pieces; ++i) {
            level.maps.push_back(AffineMap::make(Scalar::ratio(1, pieces),
                                                 Scalar::ratio(i, pieces)));
            level.scales.push_back(CoefficientFn::make(scale, domain, 1));
        }
        spec.levels.push_back(std::move(level));
    }
    return build_interpolating_schedule(spec);
}

QuatRBOperator build_quat_operator(const ProblemConfig& cfg) {
    if (cfg.builtin == "example") {
        return builtin_quat_example(cfg.side == "right" ? QuatRBOperator::Side::right
                                                        : QuatRBOperator::Side::left);
    }
    if (!cfg.builtin.empty())
        throw SemanticError("unknown quaternion builtin '" + cfg.builtin + "'");
    Box domain = config_domain(cfg);
    std::vector<AffineMap> maps = config_maps(cfg);
    if (cfg.qs.size() != maps.size() || cfg.ss.size() != maps.size())
        throw SemanticError("quaternion mode needs one q and one s per map");
    std::vector<CoefficientFn> q, s;
    for (size_t i = 0; i < maps.size(); ++i) {
        q.push_back(CoefficientFn::make(cfg.qs[i], domain, 4));
        s.push_back(CoefficientFn::make(cfg.ss[i], domain, 4));
    }
    return QuatRBOperator::create(Partition::create(domain, std::move(maps)),
                                  std::move(q), std::move(s),
                                  cfg.side == "right" ? QuatRBOperator::Side::right
                                                      : QuatRBOperator::Side::left);
}

namespace {

void export_grid_artifacts(const GridFunction& psi, const ProblemConfig& cfg,
                           const RunOptions& opts, std::ostream& log) {
    if (!cfg.csv_path.empty()) {
        std::string p = join_path(opts.out_dir, cfg.csv_path);
        export_csv(psi, p);
        log << "wrote " << p << "\n";
    }
    if (!cfg.svg_path.empty()) {
        std::string p = join_path(opts.out_dir, cfg.svg_path);
        export_svg(grid_series(psi, 0), p);
        log << "wrote " << p << "\n";
    }
    if (!cfg.graph_csv.empty()) {
        std::string p = join_path(opts.out_dir, cfg.graph_csv);
        export_csv(psi, p);
        log << "wrote " << p << "\n";
    }
    for (const auto& [axis, path] : cfg.graphs) {
        auto series = graph_projection(psi, axis);
        std::vector<std::vector<double>> rows;
        rows.reserve(series.size());
        for (const auto& pt : series) rows.push_back({pt[0], pt[1]});
        std::string p = join_path(opts.out_dir, path);
        export_csv(p, {"x", "psi_" + std::to_string(axis)}, rows);
        log << "wrote " << p << "\n";
    }
    for (const auto& [axes, path] : cfg.parametric) {
        auto rows = component_projection(psi, axes);
        std::vector<std::string> header;
        const char* names = "abcd";
        for (size_t i = 0; i < axes.size(); ++i)
            header.push_back(std::string(1, names[i % 4]));
        std::string p = join_path(opts.out_dir, path);
        export_csv(p, header, rows);
        log << "wrote " << p << "\n";
    }
}

int run_global(const ProblemConfig& cfg, const RunOptions& opts, std::ostream& log) {
    RBOperator T = build_global_operator(cfg);
    PartitionReport prep = verify_partition(T.partition.maps, T.partition.domain);
    log << "partition: disjoint=" << (prep.disjoint ? "yes" : "no")
        << " cover=" << (prep.covers ? "yes" : "no") << "\n";
    double s = contraction_factor(T);
    log << "contraction factor: " << format_shortest(s) << "\n";

    bool certified = s < 1.0 - kContractionGuard;
    if (cfg.lp_p) {
        ConditionReport lp = lp_certificate(T, *cfg.lp_p);
        report_line(log, "Lp certificate", lp);
        if (!lp.verdict) certified = false;
    }
    if (cfg.want_continuity) {
        ConditionReport cont = check_continuity(T);
        report_line(log, "continuity", cont);
        if (!cont.verdict) certified = false;
    }
    if (!certified) {
        log << "certification failed\n";
        return kExitCertification;
    }
    if (opts.command == "check") return kExitOk;

    int res = opts.resolution.value_or(default_resolution(cfg));
    double eps = opts.eps.value_or(cfg.eps);
    GridFunction f0 = GridFunction::zero(T.partition.domain, res, T.value_dim);
    FixedPointResult fp = iterate_to_fixed_point(T, f0, eps, cfg.k_max);
    log << "iterations: " << fp.iterations
        << "  a-priori bound: " << format_shortest(fp.apriori_bound)
        << "  residual: " << format_shortest(fp.residual) << "\n";
    if (cfg.want_compatibility) {
        ConditionReport comp = check_compatibility(T, fp.psi);
        report_line(log, "compatibility", comp);
        if (!comp.verdict) return kExitCertification;
    }
    export_grid_artifacts(fp.psi, cfg, opts, log);
    return kExitOk;
}

int run_local(const ProblemConfig& cfg, const RunOptions& opts, std::ostream& log) {
    LocalRBOperator op = build_local_operator(cfg);
    PartitionReport prep = verify_local_partition(op);
    log << "partition: disjoint=" << (prep.disjoint ? "yes" : "no")
        << " cover=" << (prep.covers ? "yes" : "no") << "\n";
    double s = local_contraction(op);
    log << "contraction factor: " << format_shortest(s) << "\n";
    bool certified = s < 1.0 - kContractionGuard;
    if (cfg.lp_p) {
        ConditionReport lp = local_lp_certificate(op, *cfg.lp_p);
        report_line(log, "Lp certificate", lp);
        if (!lp.verdict) certified = false;
    }
    if (!certified) {
        log << "certification failed\n";
        return kExitCertification;
    }
    if (opts.command == "check") return kExitOk;

    int res = opts.resolution.value_or(default_resolution(cfg));
    double eps = opts.eps.value_or(cfg.eps);
    GridFunction f0 = GridFunction::zero(op.domain, res, op.value_dim);
    FixedPointResult fp = iterate_local(op, f0, eps, cfg.k_max);
    log << "iterations: " << fp.iterations
        << "  a-priori bound: " << format_shortest(fp.apriori_bound)
        << "  residual: " << format_shortest(fp.residual) << "\n";
    if (!cfg.data.empty()) {
        ConditionReport interp =
            check_interpolation(fp.psi, cfg.data, eps + 1e-12);
        report_line(log, "interpolation", interp);
        if (!interp.verdict) return kExitCertification;
    }
    export_grid_artifacts(fp.psi, cfg, opts, log);
    return kExitOk;
}

GridFunction schedule_f0(const ProblemConfig& cfg, const OperatorSchedule& sch,
                         int res) {
    const Box& domain = sch.op(1).partition.domain;
    std::string kind = cfg.f0;
    if (kind.empty()) {
        if (cfg.schedule_kind == "interpolating") kind = "chord";
        else kind = cfg.builtin == "kiesswetter_casino" ? "identity" : "zero";
    }
    if (kind == "zero") return GridFunction::zero(domain, res, 1);
    if (kind == "identity")
        return GridFunction::sample(domain, res,
                                    [](std::span<const double> x) { return Value(x[0]); });
    if (kind == "chord") {
        if (cfg.schedule_kind == "interpolating" && cfg.base_f) {
            Box dom = domain;
            CoefficientFn base = CoefficientFn::make(cfg.base_f, dom, 1);
            ExprPtr b = chord_expr(base);
            return GridFunction::sample(domain, res, [&](std::span<const double> x) {
                return eval_expr(*b, x);
            });
        }
        return GridFunction::sample(domain, res,
                                    [](std::span<const double> x) { return Value(x[0]); });
    }
    throw SemanticError("unknown f0 '" + kind + "'");
}

int run_nonstationary(const ProblemConfig& cfg, const RunOptions& opts,
                      std::ostream& log) {
    OperatorSchedule sch = build_schedule(cfg);
    log << "uniform s: " << format_shortest(sch.uniform_s)
        << "  uniform M: " << format_shortest(sch.uniform_m)
        << "  ball radius: "
        << format_shortest(invariant_ball_radius(sch.uniform_m, sch.uniform_s)) << "\n";
    ConditionReport summ = summability_check(sch, 20);
    report_line(log, "summability", summ);
    if (!summ.verdict) return kExitCertification;
    if (opts.command == "check") return kExitOk;

    int res = opts.resolution.value_or(default_resolution(cfg));
    int depth = opts.depth.value_or(cfg.depth);
    GridFunction f0 = schedule_f0(cfg, sch, res);
    TrajectoryResult traj = backward_trajectory(sch, f0, depth);
    log << "backward trajectory depth " << traj.depth
        << "  tail bound: " << format_shortest(traj.tail_bound)
        << (traj.inside_ball ? "" : "  (warning: f0 outside the invariant ball)")
        << "\n";
    export_grid_artifacts(traj.psi, cfg, opts, log);
    return kExitOk;
}

int run_quaternion(const ProblemConfig& cfg, const RunOptions& opts,
                   std::ostream& log) {
    QuatRBOperator T = build_quat_operator(cfg);
    double s = quat_contraction_factor(T);
    log << "contraction factor: " << format_shortest(s) << "\n";
    if (s >= 1.0 - kContractionGuard) {
        log << "certification failed\n";
        return kExitCertification;
    }
    if (opts.command == "check") return kExitOk;

    int res = opts.resolution.value_or(default_resolution(cfg));
    if (T.partition.domain.dim() == 4) res = std::min(res, 33);
    double eps = opts.eps.value_or(cfg.eps);
    GridFunction f0 = GridFunction::zero(T.partition.domain, res, 4);
    FixedPointResult fp = quat_fixed_point(T, f0, eps, cfg.k_max);
    log << "iterations: " << fp.iterations
        << "  a-priori bound: " << format_shortest(fp.apriori_bound)
        << "  residual: " << format_shortest(fp.residual) << "\n";
    export_grid_artifacts(fp.psi, cfg, opts, log);
    return kExitOk;
}

}  // namespace

int run(const ProblemConfig& cfg, const RunOptions& opts, std::ostream& log) {
    if (!opts.out_dir.empty())
        std::filesystem::create_directories(opts.out_dir);
    if (opts.command == "trajectory" && cfg.mode != "nonstationary")
        throw SemanticError("trajectory needs a nonstationary config");
    if (opts.command == "quat" && cfg.mode != "quaternion")
        throw SemanticError("quat needs a quaternion config");

    if (cfg.mode == "global") return run_global(cfg, opts, log);
    if (cfg.mode == "local") return run_local(cfg, opts, log);
    if (cfg.mode == "nonstationary") return run_nonstationary(cfg, opts, log);
    return run_quaternion(cfg, opts, log);
}

// ---------------------------------------------------------------------------
// Figures
// ---------------------------------------------------------------------------

RBOperator sample_sine_operator(bool continuous) {
    Box domain = continuous
                     ? Box::interval(Scalar::integer(0), Scalar::integer(1))
                     : Box::interval(Scalar::integer(0), Scalar::integer(1), false);
    std::vector<AffineMap> maps{
        AffineMap::make(Scalar::ratio(1, 3), Scalar::integer(0)),
        AffineMap::make(Scalar::ratio(2, 3), Scalar::ratio(1, 3))};
    ExprPtr q1 = continuous ? ex::var() : ex::neg(ex::integer(1));
    ExprPtr q2 = continuous ? ex::sub(ex::integer(1), ex::var()) : ex::var();
    ExprPtr s1 = ex::mul(ex::num(1, 2), ex::sin(ex::var()));
    ExprPtr s2 = ex::mul(ex::num(-2, 3), ex::cos(ex::var()));
    std::vector<CoefficientFn> q{CoefficientFn::make(q1, domain, 1),
                                 CoefficientFn::make(q2, domain, 1)};
    std::vector<CoefficientFn> s{CoefficientFn::make(s1, domain, 1),
                                 CoefficientFn::make(s2, domain, 1)};
    return RBOperator::create(Partition::create(domain, std::move(maps)),
                              std::move(q), std::move(s));
}

int run_figures(const std::string& out_dir, std::ostream& log) {
    std::filesystem::create_directories(out_dir);
    auto path = [&](const std::string& name) { return out_dir + "/" + name; };

    // fig1: discontinuous two-map fixed point, 3^7 + 1 nodes
    {
        RBOperator T = sample_sine_operator(false);
        GridFunction f0 = GridFunction::zero(T.partition.domain, 2188, 1);
        FixedPointResult fp = iterate_to_fixed_point(T, f0, 1e-9, 200);
        export_csv(fp.psi, path("fig1.csv"));
        export_svg(grid_series(fp.psi), path("fig1.svg"));
        log << "fig1: iterations " << fp.iterations << "\n";
    }
    // fig2: continuous variant
    {
        RBOperator T = sample_sine_operator(true);
        GridFunction f0 = GridFunction::zero(T.partition.domain, 2188, 1);
        FixedPointResult fp = iterate_to_fixed_point(T, f0, 1e-9, 200);
        export_csv(fp.psi, path("fig2.csv"));
        export_svg(grid_series(fp.psi), path("fig2.svg"));
        log << "fig2: iterations " << fp.iterations << "\n";
    }
    // fig3: hybrid tent attractor, backward depth 30 from zero
    {
        OperatorSchedule sch = builtin_schedule("takagi_parabola");
        GridFunction f0 = GridFunction::zero(sch.op(1).partition.domain, 1025, 1);
        TrajectoryResult traj = backward_trajectory(sch, f0, 30);
        export_csv(traj.psi, path("fig3.csv"));
        export_svg(grid_series(traj.psi), path("fig3.svg"));
        log << "fig3: tail bound " << format_shortest(traj.tail_bound) << "\n";
    }
    // fig4: hybrid Kiesswetter/Casino attractor from the identity
    {
        OperatorSchedule sch = builtin_schedule("kiesswetter_casino");
        GridFunction f0 = GridFunction::sample(
            sch.op(1).partition.domain, 1025,
            [](std::span<const double> x) { return Value(x[0]); });
        TrajectoryResult traj = backward_trajectory(sch, f0, 30);
        export_csv(traj.psi, path("fig4.csv"));
        export_svg(grid_series(traj.psi), path("fig4.svg"));
        log << "fig4: tail bound " << format_shortest(traj.tail_bound) << "\n";
    }
    // fig5 + fig6: quaternionic example, component graphs and a parametric
    // triple (psi_0, psi_1, psi_2)
    {
        QuatRBOperator T = builtin_quat_example();
        GridFunction f0 = GridFunction::zero(T.partition.domain, 1025, 4);
        FixedPointResult fp = quat_fixed_point(T, f0, 1e-9, 200);
        export_csv(fp.psi, path("fig5.csv"));
        std::vector<int> axes{0, 1, 2};
        auto rows = component_projection(fp.psi, axes);
        export_csv(path("fig6.csv"), {"a", "b", "c"}, rows);
        log << "fig5/fig6: iterations " << fp.iterations << "\n";
    }
    log << "wrote 10 artifacts to " << out_dir << "\n";
    return kExitOk;
}

}  // namespace frif

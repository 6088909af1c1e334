#include "frif/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

namespace frif {

// Scalars embed as the real part of a 4-component value.
Value operator+(const Value& a, const Value& b) {
    Value out;
    out.dim = std::max(a.dim, b.dim);
    for (int i = 0; i < out.dim; ++i)
        out.c[i] = (i < a.dim ? a.c[i] : 0.0) + (i < b.dim ? b.c[i] : 0.0);
    return out;
}

Value operator-(const Value& a, const Value& b) {
    Value out;
    out.dim = std::max(a.dim, b.dim);
    for (int i = 0; i < out.dim; ++i)
        out.c[i] = (i < a.dim ? a.c[i] : 0.0) - (i < b.dim ? b.c[i] : 0.0);
    return out;
}

bool Value::finite() const {
    for (int i = 0; i < dim; ++i)
        if (!std::isfinite(c[i])) return false;
    return true;
}

namespace ex {

static ExprPtr node(ExprKind k, std::vector<ExprPtr> kids = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->kids = std::move(kids);
    return e;
}

ExprPtr num(Scalar v) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Number;
    e->number = v;
    return e;
}
ExprPtr var() { return node(ExprKind::Var); }
ExprPtr var_index(int j) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::VarIndex;
    e->index = j;
    return e;
}
ExprPtr pi() { return node(ExprKind::Pi); }
ExprPtr neg(ExprPtr a) { return node(ExprKind::Neg, {std::move(a)}); }
ExprPtr add(ExprPtr a, ExprPtr b) { return node(ExprKind::Add, {std::move(a), std::move(b)}); }
ExprPtr sub(ExprPtr a, ExprPtr b) { return node(ExprKind::Sub, {std::move(a), std::move(b)}); }
ExprPtr mul(ExprPtr a, ExprPtr b) { return node(ExprKind::Mul, {std::move(a), std::move(b)}); }
ExprPtr div(ExprPtr a, ExprPtr b) { return node(ExprKind::Div, {std::move(a), std::move(b)}); }
ExprPtr pow(ExprPtr a, ExprPtr b) { return node(ExprKind::Pow, {std::move(a), std::move(b)}); }
ExprPtr sin(ExprPtr a) { return node(ExprKind::Sin, {std::move(a)}); }
ExprPtr cos(ExprPtr a) { return node(ExprKind::Cos, {std::move(a)}); }
ExprPtr abs(ExprPtr a) { return node(ExprKind::Abs, {std::move(a)}); }
ExprPtr quat_lit(ExprPtr a, ExprPtr b, ExprPtr c, ExprPtr d) {
    return node(ExprKind::QuatLit, {std::move(a), std::move(b), std::move(c), std::move(d)});
}

ExprPtr affine(Scalar a, Scalar b) {
    if (a.exact() && a.rat().is_zero()) return num(b);
    ExprPtr ax = a.exact() && a.rat() == Rational(1) ? var() : mul(num(a), var());
    if (b.exact() && b.rat().is_zero()) return ax;
    return add(ax, num(b));
}

ExprPtr compose_affine(const ExprPtr& e, Scalar a, Scalar b) {
    switch (e->kind) {
        case ExprKind::Number:
        case ExprKind::Pi:
            return e;
        case ExprKind::Var:
        case ExprKind::VarIndex:
            return affine(a, b);
        default: {
            std::vector<ExprPtr> kids;
            kids.reserve(e->kids.size());
            for (const auto& k : e->kids) kids.push_back(compose_affine(k, a, b));
            auto out = std::make_shared<Expr>(*e);
            out->kids = std::move(kids);
            return out;
        }
    }
}

}  // namespace ex

static Value quat_value_mul(const Value& a, const Value& b) {
    if (a.dim == 1 && b.dim == 1) return Value(a.c[0] * b.c[0]);
    if (a.dim == 1) {
        Value r = b;
        for (int i = 0; i < 4; ++i) r.c[i] *= a.c[0];
        return r;
    }
    if (b.dim == 1) {
        Value r = a;
        for (int i = 0; i < 4; ++i) r.c[i] *= b.c[0];
        return r;
    }
    return Value::quat(a.as_quat() * b.as_quat());
}

Value eval_expr(const Expr& e, std::span<const double> x) {
    switch (e.kind) {
        case ExprKind::Number:
            return Value(e.number.value());
        case ExprKind::Var:
            if (x.size() == 1) return Value(x[0]);
            return Value(4, {x[0], x[1], x[2], x[3]});
        case ExprKind::VarIndex:
            if (e.index < 0 || e.index >= static_cast<int>(x.size()))
                throw EvalError("variable index out of range");
            return Value(x[e.index]);
        case ExprKind::Pi:
            return Value(std::numbers::pi);
        case ExprKind::Neg: {
            Value v = eval_expr(*e.kids[0], x);
            for (int i = 0; i < v.dim; ++i) v.c[i] = -v.c[i];
            return v;
        }
        case ExprKind::Add:
            return eval_expr(*e.kids[0], x) + eval_expr(*e.kids[1], x);
        case ExprKind::Sub:
            return eval_expr(*e.kids[0], x) - eval_expr(*e.kids[1], x);
        case ExprKind::Mul:
            return quat_value_mul(eval_expr(*e.kids[0], x), eval_expr(*e.kids[1], x));
        case ExprKind::Div: {
            Value a = eval_expr(*e.kids[0], x);
            Value b = eval_expr(*e.kids[1], x);
            if (b.dim == 1) {
                if (b.c[0] == 0.0) throw EvalError("division by zero");
                Value r = a;
                for (int i = 0; i < a.dim; ++i) r.c[i] = a.c[i] / b.c[0];
                return r;
            }
            // right division by a quaternion
            return quat_value_mul(a, Value::quat(quat_inv(b.as_quat())));
        }
        case ExprKind::Pow: {
            Value a = eval_expr(*e.kids[0], x);
            Value b = eval_expr(*e.kids[1], x);
            if (b.dim != 1) throw EvalError("exponent must be scalar");
            double p = b.c[0];
            if (a.dim == 1) {
                double r = std::pow(a.c[0], p);
                if (!std::isfinite(r)) throw EvalError("power produced a non-finite value");
                return Value(r);
            }
            double ip;
            if (std::modf(p, &ip) != 0.0)
                throw EvalError("quaternion power requires an integer exponent");
            int n = static_cast<int>(ip);
            Quaternion base = a.as_quat();
            if (n < 0) {
                base = quat_inv(base);
                n = -n;
            }
            Quaternion r = Quaternion::scalar(1.0);
            for (int i = 0; i < n; ++i) r = r * base;
            return Value::quat(r);
        }
        case ExprKind::Sin: {
            Value v = eval_expr(*e.kids[0], x);
            if (v.dim != 1) throw EvalError("sin of a non-scalar value");
            return Value(std::sin(v.c[0]));
        }
        case ExprKind::Cos: {
            Value v = eval_expr(*e.kids[0], x);
            if (v.dim != 1) throw EvalError("cos of a non-scalar value");
            return Value(std::cos(v.c[0]));
        }
        case ExprKind::Abs: {
            Value v = eval_expr(*e.kids[0], x);
            return Value(v.norm());
        }
        case ExprKind::QuatLit: {
            Value r;
            r.dim = 4;
            for (int i = 0; i < 4; ++i) {
                Value k = eval_expr(*e.kids[i], x);
                if (k.dim != 1) throw EvalError("quaternion component must be scalar");
                r.c[i] = k.c[0];
            }
            return r;
        }
    }
    throw EvalError("unreachable expression kind");
}

std::optional<Rational> eval_expr_rational(const Expr& e, const Rational& x) {
    using R = std::optional<Rational>;
    switch (e.kind) {
        case ExprKind::Number:
            if (!e.number.exact()) return std::nullopt;
            return e.number.rat();
        case ExprKind::Var:
            return x;
        case ExprKind::VarIndex:
            if (e.index != 0) return std::nullopt;
            return x;
        case ExprKind::Neg: {
            R a = eval_expr_rational(*e.kids[0], x);
            if (!a) return std::nullopt;
            return mul(Rational(-1), *a);
        }
        case ExprKind::Add: {
            R a = eval_expr_rational(*e.kids[0], x), b = eval_expr_rational(*e.kids[1], x);
            if (!a || !b) return std::nullopt;
            return add(*a, *b);
        }
        case ExprKind::Sub: {
            R a = eval_expr_rational(*e.kids[0], x), b = eval_expr_rational(*e.kids[1], x);
            if (!a || !b) return std::nullopt;
            return sub(*a, *b);
        }
        case ExprKind::Mul: {
            R a = eval_expr_rational(*e.kids[0], x), b = eval_expr_rational(*e.kids[1], x);
            if (!a || !b) return std::nullopt;
            return mul(*a, *b);
        }
        case ExprKind::Div: {
            R a = eval_expr_rational(*e.kids[0], x), b = eval_expr_rational(*e.kids[1], x);
            if (!a || !b || b->is_zero()) return std::nullopt;
            return div(*a, *b);
        }
        case ExprKind::Abs: {
            R a = eval_expr_rational(*e.kids[0], x);
            if (!a) return std::nullopt;
            return a->abs();
        }
        case ExprKind::Pow: {
            R a = eval_expr_rational(*e.kids[0], x);
            R b = eval_expr_rational(*e.kids[1], x);
            if (!a || !b || !b->is_integer()) return std::nullopt;
            long long n = static_cast<long long>(b->num());
            if (n < 0 || n > 64) return std::nullopt;
            Rational r(1);
            for (long long i = 0; i < n; ++i) {
                auto p = mul(r, *a);
                if (!p) return std::nullopt;
                r = *p;
            }
            return r;
        }
        default:
            return std::nullopt;
    }
}

// ---------------------------------------------------------------------------
// Interval/Lipschitz analysis
// ---------------------------------------------------------------------------

namespace {

struct IB {
    Interval r;
    double lip = 0.0;  // |f(x)-f(y)| <= lip * max-norm(x-y)
};

IB ib_add(const IB& a, const IB& b) { return {a.r + b.r, a.lip + b.lip}; }
IB ib_sub(const IB& a, const IB& b) { return {a.r - b.r, a.lip + b.lip}; }
IB ib_neg(const IB& a) { return {-a.r, a.lip}; }
IB ib_mul(const IB& a, const IB& b) {
    return {a.r * b.r, a.r.mag() * b.lip + b.r.mag() * a.lip};
}
IB ib_div(const IB& a, const IB& b) {
    if (b.r.contains_zero())
        throw EvalError("division range contains zero over the domain");
    double m = b.r.mig();
    return {a.r / b.r, (a.lip * b.r.mag() + a.r.mag() * b.lip) / (m * m)};
}

struct IValue {
    int dim = 1;
    std::array<IB, 4> c{};
};

IValue promote(const IValue& v) {
    if (v.dim == 4) return v;
    IValue r;
    r.dim = 4;
    r.c[0] = v.c[0];
    return r;
}

IValue iv_mul(const IValue& a, const IValue& b) {
    if (a.dim == 1 && b.dim == 1) {
        IValue r;
        r.c[0] = ib_mul(a.c[0], b.c[0]);
        return r;
    }
    IValue p = promote(a), q = promote(b);
    IValue r;
    r.dim = 4;
    // Hamilton product, componentwise in interval/Lipschitz arithmetic
    r.c[0] = ib_sub(ib_mul(p.c[0], q.c[0]),
                    ib_add(ib_mul(p.c[1], q.c[1]),
                           ib_add(ib_mul(p.c[2], q.c[2]), ib_mul(p.c[3], q.c[3]))));
    r.c[1] = ib_add(ib_add(ib_mul(p.c[0], q.c[1]), ib_mul(q.c[0], p.c[1])),
                    ib_sub(ib_mul(p.c[2], q.c[3]), ib_mul(p.c[3], q.c[2])));
    r.c[2] = ib_add(ib_add(ib_mul(p.c[0], q.c[2]), ib_mul(q.c[0], p.c[2])),
                    ib_sub(ib_mul(p.c[3], q.c[1]), ib_mul(p.c[1], q.c[3])));
    r.c[3] = ib_add(ib_add(ib_mul(p.c[0], q.c[3]), ib_mul(q.c[0], p.c[3])),
                    ib_sub(ib_mul(p.c[1], q.c[2]), ib_mul(p.c[2], q.c[1])));
    return r;
}

IValue analyze(const Expr& e, const Box& box) {
    switch (e.kind) {
        case ExprKind::Number: {
            IValue v;
            v.c[0] = {Interval(e.number.value()), 0.0};
            return v;
        }
        case ExprKind::Pi: {
            IValue v;
            v.c[0] = {Interval(std::numbers::pi), 0.0};
            return v;
        }
        case ExprKind::Var: {
            IValue v;
            v.dim = box.dim() == 1 ? 1 : 4;
            for (int j = 0; j < box.dim(); ++j)
                v.c[j] = {Interval(box.lo[j].value(), box.hi[j].value()), 1.0};
            return v;
        }
        case ExprKind::VarIndex: {
            if (e.index < 0 || e.index >= box.dim())
                throw EvalError("variable index out of range");
            IValue v;
            v.c[0] = {Interval(box.lo[e.index].value(), box.hi[e.index].value()), 1.0};
            return v;
        }
        case ExprKind::Neg: {
            IValue a = analyze(*e.kids[0], box);
            for (int i = 0; i < a.dim; ++i) a.c[i] = ib_neg(a.c[i]);
            return a;
        }
        case ExprKind::Add:
        case ExprKind::Sub: {
            IValue a = analyze(*e.kids[0], box), b = analyze(*e.kids[1], box);
            if (a.dim != b.dim) {
                a = promote(a);
                b = promote(b);
            }
            IValue r;
            r.dim = a.dim;
            for (int i = 0; i < r.dim; ++i)
                r.c[i] = e.kind == ExprKind::Add ? ib_add(a.c[i], b.c[i])
                                                 : ib_sub(a.c[i], b.c[i]);
            return r;
        }
        case ExprKind::Mul:
            return iv_mul(analyze(*e.kids[0], box), analyze(*e.kids[1], box));
        case ExprKind::Div: {
            IValue a = analyze(*e.kids[0], box), b = analyze(*e.kids[1], box);
            if (b.dim != 1) throw EvalError("certification of quaternion division is unsupported");
            IValue r;
            r.dim = a.dim;
            for (int i = 0; i < a.dim; ++i) r.c[i] = ib_div(a.c[i], b.c[0]);
            return r;
        }
        case ExprKind::Pow: {
            IValue a = analyze(*e.kids[0], box), b = analyze(*e.kids[1], box);
            if (b.dim != 1 || b.c[0].lip != 0.0)
                throw EvalError("certification requires a constant scalar exponent");
            double p = b.c[0].r.lo;
            if (a.dim != 1) {
                // integer powers of quaternion values: repeated products
                double ip;
                if (std::modf(p, &ip) != 0.0 || p < 0)
                    throw EvalError("quaternion power requires a nonnegative integer exponent");
                IValue r;
                r.dim = 4;
                r.c[0] = {Interval(1.0), 0.0};
                for (int i = 0; i < static_cast<int>(ip); ++i) r = iv_mul(r, a);
                return r;
            }
            IValue r;
            r.c[0].r = detail::pow_range(a.c[0].r, p);
            if (p == 0.0) return r;  // constant 1
            double mag = a.c[0].r.mag(), mig = a.c[0].r.mig();
            double deriv;
            if (p >= 1.0)
                deriv = std::fabs(p) * std::pow(mag, p - 1.0);
            else {
                if (mig == 0.0) throw EvalError("power with unbounded slope near zero");
                deriv = std::fabs(p) * std::pow(mig, p - 1.0);
            }
            r.c[0].lip = deriv * a.c[0].lip;
            return r;
        }
        case ExprKind::Sin: {
            IValue a = analyze(*e.kids[0], box);
            if (a.dim != 1) throw EvalError("sin of a non-scalar value");
            return {1, {IB{detail::sin_range(a.c[0].r), a.c[0].lip}}};
        }
        case ExprKind::Cos: {
            IValue a = analyze(*e.kids[0], box);
            if (a.dim != 1) throw EvalError("cos of a non-scalar value");
            return {1, {IB{detail::cos_range(a.c[0].r), a.c[0].lip}}};
        }
        case ExprKind::Abs: {
            IValue a = analyze(*e.kids[0], box);
            if (a.dim == 1) return {1, {IB{abs(a.c[0].r), a.c[0].lip}}};
            // norm of a 4-component value
            double hi = 0.0, lipsum = 0.0;
            for (int i = 0; i < 4; ++i) {
                hi += a.c[i].r.mag() * a.c[i].r.mag();
                lipsum += a.c[i].lip * a.c[i].lip;
            }
            return {1, {IB{Interval(0.0, std::sqrt(hi)), std::sqrt(lipsum)}}};
        }
        case ExprKind::QuatLit: {
            IValue r;
            r.dim = 4;
            for (int i = 0; i < 4; ++i) {
                IValue k = analyze(*e.kids[i], box);
                if (k.dim != 1) throw EvalError("quaternion component must be scalar");
                r.c[i] = k.c[0];
            }
            return r;
        }
    }
    throw EvalError("unreachable expression kind");
}

}  // namespace

double ExprEnclosure::norm_bound() const {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += range[i].mag() * range[i].mag();
    return std::sqrt(s);
}

double ExprEnclosure::lip_bound() const {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += lip[i] * lip[i];
    return std::sqrt(s);
}

ExprEnclosure analyze_expr(const Expr& e, const Box& domain) {
    IValue v = analyze(e, domain);
    ExprEnclosure out;
    out.dim = v.dim;
    for (int i = 0; i < v.dim; ++i) {
        out.range[i] = v.c[i].r;
        out.lip[i] = v.c[i].lip;
    }
    return out;
}

// ---------------------------------------------------------------------------
// CoefficientFn
// ---------------------------------------------------------------------------

CoefficientFn CoefficientFn::make(ExprPtr body, Box domain, int value_dim) {
    CoefficientFn c;
    c.body = std::move(body);
    c.domain = std::move(domain);
    c.value_dim = value_dim;
    return c;
}

Value eval_coefficient(const CoefficientFn& c, std::span<const double> x) {
    if (!c.domain.contains(x))
        throw DomainError("coefficient evaluated outside its domain");
    Value v = eval_expr(*c.body, x);
    if (!v.finite()) throw EvalError("coefficient produced a non-finite value");
    return v;
}

double certify_sup_bound(const CoefficientFn& c, int n_samples) {
    if (n_samples < 2) throw EvalError("certification requires at least 2 samples");
    const int d = c.domain.dim();
    int per_dim = n_samples;
    if (d > 1) {
        per_dim = std::max(2, static_cast<int>(std::floor(
                                  std::pow(static_cast<double>(n_samples), 1.0 / d))));
    }
    ExprEnclosure enc = analyze_expr(*c.body, c.domain);
    double lip = enc.lip_bound();

    double h = 0.0;
    for (int j = 0; j < d; ++j)
        h = std::max(h, c.domain.length(j) / (per_dim - 1));

    double best = 0.0;
    std::vector<double> x(d);
    long long total = 1;
    for (int j = 0; j < d; ++j) total *= per_dim;
    for (long long idx = 0; idx < total; ++idx) {
        long long rem = idx;
        for (int j = 0; j < d; ++j) {
            int i = static_cast<int>(rem % per_dim);
            rem /= per_dim;
            x[j] = c.domain.lo[j].value() +
                   (c.domain.length(j) * i) / (per_dim - 1);
        }
        Value v = eval_expr(*c.body, x);
        if (!v.finite()) throw EvalError("coefficient produced a non-finite value");
        best = std::max(best, v.norm());
    }
    return best + lip * h / 2.0;
}

// ---------------------------------------------------------------------------
// Formatting
// ---------------------------------------------------------------------------

namespace {

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

// Exact rationals with 10-smooth denominators print as decimals so that the
// output reparses to the same Number node.
std::string format_number(const Scalar& s) {
    if (!s.exact()) return format_double(s.value());
    const Rational& r = s.rat();
    if (r.is_integer()) return to_string_int128(r.num());
    int128 den = r.den();
    int twos = 0, fives = 0;
    while (den % 2 == 0) { den /= 2; ++twos; }
    while (den % 5 == 0) { den /= 5; ++fives; }
    int k = std::max(twos, fives);
    if (den == 1 && k <= 30) {
        int128 scale = 1;
        for (int i = 0; i < k; ++i) scale *= 10;
        int128 num = r.num() * (scale / r.den());
        bool neg = num < 0;
        std::string digits = to_string_int128(neg ? -num : num);
        while (static_cast<int>(digits.size()) <= k) digits.insert(digits.begin(), '0');
        digits.insert(digits.end() - k, '.');
        return (neg ? "-" : "") + digits;
    }
    return "(" + to_string_int128(r.num()) + "/" + to_string_int128(r.den()) + ")";
}

int precedence(ExprKind k) {
    switch (k) {
        case ExprKind::Add:
        case ExprKind::Sub: return 10;
        case ExprKind::Mul:
        case ExprKind::Div: return 20;
        case ExprKind::Neg: return 25;
        case ExprKind::Pow: return 30;
        default: return 100;
    }
}

std::string fmt(const Expr& e, int parent_prec) {
    int prec = precedence(e.kind);
    std::string s;
    switch (e.kind) {
        case ExprKind::Number: s = format_number(e.number); break;
        case ExprKind::Var: s = "x"; break;
        case ExprKind::VarIndex: s = "x[" + std::to_string(e.index) + "]"; break;
        case ExprKind::Pi: s = "pi"; break;
        case ExprKind::Neg: s = "-" + fmt(*e.kids[0], prec); break;
        case ExprKind::Add:
            s = fmt(*e.kids[0], prec) + " + " + fmt(*e.kids[1], prec + 1);
            break;
        case ExprKind::Sub:
            s = fmt(*e.kids[0], prec) + " - " + fmt(*e.kids[1], prec + 1);
            break;
        case ExprKind::Mul:
            s = fmt(*e.kids[0], prec) + "*" + fmt(*e.kids[1], prec + 1);
            break;
        case ExprKind::Div:
            s = fmt(*e.kids[0], prec) + "/" + fmt(*e.kids[1], prec + 1);
            break;
        case ExprKind::Pow:
            s = fmt(*e.kids[0], prec + 1) + "^" + fmt(*e.kids[1], prec);
            break;
        case ExprKind::Sin: s = "sin(" + fmt(*e.kids[0], 0) + ")"; break;
        case ExprKind::Cos: s = "cos(" + fmt(*e.kids[0], 0) + ")"; break;
        case ExprKind::Abs: s = "abs(" + fmt(*e.kids[0], 0) + ")"; break;
        case ExprKind::QuatLit:
            s = "(" + fmt(*e.kids[0], 0) + ", " + fmt(*e.kids[1], 0) + ", " +
                fmt(*e.kids[2], 0) + ", " + fmt(*e.kids[3], 0) + ")";
            break;
    }
    if (prec < parent_prec && e.kind != ExprKind::QuatLit &&
        precedence(e.kind) != 100)
        return "(" + s + ")";
    return s;
}

}  // namespace

std::string format_expr(const Expr& e) { return fmt(e, 0); }

}  // namespace frif

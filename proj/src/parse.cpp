#include "frif/parse.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace frif {

namespace {

struct Lexer {
    std::string_view src;
    size_t pos = 0;
    int line = 1;
    int col = 1;

    struct Token {
        enum Kind { Number, Ident, Op, LParen, RParen, LBracket, RBracket, Comma, End };
        Kind kind = End;
        std::string text;
        Scalar number;
        int line = 1, col = 1;
    };

    Token next_token;
    bool primed = false;

    void advance_char() {
        if (pos < src.size() && src[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
            advance_char();
    }

    Scalar lex_number(const std::string& text, int at_line, int at_col) {
        // mantissa split at '.', optional decimal exponent
        size_t epos = text.find_first_of("eE");
        std::string mant = epos == std::string::npos ? text : text.substr(0, epos);
        long long exp10 = 0;
        if (epos != std::string::npos)
            exp10 = std::strtoll(text.c_str() + epos + 1, nullptr, 10);
        size_t dot = mant.find('.');
        std::string digits = mant;
        int frac = 0;
        if (dot != std::string::npos) {
            digits = mant.substr(0, dot) + mant.substr(dot + 1);
            frac = static_cast<int>(mant.size() - dot - 1);
        }
        if (digits.empty())
            throw ParseError("malformed number '" + text + "'", at_line, at_col);
        if (digits.size() <= 18 && std::llabs(exp10) <= 30 && frac <= 18) {
            long long n = digits.empty() ? 0 : std::strtoll(digits.c_str(), nullptr, 10);
            Scalar value = Scalar::integer(n);
            long long net = exp10 - frac;
            Scalar ten = Scalar::integer(10);
            for (long long i = 0; i < std::llabs(net); ++i)
                value = net > 0 ? value * ten : value / ten;
            if (value.exact()) return value;
        }
        char* end = nullptr;
        double v = std::strtod(text.c_str(), &end);
        if (end == text.c_str())
            throw ParseError("malformed number '" + text + "'", at_line, at_col);
        return Scalar(v);
    }

    Token lex() {
        skip_ws();
        Token t;
        t.line = line;
        t.col = col;
        if (pos >= src.size()) {
            t.kind = Token::End;
            return t;
        }
        char c = src[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t start = pos;
            int at_col = col;
            while (pos < src.size() &&
                   (std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '.'))
                advance_char();
            if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
                size_t save = pos;
                advance_char();
                if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) advance_char();
                if (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
                    while (pos < src.size() &&
                           std::isdigit(static_cast<unsigned char>(src[pos])))
                        advance_char();
                } else {
                    pos = save;  // not an exponent after all
                }
            }
            t.kind = Token::Number;
            t.text = std::string(src.substr(start, pos - start));
            t.number = lex_number(t.text, t.line, at_col);
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos;
            while (pos < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
                advance_char();
            t.kind = Token::Ident;
            t.text = std::string(src.substr(start, pos - start));
            return t;
        }
        advance_char();
        switch (c) {
            case '(': t.kind = Token::LParen; break;
            case ')': t.kind = Token::RParen; break;
            case '[': t.kind = Token::LBracket; break;
            case ']': t.kind = Token::RBracket; break;
            case ',': t.kind = Token::Comma; break;
            case '+': case '-': case '*': case '/': case '^':
                t.kind = Token::Op;
                t.text = std::string(1, c);
                break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'",
                                 t.line, t.col);
        }
        return t;
    }

    const Token& peek() {
        if (!primed) {
            next_token = lex();
            primed = true;
        }
        return next_token;
    }

    Token take() {
        Token t = peek();
        primed = false;
        return t;
    }
};

class ExprParser {
  public:
    explicit ExprParser(std::string_view text) { lex_.src = text; }

    ExprPtr parse() {
        ExprPtr e = parse_bp(0);
        auto t = lex_.peek();
        if (t.kind != Lexer::Token::End)
            throw ParseError("unexpected trailing input", t.line, t.col);
        return e;
    }

  private:
    Lexer lex_;

    [[noreturn]] void expected_expression() {
        auto t = lex_.peek();
        throw ParseError("expected expression", t.line, t.col);
    }

    ExprPtr parse_primary() {
        auto t = lex_.take();
        switch (t.kind) {
            case Lexer::Token::Number:
                return ex::num(t.number);
            case Lexer::Token::Ident: {
                if (t.text == "pi") return ex::pi();
                if (t.text == "x") {
                    if (lex_.peek().kind == Lexer::Token::LBracket) {
                        lex_.take();
                        auto idx = lex_.take();
                        if (idx.kind != Lexer::Token::Number ||
                            !idx.number.exact() || !idx.number.rat().is_integer())
                            throw ParseError("expected component index", idx.line, idx.col);
                        auto close = lex_.take();
                        if (close.kind != Lexer::Token::RBracket)
                            throw ParseError("expected ']'", close.line, close.col);
                        return ex::var_index(
                            static_cast<int>(idx.number.rat().num()));
                    }
                    return ex::var();
                }
                if (t.text == "sin" || t.text == "cos" || t.text == "abs") {
                    auto open = lex_.take();
                    if (open.kind != Lexer::Token::LParen)
                        throw ParseError("expected '(' after " + t.text, open.line,
                                         open.col);
                    ExprPtr arg = parse_bp(0);
                    auto close = lex_.take();
                    if (close.kind != Lexer::Token::RParen)
                        throw ParseError("expected ')'", close.line, close.col);
                    if (t.text == "sin") return ex::sin(arg);
                    if (t.text == "cos") return ex::cos(arg);
                    return ex::abs(arg);
                }
                throw ParseError("unknown identifier '" + t.text + "'", t.line, t.col);
            }
            case Lexer::Token::Op:
                if (t.text == "-") return ex::neg(parse_bp(25));
                expected_expression();
            case Lexer::Token::LParen: {
                ExprPtr first = parse_bp(0);
                if (lex_.peek().kind == Lexer::Token::Comma) {
                    std::vector<ExprPtr> comps{first};
                    while (lex_.peek().kind == Lexer::Token::Comma) {
                        lex_.take();
                        comps.push_back(parse_bp(0));
                    }
                    auto close = lex_.take();
                    if (close.kind != Lexer::Token::RParen)
                        throw ParseError("expected ')'", close.line, close.col);
                    if (comps.size() != 4)
                        throw ParseError("quaternion literal needs 4 components",
                                         close.line, close.col);
                    return ex::quat_lit(comps[0], comps[1], comps[2], comps[3]);
                }
                auto close = lex_.take();
                if (close.kind != Lexer::Token::RParen)
                    throw ParseError("expected ')'", close.line, close.col);
                return first;
            }
            default:
                throw ParseError("expected expression", t.line, t.col);
        }
    }

    ExprPtr parse_bp(int min_bp) {
        ExprPtr lhs = parse_primary();
        for (;;) {
            auto t = lex_.peek();
            if (t.kind != Lexer::Token::Op) break;
            int bp;
            if (t.text == "+" || t.text == "-") bp = 10;
            else if (t.text == "*" || t.text == "/") bp = 20;
            else bp = 30;  // ^
            if (bp < min_bp) break;
            lex_.take();
            if (t.text == "^") {
                ExprPtr rhs = parse_bp(bp);  // right associative
                lhs = ex::pow(lhs, rhs);
            } else {
                ExprPtr rhs = parse_bp(bp + 1);
                if (t.text == "+") lhs = ex::add(lhs, rhs);
                else if (t.text == "-") lhs = ex::sub(lhs, rhs);
                else if (t.text == "*") lhs = ex::mul(lhs, rhs);
                else lhs = ex::div(lhs, rhs);
            }
        }
        return lhs;
    }
};

bool expr_has_var(const Expr& e) {
    if (e.kind == ExprKind::Var || e.kind == ExprKind::VarIndex) return true;
    for (const auto& k : e.kids)
        if (expr_has_var(*k)) return true;
    return false;
}

}  // namespace

ExprPtr parse_expr(std::string_view text) { return ExprParser(text).parse(); }

Scalar parse_scalar(std::string_view text) {
    ExprPtr e = parse_expr(text);
    if (expr_has_var(*e))
        throw ParseError("expected a constant", 1, 1);
    if (auto r = eval_expr_rational(*e, Rational(0)))
        return Scalar::from_rational(*r);
    Value v = eval_expr(*e, std::span<const double>{});
    if (v.dim != 1) throw ParseError("expected a scalar constant", 1, 1);
    return Scalar(v.c[0]);
}

// ---------------------------------------------------------------------------
// Config files
// ---------------------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string_view::npos) return {};
    return std::string(s.substr(a, b - a + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

int parse_int(const std::string& s, int line) {
    try {
        size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected an integer, got '" + s + "'", line, 1);
    }
}

double parse_double(const std::string& s, int line) {
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected a number, got '" + s + "'", line, 1);
    }
}

}  // namespace

ProblemConfig parse_config(std::string_view text) {
    ProblemConfig cfg;
    std::string section;
    int line_no = 0;
    std::stringstream stream{std::string(text)};
    std::string raw;
    bool saw_problem = false;

    while (std::getline(stream, raw)) {
        ++line_no;
        std::string line = raw;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("unterminated section header", line_no, 1);
            section = trim(line.substr(1, line.size() - 2));
            if (section == "problem") saw_problem = true;
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected 'key = value'", line_no, 1);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.empty())
            throw ParseError("missing value for '" + key + "'", line_no,
                             static_cast<int>(eq + 2));

        try {
            if (section == "problem") {
                if (key == "mode") cfg.mode = value;
                else if (key == "domain") {
                    auto parts = split(value, ',');
                    if (parts.size() != 2)
                        throw ParseError("domain needs 'lo, hi'", line_no, 1);
                    cfg.dom_lo = parse_scalar(parts[0]);
                    cfg.dom_hi = parse_scalar(parts[1]);
                } else if (key == "half_open") cfg.half_open = value == "true";
                else if (key == "builtin") cfg.builtin = value;
                else if (key == "side") cfg.side = value;
                else throw ParseError("unknown key '" + key + "' in [problem]", line_no, 1);
            } else if (section == "maps") {
                if (key != "map")
                    throw ParseError("unknown key '" + key + "' in [maps]", line_no, 1);
                auto parts = split(value, ',');
                if (parts.size() != 2)
                    throw ParseError("map needs 'scale, offset'", line_no, 1);
                cfg.maps.emplace_back(parse_scalar(parts[0]), parse_scalar(parts[1]));
            } else if (section == "subsets") {
                if (key != "subset")
                    throw ParseError("unknown key '" + key + "' in [subsets]", line_no, 1);
                auto parts = split(value, ',');
                if (parts.size() != 2)
                    throw ParseError("subset needs 'lo, hi'", line_no, 1);
                cfg.subsets.emplace_back(parse_scalar(parts[0]), parse_scalar(parts[1]));
            } else if (section == "coefficients") {
                if (key == "q") cfg.qs.push_back(parse_expr(value));
                else if (key == "s") cfg.ss.push_back(parse_expr(value));
                else throw ParseError("unknown key '" + key + "' in [coefficients]",
                                      line_no, 1);
            } else if (section == "data") {
                if (key != "point")
                    throw ParseError("unknown key '" + key + "' in [data]", line_no, 1);
                auto parts = split(value, ',');
                if (parts.size() != 2)
                    throw ParseError("point needs 'x, y'", line_no, 1);
                cfg.data.emplace_back(parse_double(parts[0], line_no),
                                      parse_double(parts[1], line_no));
            } else if (section == "schedule") {
                if (key == "builtin") {
                    cfg.builtin = value;
                    cfg.schedule_kind = "builtin";
                } else if (key == "kind") cfg.schedule_kind = value;
                else if (key == "f") cfg.base_f = parse_expr(value);
                else if (key == "level") {
                    auto parts = split(value, ':');
                    if (parts.size() != 2)
                        throw ParseError("level needs 'pieces : scale-expr'", line_no, 1);
                    cfg.levels.emplace_back(parse_int(parts[0], line_no),
                                            parse_expr(parts[1]));
                } else if (key == "depth") cfg.depth = parse_int(value, line_no);
                else if (key == "f0") cfg.f0 = value;
                else throw ParseError("unknown key '" + key + "' in [schedule]",
                                      line_no, 1);
            } else if (section == "solver") {
                if (key == "eps") cfg.eps = parse_double(value, line_no);
                else if (key == "k_max") cfg.k_max = parse_int(value, line_no);
                else if (key == "resolution") cfg.resolution = parse_int(value, line_no);
                else if (key == "depth") cfg.depth = parse_int(value, line_no);
                else throw ParseError("unknown key '" + key + "' in [solver]", line_no, 1);
            } else if (section == "checks") {
                if (key == "continuity") cfg.want_continuity = value == "true";
                else if (key == "compatibility") cfg.want_compatibility = value == "true";
                else if (key == "lp") {
                    cfg.lp_p = value == "inf"
                                   ? std::numeric_limits<double>::infinity()
                                   : parse_double(value, line_no);
                } else throw ParseError("unknown key '" + key + "' in [checks]",
                                        line_no, 1);
            } else if (section == "export") {
                if (key == "csv") cfg.csv_path = value;
                else if (key == "svg") cfg.svg_path = value;
                else if (key == "graph_csv") cfg.graph_csv = value;
                else if (key == "graph") {
                    auto parts = split(value, ':');
                    if (parts.size() != 2)
                        throw ParseError("graph needs 'axis : path'", line_no, 1);
                    cfg.graphs.emplace_back(parse_int(parts[0], line_no), parts[1]);
                } else if (key == "parametric") {
                    auto parts = split(value, ':');
                    if (parts.size() != 2)
                        throw ParseError("parametric needs 'axes : path'", line_no, 1);
                    std::vector<int> axes;
                    for (const auto& a : split(parts[0], ','))
                        axes.push_back(parse_int(a, line_no));
                    cfg.parametric.emplace_back(std::move(axes), parts[1]);
                } else throw ParseError("unknown key '" + key + "' in [export]",
                                        line_no, 1);
            } else {
                throw ParseError("unknown section [" + section + "]", line_no, 1);
            }
        } catch (ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(e.what(), line_no, 1);
        }
    }

    if (!saw_problem || cfg.mode.empty())
        throw SemanticError("config needs a [problem] section with a mode");
    if (cfg.mode != "global" && cfg.mode != "local" && cfg.mode != "nonstationary" &&
        cfg.mode != "quaternion")
        throw SemanticError("unknown mode '" + cfg.mode + "'");
    if (cfg.mode == "local" && cfg.data.empty() && cfg.subsets.empty())
        throw SemanticError("local mode needs [subsets] or [data]");
    if (cfg.mode == "global" && cfg.maps.empty() && cfg.data.empty())
        throw SemanticError("global mode needs [maps] or [data]");
    if (cfg.mode == "nonstationary" && cfg.schedule_kind.empty())
        throw SemanticError("nonstationary mode needs a [schedule]");
    if (cfg.mode == "quaternion" && cfg.builtin.empty() && cfg.maps.empty())
        throw SemanticError("quaternion mode needs maps or a builtin");
    return cfg;
}

ProblemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace frif

#include "nicholson/expr.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace nicholson {

namespace {

enum class Op : std::uint8_t {
    Number,
    Var,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Sin,
    Cos,
    Abs,
    Exp,
    Log,
    Sqrt,
    Min,
    Max,
};

struct Node {
    Op op;
    double value = 0.0;
    std::vector<std::unique_ptr<Node>> args;
};

struct FunctionInfo {
    std::string_view name;
    Op op;
    std::size_t min_args;
    std::size_t max_args;  // 0 means unbounded
};

constexpr std::array<FunctionInfo, 8> kFunctions{{
    {"sin", Op::Sin, 1, 1},
    {"cos", Op::Cos, 1, 1},
    {"abs", Op::Abs, 1, 1},
    {"exp", Op::Exp, 1, 1},
    {"log", Op::Log, 1, 1},
    {"sqrt", Op::Sqrt, 1, 1},
    {"min", Op::Min, 2, 0},
    {"max", Op::Max, 2, 0},
}};

const FunctionInfo* find_function(std::string_view name) {
    for (const auto& f : kFunctions) {
        if (f.name == name) return &f;
    }
    return nullptr;
}

std::string_view function_name(Op op) {
    for (const auto& f : kFunctions) {
        if (f.op == op) return f.name;
    }
    return "?";
}

[[noreturn]] void domain_error(const char* what) { throw DomainError(what); }

inline double checked(double v) {
    if (!std::isfinite(v)) domain_error("non-finite intermediate value");
    return v;
}

double power(double base, double exponent) {
    if (base < 0.0 && std::trunc(exponent) != exponent) {
        domain_error("fractional power of a negative base");
    }
    if (base == 0.0 && exponent < 0.0) domain_error("division by zero");
    return checked(std::pow(base, exponent));
}

// Applies a non-leaf operator to already evaluated operands.
double apply_op(Op op, std::span<const double> a) {
    switch (op) {
        case Op::Neg: return -a[0];
        case Op::Add: return checked(a[0] + a[1]);
        case Op::Sub: return checked(a[0] - a[1]);
        case Op::Mul: return checked(a[0] * a[1]);
        case Op::Div:
            if (a[1] == 0.0) domain_error("division by zero");
            return checked(a[0] / a[1]);
        case Op::Pow: return power(a[0], a[1]);
        case Op::Sin: return std::sin(a[0]);
        case Op::Cos: return std::cos(a[0]);
        case Op::Abs: return std::fabs(a[0]);
        case Op::Exp: return checked(std::exp(a[0]));
        case Op::Log:
            if (a[0] <= 0.0) domain_error("log of a nonpositive value");
            return std::log(a[0]);
        case Op::Sqrt:
            if (a[0] < 0.0) domain_error("sqrt of a negative value");
            return std::sqrt(a[0]);
        case Op::Min: {
            double m = a[0];
            for (double v : a.subspan(1)) m = std::fmin(m, v);
            return m;
        }
        case Op::Max: {
            double m = a[0];
            for (double v : a.subspan(1)) m = std::fmax(m, v);
            return m;
        }
        case Op::Number:
        case Op::Var: break;
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Lexer + recursive descent parser

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    Tok kind;
    std::size_t pos;
    std::string_view text;
    double number = 0.0;
};

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) { advance(); }

    std::unique_ptr<Node> parse_all() {
        if (cur_.kind == Tok::End) throw ParseError("empty expression", cur_.pos);
        auto root = parse_sum();
        if (cur_.kind != Tok::End) unexpected();
        return root;
    }

private:
    [[noreturn]] void unexpected() const {
        if (cur_.kind == Tok::End) {
            throw ParseError("unexpected end of expression at position " +
                                 std::to_string(cur_.pos),
                             cur_.pos);
        }
        throw ParseError("unexpected '" + std::string(cur_.text) + "' at position " +
                             std::to_string(cur_.pos),
                         cur_.pos);
    }

    void expect(Tok kind) {
        if (cur_.kind != kind) unexpected();
        advance();
    }

    void advance() {
        while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
        const std::size_t start = i_;
        if (i_ >= src_.size()) {
            cur_ = {Tok::End, start, {}};
            return;
        }
        const char c = src_[i_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            lex_number(start);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_')) {
                ++i_;
            }
            cur_ = {Tok::Ident, start, src_.substr(start, i_ - start)};
            return;
        }
        Tok kind;
        switch (c) {
            case '+': kind = Tok::Plus; break;
            case '-': kind = Tok::Minus; break;
            case '*': kind = Tok::Star; break;
            case '/': kind = Tok::Slash; break;
            case '^': kind = Tok::Caret; break;
            case '(': kind = Tok::LParen; break;
            case ')': kind = Tok::RParen; break;
            case ',': kind = Tok::Comma; break;
            default:
                throw ParseError("invalid character '" + std::string(1, c) + "' at position " +
                                     std::to_string(start),
                                 start);
        }
        ++i_;
        cur_ = {kind, start, src_.substr(start, 1)};
    }

    void lex_number(std::size_t start) {
        auto digits = [&] {
            std::size_t n = 0;
            while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) {
                ++i_;
                ++n;
            }
            return n;
        };
        std::size_t n = digits();
        if (i_ < src_.size() && src_[i_] == '.') {
            ++i_;
            n += digits();
        }
        if (n == 0) throw ParseError("malformed number at position " + std::to_string(start), start);
        // Exponent only when followed by a digit (optionally signed), so that
        // "2*e" and "2e" are not mistaken for scientific notation.
        if (i_ < src_.size() && (src_[i_] == 'e' || src_[i_] == 'E')) {
            std::size_t j = i_ + 1;
            if (j < src_.size() && (src_[j] == '+' || src_[j] == '-')) ++j;
            if (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) {
                i_ = j;
                digits();
            }
        }
        const std::string text(src_.substr(start, i_ - start));
        cur_ = {Tok::Number, start, src_.substr(start, i_ - start), std::strtod(text.c_str(), nullptr)};
    }

    static std::unique_ptr<Node> make(Op op, double value = 0.0) {
        auto n = std::make_unique<Node>();
        n->op = op;
        n->value = value;
        return n;
    }

    static std::unique_ptr<Node> make(Op op, std::unique_ptr<Node> a, std::unique_ptr<Node> b) {
        auto n = make(op);
        n->args.push_back(std::move(a));
        n->args.push_back(std::move(b));
        return n;
    }

    std::unique_ptr<Node> parse_sum() {
        auto lhs = parse_product();
        while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
            const Op op = cur_.kind == Tok::Plus ? Op::Add : Op::Sub;
            advance();
            lhs = make(op, std::move(lhs), parse_product());
        }
        return lhs;
    }

    std::unique_ptr<Node> parse_product() {
        auto lhs = parse_unary();
        while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
            const Op op = cur_.kind == Tok::Star ? Op::Mul : Op::Div;
            advance();
            lhs = make(op, std::move(lhs), parse_unary());
        }
        return lhs;
    }

    std::unique_ptr<Node> parse_unary() {
        if (cur_.kind == Tok::Minus) {
            advance();
            auto n = make(Op::Neg);
            n->args.push_back(parse_unary());
            return n;
        }
        if (cur_.kind == Tok::Plus) {
            advance();
            return parse_unary();
        }
        return parse_power();
    }

    std::unique_ptr<Node> parse_power() {
        auto base = parse_primary();
        if (cur_.kind == Tok::Caret) {
            advance();
            // Exponent may carry its own sign: 2^-1. Recursing through
            // parse_unary also makes ^ right associative.
            return make(Op::Pow, std::move(base), parse_unary());
        }
        return base;
    }

    std::unique_ptr<Node> parse_primary() {
        switch (cur_.kind) {
            case Tok::Number: {
                auto n = make(Op::Number, cur_.number);
                advance();
                return n;
            }
            case Tok::LParen: {
                advance();
                auto inner = parse_sum();
                expect(Tok::RParen);
                return inner;
            }
            case Tok::Ident: return parse_identifier();
            default: unexpected();
        }
    }

    std::unique_ptr<Node> parse_identifier() {
        const Token id = cur_;
        advance();
        if (id.text == "t") return make(Op::Var);
        if (id.text == "pi") return make(Op::Number, std::numbers::pi);
        if (id.text == "e") return make(Op::Number, std::numbers::e);
        const FunctionInfo* fn = find_function(id.text);
        if (fn == nullptr) {
            throw ParseError("unknown identifier '" + std::string(id.text) + "' at position " +
                                 std::to_string(id.pos),
                             id.pos);
        }
        if (cur_.kind != Tok::LParen) unexpected();
        advance();
        auto call = make(fn->op);
        call->args.push_back(parse_sum());
        while (cur_.kind == Tok::Comma) {
            advance();
            call->args.push_back(parse_sum());
        }
        expect(Tok::RParen);
        const std::size_t argc = call->args.size();
        if (argc < fn->min_args || (fn->max_args != 0 && argc > fn->max_args)) {
            throw ParseError(std::string(fn->name) + " called with " + std::to_string(argc) +
                                 " argument(s) at position " + std::to_string(id.pos),
                             id.pos);
        }
        return call;
    }

    std::string_view src_;
    std::size_t i_ = 0;
    Token cur_{Tok::End, 0, {}};
};

// Replace t-free subtrees with their value, unless evaluating them raises a
// domain error; those stay in the tree so the error surfaces at eval time.
void fold_constants(Node& n) {
    for (auto& a : n.args) fold_constants(*a);
    if (n.op == Op::Number || n.op == Op::Var) return;
    std::vector<double> vals;
    for (const auto& a : n.args) {
        if (a->op != Op::Number) return;
        vals.push_back(a->value);
    }
    try {
        n.value = apply_op(n.op, vals);
    } catch (const DomainError&) {
        return;
    }
    n.op = Op::Number;
    n.args.clear();
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    if (v < 0.0) return "(" + s + ")";
    return s;
}

void render(const Node& n, std::string& out) {
    switch (n.op) {
        case Op::Number: out += format_number(n.value); return;
        case Op::Var: out += 't'; return;
        case Op::Neg:
            out += "(-";
            render(*n.args[0], out);
            out += ')';
            return;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
        case Op::Pow: {
            static constexpr std::string_view symbols = "+-*/^";
            const auto idx = static_cast<std::size_t>(n.op) - static_cast<std::size_t>(Op::Add);
            out += '(';
            render(*n.args[0], out);
            out += ' ';
            out += symbols[idx];
            out += ' ';
            render(*n.args[1], out);
            out += ')';
            return;
        }
        default: {
            out += function_name(n.op);
            out += '(';
            for (std::size_t i = 0; i < n.args.size(); ++i) {
                if (i) out += ", ";
                render(*n.args[i], out);
            }
            out += ')';
            return;
        }
    }
}

struct Instr {
    Op op;
    std::uint32_t argc;
    double value;
};

void compile(const Node& n, std::vector<Instr>& code, std::size_t depth, std::size_t& max_depth) {
    for (std::size_t i = 0; i < n.args.size(); ++i) compile(*n.args[i], code, depth + i, max_depth);
    max_depth = std::max(max_depth, depth + 1);
    code.push_back({n.op, static_cast<std::uint32_t>(n.args.size()), n.value});
}

}  // namespace

// ---------------------------------------------------------------------------

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error(message), position_(position) {}

struct TimeExpr::Program {
    std::string source;
    std::unique_ptr<Node> root;
    std::vector<Instr> code;
    std::size_t max_depth = 1;
    std::optional<double> constant;
};

namespace {

std::shared_ptr<const TimeExpr::Program> build_program(std::string source, std::unique_ptr<Node> root) {
    auto prog = std::make_shared<TimeExpr::Program>();
    prog->source = std::move(source);
    fold_constants(*root);
    if (root->op == Op::Number) prog->constant = root->value;
    compile(*root, prog->code, 0, prog->max_depth);
    prog->root = std::move(root);
    return prog;
}

}  // namespace

TimeExpr::TimeExpr() : TimeExpr(constant(0.0)) {}

TimeExpr::TimeExpr(std::shared_ptr<const Program> program) : program_(std::move(program)) {}

TimeExpr TimeExpr::constant(double value) {
    auto node = std::make_unique<Node>();
    node->op = Op::Number;
    node->value = value;
    return TimeExpr(build_program(format_number(value), std::move(node)));
}

const std::string& TimeExpr::source() const { return program_->source; }

std::vector<TimeExpr> TimeExpr::switching_functions() const {
    std::vector<TimeExpr> out;
    auto text = [](const Node& n) {
        std::string s;
        render(n, s);
        return s;
    };
    auto add = [&](std::string source) {
        auto e = parse(source);
        if (!e.is_constant()) out.push_back(std::move(e));
    };
    auto walk = [&](const Node& n, auto& self) -> void {
        if (n.op == Op::Abs) add(text(*n.args[0]));
        if (n.op == Op::Min || n.op == Op::Max) {
            for (std::size_t i = 0; i < n.args.size(); ++i) {
                for (std::size_t k = i + 1; k < n.args.size(); ++k) {
                    add("(" + text(*n.args[i]) + ") - (" + text(*n.args[k]) + ")");
                }
            }
        }
        for (const auto& a : n.args) self(*a, self);
    };
    walk(*program_->root, walk);
    return out;
}

std::string TimeExpr::to_string() const {
    std::string out;
    render(*program_->root, out);
    return out;
}

bool TimeExpr::is_constant() const { return program_->constant.has_value(); }

std::optional<double> TimeExpr::constant_value() const { return program_->constant; }

double TimeExpr::eval(double t) const {
    const Program& p = *program_;
    if (p.constant) return *p.constant;

    constexpr std::size_t kInline = 32;
    std::array<double, kInline> inline_stack{};
    std::vector<double> heap_stack;
    double* stack = inline_stack.data();
    if (p.max_depth > kInline) {
        heap_stack.resize(p.max_depth);
        stack = heap_stack.data();
    }

    std::size_t sp = 0;
    for (const Instr& in : p.code) {
        switch (in.op) {
            case Op::Number: stack[sp++] = in.value; break;
            case Op::Var: stack[sp++] = t; break;
            default: {
                sp -= in.argc;
                stack[sp] = apply_op(in.op, std::span<const double>(stack + sp, in.argc));
                ++sp;
                break;
            }
        }
    }
    return stack[0];
}

TimeExpr parse(std::string_view source) {
    Parser parser(source);
    auto root = parser.parse_all();
    return TimeExpr(build_program(std::string(source), std::move(root)));
}

SampledRange sample_bounds(const TimeExpr& expr, double t_lo, double t_hi, std::size_t n) {
    if (!(t_lo < t_hi)) throw std::invalid_argument("sample_bounds: require t_lo < t_hi");
    if (n < 2) throw std::invalid_argument("sample_bounds: require at least 2 samples");
    SampledRange r{expr.eval(t_lo), expr.eval(t_lo)};
    const double step = (t_hi - t_lo) / static_cast<double>(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
        const double t = (i + 1 == n) ? t_hi : t_lo + step * static_cast<double>(i);
        const double v = expr.eval(t);
        r.lo = std::min(r.lo, v);
        r.hi = std::max(r.hi, v);
    }
    return r;
}

}  // namespace nicholson

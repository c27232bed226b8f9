/// Formula lexer, recursive-descent parser, traversals, and renderers.

#include "ssmi/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

namespace ssmi {

ExprPtr make_number(double value) {
    return std::make_shared<Expression>(Expression{NumberLiteral{value}});
}
ExprPtr make_ref(std::string name) {
    return std::make_shared<Expression>(Expression{VariableRef{std::move(name)}});
}
ExprPtr make_binary(BinOp op, ExprPtr left, ExprPtr right) {
    return std::make_shared<Expression>(Expression{BinaryOp{op, std::move(left), std::move(right)}});
}
ExprPtr make_neg(ExprPtr operand) {
    return std::make_shared<Expression>(Expression{UnaryNeg{std::move(operand)}});
}
ExprPtr make_call(std::string name, std::vector<ExprPtr> args) {
    return std::make_shared<Expression>(Expression{FunctionCall{std::move(name), std::move(args)}});
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->node.index() != b->node.index()) return false;
    return std::visit(
        [&](const auto& lhs) -> bool {
            using T = std::decay_t<decltype(lhs)>;
            const auto& rhs = std::get<T>(b->node);
            if constexpr (std::is_same_v<T, NumberLiteral>) {
                return lhs.value == rhs.value;
            } else if constexpr (std::is_same_v<T, VariableRef>) {
                return lhs.name == rhs.name;
            } else if constexpr (std::is_same_v<T, BinaryOp>) {
                return lhs.op == rhs.op && expr_equal(lhs.left, rhs.left) &&
                       expr_equal(lhs.right, rhs.right);
            } else if constexpr (std::is_same_v<T, UnaryNeg>) {
                return expr_equal(lhs.operand, rhs.operand);
            } else {
                if (lhs.name != rhs.name || lhs.args.size() != rhs.args.size()) return false;
                for (std::size_t i = 0; i < lhs.args.size(); ++i)
                    if (!expr_equal(lhs.args[i], rhs.args[i])) return false;
                return true;
            }
        },
        a->node);
}

OperatorKind OperatorKind::of(BinOp op) {
    switch (op) {
        case BinOp::Plus: return {Tag::Plus, {}};
        case BinOp::Minus: return {Tag::Minus, {}};
        case BinOp::Times: return {Tag::Times, {}};
        case BinOp::Divide: return {Tag::Divide, {}};
        case BinOp::Power: return {Tag::Power, {}};
        case BinOp::Gt: return {Tag::Gt, {}};
        case BinOp::Lt: return {Tag::Lt, {}};
        case BinOp::Ge: return {Tag::Ge, {}};
        case BinOp::Le: return {Tag::Le, {}};
        case BinOp::Eq: return {Tag::Eq, {}};
        case BinOp::Ne: return {Tag::Ne, {}};
    }
    return {};
}

OperatorKind OperatorKind::function(std::string name) {
    return {Tag::Function, std::move(name)};
}

std::string OperatorKind::display() const {
    switch (tag) {
        case Tag::Plus: return "+";
        case Tag::Minus: return "-";
        case Tag::Times: return "*";
        case Tag::Divide: return "/";
        case Tag::Power: return "^";
        case Tag::Gt: return ">";
        case Tag::Lt: return "<";
        case Tag::Ge: return ">=";
        case Tag::Le: return "<=";
        case Tag::Eq: return "=";
        case Tag::Ne: return "<>";
        case Tag::Function: return function_name;
    }
    return "?";
}

const std::map<std::string, FunctionSpec>& function_registry() {
    static const std::map<std::string, FunctionSpec> registry = {
        {"IF", {3, 3}}, {"MIN", {1, -1}}, {"MAX", {1, -1}}, {"SUM", {1, -1}}, {"ROUND", {2, 2}},
    };
    return registry;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
    Number, Ident, Plus, Minus, Star, Slash, Caret,
    Lt, Gt, Le, Ge, Eq, Ne, LParen, RParen, Comma, End,
};

struct Token {
    Tok kind = Tok::End;
    std::size_t offset = 0;
    std::string_view text;
    double number = 0.0;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_cont(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() &&
               (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\r' || src_[pos_] == '\n'))
            ++pos_;
        current_ = Token{Tok::End, pos_, src_.substr(pos_, 0), 0.0};
        if (pos_ >= src_.size()) return;

        const std::size_t start = pos_;
        const char c = src_[pos_];
        auto single = [&](Tok k) {
            ++pos_;
            current_ = Token{k, start, src_.substr(start, 1), 0.0};
        };
        switch (c) {
            case '+': single(Tok::Plus); return;
            case '-': single(Tok::Minus); return;
            case '*': single(Tok::Star); return;
            case '/': single(Tok::Slash); return;
            case '^': single(Tok::Caret); return;
            case '(': single(Tok::LParen); return;
            case ')': single(Tok::RParen); return;
            case ',': single(Tok::Comma); return;
            case '=': single(Tok::Eq); return;
            case '<':
                if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
                    pos_ += 2;
                    current_ = Token{Tok::Le, start, src_.substr(start, 2), 0.0};
                } else if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
                    pos_ += 2;
                    current_ = Token{Tok::Ne, start, src_.substr(start, 2), 0.0};
                } else {
                    single(Tok::Lt);
                }
                return;
            case '>':
                if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '=') {
                    pos_ += 2;
                    current_ = Token{Tok::Ge, start, src_.substr(start, 2), 0.0};
                } else {
                    single(Tok::Gt);
                }
                return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            lex_number(start);
            return;
        }
        if (ident_start(c)) {
            std::size_t end = pos_;
            while (end < src_.size() && ident_cont(src_[end])) ++end;
            current_ = Token{Tok::Ident, start, src_.substr(start, end - start), 0.0};
            pos_ = end;
            return;
        }
        throw FormulaError("syntax", start, "unexpected character '" + std::string(1, c) + "'",
                           "a number, variable, function call, or '('");
    }

    void lex_number(std::size_t start) {
        std::size_t end = pos_;
        while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
        if (end < src_.size() && src_[end] == '.') {
            ++end;
            while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
        }
        if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
            std::size_t exp = end + 1;
            if (exp < src_.size() && (src_[exp] == '+' || src_[exp] == '-')) ++exp;
            if (exp < src_.size() && std::isdigit(static_cast<unsigned char>(src_[exp]))) {
                ++exp;
                while (exp < src_.size() && std::isdigit(static_cast<unsigned char>(src_[exp]))) ++exp;
                end = exp;
            }
        }
        const std::string_view text = src_.substr(start, end - start);
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size())
            throw FormulaError("syntax", start, "malformed number '" + std::string(text) + "'");
        current_ = Token{Tok::Number, start, text, value};
        pos_ = end;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Token current_;
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
    explicit Parser(std::string_view src) : lexer_(src) {}

    ExprPtr parse_full() {
        ExprPtr e = parse_cmp();
        const Token& t = lexer_.peek();
        if (t.kind != Tok::End)
            throw FormulaError("syntax", t.offset,
                               "unexpected '" + std::string(t.text) + "' after expression",
                               "end of formula or an operator");
        return e;
    }

    ExprPtr parse_prefix(std::size_t& consumed) {
        ExprPtr e = parse_cmp();
        consumed = lexer_.peek().offset;
        return e;
    }

private:
    static BinOp binop_of(Tok k) {
        switch (k) {
            case Tok::Plus: return BinOp::Plus;
            case Tok::Minus: return BinOp::Minus;
            case Tok::Star: return BinOp::Times;
            case Tok::Slash: return BinOp::Divide;
            case Tok::Caret: return BinOp::Power;
            case Tok::Lt: return BinOp::Lt;
            case Tok::Gt: return BinOp::Gt;
            case Tok::Le: return BinOp::Le;
            case Tok::Ge: return BinOp::Ge;
            case Tok::Eq: return BinOp::Eq;
            default: return BinOp::Ne;
        }
    }

    ExprPtr parse_cmp() {
        ExprPtr left = parse_add();
        const Tok k = lexer_.peek().kind;
        if (k == Tok::Lt || k == Tok::Gt || k == Tok::Le || k == Tok::Ge || k == Tok::Eq ||
            k == Tok::Ne) {
            Token op = lexer_.take();
            ExprPtr right = parse_add();
            return make_binary(binop_of(op.kind), std::move(left), std::move(right));
        }
        return left;
    }

    ExprPtr parse_add() {
        ExprPtr left = parse_mul();
        while (lexer_.peek().kind == Tok::Plus || lexer_.peek().kind == Tok::Minus) {
            Token op = lexer_.take();
            left = make_binary(binop_of(op.kind), std::move(left), parse_mul());
        }
        return left;
    }

    ExprPtr parse_mul() {
        ExprPtr left = parse_pow();
        while (lexer_.peek().kind == Tok::Star || lexer_.peek().kind == Tok::Slash) {
            Token op = lexer_.take();
            left = make_binary(binop_of(op.kind), std::move(left), parse_pow());
        }
        return left;
    }

    // Right-associative; the base binds through unary, so -A^B is (-A)^B.
    ExprPtr parse_pow() {
        ExprPtr base = parse_unary();
        if (lexer_.peek().kind == Tok::Caret) {
            lexer_.take();
            return make_binary(BinOp::Power, std::move(base), parse_pow());
        }
        return base;
    }

    ExprPtr parse_unary() {
        if (lexer_.peek().kind == Tok::Minus) {
            lexer_.take();
            return make_neg(parse_unary());
        }
        return parse_atom();
    }

    ExprPtr parse_atom() {
        const Token t = lexer_.take();
        switch (t.kind) {
            case Tok::Number: return make_number(t.number);
            case Tok::LParen: {
                ExprPtr inner = parse_cmp();
                expect_rparen();
                return inner;
            }
            case Tok::Ident: {
                if (lexer_.peek().kind == Tok::LParen) return parse_call(t);
                return make_ref(std::string(t.text));
            }
            case Tok::End:
                throw FormulaError("syntax", t.offset, "formula ends unexpectedly",
                                   "a number, variable, function call, or '('");
            default:
                throw FormulaError("syntax", t.offset, "unexpected '" + std::string(t.text) + "'",
                                   "a number, variable, function call, or '('");
        }
    }

    ExprPtr parse_call(const Token& name_tok) {
        std::string name(name_tok.text);
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
        auto it = function_registry().find(name);
        if (it == function_registry().end())
            throw FormulaError("unknown-function", name_tok.offset,
                               "unknown function '" + std::string(name_tok.text) + "'",
                               "one of IF, MIN, MAX, SUM, ROUND");
        lexer_.take();  // '('
        std::vector<ExprPtr> args;
        if (lexer_.peek().kind != Tok::RParen) {
            args.push_back(parse_cmp());
            while (lexer_.peek().kind == Tok::Comma) {
                lexer_.take();
                args.push_back(parse_cmp());
            }
        }
        expect_rparen();
        const FunctionSpec& spec = it->second;
        const int n = static_cast<int>(args.size());
        if (n < spec.min_args || (spec.max_args >= 0 && n > spec.max_args)) {
            std::string want = spec.max_args < 0
                                   ? "at least " + std::to_string(spec.min_args)
                                   : (spec.min_args == spec.max_args
                                          ? "exactly " + std::to_string(spec.min_args)
                                          : std::to_string(spec.min_args) + ".." +
                                                std::to_string(spec.max_args));
            throw FormulaError("bad-arity", name_tok.offset,
                               name + " expects " + want + " argument(s), got " + std::to_string(n));
        }
        return make_call(std::move(name), std::move(args));
    }

    void expect_rparen() {
        const Token& t = lexer_.peek();
        if (t.kind != Tok::RParen)
            throw FormulaError("syntax", t.offset,
                               t.kind == Tok::End ? "formula ends unexpectedly"
                                                  : "unexpected '" + std::string(t.text) + "'",
                               "')'");
        lexer_.take();
    }

    Lexer lexer_;
};

}  // namespace

ExprPtr parse_expression(std::string_view source) {
    if (source.find_first_not_of(" \t\r\n") == std::string_view::npos)
        throw FormulaError("syntax", 0, "empty formula",
                           "a number, variable, function call, or '('");
    return Parser(source).parse_full();
}

ExprPtr parse_expression_prefix(std::string_view source, std::size_t& consumed) {
    return Parser(source).parse_prefix(consumed);
}

// ---------------------------------------------------------------------------
// Traversals

namespace {

void collect_refs_into(const ExprPtr& expr, std::vector<std::string>& out,
                       std::set<std::string>& seen) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, VariableRef>) {
                if (seen.insert(n.name).second) out.push_back(n.name);
            } else if constexpr (std::is_same_v<T, BinaryOp>) {
                collect_refs_into(n.left, out, seen);
                collect_refs_into(n.right, out, seen);
            } else if constexpr (std::is_same_v<T, UnaryNeg>) {
                collect_refs_into(n.operand, out, seen);
            } else if constexpr (std::is_same_v<T, FunctionCall>) {
                for (const ExprPtr& a : n.args) collect_refs_into(a, out, seen);
            }
        },
        expr->node);
}

struct SlotWalker {
    std::vector<SlotKinds> slots;

    std::size_t new_slot(std::string path) {
        slots.push_back(SlotKinds{std::move(path), {}});
        return slots.size() - 1;
    }

    void walk(const ExprPtr& expr, std::size_t slot, int& if_counter) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, BinaryOp>) {
                    slots[slot].kinds.insert(OperatorKind::of(n.op));
                    walk(n.left, slot, if_counter);
                    walk(n.right, slot, if_counter);
                } else if constexpr (std::is_same_v<T, UnaryNeg>) {
                    slots[slot].kinds.insert(OperatorKind::of(BinOp::Minus));
                    walk(n.operand, slot, if_counter);
                } else if constexpr (std::is_same_v<T, FunctionCall>) {
                    slots[slot].kinds.insert(OperatorKind::function(n.name));
                    if (n.name == "IF") {
                        const int ordinal = ++if_counter;
                        const std::string base =
                            slots[slot].path + ".if" + std::to_string(ordinal);
                        static constexpr const char* part[3] = {".cond", ".then", ".else"};
                        for (std::size_t i = 0; i < n.args.size(); ++i) {
                            const std::size_t child = new_slot(
                                base + (i < 3 ? part[i] : ".arg" + std::to_string(i + 1)));
                            int child_ifs = 0;
                            walk(n.args[i], child, child_ifs);
                        }
                    } else {
                        for (const ExprPtr& a : n.args) walk(a, slot, if_counter);
                    }
                }
            },
            expr->node);
    }
};

}  // namespace

std::vector<std::string> collect_refs(const ExprPtr& expr) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    collect_refs_into(expr, out, seen);
    return out;
}

std::vector<SlotKinds> operator_kinds_by_slot(const ExprPtr& expr) {
    SlotWalker walker;
    walker.new_slot("top");
    int ifs = 0;
    walker.walk(expr, 0, ifs);
    return walker.slots;
}

// ---------------------------------------------------------------------------
// Rendering

std::string double_to_text(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    (void)ec;
    return std::string(buf, ptr);
}

namespace {

// Precedence levels used for minimal parenthesization. A child is wrapped
// when its own level is below the level its position requires.
enum : int { kCmp = 1, kAdd = 2, kMul = 3, kPow = 4, kUnary = 5, kAtom = 6 };

int node_level(const Expression& e) {
    return std::visit(
        [](const auto& n) -> int {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, BinaryOp>) {
                switch (n.op) {
                    case BinOp::Plus:
                    case BinOp::Minus: return kAdd;
                    case BinOp::Times:
                    case BinOp::Divide: return kMul;
                    case BinOp::Power: return kPow;
                    default: return kCmp;
                }
            } else if constexpr (std::is_same_v<T, UnaryNeg>) {
                return kUnary;
            } else {
                return kAtom;
            }
        },
        e.node);
}

const char* op_text(BinOp op) {
    switch (op) {
        case BinOp::Plus: return "+";
        case BinOp::Minus: return "-";
        case BinOp::Times: return "*";
        case BinOp::Divide: return "/";
        case BinOp::Power: return "^";
        case BinOp::Gt: return ">";
        case BinOp::Lt: return "<";
        case BinOp::Ge: return ">=";
        case BinOp::Le: return "<=";
        case BinOp::Eq: return "=";
        case BinOp::Ne: return "<>";
    }
    return "?";
}

struct RenderStyle {
    bool spaced = false;        // spaces around binary operators
    bool labels = false;        // show underscores as spaces
    char arg_separator = ',';
    bool decimal_comma = false;
    const std::map<std::string, std::string>* binding = nullptr;  // null = identity
};

void render_node(const ExprPtr& expr, int min_level, const RenderStyle& st, std::string& out) {
    const int level = node_level(*expr);
    const bool parens = level < min_level;
    if (parens) out += '(';
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, NumberLiteral>) {
                std::string text = double_to_text(n.value);
                if (st.decimal_comma)
                    std::replace(text.begin(), text.end(), '.', ',');
                out += text;
            } else if constexpr (std::is_same_v<T, VariableRef>) {
                if (st.binding) {
                    auto it = st.binding->find(n.name);
                    if (it == st.binding->end())
                        throw FormulaError("unbound-ref", 0,
                                           "unbound variable reference '" + n.name + "'");
                    out += it->second;
                } else if (st.labels) {
                    std::string label = n.name;
                    std::replace(label.begin(), label.end(), '_', ' ');
                    out += label;
                } else {
                    out += n.name;
                }
            } else if constexpr (std::is_same_v<T, BinaryOp>) {
                int left_min = level, right_min = level + 1;
                if (n.op == BinOp::Power) {
                    left_min = kUnary;   // base binds through unary only
                    right_min = kPow;    // right-associative
                } else if (level == kCmp) {
                    left_min = right_min = kAdd;  // comparisons do not chain
                }
                render_node(n.left, left_min, st, out);
                if (st.spaced) out += ' ';
                out += op_text(n.op);
                if (st.spaced) out += ' ';
                render_node(n.right, right_min, st, out);
            } else if constexpr (std::is_same_v<T, UnaryNeg>) {
                out += '-';
                render_node(n.operand, kUnary, st, out);
            } else {
                out += n.name;
                out += '(';
                for (std::size_t i = 0; i < n.args.size(); ++i) {
                    if (i) {
                        out += st.arg_separator;
                        if (st.spaced) out += ' ';
                    }
                    render_node(n.args[i], kCmp, st, out);
                }
                out += ')';
            }
        },
        expr->node);
    if (parens) out += ')';
}

}  // namespace

std::string render_cell_formula(const ExprPtr& expr,
                                const std::map<std::string, std::string>& binding) {
    RenderStyle st;
    st.binding = &binding;
    std::string out = "=";
    render_node(expr, kCmp, st, out);
    return out;
}

std::string render_display(const ExprPtr& expr, DisplayLocale locale) {
    RenderStyle st;
    st.spaced = true;
    st.labels = true;
    st.arg_separator = locale == DisplayLocale::Fr ? ';' : ',';
    st.decimal_comma = locale == DisplayLocale::Fr;
    std::string out = "= ";
    render_node(expr, kCmp, st, out);
    return out;
}

std::string render_canonical(const ExprPtr& expr) {
    RenderStyle st;
    std::string out;
    render_node(expr, kCmp, st, out);
    return out;
}

}  // namespace ssmi

#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ssmi {

// Binary operators of the formula grammar, in no particular order.
enum class BinOp { Plus, Minus, Times, Divide, Power, Gt, Lt, Ge, Le, Eq, Ne };

struct Expression;
using ExprPtr = std::shared_ptr<const Expression>;

struct NumberLiteral {
    double value = 0.0;
};

struct VariableRef {
    std::string name;
};

struct BinaryOp {
    BinOp op;
    ExprPtr left;
    ExprPtr right;
};

struct UnaryNeg {
    ExprPtr operand;
};

struct FunctionCall {
    std::string name;  // uppercase, must be in the function registry
    std::vector<ExprPtr> args;
};

/// One node of a formula tree. Trees are immutable; subtrees may be shared.
struct Expression {
    std::variant<NumberLiteral, VariableRef, BinaryOp, UnaryNeg, FunctionCall> node;
};

ExprPtr make_number(double value);
ExprPtr make_ref(std::string name);
ExprPtr make_binary(BinOp op, ExprPtr left, ExprPtr right);
ExprPtr make_neg(ExprPtr operand);
ExprPtr make_call(std::string name, std::vector<ExprPtr> args);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

/// The unit the golden rule counts: each binary/unary operator is its own
/// kind, unary minus shares the kind of binary minus, and every distinct
/// function name is a kind of its own.
struct OperatorKind {
    enum class Tag { Plus, Minus, Times, Divide, Power, Gt, Lt, Ge, Le, Eq, Ne, Function };
    Tag tag = Tag::Plus;
    std::string function_name;  // set only when tag == Function

    auto operator<=>(const OperatorKind&) const = default;

    static OperatorKind of(BinOp op);
    static OperatorKind function(std::string name);

    /// Short display form: "+", "*", "<=", or the function name ("IF").
    std::string display() const;
};

/// Per-function argument count limits; max_args < 0 means unbounded.
struct FunctionSpec {
    int min_args;
    int max_args;
};

/// Supported functions: IF(3), MIN/MAX/SUM(>=1), ROUND(2).
const std::map<std::string, FunctionSpec>& function_registry();

/// Raised by parse_expression (and by the renderers on unbound references).
/// `offset` is the byte offset into the parsed text; `hint` names what was
/// expected at that point, when known.
class FormulaError : public std::runtime_error {
public:
    FormulaError(std::string code, std::size_t offset, const std::string& message,
                 std::string hint = {})
        : std::runtime_error(message), code(std::move(code)), offset(offset),
          hint(std::move(hint)) {}

    std::string code;  // "syntax" | "unknown-function" | "bad-arity" | "unbound-ref"
    std::size_t offset;
    std::string hint;
};

/// Parse a complete formula. Grammar (also in the README):
///   expr  := cmp
///   cmp   := add (("<"|">"|"<="|">="|"="|"<>") add)?
///   add   := mul (("+"|"-") mul)*
///   mul   := pow (("*"|"/") pow)*
///   pow   := unary ("^" pow)?
///   unary := "-" unary | atom
///   atom  := number | identifier | NAME "(" expr ("," expr)* ")" | "(" expr ")"
ExprPtr parse_expression(std::string_view source);

/// Like parse_expression but stops at the first token that cannot extend the
/// expression, reporting how many bytes were consumed. Used by the model DSL,
/// where clauses may follow the formula on the same line.
ExprPtr parse_expression_prefix(std::string_view source, std::size_t& consumed);

/// Variable names in order of first occurrence (depth-first, left to right,
/// function arguments in declared order), duplicates removed.
std::vector<std::string> collect_refs(const ExprPtr& expr);

/// Operator kinds grouped by golden-rule slot. The whole tree is one slot
/// except that each IF argument starts a fresh slot; the IF call itself
/// counts as function:IF in its enclosing slot. Slot paths look like
/// "top", "top.if1.cond", "top.if1.then", "top.if1.else".
struct SlotKinds {
    std::string path;
    std::set<OperatorKind> kinds;
};
std::vector<SlotKinds> operator_kinds_by_slot(const ExprPtr& expr);

/// Locale used only for human-facing display rendering; cell formulas always
/// use "," and ".".
enum class DisplayLocale { En, Fr };

/// Render for storage in a cell: leading "=", no spaces, "," separators,
/// every VariableRef replaced by its bound cell address, minimal parentheses
/// preserving evaluation order. Throws FormulaError("unbound-ref") when a
/// name is missing from the binding.
std::string render_cell_formula(const ExprPtr& expr,
                                const std::map<std::string, std::string>& binding);

/// Human-readable rendering with display labels (underscores shown as
/// spaces), spaces around operators, and a leading "= ". Fr locale uses ";"
/// argument separators and a decimal comma.
std::string render_display(const ExprPtr& expr, DisplayLocale locale = DisplayLocale::En);

/// Compact rendering that keeps identifiers as written; re-parses to a
/// structurally equal tree. Used by the model serializer and tests.
std::string render_canonical(const ExprPtr& expr);

/// Shortest text that round-trips the double (to_chars).
std::string double_to_text(double value);

}  // namespace ssmi

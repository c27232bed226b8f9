#include "ssmi/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <stdexcept>

namespace ssmi {

namespace {

std::string lower_copy(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](char c) {
        return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    });
    return out;
}

/// Arithmetic coercion: booleans count as 1/0.
bool as_number(const Value& value, double& out) {
    if (value.is_number()) {
        out = value.number();
        return true;
    }
    if (value.is_bool()) {
        out = value.boolean() ? 1.0 : 0.0;
        return true;
    }
    return false;
}

Value finite_or_bad(double value) {
    if (!std::isfinite(value)) return Value(EvalErrorCode::BadArg);
    return Value(value);
}

Value eval_binary(BinOp op, const Value& lhs, const Value& rhs) {
    if (lhs.is_error()) return lhs;
    if (rhs.is_error()) return rhs;
    double a = 0.0;
    double b = 0.0;
    if (!as_number(lhs, a) || !as_number(rhs, b)) return Value(EvalErrorCode::BadArg);
    switch (op) {
        case BinOp::Plus: return finite_or_bad(a + b);
        case BinOp::Minus: return finite_or_bad(a - b);
        case BinOp::Times: return finite_or_bad(a * b);
        case BinOp::Divide:
            if (b == 0.0) return Value(EvalErrorCode::DivZero);
            return finite_or_bad(a / b);
        case BinOp::Power:
            if (a == 0.0 && b < 0.0) return Value(EvalErrorCode::DivZero);
            return finite_or_bad(std::pow(a, b));
        case BinOp::Gt: return Value(a > b);
        case BinOp::Lt: return Value(a < b);
        case BinOp::Ge: return Value(a >= b);
        case BinOp::Le: return Value(a <= b);
        case BinOp::Eq: return Value(a == b);
        case BinOp::Ne: return Value(a != b);
    }
    return Value(EvalErrorCode::BadArg);
}

/// ROUND half away from zero, digit count truncated toward zero.
Value eval_round(double value, double digits) {
    double scale = std::pow(10.0, std::trunc(digits));
    if (!std::isfinite(scale) || scale == 0.0) return Value(EvalErrorCode::BadArg);
    return finite_or_bad(std::round(value * scale) / scale);
}

}  // namespace

std::string Value::display() const {
    if (is_bool()) return boolean() ? "TRUE" : "FALSE";
    if (is_error()) {
        switch (error()) {
            case EvalErrorCode::DivZero: return "#DIV/0!";
            case EvalErrorCode::BadArg: return "#NUM!";
            case EvalErrorCode::Unresolved: return "#NAME?";
        }
    }
    return double_to_text(number());
}

Value eval_expression(const ExprPtr& expr, const Environment& env) {
    if (!expr) return Value(EvalErrorCode::Unresolved);
    if (const auto* num = std::get_if<NumberLiteral>(&expr->node)) return Value(num->value);
    if (const auto* ref = std::get_if<VariableRef>(&expr->node)) {
        if (auto it = env.find(ref->name); it != env.end()) return it->second;
        std::string key = lower_copy(ref->name);
        for (const auto& [name, value] : env)
            if (lower_copy(name) == key) return value;
        return Value(EvalErrorCode::Unresolved);
    }
    if (const auto* neg = std::get_if<UnaryNeg>(&expr->node)) {
        Value operand = eval_expression(neg->operand, env);
        if (operand.is_error()) return operand;
        double x = 0.0;
        if (!as_number(operand, x)) return Value(EvalErrorCode::BadArg);
        return Value(-x);
    }
    if (const auto* bin = std::get_if<BinaryOp>(&expr->node)) {
        Value lhs = eval_expression(bin->left, env);
        if (lhs.is_error()) return lhs;  // right side not touched on error
        Value rhs = eval_expression(bin->right, env);
        return eval_binary(bin->op, lhs, rhs);
    }
    const auto& call = std::get<FunctionCall>(expr->node);
    if (call.name == "IF") {
        Value condition = eval_expression(call.args[0], env);
        if (condition.is_error()) return condition;
        bool truth = false;
        if (condition.is_bool()) {
            truth = condition.boolean();
        } else {
            truth = condition.number() != 0.0;  // nonzero = true
        }
        return eval_expression(call.args[truth ? 1 : 2], env);
    }
    if (call.name == "MIN" || call.name == "MAX" || call.name == "SUM") {
        double accumulator = 0.0;
        bool first = true;
        for (const auto& arg : call.args) {
            Value value = eval_expression(arg, env);
            if (value.is_error()) return value;
            double x = 0.0;
            if (!as_number(value, x)) return Value(EvalErrorCode::BadArg);
            if (call.name == "SUM") accumulator += x;
            else if (first) accumulator = x;
            else if (call.name == "MIN") accumulator = std::min(accumulator, x);
            else accumulator = std::max(accumulator, x);
            first = false;
        }
        return finite_or_bad(accumulator);
    }
    if (call.name == "ROUND") {
        Value value = eval_expression(call.args[0], env);
        if (value.is_error()) return value;
        Value digits = eval_expression(call.args[1], env);
        if (digits.is_error()) return digits;
        double x = 0.0;
        double n = 0.0;
        if (!as_number(value, x) || !as_number(digits, n)) return Value(EvalErrorCode::BadArg);
        return eval_round(x, n);
    }
    return Value(EvalErrorCode::Unresolved);  // unreachable: parser checks the registry
}

std::map<std::string, Value> eval_model(const Model& model,
                                        const std::map<std::string, double>& overrides) {
    std::map<std::string, const VariableDecl*> decl_by_lower;
    for (const auto& decl : model.declarations)
        decl_by_lower.emplace(lower_copy(decl.name), &decl);

    for (const auto& [name, value] : overrides) {
        auto it = decl_by_lower.find(lower_copy(name));
        if (it == decl_by_lower.end())
            throw std::invalid_argument("override of undeclared variable '" + name + "'");
        if (is_formula_kind(it->second->kind))
            throw std::invalid_argument("override of formula-bearing variable '" + name + "'");
        (void)value;
    }

    Environment env;
    for (const auto& decl : model.declarations) {
        if (is_formula_kind(decl.kind)) continue;
        double value = decl.initial_value.value_or(0.0);
        for (const auto& [o_name, o_value] : overrides) {
            if (lower_copy(o_name) == lower_copy(decl.name)) value = o_value;
        }
        env[decl.name] = Value(value);
    }
    for (const auto& name : topological_order(model)) {
        const VariableDecl* decl = decl_by_lower.at(lower_copy(name));
        env[decl->name] =
            decl->formula ? eval_expression(decl->formula, env) : Value(EvalErrorCode::Unresolved);
    }

    std::map<std::string, Value> result;
    for (const auto& decl : model.declarations) {
        auto it = env.find(decl.name);
        result[decl.name] = it == env.end() ? Value(EvalErrorCode::Unresolved) : it->second;
    }
    return result;
}

namespace {

struct GridCell {
    const CellContent* content = nullptr;
    const Sheet* sheet = nullptr;
};

struct PlanEvaluator {
    const WorkbookPlan& plan;
    std::map<std::string, CellAddress> name_targets;       // lower(name) -> target
    std::map<CellAddress, const CellContent*> grid;        // all cells
    std::map<CellAddress, Value> values;
    std::map<CellAddress, int> state;                      // 0 new, 1 visiting, 2 done

    explicit PlanEvaluator(const WorkbookPlan& plan) : plan(plan) {
        for (const auto& defined : plan.defined_names)
            name_targets.emplace(lower_copy(defined.name), defined.target);
        for (const auto& sheet : plan.sheets)
            for (const auto& [key, content] : sheet.cells)
                grid.emplace(CellAddress{sheet.name, key.second, key.first}, &content);
    }

    CellAddress resolve(const std::string& token, const std::string& sheet) const {
        int column = 0;
        int row = 0;
        if (parse_a1(token, column, row)) return CellAddress{sheet, column, row};
        auto it = name_targets.find(lower_copy(token));
        if (it == name_targets.end())
            throw std::invalid_argument("unresolved name '" + token + "' in sheet '" + sheet +
                                        "'");
        return it->second;
    }

    Value evaluate(const CellAddress& address) {
        if (auto it = values.find(address); it != values.end()) return it->second;
        auto grid_it = grid.find(address);
        if (grid_it == grid.end()) {
            values[address] = Value(EvalErrorCode::Unresolved);
            return values[address];
        }
        const CellContent& content = *grid_it->second;
        if (const auto* number = std::get_if<NumberCell>(&content)) {
            values[address] = Value(number->value);
            return values[address];
        }
        if (std::holds_alternative<TextCell>(content)) {
            values[address] = Value(EvalErrorCode::Unresolved);
            return values[address];
        }
        const auto& formula = std::get<FormulaCell>(content);
        int& mark = state[address];
        if (mark == 1)
            throw std::logic_error("cell dependency cycle at " + address.qualified());
        mark = 1;
        ExprPtr expr = parse_expression(
            std::string_view(formula.text).substr(formula.text.starts_with("=") ? 1 : 0));
        Environment env;
        for (const auto& ref : collect_refs(expr))
            env[ref] = evaluate(resolve(ref, address.sheet));
        Value value = eval_expression(expr, env);
        state[address] = 2;
        values[address] = value;
        return value;
    }
};

}  // namespace

std::map<CellAddress, Value> eval_plan(const WorkbookPlan& plan,
                                       const std::map<std::string, double>& overrides) {
    WorkbookPlan working = plan;
    // Apply overrides to the named input/parameter cells.
    for (const auto& [name, value] : overrides) {
        const DefinedName* defined = working.defined_name(name);
        if (!defined) throw std::invalid_argument("override of unknown name '" + name + "'");
        CellAddress target = defined->target;
        bool applied = false;
        for (auto& sheet : working.sheets) {
            if (sheet.name != target.sheet) continue;
            auto it = sheet.cells.find({target.row, target.column});
            if (it == sheet.cells.end()) break;
            if (auto* number = std::get_if<NumberCell>(&it->second)) {
                number->value = value;
                applied = true;
            }
            break;
        }
        if (!applied)
            throw std::invalid_argument("override target of '" + name +
                                        "' is not an input or parameter cell");
    }

    PlanEvaluator evaluator(working);
    std::map<CellAddress, Value> result;
    for (const auto& sheet : working.sheets) {
        for (const auto& [key, content] : sheet.cells) {
            if (std::holds_alternative<TextCell>(content)) continue;
            CellAddress address{sheet.name, key.second, key.first};
            result[address] = evaluator.evaluate(address);
        }
    }
    return result;
}

WorkbookPlan attach_cached_values(WorkbookPlan plan) {
    std::map<CellAddress, Value> values = eval_plan(plan);
    for (auto& sheet : plan.sheets) {
        for (auto& [key, content] : sheet.cells) {
            auto* formula = std::get_if<FormulaCell>(&content);
            if (!formula) continue;
            auto it = values.find(CellAddress{sheet.name, key.second, key.first});
            if (it == values.end()) continue;
            if (it->second.is_number()) formula->cached = it->second.number();
            else if (it->second.is_bool()) formula->cached = it->second.boolean() ? 1.0 : 0.0;
            // errors stay uncached
        }
    }
    return plan;
}

namespace {

bool values_agree(const Value& a, const Value& b) {
    if (a.is_number() && b.is_number()) {
        double x = a.number();
        double y = b.number();
        if (x == y) return true;
        return std::abs(x - y) <= 1e-12 * std::max(std::abs(x), std::abs(y));
    }
    return a == b;
}

}  // namespace

VerifyReport verify_equivalence(const Model& model, const WorkbookPlan& plan,
                                const std::map<std::string, double>& overrides) {
    VerifyReport report;
    std::map<std::string, Value> expected = eval_model(model, overrides);
    std::map<CellAddress, Value> actual = eval_plan(plan, overrides);

    auto plan_value = [&](const CellAddress& address) -> Value {
        auto it = actual.find(address);
        return it == actual.end() ? Value(EvalErrorCode::Unresolved) : it->second;
    };

    for (const auto& decl : model.declarations) {
        ++report.variables_compared;
        Value model_value = expected.at(decl.name);

        const DefinedName* defined = plan.defined_name(decl.name);
        if (!defined) {
            report.mismatches.push_back(
                {decl.name, "(no defined name)", model_value, Value(EvalErrorCode::Unresolved)});
            continue;
        }
        Value cell_value = plan_value(defined->target);
        if (!values_agree(model_value, cell_value)) {
            report.mismatches.push_back(
                {decl.name, defined->target.qualified(), model_value, cell_value});
        }

        if (decl.kind == VariableKind::InterfaceOutput) {
            // The Interface mirror row must agree as well.
            const Sheet* interface_sheet = plan.sheet("Interface");
            if (interface_sheet) {
                std::string wanted = lower_copy("=" + decl.name);
                for (const auto& [key, content] : interface_sheet->cells) {
                    const auto* formula = std::get_if<FormulaCell>(&content);
                    if (!formula || lower_copy(formula->text) != wanted) continue;
                    CellAddress address{interface_sheet->name, key.second, key.first};
                    Value mirror = plan_value(address);
                    if (!values_agree(model_value, mirror)) {
                        report.mismatches.push_back(
                            {decl.name, address.qualified(), model_value, mirror});
                    }
                }
            }
        }
    }
    report.passed = report.mismatches.empty();
    return report;
}

}  // namespace ssmi

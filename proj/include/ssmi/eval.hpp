#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "ssmi/layout.hpp"
#include "ssmi/model.hpp"

namespace ssmi {

enum class EvalErrorCode { DivZero, BadArg, Unresolved };

/// Evaluation result. Errors are ordinary values: they propagate through
/// every operator and function, except that IF evaluates only the selected
/// branch once its condition is error-free. Numbers are always finite.
struct Value {
    std::variant<double, bool, EvalErrorCode> v;

    Value() : v(0.0) {}
    Value(double d) : v(d) {}
    Value(bool b) : v(b) {}
    Value(EvalErrorCode e) : v(e) {}

    bool operator==(const Value&) const = default;

    bool is_number() const { return std::holds_alternative<double>(v); }
    bool is_bool() const { return std::holds_alternative<bool>(v); }
    bool is_error() const { return std::holds_alternative<EvalErrorCode>(v); }
    double number() const { return std::get<double>(v); }
    bool boolean() const { return std::get<bool>(v); }
    EvalErrorCode error() const { return std::get<EvalErrorCode>(v); }

    /// "786.72", "TRUE", "#DIV/0!", ...
    std::string display() const;
};

using Environment = std::map<std::string, Value>;

Value eval_expression(const ExprPtr& expr, const Environment& env);

/// Evaluate the whole model: environment from initial values (overridden
/// where provided), formula-bearing variables in topological order. Returns
/// a value for every declared variable. Throws std::invalid_argument when an
/// override names a formula-bearing or undeclared variable.
std::map<std::string, Value> eval_model(const Model& model,
                                        const std::map<std::string, double>& overrides = {});

/// Execute the planned cell grid the way a spreadsheet engine would: parse
/// every formula cell, resolve defined names and in-sheet A1 references,
/// evaluate in dependency order. Returns every number- or formula-bearing
/// cell. Throws std::invalid_argument on unresolved names/addresses or (what
/// the planner must make impossible) cyclic cell references.
std::map<CellAddress, Value> eval_plan(const WorkbookPlan& plan,
                                       const std::map<std::string, double>& overrides = {});

/// Run eval_plan with no overrides and store each formula cell's value as
/// its cached value (booleans as 1/0; errors leave the cache empty).
WorkbookPlan attach_cached_values(WorkbookPlan plan);

struct VerifyMismatch {
    std::string variable;
    std::string cell;  // qualified address the plan value came from
    Value model_value;
    Value plan_value;
};

struct VerifyReport {
    bool passed = false;
    int variables_compared = 0;
    std::vector<VerifyMismatch> mismatches;
};

/// The differential oracle: for every declared variable, compare
/// eval_model's value with eval_plan's value at the variable's defined-name
/// target (and, for interface outputs, at the Interface reference cell).
/// Numbers must agree within relative 1e-12; booleans and errors exactly.
VerifyReport verify_equivalence(const Model& model, const WorkbookPlan& plan,
                                const std::map<std::string, double>& overrides = {});

}  // namespace ssmi

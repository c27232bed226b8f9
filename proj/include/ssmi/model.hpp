#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ssmi/expr.hpp"

namespace ssmi {

enum class VariableKind { Parameter, InterfaceInput, Intermediate, InterfaceOutput };

/// Parameter and InterfaceInput carry an initial value; the other two carry
/// a formula. Only Parameters live on the Parameters sheet; only the two
/// Interface kinds appear on the Interface sheet.
bool is_formula_kind(VariableKind kind);

struct NumberFormat {
    enum class Tag { General, Integer, Currency, Percent };
    Tag tag = Tag::General;
    int decimals = 0;  // meaningful for Currency/Percent, range 0..4

    auto operator<=>(const NumberFormat&) const = default;

    static NumberFormat general() { return {Tag::General, 0}; }
    static NumberFormat integer() { return {Tag::Integer, 0}; }
    static NumberFormat currency(int decimals) { return {Tag::Currency, decimals}; }
    static NumberFormat percent(int decimals) { return {Tag::Percent, decimals}; }
};

struct SourceSpan {
    int line = 0;    // 1-based; 0 for programmatically built declarations
    int column = 0;  // 1-based byte column
};

struct VariableDecl {
    std::string name;
    std::string label;  // name with '_' shown as ' '
    VariableKind kind = VariableKind::Parameter;
    ExprPtr formula;                      // Intermediate / InterfaceOutput
    std::optional<double> initial_value;  // Parameter / InterfaceInput
    NumberFormat format;
    std::optional<std::string> submodel;
    SourceSpan span;
};

/// The Formula List: an ordered list of declarations plus optional sub-model
/// grouping. Names are unique case-insensitively and the reference graph is
/// acyclic once validate() reports no errors.
struct Model {
    std::vector<VariableDecl> declarations;
    std::vector<std::string> submodels;  // order of first appearance

    const VariableDecl* find(std::string_view name) const;  // case-insensitive
};

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    std::optional<std::string> variable;
    std::optional<SourceSpan> location;
};

bool has_errors(const std::vector<Diagnostic>& diagnostics);

struct ParseResult {
    std::optional<Model> model;  // present only when diagnostics carry no Error
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return model.has_value(); }
};

/// Parse the model DSL. Aggregates syntax and reference diagnostics with
/// line/column; the Model is returned only when none of them is an Error.
/// Variable references are canonicalized to the declared spelling.
ParseResult parse_model(std::string_view source);

/// The full structural rulebook: duplicate or cell-reference-shaped names,
/// unresolved references, cycles, kind/formula consistency (Errors);
/// constant formulas, unused inputs, missing outputs (Warnings).
std::vector<Diagnostic> validate(const Model& model);

/// Names of the formula-bearing variables, ordered so every definition
/// precedes its uses (Kahn's algorithm, ties broken by declaration order).
/// Throws std::logic_error on a cycle; run validate first.
std::vector<std::string> topological_order(const Model& model);

/// One Warning per golden-rule slot that mixes more than one operator kind.
std::vector<Diagnostic> golden_rule_lint(const Model& model);

/// Serialize back to DSL text; parse_model of the result reproduces the
/// Model exactly.
std::string serialize_model(const Model& model);

/// True when parse_model(serialize_model(a)) would equal b: same
/// declarations (spans ignored), same sub-model grouping.
bool model_equal(const Model& a, const Model& b);

/// ^[A-Za-z_][A-Za-z0-9_.]*$
bool is_valid_identifier(std::string_view name);

/// Shapes that a spreadsheet would read as a cell address instead of a
/// defined name: ^[A-Za-z]{1,3}[0-9]{1,7}$, plus bare "R"/"C",
/// case-insensitive.
bool is_cell_reference_like(std::string_view name);

std::string label_from_name(std::string_view name);  // '_' -> ' '
std::string name_from_label(std::string_view label);  // ' ' -> '_'

}  // namespace ssmi

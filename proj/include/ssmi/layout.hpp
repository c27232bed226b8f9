#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ssmi/model.hpp"

namespace ssmi {

struct CellAddress {
    std::string sheet;
    int column = 1;  // 1 = A
    int row = 1;

    auto operator<=>(const CellAddress&) const = default;

    std::string a1() const;        // "B4"
    std::string qualified() const; // "Model!B4"
    std::string absolute() const;  // "Model!$B$4", sheet quoted when needed
};

std::string column_letters(int column);
int column_index(std::string_view letters);

/// True when `token` is an A1-style address within one sheet ("B4", "AA10").
bool parse_a1(std::string_view token, int& column, int& row);

struct TextCell {
    std::string text;
    bool bold = false;
    bool top_border = false;

    bool operator==(const TextCell&) const = default;
};

struct NumberCell {
    double value = 0.0;
    NumberFormat format;
    bool bold = false;
    bool top_border = false;

    bool operator==(const NumberCell&) const = default;
};

struct FormulaCell {
    std::string text;  // begins with "="
    std::optional<double> cached;
    NumberFormat format;
    bool bold = false;
    bool top_border = false;

    bool operator==(const FormulaCell&) const = default;
};

using CellContent = std::variant<TextCell, NumberCell, FormulaCell>;

struct Sheet {
    std::string name;
    std::map<std::pair<int, int>, CellContent> cells;  // key = (row, column)
    std::vector<double> column_widths;                 // width of column A, B, ...

    bool operator==(const Sheet&) const = default;

    const CellContent* cell(int row, int column) const;
};

/// A workbook-scoped name bound to the single cell where the variable is
/// defined: the Parameters value cell, the Interface input cell, or the
/// Model definition cell.
struct DefinedName {
    std::string name;
    CellAddress target;

    bool operator==(const DefinedName&) const = default;
};

struct WorkbookPlan {
    std::vector<Sheet> sheets;  // Interface first, Parameters last
    std::vector<DefinedName> defined_names;

    bool operator==(const WorkbookPlan&) const = default;

    const Sheet* sheet(std::string_view name) const;
    const DefinedName* defined_name(std::string_view name) const;  // case-insensitive
};

/// One Model-sheet block: the reference part (one row per variable used,
/// each "=Name") above the definition part (one bold, top-bordered row whose
/// formula uses only this block's own column-B reference cells).
struct Block {
    std::string variable;
    std::vector<std::pair<std::string, std::string>> reference_rows;  // (label, defined name)
    std::pair<std::string, std::string> definition_row;               // (label, formula text)
    int start_row = 0;

    int definition_row_index() const {
        return start_row + static_cast<int>(reference_rows.size());
    }
};

/// Lay out one variable's block starting at `start_row`. Reference rows
/// follow collect_refs order; the definition formula binds reference i to
/// B(start_row + i). Throws std::invalid_argument on an unresolved
/// reference or a non-formula variable.
Block plan_block(const VariableDecl& variable, int start_row,
                 const std::map<std::string, DefinedName>& name_table);

/// Turn a display label into a defined name: spaces to underscores. Throws
/// std::invalid_argument when the result is not a legal name or collides
/// with a cell reference.
std::string derive_defined_name(std::string_view label);

/// Transform a validated Model (validate() returned no Errors) into the
/// physical three-tier layout: Interface sheet, one Model sheet per
/// sub-model (a single "Model" sheet when none are declared), Parameters
/// sheet. Formula cells carry no cached values yet; see
/// attach_cached_values.
WorkbookPlan plan_workbook(const Model& model);

}  // namespace ssmi

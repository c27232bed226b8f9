#include "ssmi/layout.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace ssmi {

namespace {

constexpr double kLabelColumnWidth = 24.0;
constexpr double kValueColumnWidth = 14.0;

std::string lower_copy(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](char c) {
        return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    });
    return out;
}

/// Sheet names that are not plain identifier-like tokens are quoted in
/// references: 'Model Distance'!$B$4.
std::string sheet_for_reference(const std::string& name) {
    bool plain = !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0]));
    for (char c : name) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.') plain = false;
    }
    if (plain) return name;
    std::string quoted = "'";
    for (char c : name) {
        if (c == '\'') quoted += "''";
        else quoted += c;
    }
    quoted += "'";
    return quoted;
}

}  // namespace

std::string column_letters(int column) {
    if (column < 1) throw std::invalid_argument("column index must be positive");
    std::string out;
    while (column > 0) {
        int rem = (column - 1) % 26;
        out.insert(out.begin(), static_cast<char>('A' + rem));
        column = (column - 1) / 26;
    }
    return out;
}

int column_index(std::string_view letters) {
    if (letters.empty()) throw std::invalid_argument("empty column letters");
    int value = 0;
    for (char c : letters) {
        if (c < 'A' || c > 'Z') throw std::invalid_argument("bad column letters");
        value = value * 26 + (c - 'A' + 1);
    }
    return value;
}

bool parse_a1(std::string_view token, int& column, int& row) {
    std::size_t letters = 0;
    while (letters < token.size() && token[letters] >= 'A' && token[letters] <= 'Z') ++letters;
    if (letters < 1 || letters > 3 || letters == token.size()) return false;
    long long r = 0;
    for (std::size_t i = letters; i < token.size(); ++i) {
        char c = token[i];
        if (c < '0' || c > '9') return false;
        r = r * 10 + (c - '0');
        if (r > 10'000'000) return false;
    }
    if (r < 1) return false;
    column = column_index(token.substr(0, letters));
    row = static_cast<int>(r);
    return true;
}

std::string CellAddress::a1() const { return column_letters(column) + std::to_string(row); }

std::string CellAddress::qualified() const { return sheet_for_reference(sheet) + "!" + a1(); }

std::string CellAddress::absolute() const {
    return sheet_for_reference(sheet) + "!$" + column_letters(column) + "$" + std::to_string(row);
}

const CellContent* Sheet::cell(int row, int column) const {
    auto it = cells.find({row, column});
    return it == cells.end() ? nullptr : &it->second;
}

const Sheet* WorkbookPlan::sheet(std::string_view name) const {
    for (const auto& sheet : sheets)
        if (sheet.name == name) return &sheet;
    return nullptr;
}

const DefinedName* WorkbookPlan::defined_name(std::string_view name) const {
    std::string key = lower_copy(name);
    for (const auto& defined : defined_names)
        if (lower_copy(defined.name) == key) return &defined;
    return nullptr;
}

std::string derive_defined_name(std::string_view label) {
    if (label.empty()) throw std::invalid_argument("empty label");
    std::string name = name_from_label(label);
    if (!is_valid_identifier(name))
        throw std::invalid_argument("label '" + std::string(label) +
                                    "' does not yield a legal defined name");
    if (is_cell_reference_like(name))
        throw std::invalid_argument("name '" + name + "' collides with a cell reference");
    return name;
}

Block plan_block(const VariableDecl& variable, int start_row,
                 const std::map<std::string, DefinedName>& name_table) {
    if (!variable.formula)
        throw std::invalid_argument("variable '" + variable.name + "' has no formula");
    Block block;
    block.variable = variable.name;
    block.start_row = start_row;

    std::map<std::string, std::string> binding;
    std::vector<std::string> refs = collect_refs(variable.formula);
    for (std::size_t i = 0; i < refs.size(); ++i) {
        const DefinedName* source = nullptr;
        if (auto it = name_table.find(refs[i]); it != name_table.end()) {
            source = &it->second;
        } else {
            std::string key = lower_copy(refs[i]);
            for (const auto& [name, defined] : name_table)
                if (lower_copy(name) == key) source = &defined;
        }
        if (!source)
            throw std::invalid_argument("unresolved reference " + refs[i] + " in block of '" +
                                        variable.name + "'");
        block.reference_rows.emplace_back(label_from_name(source->name), source->name);
        binding[refs[i]] = "B" + std::to_string(start_row + static_cast<int>(i));
    }
    block.definition_row = {variable.label, render_cell_formula(variable.formula, binding)};
    return block;
}

WorkbookPlan plan_workbook(const Model& model) {
    WorkbookPlan plan;

    // Sheet skeleton: Interface, Model sheet(s), Parameters.
    Sheet interface_sheet;
    interface_sheet.name = "Interface";
    interface_sheet.column_widths = {kLabelColumnWidth, kValueColumnWidth};

    bool ungrouped_formula = std::any_of(
        model.declarations.begin(), model.declarations.end(), [](const VariableDecl& d) {
            return is_formula_kind(d.kind) && !d.submodel;
        });
    std::vector<Sheet> model_sheets;
    std::map<std::string, std::size_t> model_sheet_by_submodel;  // lower(submodel) -> index
    auto add_model_sheet = [&](const std::string& name) {
        Sheet sheet;
        sheet.name = name;
        sheet.column_widths = {kLabelColumnWidth, kValueColumnWidth};
        model_sheets.push_back(std::move(sheet));
        return model_sheets.size() - 1;
    };
    std::size_t bare_index = static_cast<std::size_t>(-1);
    if (model.submodels.empty() || ungrouped_formula) bare_index = add_model_sheet("Model");
    for (const auto& submodel : model.submodels)
        model_sheet_by_submodel[lower_copy(submodel)] = add_model_sheet("Model " + submodel);

    Sheet parameters_sheet;
    parameters_sheet.name = "Parameters";
    parameters_sheet.column_widths = {kLabelColumnWidth, kValueColumnWidth};

    // Parameters sheet: one row per Parameter, declaration order, all bold.
    std::map<std::string, DefinedName> name_table;  // canonical name -> defined name
    std::map<std::string, const VariableDecl*> decl_by_name;  // keyed lower-case
    for (const auto& decl : model.declarations)
        decl_by_name.emplace(lower_copy(decl.name), &decl);

    int parameter_row = 1;
    for (const auto& decl : model.declarations) {
        if (decl.kind != VariableKind::Parameter) continue;
        parameters_sheet.cells[{parameter_row, 1}] = TextCell{decl.label, true, false};
        parameters_sheet.cells[{parameter_row, 2}] =
            NumberCell{decl.initial_value.value_or(0.0), decl.format, true, false};
        name_table[decl.name] = DefinedName{decl.name, {"Parameters", 2, parameter_row}};
        ++parameter_row;
    }

    // Interface sheet: Input header, input rows, blank row, Output header,
    // output rows.
    interface_sheet.cells[{1, 1}] = TextCell{"Input", true, false};
    int interface_row = 2;
    for (const auto& decl : model.declarations) {
        if (decl.kind != VariableKind::InterfaceInput) continue;
        interface_sheet.cells[{interface_row, 1}] = TextCell{decl.label, false, false};
        interface_sheet.cells[{interface_row, 2}] =
            NumberCell{decl.initial_value.value_or(0.0), decl.format, true, false};
        name_table[decl.name] = DefinedName{decl.name, {"Interface", 2, interface_row}};
        ++interface_row;
    }
    int output_header_row = interface_row + 1;
    interface_sheet.cells[{output_header_row, 1}] = TextCell{"Output", true, false};

    // Model sheets: blocks in topological order, first block at row 2, one
    // blank row between blocks.
    std::vector<int> next_row(model_sheets.size(), 2);
    for (const auto& name : topological_order(model)) {
        const VariableDecl& decl = *decl_by_name.at(lower_copy(name));
        std::size_t sheet_index = bare_index;
        if (decl.submodel) sheet_index = model_sheet_by_submodel.at(lower_copy(*decl.submodel));
        if (sheet_index == static_cast<std::size_t>(-1))
            throw std::invalid_argument("no Model sheet for variable '" + decl.name + "'");
        Sheet& sheet = model_sheets[sheet_index];

        Block block = plan_block(decl, next_row[sheet_index], name_table);
        for (std::size_t i = 0; i < block.reference_rows.size(); ++i) {
            int row = block.start_row + static_cast<int>(i);
            const auto& [label, source] = block.reference_rows[i];
            const VariableDecl* referenced = decl_by_name.at(lower_copy(source));
            sheet.cells[{row, 1}] = TextCell{label, false, false};
            sheet.cells[{row, 2}] =
                FormulaCell{"=" + source, std::nullopt, referenced->format, false, false};
        }
        int definition_row = block.definition_row_index();
        sheet.cells[{definition_row, 1}] = TextCell{block.definition_row.first, true, true};
        sheet.cells[{definition_row, 2}] =
            FormulaCell{block.definition_row.second, std::nullopt, decl.format, true, true};
        name_table[decl.name] = DefinedName{decl.name, {sheet.name, 2, definition_row}};
        next_row[sheet_index] = definition_row + 2;
    }

    // Interface output rows reference the Model definition cells by name and
    // are themselves unnamed.
    int output_row = output_header_row + 1;
    for (const auto& decl : model.declarations) {
        if (decl.kind != VariableKind::InterfaceOutput) continue;
        interface_sheet.cells[{output_row, 1}] = TextCell{decl.label, false, false};
        interface_sheet.cells[{output_row, 2}] =
            FormulaCell{"=" + decl.name, std::nullopt, decl.format, false, false};
        ++output_row;
    }

    plan.sheets.push_back(std::move(interface_sheet));
    for (auto& sheet : model_sheets) plan.sheets.push_back(std::move(sheet));
    plan.sheets.push_back(std::move(parameters_sheet));

    // Workbook-scoped names in declaration order; collisions are defensive
    // (validate already rejects duplicate names).
    std::set<std::string> seen;
    for (const auto& decl : model.declarations) {
        auto it = name_table.find(decl.name);
        if (it == name_table.end()) continue;  // formula-less declaration
        if (!seen.insert(lower_copy(decl.name)).second)
            throw std::invalid_argument("defined-name collision: " + decl.name);
        plan.defined_names.push_back(it->second);
    }
    return plan;
}

}  // namespace ssmi

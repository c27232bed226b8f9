#include "ssmi/model.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace ssmi {

namespace {

char lower_char(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

std::string lower_copy(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](char c) { return lower_char(c); });
    return out;
}

bool is_ident_start(char c) {
    return c == '_' || std::isalpha(static_cast<unsigned char>(c));
}

bool is_ident_char(char c) {
    return c == '_' || c == '.' || std::isalnum(static_cast<unsigned char>(c));
}

const char* kind_keyword(VariableKind kind) {
    switch (kind) {
        case VariableKind::Parameter: return "param";
        case VariableKind::InterfaceInput: return "input";
        case VariableKind::Intermediate: return "var";
        case VariableKind::InterfaceOutput: return "output";
    }
    return "var";
}

/// Removes an unquoted '#' comment and a trailing '\r'.
std::string_view strip_comment(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        else if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

struct LineCursor {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }
    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }
    int column() const { return static_cast<int>(pos) + 1; }
    char peek() const { return pos < text.size() ? text[pos] : '\0'; }
    bool consume(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    /// Empty result means "no identifier here".
    std::string_view read_ident() {
        skip_ws();
        if (pos >= text.size() || !is_ident_start(text[pos])) return {};
        std::size_t start = pos;
        while (pos < text.size() && is_ident_char(text[pos])) ++pos;
        return text.substr(start, pos - start);
    }
};

struct Parser {
    std::vector<Diagnostic> diagnostics;
    Model model;
    std::optional<std::string> current_submodel;
    int submodel_open_line = 0;

    void error(std::string code, std::string message, int line, int column,
               std::optional<std::string> variable = std::nullopt) {
        diagnostics.push_back({Severity::Error, std::move(code), std::move(message),
                               std::move(variable), SourceSpan{line, column}});
    }

    void note_submodel(const std::string& name) {
        for (const auto& existing : model.submodels)
            if (lower_copy(existing) == lower_copy(name)) return;
        model.submodels.push_back(name);
    }

    void parse_line(std::string_view raw, int line_no) {
        LineCursor cur{strip_comment(raw)};
        if (cur.at_end()) return;

        if (cur.peek() == '}') {
            ++cur.pos;
            if (!current_submodel) {
                error("syntax", "'}' without an open model block", line_no, cur.column() - 1);
            } else {
                current_submodel.reset();
            }
            if (!cur.at_end())
                error("syntax", "unexpected text after '}'", line_no, cur.column());
            return;
        }

        std::size_t kw_pos = (cur.skip_ws(), cur.pos);
        std::string_view keyword = cur.read_ident();
        if (keyword.empty()) {
            error("syntax", "expected a declaration keyword (param, input, var, output, model)",
                  line_no, cur.column());
            return;
        }

        if (keyword == "model") {
            parse_block_open(cur, line_no);
            return;
        }

        VariableKind kind;
        if (keyword == "param") kind = VariableKind::Parameter;
        else if (keyword == "input") kind = VariableKind::InterfaceInput;
        else if (keyword == "var") kind = VariableKind::Intermediate;
        else if (keyword == "output") kind = VariableKind::InterfaceOutput;
        else {
            error("syntax",
                  "unknown keyword '" + std::string(keyword) +
                      "' (expected param, input, var, output, or model)",
                  line_no, static_cast<int>(kw_pos) + 1);
            return;
        }
        parse_declaration(cur, kind, line_no);
    }

    void parse_block_open(LineCursor& cur, int line_no) {
        if (current_submodel) {
            error("syntax", "model blocks cannot nest", line_no, cur.column());
            return;
        }
        cur.skip_ws();
        int name_col = cur.column();
        std::string_view name = cur.read_ident();
        if (name.empty()) {
            error("syntax", "expected a sub-model name after 'model'", line_no, name_col);
            return;
        }
        if (!cur.consume('{')) {
            error("syntax", "expected '{' after the sub-model name", line_no, cur.column());
            return;
        }
        if (!cur.at_end()) {
            error("syntax", "unexpected text after '{'", line_no, cur.column());
            return;
        }
        current_submodel = std::string(name);
        submodel_open_line = line_no;
        note_submodel(*current_submodel);
    }

    void parse_declaration(LineCursor& cur, VariableKind kind, int line_no) {
        cur.skip_ws();
        int name_col = cur.column();
        std::string_view name = cur.read_ident();
        if (name.empty()) {
            error("syntax", "expected a variable name", line_no, name_col);
            return;
        }
        if (!cur.consume('=')) {
            error("syntax", "expected '=' after the variable name", line_no, cur.column(),
                  std::string(name));
            return;
        }

        cur.skip_ws();
        std::size_t expr_start = cur.pos;
        ExprPtr expr;
        std::size_t consumed = 0;
        try {
            expr = parse_expression_prefix(cur.text.substr(expr_start), consumed);
        } catch (const FormulaError& fe) {
            error(fe.code, fe.what(), line_no,
                  static_cast<int>(expr_start + fe.offset) + 1, std::string(name));
            return;
        }
        cur.pos = expr_start + consumed;

        std::optional<NumberFormat> format;
        std::optional<std::string> label;
        if (!parse_clauses(cur, line_no, std::string(name), format, label)) return;

        VariableDecl decl;
        decl.name = std::string(name);
        decl.label = label.value_or(label_from_name(name));
        decl.kind = kind;
        decl.format = format.value_or(NumberFormat::general());
        decl.submodel = current_submodel;
        decl.span = SourceSpan{line_no, name_col};

        if (is_formula_kind(kind)) {
            decl.formula = expr;
        } else if (auto folded = fold_literal(expr)) {
            decl.initial_value = *folded;
        } else {
            decl.formula = expr;  // validate() reports formula-on-input
        }
        model.declarations.push_back(std::move(decl));
    }

    bool parse_clauses(LineCursor& cur, int line_no, const std::string& variable,
                       std::optional<NumberFormat>& format, std::optional<std::string>& label) {
        while (!cur.at_end()) {
            int clause_col = cur.column();
            std::string_view word = cur.read_ident();
            if (word == "format") {
                if (format) {
                    error("syntax", "duplicate format clause", line_no, clause_col, variable);
                    return false;
                }
                if (!parse_format(cur, line_no, variable, format)) return false;
            } else if (word == "label") {
                if (label) {
                    error("syntax", "duplicate label clause", line_no, clause_col, variable);
                    return false;
                }
                if (!parse_label(cur, line_no, variable, label)) return false;
            } else {
                error("syntax", "unexpected text after the declaration", line_no, clause_col,
                      variable);
                return false;
            }
        }
        return true;
    }

    bool parse_format(LineCursor& cur, int line_no, const std::string& variable,
                      std::optional<NumberFormat>& format) {
        cur.skip_ws();
        int col = cur.column();
        std::string_view word = cur.read_ident();
        if (word == "general") {
            format = NumberFormat::general();
            return true;
        }
        if (word == "integer") {
            format = NumberFormat::integer();
            return true;
        }
        if (word != "currency" && word != "percent") {
            error("syntax",
                  "unknown format '" + std::string(word) +
                      "' (expected integer, currency(n), percent(n), or general)",
                  line_no, col, variable);
            return false;
        }
        if (!cur.consume('(')) {
            error("syntax", "expected '(' after format '" + std::string(word) + "'", line_no,
                  cur.column(), variable);
            return false;
        }
        cur.skip_ws();
        int digit_col = cur.column();
        std::size_t start = cur.pos;
        while (cur.pos < cur.text.size() &&
               std::isdigit(static_cast<unsigned char>(cur.text[cur.pos])))
            ++cur.pos;
        std::string digits(cur.text.substr(start, cur.pos - start));
        if (digits.empty() || digits.size() > 1 || digits[0] > '4') {
            error("bad-format", "format decimals must be between 0 and 4", line_no, digit_col,
                  variable);
            return false;
        }
        if (!cur.consume(')')) {
            error("syntax", "expected ')' after the decimals count", line_no, cur.column(),
                  variable);
            return false;
        }
        int decimals = digits[0] - '0';
        format = (word == "currency") ? NumberFormat::currency(decimals)
                                      : NumberFormat::percent(decimals);
        return true;
    }

    bool parse_label(LineCursor& cur, int line_no, const std::string& variable,
                     std::optional<std::string>& label) {
        if (!cur.consume('"')) {
            error("syntax", "expected a quoted string after 'label'", line_no, cur.column(),
                  variable);
            return false;
        }
        std::size_t start = cur.pos;
        while (cur.pos < cur.text.size() && cur.text[cur.pos] != '"') ++cur.pos;
        if (cur.pos >= cur.text.size()) {
            error("syntax", "unterminated label string", line_no, static_cast<int>(start) + 1,
                  variable);
            return false;
        }
        label = std::string(cur.text.substr(start, cur.pos - start));
        ++cur.pos;  // closing quote
        return true;
    }

    static std::optional<double> fold_literal(const ExprPtr& expr) {
        if (!expr) return std::nullopt;
        if (const auto* num = std::get_if<NumberLiteral>(&expr->node)) return num->value;
        if (const auto* neg = std::get_if<UnaryNeg>(&expr->node)) {
            if (auto inner = fold_literal(neg->operand)) return -*inner;
        }
        return std::nullopt;
    }
};

/// Rewrites VariableRefs to the declared spelling; unresolved names are
/// collected (deduplicated, first-use order).
ExprPtr canonicalize_refs(const ExprPtr& expr,
                          const std::map<std::string, const VariableDecl*>& by_lower,
                          std::vector<std::string>& unresolved,
                          std::set<std::string>& unresolved_seen) {
    if (!expr) return expr;
    if (const auto* ref = std::get_if<VariableRef>(&expr->node)) {
        auto it = by_lower.find(lower_copy(ref->name));
        if (it == by_lower.end()) {
            if (unresolved_seen.insert(lower_copy(ref->name)).second)
                unresolved.push_back(ref->name);
            return expr;
        }
        if (it->second->name == ref->name) return expr;
        return make_ref(it->second->name);
    }
    if (const auto* bin = std::get_if<BinaryOp>(&expr->node)) {
        ExprPtr left = canonicalize_refs(bin->left, by_lower, unresolved, unresolved_seen);
        ExprPtr right = canonicalize_refs(bin->right, by_lower, unresolved, unresolved_seen);
        if (left == bin->left && right == bin->right) return expr;
        return make_binary(bin->op, left, right);
    }
    if (const auto* neg = std::get_if<UnaryNeg>(&expr->node)) {
        ExprPtr operand = canonicalize_refs(neg->operand, by_lower, unresolved, unresolved_seen);
        if (operand == neg->operand) return expr;
        return make_neg(operand);
    }
    if (const auto* call = std::get_if<FunctionCall>(&expr->node)) {
        bool changed = false;
        std::vector<ExprPtr> args;
        args.reserve(call->args.size());
        for (const auto& arg : call->args) {
            ExprPtr rewritten = canonicalize_refs(arg, by_lower, unresolved, unresolved_seen);
            changed = changed || rewritten != arg;
            args.push_back(rewritten);
        }
        if (!changed) return expr;
        return make_call(call->name, std::move(args));
    }
    return expr;  // NumberLiteral
}

std::string join_kinds(const std::set<OperatorKind>& kinds) {
    std::string out = "{";
    bool first = true;
    for (const auto& kind : kinds) {
        if (!first) out += ", ";
        out += kind.display();
        first = false;
    }
    out += "}";
    return out;
}

}  // namespace

bool is_formula_kind(VariableKind kind) {
    return kind == VariableKind::Intermediate || kind == VariableKind::InterfaceOutput;
}

const VariableDecl* Model::find(std::string_view name) const {
    std::string key = lower_copy(name);
    for (const auto& decl : declarations)
        if (lower_copy(decl.name) == key) return &decl;
    return nullptr;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

ParseResult parse_model(std::string_view source) {
    Parser parser;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= source.size()) {
        std::size_t end = source.find('\n', start);
        std::string_view line = (end == std::string_view::npos)
                                    ? source.substr(start)
                                    : source.substr(start, end - start);
        ++line_no;
        parser.parse_line(line, line_no);
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    if (parser.current_submodel) {
        parser.error("syntax",
                     "model block '" + *parser.current_submodel + "' is never closed",
                     parser.submodel_open_line, 1);
    }

    // Resolve references case-insensitively and rewrite them to the declared
    // spelling (first declaration wins when duplicates exist).
    std::map<std::string, const VariableDecl*> by_lower;
    for (const auto& decl : parser.model.declarations)
        by_lower.emplace(lower_copy(decl.name), &decl);
    for (auto& decl : parser.model.declarations) {
        if (!decl.formula) continue;
        std::vector<std::string> unresolved;
        std::set<std::string> seen;
        decl.formula = canonicalize_refs(decl.formula, by_lower, unresolved, seen);
        for (const auto& name : unresolved) {
            parser.error("unresolved-ref", "unresolved reference " + name, decl.span.line,
                         decl.span.column, decl.name);
        }
    }

    if (parser.model.declarations.empty() && !has_errors(parser.diagnostics)) {
        parser.diagnostics.push_back(
            {Severity::Warning, "empty-model", "empty model", std::nullopt, std::nullopt});
    }

    ParseResult result;
    result.diagnostics = std::move(parser.diagnostics);
    if (!has_errors(result.diagnostics)) result.model = std::move(parser.model);
    return result;
}

std::vector<Diagnostic> validate(const Model& model) {
    std::vector<Diagnostic> diagnostics;
    auto add = [&](Severity severity, std::string code, std::string message,
                   const VariableDecl* decl) {
        Diagnostic d{severity, std::move(code), std::move(message), std::nullopt, std::nullopt};
        if (decl) {
            d.variable = decl->name;
            if (decl->span.line > 0) d.location = decl->span;
        }
        diagnostics.push_back(std::move(d));
    };

    std::map<std::string, const VariableDecl*> by_lower;
    for (const auto& decl : model.declarations) {
        if (!is_valid_identifier(decl.name)) {
            add(Severity::Error, "bad-name",
                "invalid variable name '" + decl.name + "'", &decl);
        } else if (is_cell_reference_like(decl.name)) {
            add(Severity::Error, "cell-ref-name",
                "name '" + decl.name + "' collides with a cell reference", &decl);
        }
        if (name_from_label(decl.label) != decl.name) {
            add(Severity::Error, "label-mismatch",
                "label \"" + decl.label + "\" does not round-trip to name '" + decl.name + "'",
                &decl);
        }
        if ((decl.format.tag == NumberFormat::Tag::Currency ||
             decl.format.tag == NumberFormat::Tag::Percent) &&
            (decl.format.decimals < 0 || decl.format.decimals > 4)) {
            add(Severity::Error, "bad-format", "format decimals must be between 0 and 4", &decl);
        }

        auto [it, inserted] = by_lower.emplace(lower_copy(decl.name), &decl);
        if (!inserted) {
            add(Severity::Error, "duplicate-name",
                "duplicate name '" + decl.name + "' (also declared as '" + it->second->name +
                    "')",
                &decl);
        }
    }

    for (const auto& decl : model.declarations) {
        if (is_formula_kind(decl.kind)) {
            if (!decl.formula) {
                add(Severity::Error, "missing-formula",
                    std::string(kind_keyword(decl.kind)) + " '" + decl.name +
                        "' is missing a formula",
                    &decl);
                continue;
            }
            for (const auto& ref : collect_refs(decl.formula)) {
                if (!by_lower.count(lower_copy(ref))) {
                    add(Severity::Error, "unresolved-ref", "unresolved reference " + ref, &decl);
                }
            }
        } else {
            if (decl.formula) {
                add(Severity::Error, "formula-on-input",
                    std::string(kind_keyword(decl.kind)) + " '" + decl.name +
                        "' carries a formula; expected a literal value",
                    &decl);
            } else if (!decl.initial_value) {
                add(Severity::Error, "missing-value",
                    std::string(kind_keyword(decl.kind)) + " '" + decl.name +
                        "' is missing an initial value",
                    &decl);
            }
        }
    }

    // First dependency cycle, if any, reported with its path A -> B -> A.
    // 0 = unvisited, 1 = on the current path, 2 = done.
    std::map<std::string, int> color;
    std::vector<const VariableDecl*> path;
    bool cycle_reported = false;
    auto dfs = [&](auto&& self, const VariableDecl* decl) -> bool {
        color[lower_copy(decl->name)] = 1;
        path.push_back(decl);
        if (decl->formula) {
            for (const auto& ref : collect_refs(decl->formula)) {
                auto it = by_lower.find(lower_copy(ref));
                if (it == by_lower.end() || !is_formula_kind(it->second->kind)) continue;
                int state = color[lower_copy(it->second->name)];
                if (state == 1) {
                    std::string message = "dependency cycle: ";
                    auto begin = std::find(path.begin(), path.end(), it->second);
                    for (auto p = begin; p != path.end(); ++p) message += (*p)->name + " -> ";
                    message += it->second->name;
                    add(Severity::Error, "cycle", message, it->second);
                    return true;
                }
                if (state == 0 && self(self, it->second)) return true;
            }
        }
        path.pop_back();
        color[lower_copy(decl->name)] = 2;
        return false;
    };
    for (const auto& decl : model.declarations) {
        if (cycle_reported) break;
        if (!is_formula_kind(decl.kind)) continue;
        if (color[lower_copy(decl.name)] == 0) cycle_reported = dfs(dfs, &decl);
    }

    // Warnings.
    std::set<std::string> referenced;
    for (const auto& decl : model.declarations) {
        if (!decl.formula) continue;
        for (const auto& ref : collect_refs(decl.formula)) referenced.insert(lower_copy(ref));
    }
    for (const auto& decl : model.declarations) {
        if (is_formula_kind(decl.kind) && decl.formula &&
            collect_refs(decl.formula).empty()) {
            add(Severity::Warning, "constant-formula",
                "formula of '" + decl.name + "' has no references; consider a parameter", &decl);
        }
        if (!is_formula_kind(decl.kind) && !referenced.count(lower_copy(decl.name))) {
            add(Severity::Warning, "unused-input",
                std::string(kind_keyword(decl.kind)) + " '" + decl.name + "' is never referenced",
                &decl);
        }
    }
    bool any_output = std::any_of(
        model.declarations.begin(), model.declarations.end(),
        [](const VariableDecl& d) { return d.kind == VariableKind::InterfaceOutput; });
    if (!any_output && !model.declarations.empty()) {
        add(Severity::Warning, "no-output", "model declares no output variable", nullptr);
    }
    return diagnostics;
}

std::vector<std::string> topological_order(const Model& model) {
    std::map<std::string, int> index_by_lower;
    for (std::size_t i = 0; i < model.declarations.size(); ++i)
        index_by_lower.emplace(lower_copy(model.declarations[i].name), static_cast<int>(i));

    std::vector<int> nodes;
    for (std::size_t i = 0; i < model.declarations.size(); ++i)
        if (is_formula_kind(model.declarations[i].kind)) nodes.push_back(static_cast<int>(i));

    std::map<int, std::vector<int>> successors;
    std::map<int, int> indegree;
    for (int node : nodes) indegree[node] = 0;
    for (int node : nodes) {
        const auto& decl = model.declarations[node];
        if (!decl.formula) continue;
        for (const auto& ref : collect_refs(decl.formula)) {
            auto it = index_by_lower.find(lower_copy(ref));
            if (it == index_by_lower.end()) continue;
            int dep = it->second;
            if (!indegree.count(dep)) continue;  // parameter or input
            successors[dep].push_back(node);
            ++indegree[node];
        }
    }

    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int node : nodes)
        if (indegree[node] == 0) ready.push(node);

    std::vector<std::string> order;
    while (!ready.empty()) {
        int node = ready.top();
        ready.pop();
        order.push_back(model.declarations[node].name);
        for (int next : successors[node])
            if (--indegree[next] == 0) ready.push(next);
    }
    if (order.size() != nodes.size())
        throw std::logic_error("topological_order: the model has a dependency cycle");
    return order;
}

std::vector<Diagnostic> golden_rule_lint(const Model& model) {
    std::vector<Diagnostic> diagnostics;
    for (const auto& decl : model.declarations) {
        if (!decl.formula) continue;
        for (const auto& slot : operator_kinds_by_slot(decl.formula)) {
            if (slot.kinds.size() <= 1) continue;
            Diagnostic d{Severity::Warning, "golden-rule",
                         "slot " + slot.path + " mixes operator kinds " + join_kinds(slot.kinds),
                         decl.name, std::nullopt};
            if (decl.span.line > 0) d.location = decl.span;
            diagnostics.push_back(std::move(d));
        }
    }
    return diagnostics;
}

std::string serialize_model(const Model& model) {
    std::ostringstream out;
    std::optional<std::string> open;
    std::set<std::string> emitted_blocks;
    auto close_block = [&] {
        if (open) {
            out << "}\n";
            open.reset();
        }
    };
    for (const auto& decl : model.declarations) {
        if (decl.submodel != open) {
            close_block();
            if (decl.submodel) {
                out << "model " << *decl.submodel << " {\n";
                open = decl.submodel;
                emitted_blocks.insert(lower_copy(*decl.submodel));
            }
        }
        if (open) out << "  ";
        out << kind_keyword(decl.kind) << ' ' << decl.name << " = ";
        if (decl.formula) {
            out << render_canonical(decl.formula);
        } else if (decl.initial_value) {
            out << double_to_text(*decl.initial_value);
        } else {
            out << 0;
        }
        switch (decl.format.tag) {
            case NumberFormat::Tag::General: break;
            case NumberFormat::Tag::Integer: out << " format integer"; break;
            case NumberFormat::Tag::Currency:
                out << " format currency(" << decl.format.decimals << ")";
                break;
            case NumberFormat::Tag::Percent:
                out << " format percent(" << decl.format.decimals << ")";
                break;
        }
        if (decl.label != label_from_name(decl.name))
            out << " label \"" << decl.label << "\"";
        out << '\n';
    }
    close_block();
    for (const auto& submodel : model.submodels) {
        if (!emitted_blocks.count(lower_copy(submodel)))
            out << "model " << submodel << " {\n}\n";
    }
    return out.str();
}

bool model_equal(const Model& a, const Model& b) {
    if (a.submodels != b.submodels) return false;
    if (a.declarations.size() != b.declarations.size()) return false;
    for (std::size_t i = 0; i < a.declarations.size(); ++i) {
        const auto& x = a.declarations[i];
        const auto& y = b.declarations[i];
        if (x.name != y.name || x.label != y.label || x.kind != y.kind ||
            x.format != y.format || x.submodel != y.submodel ||
            x.initial_value != y.initial_value)
            return false;
        if (static_cast<bool>(x.formula) != static_cast<bool>(y.formula)) return false;
        if (x.formula && !expr_equal(x.formula, y.formula)) return false;
    }
    return true;
}

bool is_valid_identifier(std::string_view name) {
    if (name.empty() || !is_ident_start(name[0])) return false;
    return std::all_of(name.begin() + 1, name.end(), is_ident_char);
}

bool is_cell_reference_like(std::string_view name) {
    std::string key = lower_copy(name);
    if (key == "r" || key == "c") return true;
    std::size_t letters = 0;
    while (letters < key.size() && std::isalpha(static_cast<unsigned char>(key[letters])))
        ++letters;
    if (letters < 1 || letters > 3 || letters == key.size()) return false;
    std::size_t digits = key.size() - letters;
    if (digits < 1 || digits > 7) return false;
    return std::all_of(key.begin() + letters, key.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::string label_from_name(std::string_view name) {
    std::string out(name);
    std::replace(out.begin(), out.end(), '_', ' ');
    return out;
}

std::string name_from_label(std::string_view label) {
    std::string out(label);
    std::replace(out.begin(), out.end(), ' ', '_');
    return out;
}

}  // namespace ssmi

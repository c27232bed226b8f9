#include "ssmi/dot.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace ssmi {

namespace {

std::string lower_copy(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](char c) {
        return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    });
    return out;
}

std::string quoted(std::string_view id) {
    std::string out = "\"";
    for (char c : id) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += "\"";
    return out;
}

const char* shape_for(VariableKind kind) {
    switch (kind) {
        case VariableKind::Parameter: return "triangle";
        case VariableKind::InterfaceInput: return "box";
        case VariableKind::Intermediate: return "circle";
        case VariableKind::InterfaceOutput: return "ellipse";
    }
    return "circle";
}

std::string node_line(const VariableDecl& decl) {
    return quoted(decl.name) + " [shape=" + shape_for(decl.kind) + ", label=" +
           quoted(decl.label) + "];";
}

std::string connector_id(const std::string& name) { return name + "__connector"; }

/// Group key: sub-model tag, or "" for ungrouped declarations.
std::string group_of(const VariableDecl& decl) {
    return decl.submodel ? lower_copy(*decl.submodel) : std::string();
}

}  // namespace

std::string emit_dot(const Model& model, bool split_submodels) {
    std::ostringstream out;
    out << "digraph FormulaDiagram {\n";
    out << "  rankdir=LR;\n";

    bool split = split_submodels && !model.submodels.empty();

    if (!split) {
        for (const auto& decl : model.declarations) out << "  " << node_line(decl) << "\n";
    } else {
        for (const auto& submodel : model.submodels) {
            out << "  subgraph " << quoted("cluster_" + submodel) << " {\n";
            out << "    label=" << quoted(submodel) << ";\n";
            for (const auto& decl : model.declarations) {
                if (decl.submodel && lower_copy(*decl.submodel) == lower_copy(submodel))
                    out << "    " << node_line(decl) << "\n";
            }
            out << "  }\n";
        }
        for (const auto& decl : model.declarations) {
            if (!decl.submodel) out << "  " << node_line(decl) << "\n";
        }
    }

    // Variables referenced from another sub-model group are routed through a
    // connector node; first-export order keeps the output deterministic.
    std::vector<const VariableDecl*> exported;
    std::set<std::string> exported_seen;
    if (split) {
        for (const auto& decl : model.declarations) {
            if (!decl.formula) continue;
            for (const auto& ref : collect_refs(decl.formula)) {
                const VariableDecl* source = model.find(ref);
                if (!source || group_of(*source) == group_of(decl)) continue;
                if (exported_seen.insert(lower_copy(source->name)).second)
                    exported.push_back(source);
            }
        }
        for (const VariableDecl* source : exported) {
            out << "  " << quoted(connector_id(source->name))
                << " [shape=doublecircle, label=" << quoted(source->label) << "];\n";
            out << "  " << quoted(source->name) << " -> " << quoted(connector_id(source->name))
                << ";\n";
        }
    }

    for (const auto& decl : model.declarations) {
        if (!decl.formula) continue;
        for (const auto& ref : collect_refs(decl.formula)) {
            const VariableDecl* source = model.find(ref);
            std::string from = source ? source->name : ref;
            if (split && source && group_of(*source) != group_of(decl))
                from = connector_id(source->name);
            out << "  " << quoted(from) << " -> " << quoted(decl.name) << ";\n";
        }
    }

    out << "}\n";
    return out.str();
}

}  // namespace ssmi

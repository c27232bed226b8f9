#include "support/dot_reader.hpp"

#include <cctype>
#include <stdexcept>

namespace testsupport {

namespace {

enum class TokenKind { Identifier, String, Punct, End };

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
};

struct Lexer {
    const std::string& s;
    std::size_t i = 0;
    Token current;

    explicit Lexer(const std::string& text) : s(text) { advance(); }

    [[noreturn]] void fail(const std::string& message) const {
        throw std::runtime_error("dot: " + message + " at offset " + std::to_string(i));
    }

    void advance() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i >= s.size()) {
            current = {TokenKind::End, ""};
            return;
        }
        char c = s[i];
        if (c == '"') {
            ++i;
            std::string text;
            while (true) {
                if (i >= s.size()) fail("unterminated string");
                char d = s[i++];
                if (d == '"') break;
                if (d == '\\') {
                    if (i >= s.size()) fail("dangling escape");
                    char e = s[i++];
                    if (e != '"' && e != '\\') fail("unsupported escape");
                    text += e;
                    continue;
                }
                text += d;
            }
            current = {TokenKind::String, text};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i;
            while (i < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
                ++i;
            current = {TokenKind::Identifier, s.substr(start, i - start)};
            return;
        }
        if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
            i += 2;
            current = {TokenKind::Punct, "->"};
            return;
        }
        if (c == '{' || c == '}' || c == '[' || c == ']' || c == ';' || c == ',' || c == '=') {
            ++i;
            current = {TokenKind::Punct, std::string(1, c)};
            return;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    bool is_punct(const char* text) const {
        return current.kind == TokenKind::Punct && current.text == text;
    }
    void expect_punct(const char* text) {
        if (!is_punct(text)) fail(std::string("expected '") + text + "'");
        advance();
    }
    std::string take_name() {
        if (current.kind != TokenKind::Identifier && current.kind != TokenKind::String)
            fail("expected a name");
        std::string text = current.text;
        advance();
        return text;
    }
};

std::map<std::string, std::string> read_attr_list(Lexer& lex) {
    std::map<std::string, std::string> attrs;
    lex.expect_punct("[");
    if (!lex.is_punct("]")) {
        while (true) {
            std::string key = lex.take_name();
            lex.expect_punct("=");
            std::string value = lex.take_name();
            if (!attrs.emplace(key, value).second) lex.fail("duplicate attribute " + key);
            if (lex.is_punct(",")) {
                lex.advance();
                continue;
            }
            break;
        }
    }
    lex.expect_punct("]");
    return attrs;
}

void read_statements(Lexer& lex, DotGraph& graph, const std::string& cluster);

void read_subgraph(Lexer& lex, DotGraph& graph) {
    std::string id = lex.take_name();
    graph.clusters.emplace(id, std::vector<std::string>{});
    lex.expect_punct("{");
    read_statements(lex, graph, id);
    lex.expect_punct("}");
}

void read_statements(Lexer& lex, DotGraph& graph, const std::string& cluster) {
    while (!lex.is_punct("}") && lex.current.kind != TokenKind::End) {
        if (lex.current.kind == TokenKind::Identifier && lex.current.text == "subgraph") {
            if (!cluster.empty()) lex.fail("nested subgraph");
            lex.advance();
            read_subgraph(lex, graph);
            continue;
        }
        TokenKind head_kind = lex.current.kind;
        std::string head = lex.take_name();
        if (lex.is_punct("=")) {
            // key=value attribute statement.
            if (head_kind != TokenKind::Identifier) lex.fail("attribute name must be bare");
            lex.advance();
            std::string value = lex.take_name();
            if (cluster.empty())
                graph.graph_attrs[head] = value;
            else
                graph.cluster_attrs[cluster][head] = value;
            lex.expect_punct(";");
            continue;
        }
        if (lex.is_punct("->")) {
            lex.advance();
            std::string tail = lex.take_name();
            if (lex.is_punct("[")) read_attr_list(lex);  // edge attrs tolerated, unused
            graph.edges.emplace_back(head, tail);
            lex.expect_punct(";");
            continue;
        }
        // Node statement.
        std::map<std::string, std::string> attrs;
        if (lex.is_punct("[")) attrs = read_attr_list(lex);
        if (!graph.nodes.emplace(head, std::move(attrs)).second)
            lex.fail("node '" + head + "' declared twice");
        if (!cluster.empty()) graph.clusters[cluster].push_back(head);
        lex.expect_punct(";");
    }
}

}  // namespace

int DotGraph::count_shape(const std::string& shape) const {
    int count = 0;
    for (const auto& [id, attrs] : nodes) {
        auto found = attrs.find("shape");
        if (found != attrs.end() && found->second == shape) ++count;
    }
    return count;
}

DotGraph parse_dot(const std::string& text) {
    Lexer lex(text);
    if (lex.current.kind != TokenKind::Identifier || lex.current.text != "digraph")
        lex.fail("expected 'digraph'");
    lex.advance();
    if (lex.current.kind == TokenKind::Identifier || lex.current.kind == TokenKind::String)
        lex.advance();  // optional graph name
    DotGraph graph;
    lex.expect_punct("{");
    read_statements(lex, graph, "");
    lex.expect_punct("}");
    if (lex.current.kind != TokenKind::End) lex.fail("content after closing '}'");
    return graph;
}

}  // namespace testsupport

#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "ssmi/eval.hpp"
#include "ssmi/expr.hpp"
#include "support/model_gen.hpp"

using namespace ssmi;

namespace {

double eval_number(const char* source, const Environment& env = {}) {
    Value value = eval_expression(parse_expression(source), env);
    REQUIRE(value.is_number());
    return value.number();
}

}  // namespace

TEST_SUITE("expr") {

TEST_CASE("precedence and associativity semantics") {
    CHECK(eval_number("2 + 3 * 4") == 14.0);
    CHECK(eval_number("(2 + 3) * 4") == 20.0);
    CHECK(eval_number("10 - 2 - 3") == 5.0);
    CHECK(eval_number("100 / 10 / 5") == 2.0);
    CHECK(eval_number("2 ^ 3 ^ 2") == 512.0);   // right-associative
    CHECK(eval_number("(2 ^ 3) ^ 2") == 64.0);
    CHECK(eval_number("-2 ^ 2") == 4.0);        // unary minus binds tighter than ^
    CHECK(eval_number("-(2 ^ 2)") == -4.0);
    CHECK(eval_number("2 ^ -3") == 0.125);
    CHECK(eval_number("2 * -3") == -6.0);
    CHECK(eval_number("--5") == 5.0);
    CHECK(eval_number("(1 > 0) + (2 > 0)") == 2.0);  // comparison below arithmetic
}

TEST_CASE("comparison is a single non-associative layer") {
    CHECK(eval_expression(parse_expression("1 + 1 > 1"), {}).boolean());
    CHECK_THROWS_AS(parse_expression("1 > 2 > 3"), FormulaError);
}

TEST_CASE("canonical rendering uses minimal parentheses") {
    auto canonical = [](const char* source) {
        return render_canonical(parse_expression(source));
    };
    CHECK(canonical("1 + 2*3") == "1+2*3");
    CHECK(canonical("(1 + 2) * 3") == "(1+2)*3");
    CHECK(canonical("a - b - c") == "a-b-c");
    CHECK(canonical("a - (b - c)") == "a-(b-c)");
    CHECK(canonical("a * (b / c)") == "a*(b/c)");
    CHECK(canonical("2 ^ 3 ^ 2") == "2^3^2");
    CHECK(canonical("(2^3)^2") == "(2^3)^2");
    CHECK(canonical("-2 ^ 2") == "-2^2");
    CHECK(canonical("-(a + b)") == "-(a+b)");
    CHECK(canonical("2 ^ -3") == "2^-3");
    CHECK(canonical("IF(a > b, a - b, 0)") == "IF(a>b,a-b,0)");
    CHECK(canonical("MIN(a, b)") == "MIN(a,b)");
}

TEST_CASE("canonical rendering round-trips structurally") {
    const char* samples[] = {
        "1",           "x",
        "-x",          "a + b * c - d / e",
        "-2^2",        "2^-3",
        "a-(b-c)",     "(a+b)*(c-d)",
        "IF(a >= b, MIN(a, b, 3), ROUND(a / b, 2))",
        "SUM(a, b, c) + MAX(1, 2)",
        "-(a + b) * -(c)",
    };
    for (const char* source : samples) {
        CAPTURE(source);
        ExprPtr tree = parse_expression(source);
        ExprPtr again = parse_expression(render_canonical(tree));
        CHECK(expr_equal(tree, again));
    }
}

TEST_CASE("random formulas round-trip through the canonical renderer") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
        auto generated = testsupport::random_model(rng);
        for (const auto& decl : generated.model.declarations) {
            if (!decl.formula) continue;
            CAPTURE(render_canonical(decl.formula));
            ExprPtr again = parse_expression(render_canonical(decl.formula));
            CHECK(expr_equal(decl.formula, again));
        }
    }
}

TEST_CASE("parse errors carry codes, offsets and hints") {
    auto error_of = [](const char* source) {
        try {
            parse_expression(source);
        } catch (const FormulaError& error) {
            return error;
        }
        FAIL("expected FormulaError for: " << source);
        return FormulaError("", 0, "");
    };
    CHECK(error_of("1 +").code == "syntax");
    CHECK(error_of("(1 + 2").code == "syntax");
    CHECK(error_of("1 2").code == "syntax");
    CHECK(error_of("").code == "syntax");
    CHECK(error_of("FOO(1)").code == "unknown-function");
    CHECK(error_of("IF(1, 2)").code == "bad-arity");
    CHECK(error_of("ROUND(1)").code == "bad-arity");
    CHECK(error_of("ROUND(1, 2, 3)").code == "bad-arity");
    CHECK(error_of("MIN()").code == "bad-arity");

    FormulaError dangling = error_of("1 + ");
    CHECK(dangling.offset <= 4);
    FormulaError unknown = error_of("2 * FOO(1)");
    CHECK(unknown.offset == 4);  // points at the function name
}

TEST_CASE("prefix parsing reports the consumed byte count") {
    std::size_t consumed = 0;
    ExprPtr tree = parse_expression_prefix("a + b format currency(2)", consumed);
    CHECK(render_canonical(tree) == "a+b");
    CHECK(consumed == 6);  // "a + b " — up to the token that stopped the parse

    consumed = 0;
    parse_expression_prefix("42 label \"X\"", consumed);
    CHECK(consumed == 3);
}

TEST_CASE("collect_refs deduplicates in first-use order") {
    CHECK(collect_refs(parse_expression("(Alpha + Beta) * Alpha")) ==
          std::vector<std::string>{"Alpha", "Beta"});
    CHECK(collect_refs(parse_expression("IF(C > B, A, B)")) ==
          std::vector<std::string>{"C", "B", "A"});
    CHECK(collect_refs(parse_expression("1 + 2")).empty());
}

TEST_CASE("operator kinds are grouped per IF-argument slot") {
    auto slots = operator_kinds_by_slot(
        parse_expression("IF(A > B, A - B, MIN(A, 2) * C) + D * E"));
    REQUIRE(slots.size() == 4);
    CHECK(slots[0].path == "top");
    CHECK(slots[0].kinds.size() == 3);  // +, *, IF
    CHECK(slots[0].kinds.count(OperatorKind::of(BinOp::Plus)) == 1);
    CHECK(slots[0].kinds.count(OperatorKind::of(BinOp::Times)) == 1);
    CHECK(slots[0].kinds.count(OperatorKind::function("IF")) == 1);
    CHECK(slots[1].path == "top.if1.cond");
    CHECK(slots[1].kinds == std::set<OperatorKind>{OperatorKind::of(BinOp::Gt)});
    CHECK(slots[2].path == "top.if1.then");
    CHECK(slots[2].kinds == std::set<OperatorKind>{OperatorKind::of(BinOp::Minus)});
    CHECK(slots[3].path == "top.if1.else");
    CHECK(slots[3].kinds.size() == 2);  // *, MIN — non-IF calls do not open slots

    // Single-kind formulas produce no multi-kind slot at all.
    for (const auto& slot : operator_kinds_by_slot(parse_expression("a + b + c")))
        CHECK(slot.kinds.size() <= 1);

    // Unary minus counts as the minus kind.
    auto negated = operator_kinds_by_slot(parse_expression("-a - b"));
    REQUIRE(negated.size() == 1);
    CHECK(negated[0].kinds == std::set<OperatorKind>{OperatorKind::of(BinOp::Minus)});
}

TEST_CASE("cell formula rendering binds references and keeps parentheses") {
    std::map<std::string, std::string> binding{
        {"Total_Distance", "B6"}, {"Total_Allowance", "B7"}};
    CHECK(render_cell_formula(
              parse_expression(
                  "IF(Total_Distance > Total_Allowance, Total_Distance - Total_Allowance, 0)"),
              binding) == "=IF(B6>B7,B6-B7,0)");

    CHECK(render_cell_formula(parse_expression("(A + B) * C"),
                              {{"A", "B2"}, {"B", "B3"}, {"C", "B4"}}) == "=(B2+B3)*B4");

    CHECK_THROWS_AS(render_cell_formula(parse_expression("Missing + 1"), {}), FormulaError);
    try {
        render_cell_formula(parse_expression("Missing + 1"), {});
    } catch (const FormulaError& error) {
        CHECK(error.code == "unbound-ref");
    }
}

TEST_CASE("display rendering is spaced, labeled and localized") {
    CHECK(render_display(parse_expression("Nb_Days * Daily_Rate")) ==
          "= Nb Days * Daily Rate");
    CHECK(render_display(
              parse_expression("IF(Total_Distance > Total_Allowance, "
                               "Total_Distance - Total_Allowance, 0.5)"),
              DisplayLocale::Fr) ==
          "= IF(Total Distance > Total Allowance; Total Distance - Total Allowance; 0,5)");
    CHECK(render_display(parse_expression("MIN(a, 1.5)")) == "= MIN(a, 1.5)");
}

TEST_CASE("double_to_text is the shortest round-tripping form") {
    CHECK(double_to_text(58.0) == "58");
    CHECK(double_to_text(0.36) == "0.36");
    CHECK(double_to_text(252.0 * 0.36 + 696.0) == "786.72");
    CHECK(double_to_text(0.1) == "0.1");
    CHECK(double_to_text(1234567.0) == "1234567");

    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> dist(-1e9, 1e9);
    for (int i = 0; i < 2000; ++i) {
        double value = dist(rng);
        CHECK(std::stod(double_to_text(value)) == value);
    }
}

TEST_CASE("expression builders compare structurally") {
    ExprPtr built = make_binary(BinOp::Plus, make_ref("a"),
                                make_call("MIN", {make_ref("b"), make_number(2)}));
    CHECK(expr_equal(built, parse_expression("a + MIN(b, 2)")));
    CHECK_FALSE(expr_equal(built, parse_expression("a + MIN(b, 3)")));
    CHECK_FALSE(expr_equal(built, parse_expression("a + MAX(b, 2)")));
    CHECK(expr_equal(make_neg(make_number(2)), parse_expression("-2")));
}

TEST_CASE("function registry pins the supported arities") {
    const auto& registry = function_registry();
    REQUIRE(registry.count("IF") == 1);
    CHECK(registry.at("IF").min_args == 3);
    CHECK(registry.at("IF").max_args == 3);
    CHECK(registry.at("ROUND").min_args == 2);
    CHECK(registry.at("ROUND").max_args == 2);
    CHECK(registry.at("MIN").min_args == 1);
    CHECK(registry.at("MIN").max_args < 0);
    CHECK(registry.at("MAX").min_args == 1);
    CHECK(registry.at("SUM").min_args == 1);
    CHECK(registry.count("FOO") == 0);
}

}  // TEST_SUITE

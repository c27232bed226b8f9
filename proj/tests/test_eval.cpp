#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "ssmi/eval.hpp"
#include "ssmi/layout.hpp"
#include "support/model_gen.hpp"
#include "support/proc.hpp"

using namespace ssmi;

namespace {

Model load_fixture(const std::string& name) {
    std::ifstream file(testsupport::fixture_path(name));
    REQUIRE(file.good());
    std::ostringstream buffer;
    buffer << file.rdbuf();
    ParseResult parsed = parse_model(buffer.str());
    REQUIRE(parsed.ok());
    return *parsed.model;
}

Value eval_src(const char* source, const Environment& env = {}) {
    return eval_expression(parse_expression(source), env);
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("the fixture model reproduces the worked example exactly") {
    Model model = load_fixture("car_rental.ssmi");
    auto values = eval_model(model);
    REQUIRE(values.size() == 10);
    CHECK(values.at("Daily_Cost").number() == 12.0 * 58.0);
    CHECK(values.at("Total_Allowance").number() == 1200.0);
    CHECK(values.at("Surplus_Distance").number() == 252.0);
    CHECK(values.at("Surplus_Dist_Cost").number() == 252.0 * 0.36);
    CHECK(values.at("Rental_Cost").number() == 252.0 * 0.36 + 696.0);
    CHECK(values.at("Daily_Rate").number() == 58.0);
}

TEST_CASE("overrides replace initial values by defined name") {
    Model model = load_fixture("car_rental.ssmi");
    auto values = eval_model(model, {{"Nb_Days", 10}, {"Total_Distance", 900}});
    CHECK(values.at("Daily_Cost").number() == 580.0);
    CHECK(values.at("Surplus_Distance").number() == 0.0);
    CHECK(values.at("Rental_Cost").number() == 580.0);

    // Case-insensitive override spelling binds to the declared variable.
    auto ci = eval_model(model, {{"nb_days", 10}});
    CHECK(ci.at("Daily_Cost").number() == 580.0);

    CHECK_THROWS_AS(eval_model(model, {{"Daily_Cost", 5}}), std::invalid_argument);
    CHECK_THROWS_AS(eval_model(model, {{"Nope", 5}}), std::invalid_argument);
}

TEST_CASE("IF evaluates only the selected branch") {
    CHECK(eval_src("IF(1 > 0, 5, 1 / 0)").number() == 5.0);
    CHECK(eval_src("IF(0 > 1, 1 / 0, 7)").number() == 7.0);
    // A nonzero numeric condition selects the then-branch.
    CHECK(eval_src("IF(2, 10, 20)").number() == 10.0);
    CHECK(eval_src("IF(0, 10, 20)").number() == 20.0);
    // An error condition poisons the whole IF even with safe branches.
    CHECK(eval_src("IF(1 / 0, 1, 2)").error() == EvalErrorCode::DivZero);
}

TEST_CASE("errors propagate left to right and stringify like a spreadsheet") {
    CHECK(eval_src("1 / 0").error() == EvalErrorCode::DivZero);
    CHECK(eval_src("0 ^ -1").error() == EvalErrorCode::DivZero);
    CHECK(eval_src("10 ^ 400").error() == EvalErrorCode::BadArg);   // overflow
    CHECK(eval_src("(-1) ^ 0.5").error() == EvalErrorCode::BadArg); // NaN
    CHECK(eval_src("MIN(1 / 0, 10 ^ 400)").error() == EvalErrorCode::DivZero);
    CHECK(eval_src("10 ^ 400 + 1 / 0").error() == EvalErrorCode::BadArg);
    CHECK(eval_src("Ghost + 1").error() == EvalErrorCode::Unresolved);

    CHECK(Value(1.0 / 3).display() == double_to_text(1.0 / 3));
    CHECK(Value(true).display() == "TRUE");
    CHECK(Value(false).display() == "FALSE");
    CHECK(Value(EvalErrorCode::DivZero).display() == "#DIV/0!");
    CHECK(Value(EvalErrorCode::BadArg).display() == "#NUM!");
    CHECK(Value(EvalErrorCode::Unresolved).display() == "#NAME?");
}

TEST_CASE("booleans coerce to numbers in arithmetic") {
    CHECK(eval_src("(1 > 0) + (2 > 0)").number() == 2.0);
    CHECK(eval_src("(1 > 2) * 5").number() == 0.0);
    CHECK(eval_src("-(1 > 0)").number() == -1.0);
    CHECK(eval_src("5 > 3").boolean());
    CHECK_FALSE(eval_src("5 = 3").boolean());
    CHECK(eval_src("5 <> 3").boolean());
    CHECK(eval_src("(1 > 0) = 1").boolean());  // comparison coerces too
}

TEST_CASE("functions follow spreadsheet semantics") {
    CHECK(eval_src("MIN(3, 1, 2)").number() == 1.0);
    CHECK(eval_src("MAX(3, 1, 2)").number() == 3.0);
    CHECK(eval_src("SUM(1, 2, 3)").number() == 6.0);
    CHECK(eval_src("SUM(42)").number() == 42.0);
    CHECK(eval_src("ROUND(2.5, 0)").number() == 3.0);    // half away from zero
    CHECK(eval_src("ROUND(-2.5, 0)").number() == -3.0);
    CHECK(eval_src("ROUND(0.125, 2)").number() == 0.13);
    CHECK(eval_src("ROUND(1234.5678, 2)").number() == 1234.57);
    CHECK(eval_src("ROUND(1250, -2)").number() == 1300.0);  // negative digits
}

TEST_CASE("evaluation is total over generated models") {
    std::mt19937_64 rng(555);
    for (int i = 0; i < 200; ++i) {
        auto generated = testsupport::random_model(rng);
        auto values = eval_model(generated.model);  // must not throw
        CHECK(values.size() == generated.model.declarations.size());
        for (const auto& [name, value] : values) {
            if (value.is_number()) CHECK(std::isfinite(value.number()));
        }
    }
}

TEST_CASE("eval_plan executes the planned grid like a spreadsheet") {
    Model model = load_fixture("car_rental.ssmi");
    WorkbookPlan plan = plan_workbook(model);
    auto cells = eval_plan(plan);
    CHECK(cells.at({"Model", 2, 20}).number() == 252.0 * 0.36 + 696.0);
    CHECK(cells.at({"Interface", 2, 6}).number() == 252.0 * 0.36 + 696.0);
    CHECK(cells.at({"Parameters", 2, 1}).number() == 58.0);

    auto overridden = eval_plan(plan, {{"Nb_Days", 10}, {"Total_Distance", 900}});
    CHECK(overridden.at({"Model", 2, 20}).number() == 580.0);

    CHECK_THROWS_AS(eval_plan(plan, {{"Rental_Cost", 1}}), std::invalid_argument);
}

TEST_CASE("eval_plan surfaces planner bugs instead of hiding them") {
    Model model = load_fixture("car_rental.ssmi");
    WorkbookPlan good = plan_workbook(model);

    // A formula referencing a label cell yields an unresolved value.
    WorkbookPlan text_ref = good;
    for (auto& sheet : text_ref.sheets) {
        if (sheet.name != "Model") continue;
        auto it = sheet.cells.find({4, 2});  // Daily_Cost definition "=B2*B3"
        REQUIRE(it != sheet.cells.end());
        std::get<FormulaCell>(it->second).text = "=A2*B3";  // A2 is a label
    }
    auto values = eval_plan(text_ref);
    CHECK(values.at({"Model", 2, 4}).error() == EvalErrorCode::Unresolved);

    // An unknown name token is a structural failure, not a value.
    WorkbookPlan bad_name = good;
    for (auto& sheet : bad_name.sheets) {
        if (sheet.name != "Model") continue;
        std::get<FormulaCell>(sheet.cells.at({2, 2})).text = "=No_Such_Name";
    }
    CHECK_THROWS_AS(eval_plan(bad_name), std::invalid_argument);

    // A reference cycle in the grid throws rather than looping.
    WorkbookPlan cyclic = good;
    for (auto& sheet : cyclic.sheets) {
        if (sheet.name != "Model") continue;
        std::get<FormulaCell>(sheet.cells.at({4, 2})).text = "=B4+1";
    }
    CHECK_THROWS_AS(eval_plan(cyclic), std::logic_error);
}

TEST_CASE("attach_cached_values caches numbers and booleans") {
    Model model = load_fixture("car_rental.ssmi");
    WorkbookPlan plan = attach_cached_values(plan_workbook(model));
    const Sheet* sheet = plan.sheet("Model");
    REQUIRE(sheet != nullptr);
    const auto* definition = std::get_if<FormulaCell>(sheet->cell(20, 2));
    REQUIRE(definition != nullptr);
    REQUIRE(definition->cached.has_value());
    CHECK(*definition->cached == 252.0 * 0.36 + 696.0);

    const Sheet* interface_sheet = plan.sheet("Interface");
    const auto* mirror = std::get_if<FormulaCell>(interface_sheet->cell(6, 2));
    REQUIRE(mirror != nullptr);
    CHECK(mirror->cached == definition->cached);
}

TEST_CASE("verify_equivalence passes the fixture and all its overrides") {
    Model model = load_fixture("car_rental.ssmi");
    WorkbookPlan plan = plan_workbook(model);
    VerifyReport report = verify_equivalence(model, plan);
    CHECK(report.passed);
    CHECK(report.variables_compared == 10);
    CHECK(report.mismatches.empty());
    CHECK(verify_equivalence(model, plan, {{"Nb_Days", 10}, {"Total_Distance", 900}}).passed);
}

TEST_CASE("verify_equivalence catches a corrupted plan and names the variable") {
    Model model = load_fixture("car_rental.ssmi");
    WorkbookPlan corrupted = plan_workbook(model);
    for (auto& sheet : corrupted.sheets) {
        if (sheet.name != "Model") continue;
        // Surplus_Distance definition: swap the subtraction operands.
        auto& cell = std::get<FormulaCell>(sheet.cells.at({12, 2}));
        REQUIRE(cell.text == "=IF(B10>B11,B10-B11,0)");
        cell.text = "=IF(B10>B11,B11-B10,0)";
    }
    VerifyReport report = verify_equivalence(model, corrupted);
    CHECK_FALSE(report.passed);
    REQUIRE_FALSE(report.mismatches.empty());
    bool named = false;
    for (const auto& mismatch : report.mismatches)
        if (mismatch.variable == "Surplus_Distance" && mismatch.cell == "Model!B12")
            named = true;
    CHECK(named);
}

TEST_CASE("the numeric tolerance window is relative 1e-12") {
    Model model = load_fixture("car_rental.ssmi");

    auto scaled = [&](const char* factor) {
        WorkbookPlan plan = plan_workbook(model);
        for (auto& sheet : plan.sheets) {
            if (sheet.name != "Model") continue;
            auto& cell = std::get<FormulaCell>(sheet.cells.at({20, 2}));
            cell.text = "=(B18+B19)*" + std::string(factor);
        }
        return verify_equivalence(model, plan);
    };
    CHECK(scaled("1.0000000000000995").passed);  // ~1e-13 relative: inside
    CHECK_FALSE(scaled("1.000000001").passed);   // 1e-9 relative: outside
}

TEST_CASE("differential law holds across random models and overrides") {
    std::mt19937_64 rng(777);
    for (int i = 0; i < 100; ++i) {
        auto generated = testsupport::random_model(rng);
        WorkbookPlan plan = plan_workbook(generated.model);
        for (int trial = 0; trial < 5; ++trial) {
            auto overrides = testsupport::random_overrides(generated.model, rng);
            VerifyReport report = verify_equivalence(generated.model, plan, overrides);
            if (!report.passed) {
                CAPTURE(generated.source);
                for (const auto& mismatch : report.mismatches) {
                    CAPTURE(mismatch.variable);
                    CAPTURE(mismatch.model_value.display());
                    CAPTURE(mismatch.plan_value.display());
                }
            }
            CHECK(report.passed);
        }
    }
}

}  // TEST_SUITE

#include "ssmi/cli.hpp"

#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ssmi/dot.hpp"
#include "ssmi/eval.hpp"
#include "ssmi/model.hpp"
#include "ssmi/xlsx.hpp"

namespace ssmi::cli {

namespace {

using nlohmann::ordered_json;

// Seed for the override vectors `build` verifies internally before writing.
constexpr std::uint64_t kBuildVerifySeed = 1729;
constexpr int kBuildVerifyTrials = 8;

bool use_color() {
    return isatty(fileno(stderr)) != 0 && std::getenv("SSMI_NO_COLOR") == nullptr;
}

std::string severity_tag(Severity severity) {
    bool color = use_color();
    if (severity == Severity::Error)
        return color ? "\033[31merror\033[0m" : "error";
    return color ? "\033[33mwarning\033[0m" : "warning";
}

bool read_file(const std::string& path, std::string& out) {
    std::ifstream file(path, std::ios::binary);
    if (!file) return false;
    std::ostringstream buffer;
    buffer << file.rdbuf();
    out = buffer.str();
    return true;
}

DisplayLocale locale_from_flag(const std::string& flag) {
    return flag == "fr" ? DisplayLocale::Fr : DisplayLocale::En;
}

/// Golden-rule warnings carry the offending formula in display notation so
/// the user sees what the lint is talking about.
void enrich_lint(std::vector<Diagnostic>& diagnostics, const Model& model,
                 DisplayLocale locale) {
    for (auto& diagnostic : diagnostics) {
        if (diagnostic.code != "golden-rule" || !diagnostic.variable) continue;
        const VariableDecl* decl = model.find(*diagnostic.variable);
        if (decl && decl->formula)
            diagnostic.message += "; formula: " + render_display(decl->formula, locale);
    }
}

void print_diagnostics(const std::string& file, const std::vector<Diagnostic>& diagnostics) {
    for (const auto& diagnostic : diagnostics) {
        std::ostringstream line;
        line << file << ":";
        if (diagnostic.location)
            line << diagnostic.location->line << ":" << diagnostic.location->column << ":";
        line << " " << severity_tag(diagnostic.severity) << " [" << diagnostic.code << "] "
             << diagnostic.message;
        if (diagnostic.variable && diagnostic.message.find(*diagnostic.variable) ==
                                       std::string::npos)
            line << " (" << *diagnostic.variable << ")";
        std::cerr << line.str() << "\n";
    }
}

ordered_json diagnostics_json(const std::vector<Diagnostic>& diagnostics) {
    ordered_json array = ordered_json::array();
    for (const auto& diagnostic : diagnostics) {
        ordered_json entry;
        entry["severity"] = diagnostic.severity == Severity::Error ? "error" : "warning";
        entry["code"] = diagnostic.code;
        entry["message"] = diagnostic.message;
        if (diagnostic.variable) entry["variable"] = *diagnostic.variable;
        if (diagnostic.location) {
            entry["line"] = diagnostic.location->line;
            entry["column"] = diagnostic.location->column;
        }
        array.push_back(std::move(entry));
    }
    return array;
}

int count_severity(const std::vector<Diagnostic>& diagnostics, Severity severity) {
    int count = 0;
    for (const auto& diagnostic : diagnostics)
        if (diagnostic.severity == severity) ++count;
    return count;
}

/// Parse a model file; on failure prints diagnostics (or JSON when asked)
/// and leaves `exit_code` set.
struct LoadedModel {
    std::string source;
    Model model;
    std::vector<Diagnostic> parse_diagnostics;
};

bool load_model(const std::string& path, LoadedModel& out, int& exit_code, bool quiet = false) {
    if (!read_file(path, out.source)) {
        std::cerr << "error: cannot read '" << path << "'\n";
        exit_code = kUsageError;
        return false;
    }
    ParseResult parsed = parse_model(out.source);
    out.parse_diagnostics = parsed.diagnostics;
    if (!parsed.ok()) {
        if (!quiet) print_diagnostics(path, parsed.diagnostics);
        exit_code = kValidationError;
        return false;
    }
    out.model = std::move(*parsed.model);
    return true;
}

std::string format_value(const VariableDecl& decl, const Value& value) {
    if (!value.is_number()) return value.display();
    double number = value.number();
    int decimals = -1;
    switch (decl.format.tag) {
        case NumberFormat::Tag::General: break;
        case NumberFormat::Tag::Integer: decimals = 0; break;
        case NumberFormat::Tag::Currency: decimals = decl.format.decimals; break;
        case NumberFormat::Tag::Percent: decimals = decl.format.decimals; break;
    }
    if (decimals < 0) return double_to_text(number);
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*f", decimals, number);
    return buffer;
}

std::map<std::string, double> random_overrides(const Model& model, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1000.0, 1000.0);
    std::map<std::string, double> overrides;
    for (const auto& decl : model.declarations)
        if (!is_formula_kind(decl.kind)) overrides[decl.name] = dist(rng);
    return overrides;
}

/// Differential run: base vector plus `trials` random vectors. Returns the
/// failing reports (empty = equivalent).
std::vector<std::pair<int, VerifyReport>> run_verification(const Model& model,
                                                           const WorkbookPlan& plan,
                                                           int trials, std::uint64_t seed) {
    std::vector<std::pair<int, VerifyReport>> failures;
    VerifyReport base = verify_equivalence(model, plan);
    if (!base.passed) failures.emplace_back(0, base);
    std::mt19937_64 rng(seed);
    for (int trial = 1; trial <= trials; ++trial) {
        VerifyReport report = verify_equivalence(model, plan, random_overrides(model, rng));
        if (!report.passed) failures.emplace_back(trial, report);
    }
    return failures;
}

void print_failures(const std::vector<std::pair<int, VerifyReport>>& failures) {
    for (const auto& [trial, report] : failures) {
        for (const auto& mismatch : report.mismatches) {
            std::cerr << "verification mismatch (run " << trial << "): " << mismatch.variable
                      << " at " << mismatch.cell << ": model=" << mismatch.model_value.display()
                      << " grid=" << mismatch.plan_value.display() << "\n";
        }
    }
}

int cmd_check(const std::string& path, bool strict, bool json_output) {
    LoadedModel loaded;
    int exit_code = kOk;
    if (!load_model(path, loaded, exit_code, json_output)) {
        if (json_output && exit_code == kValidationError) {
            ordered_json doc;
            doc["file"] = path;
            doc["ok"] = false;
            doc["errors"] = count_severity(loaded.parse_diagnostics, Severity::Error);
            doc["warnings"] = count_severity(loaded.parse_diagnostics, Severity::Warning);
            doc["diagnostics"] = diagnostics_json(loaded.parse_diagnostics);
            std::cout << doc.dump(2) << "\n";
        }
        return exit_code;
    }

    std::vector<Diagnostic> diagnostics = loaded.parse_diagnostics;
    std::vector<Diagnostic> validation = validate(loaded.model);
    diagnostics.insert(diagnostics.end(), validation.begin(), validation.end());
    std::vector<Diagnostic> lint = golden_rule_lint(loaded.model);
    enrich_lint(lint, loaded.model, DisplayLocale::En);
    diagnostics.insert(diagnostics.end(), lint.begin(), lint.end());

    int errors = count_severity(diagnostics, Severity::Error);
    int warnings = count_severity(diagnostics, Severity::Warning);
    bool failed = errors > 0 || (strict && warnings > 0);

    if (json_output) {
        ordered_json doc;
        doc["file"] = path;
        doc["ok"] = errors == 0;
        doc["errors"] = errors;
        doc["warnings"] = warnings;
        doc["diagnostics"] = diagnostics_json(diagnostics);
        std::cout << doc.dump(2) << "\n";
    } else {
        print_diagnostics(path, diagnostics);
        if (errors == 0 && warnings == 0)
            std::cout << path << ": OK (" << loaded.model.declarations.size()
                      << " declarations)\n";
    }
    return failed ? kValidationError : kOk;
}

int cmd_build(const std::string& path, const std::string& destination,
              const std::string& currency_symbol, const std::string& locale_flag) {
    LoadedModel loaded;
    int exit_code = kOk;
    if (!load_model(path, loaded, exit_code)) return exit_code;

    std::vector<Diagnostic> diagnostics = validate(loaded.model);
    std::vector<Diagnostic> lint = golden_rule_lint(loaded.model);
    enrich_lint(lint, loaded.model, locale_from_flag(locale_flag));
    diagnostics.insert(diagnostics.end(), lint.begin(), lint.end());
    print_diagnostics(path, diagnostics);
    if (has_errors(diagnostics)) return kValidationError;

    WorkbookPlan plan = plan_workbook(loaded.model);
    auto failures = run_verification(loaded.model, plan, kBuildVerifyTrials, kBuildVerifySeed);
    if (!failures.empty()) {
        print_failures(failures);
        std::cerr << "error: internal verification failed; refusing to write '" << destination
                  << "'\n";
        return kVerificationFailed;
    }

    XlsxOptions options;
    options.currency_symbol = currency_symbol;
    try {
        emit_xlsx(attach_cached_values(plan), destination, options);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kUsageError;
    }
    std::cout << "wrote " << destination << " (" << plan.sheets.size() << " sheets, "
              << plan.defined_names.size() << " defined names, " << (kBuildVerifyTrials + 1)
              << " verification runs)\n";
    return kOk;
}

int cmd_diagram(const std::string& path, const std::string& destination, bool split) {
    LoadedModel loaded;
    int exit_code = kOk;
    if (!load_model(path, loaded, exit_code)) return exit_code;

    std::vector<Diagnostic> diagnostics = validate(loaded.model);
    print_diagnostics(path, diagnostics);
    if (has_errors(diagnostics)) return kValidationError;

    std::string dot = emit_dot(loaded.model, split);
    if (destination.empty()) {
        std::cout << dot;
        return kOk;
    }
    std::ofstream file(destination, std::ios::binary | std::ios::trunc);
    if (!file) {
        std::cerr << "error: cannot open '" << destination << "' for writing\n";
        return kUsageError;
    }
    file << dot;
    if (!file) {
        std::cerr << "error: failed writing '" << destination << "'\n";
        return kUsageError;
    }
    return kOk;
}

int cmd_eval(const std::string& path, const std::vector<std::string>& assignments,
             bool json_output) {
    LoadedModel loaded;
    int exit_code = kOk;
    if (!load_model(path, loaded, exit_code)) return exit_code;

    std::vector<Diagnostic> diagnostics = validate(loaded.model);
    print_diagnostics(path, diagnostics);
    if (has_errors(diagnostics)) return kValidationError;

    std::map<std::string, double> overrides;
    for (const auto& assignment : assignments) {
        std::size_t equals = assignment.find('=');
        if (equals == std::string::npos || equals == 0) {
            std::cerr << "error: --set expects Name=value, got '" << assignment << "'\n";
            return kUsageError;
        }
        std::string name = assignment.substr(0, equals);
        std::string text = assignment.substr(equals + 1);
        errno = 0;
        char* end = nullptr;
        double value = std::strtod(text.c_str(), &end);
        if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE ||
            !std::isfinite(value)) {
            std::cerr << "error: --set " << name << " needs a finite number, got '" << text
                      << "'\n";
            return kUsageError;
        }
        overrides[name] = value;
    }

    std::map<std::string, Value> values;
    try {
        values = eval_model(loaded.model, overrides);
    } catch (const std::invalid_argument& error) {
        std::cerr << "error: " << error.what() << "\n";
        return kUsageError;
    }

    if (json_output) {
        ordered_json doc;
        doc["file"] = path;
        ordered_json list = ordered_json::array();
        for (const auto& decl : loaded.model.declarations) {
            const Value& value = values.at(decl.name);
            ordered_json entry;
            entry["name"] = decl.name;
            if (value.is_number()) entry["value"] = value.number();
            else if (value.is_bool()) entry["value"] = value.boolean();
            else entry["error"] = value.display();
            entry["display"] = format_value(decl, value);
            list.push_back(std::move(entry));
        }
        doc["values"] = std::move(list);
        std::cout << doc.dump(2) << "\n";
    } else {
        for (const auto& decl : loaded.model.declarations)
            std::cout << decl.name << " " << format_value(decl, values.at(decl.name)) << "\n";
    }
    return kOk;
}

int cmd_verify(const std::string& path, int trials, std::uint64_t seed) {
    LoadedModel loaded;
    int exit_code = kOk;
    if (!load_model(path, loaded, exit_code)) return exit_code;

    std::vector<Diagnostic> diagnostics = validate(loaded.model);
    print_diagnostics(path, diagnostics);
    if (has_errors(diagnostics)) return kValidationError;

    WorkbookPlan plan = plan_workbook(loaded.model);
    auto failures = run_verification(loaded.model, plan, trials, seed);
    if (!failures.empty()) {
        print_failures(failures);
        std::cerr << "verify: FAIL (" << failures.size() << " of " << (trials + 1)
                  << " runs mismatched)\n";
        return kVerificationFailed;
    }
    std::cout << "verify: PASS (" << (trials + 1) << " runs, "
              << loaded.model.declarations.size() << " variables each)\n";
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Spreadsheet model compiler: formula list in, three-tier workbook out"};
    app.name("ssmi");
    app.require_subcommand(1);

    std::string model_path;
    std::string output_path;
    std::string currency_symbol = "$";
    std::string locale_flag = "en";
    bool strict = false;
    bool json_output = false;
    bool split_submodels = false;
    std::vector<std::string> assignments;
    int trials = 100;
    std::uint64_t seed = 1;

    CLI::App* check = app.add_subcommand("check", "Parse, validate and lint a model");
    check->add_option("model", model_path, "model file (.ssmi)")->required();
    check->add_flag("--strict", strict, "treat warnings as errors");
    check->add_flag("--json", json_output, "machine-readable diagnostics");

    CLI::App* build = app.add_subcommand("build", "Compile a model to a workbook (.xlsx)");
    build->add_option("model", model_path, "model file (.ssmi)")->required();
    build->add_option("-o,--output", output_path, "destination .xlsx")->required();
    build->add_option("--currency-symbol", currency_symbol, "currency format symbol");
    build->add_option("--locale-display", locale_flag, "formula display locale")
        ->check(CLI::IsMember({"en", "fr"}));

    CLI::App* diagram = app.add_subcommand("diagram", "Render the formula diagram as DOT");
    diagram->add_option("model", model_path, "model file (.ssmi)")->required();
    diagram->add_option("-o,--output", output_path, "destination .dot (default stdout)");
    diagram->add_flag("--split-submodels", split_submodels,
                      "cluster sub-models and insert connectors");

    CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate the model and print its values");
    eval_cmd->add_option("model", model_path, "model file (.ssmi)")->required();
    eval_cmd->add_option("--set", assignments, "override an input: Name=value");
    eval_cmd->add_flag("--json", json_output, "machine-readable values");

    CLI::App* verify = app.add_subcommand("verify", "Differential check: model vs. planned grid");
    verify->add_option("model", model_path, "model file (.ssmi)")->required();
    verify->add_option("--trials", trials, "number of random override vectors")
        ->check(CLI::NonNegativeNumber);
    verify->add_option("--seed", seed, "random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& error) {
        int cli_code = app.exit(error);
        return cli_code == 0 ? kOk : kUsageError;
    }

    if (check->parsed()) return cmd_check(model_path, strict, json_output);
    if (build->parsed()) return cmd_build(model_path, output_path, currency_symbol, locale_flag);
    if (diagram->parsed()) return cmd_diagram(model_path, output_path, split_submodels);
    if (eval_cmd->parsed()) return cmd_eval(model_path, assignments, json_output);
    if (verify->parsed()) return cmd_verify(model_path, trials, seed);
    return kUsageError;
}

int run(const std::vector<std::string>& args) {
    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.push_back("ssmi");
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(storage.size());
    for (const auto& arg : storage) argv.push_back(arg.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace ssmi::cli

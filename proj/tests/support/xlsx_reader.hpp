#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace testsupport {

/// One cell reconstructed from a worksheet part, with its style resolved
/// through styles.xml. `number_format` is the format code string ("" means
/// General).
struct CellInfo {
    enum class Kind { Text, Number, Formula };
    Kind kind = Kind::Number;
    std::string text;          // inline-string content (Text)
    double number = 0.0;       // numeric value (Number)
    std::string formula;       // formula body, no leading '=' (Formula)
    bool has_cached = false;   // cached <v> present (Formula)
    double cached = 0.0;
    bool bold = false;
    bool top_border = false;
    std::string number_format;
};

struct SheetInfo {
    std::string name;
    std::map<std::pair<int, int>, CellInfo> cells;  // (row, column), both 1-based
    std::map<int, double> column_widths;            // column index -> width

    const CellInfo* cell(const std::string& a1) const;  // e.g. "B20"; nullptr if absent
};

struct WorkbookInfo {
    std::vector<SheetInfo> sheets;
    std::vector<std::pair<std::string, std::string>> defined_names;  // (name, target)

    const SheetInfo* sheet(const std::string& name) const;
    const std::string* defined_name(const std::string& name) const;
};

/// "B20" -> (20, 2). Throws std::runtime_error on anything else.
std::pair<int, int> parse_cell_reference(const std::string& a1);

/// Open a workbook package from raw bytes: every part must be a well-formed
/// XML document and the parts must be mutually consistent (relationships,
/// style indices, sheet order). Throws std::runtime_error otherwise.
WorkbookInfo read_xlsx(const std::string& bytes);

/// Convenience: read the package from a file on disk.
WorkbookInfo read_xlsx_file(const std::string& path);

}  // namespace testsupport

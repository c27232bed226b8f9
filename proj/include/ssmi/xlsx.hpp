#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ssmi/layout.hpp"

namespace ssmi {

struct XlsxOptions {
    std::string currency_symbol = "$";
};

/// Styles used by a plan: two fonts (regular, bold), two borders (none,
/// thin-top), and one custom number format per distinct non-General
/// NumberFormat (ids from 164). Every (bold, border, format) combination the
/// plan uses maps to exactly one cell-format index; index 0 is the default.
struct StylePalette {
    struct Key {
        bool bold = false;
        bool top_border = false;
        NumberFormat format;

        auto operator<=>(const Key&) const = default;
    };

    std::vector<NumberFormat> custom_formats;  // numFmtId 164 + position
    std::vector<Key> cell_formats;             // cellXfs, position = style index
    std::string currency_symbol = "$";

    int number_format_id(const NumberFormat& format) const;
    std::string format_code(const NumberFormat& format) const;
};

StylePalette build_palette(const WorkbookPlan& plan, const XlsxOptions& options = {});

/// Stable cell-format index for the combination; (false, false, General) is 0.
int style_index_for(bool bold, bool top_border, const NumberFormat& format,
                    const StylePalette& palette);

/// All package parts in emission order, [Content_Types].xml first.
std::vector<std::pair<std::string, std::string>> build_package_parts(
    const WorkbookPlan& plan, const XlsxOptions& options = {});

/// Write parts into a ZIP with fixed timestamps (1980-01-01), fixed order,
/// and deflate compression: identical parts give byte-identical files.
/// Throws std::invalid_argument on empty or duplicate parts and
/// std::runtime_error on I/O failure.
void package_zip(const std::vector<std::pair<std::string, std::string>>& parts,
                 const std::string& destination);

/// Serialize the plan to a .xlsx package (SpreadsheetML in a ZIP container).
void emit_xlsx(const WorkbookPlan& plan, const std::string& destination,
               const XlsxOptions& options = {});

}  // namespace ssmi

#include "ssmi/xlsx.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <vector>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ssmi {

namespace {

constexpr const char* kMainNs = "http://schemas.openxmlformats.org/spreadsheetml/2006/main";
constexpr const char* kRelNs =
    "http://schemas.openxmlformats.org/officeDocument/2006/relationships";

std::string xml_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string inline_string_cell(const std::string& reference, int style,
                               const std::string& text) {
    std::string out = "<c r=\"" + reference + "\"";
    if (style != 0) out += " s=\"" + std::to_string(style) + "\"";
    out += " t=\"inlineStr\"><is><t";
    if (!text.empty() && (text.front() == ' ' || text.back() == ' '))
        out += " xml:space=\"preserve\"";
    out += ">" + xml_escape(text) + "</t></is></c>";
    return out;
}

}  // namespace

int StylePalette::number_format_id(const NumberFormat& format) const {
    if (format.tag == NumberFormat::Tag::General) return 0;
    for (std::size_t i = 0; i < custom_formats.size(); ++i)
        if (custom_formats[i] == format) return 164 + static_cast<int>(i);
    throw std::invalid_argument("number format not in palette");
}

std::string StylePalette::format_code(const NumberFormat& format) const {
    std::string decimals;
    if (format.decimals > 0) decimals = "." + std::string(format.decimals, '0');
    switch (format.tag) {
        case NumberFormat::Tag::General: return "General";
        case NumberFormat::Tag::Integer: return "#,##0";
        case NumberFormat::Tag::Currency:
            return "#,##0" + decimals + "\\ \"" + currency_symbol + "\"";
        case NumberFormat::Tag::Percent: return "0" + decimals + "%";
    }
    return "General";
}

StylePalette build_palette(const WorkbookPlan& plan, const XlsxOptions& options) {
    StylePalette palette;
    palette.currency_symbol = options.currency_symbol;
    palette.cell_formats.push_back({false, false, NumberFormat::general()});

    auto note = [&](bool bold, bool top_border, const NumberFormat& format) {
        if (format.tag != NumberFormat::Tag::General &&
            std::find(palette.custom_formats.begin(), palette.custom_formats.end(), format) ==
                palette.custom_formats.end())
            palette.custom_formats.push_back(format);
        StylePalette::Key key{bold, top_border, format};
        if (std::find(palette.cell_formats.begin(), palette.cell_formats.end(), key) ==
            palette.cell_formats.end())
            palette.cell_formats.push_back(key);
    };

    for (const auto& sheet : plan.sheets) {
        for (const auto& [position, content] : sheet.cells) {
            if (const auto* text = std::get_if<TextCell>(&content)) {
                note(text->bold, text->top_border, NumberFormat::general());
            } else if (const auto* number = std::get_if<NumberCell>(&content)) {
                note(number->bold, number->top_border, number->format);
            } else if (const auto* formula = std::get_if<FormulaCell>(&content)) {
                note(formula->bold, formula->top_border, formula->format);
            }
        }
    }
    return palette;
}

int style_index_for(bool bold, bool top_border, const NumberFormat& format,
                    const StylePalette& palette) {
    StylePalette::Key key{bold, top_border, format};
    for (std::size_t i = 0; i < palette.cell_formats.size(); ++i)
        if (palette.cell_formats[i] == key) return static_cast<int>(i);
    throw std::invalid_argument("cell format not in palette");
}

namespace {

std::string styles_xml(const StylePalette& palette) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n";
    out << "<styleSheet xmlns=\"" << kMainNs << "\">";
    if (!palette.custom_formats.empty()) {
        out << "<numFmts count=\"" << palette.custom_formats.size() << "\">";
        for (std::size_t i = 0; i < palette.custom_formats.size(); ++i) {
            out << "<numFmt numFmtId=\"" << (164 + i) << "\" formatCode=\""
                << xml_escape(palette.format_code(palette.custom_formats[i])) << "\"/>";
        }
        out << "</numFmts>";
    }
    out << "<fonts count=\"2\">"
           "<font><sz val=\"11\"/><name val=\"Calibri\"/></font>"
           "<font><b/><sz val=\"11\"/><name val=\"Calibri\"/></font>"
           "</fonts>";
    out << "<fills count=\"2\">"
           "<fill><patternFill patternType=\"none\"/></fill>"
           "<fill><patternFill patternType=\"gray125\"/></fill>"
           "</fills>";
    out << "<borders count=\"2\">"
           "<border><left/><right/><top/><bottom/><diagonal/></border>"
           "<border><left/><right/><top style=\"thin\"><color auto=\"1\"/></top>"
           "<bottom/><diagonal/></border>"
           "</borders>";
    out << "<cellStyleXfs count=\"1\">"
           "<xf numFmtId=\"0\" fontId=\"0\" fillId=\"0\" borderId=\"0\"/>"
           "</cellStyleXfs>";
    out << "<cellXfs count=\"" << palette.cell_formats.size() << "\">";
    for (const auto& key : palette.cell_formats) {
        int format_id = palette.number_format_id(key.format);
        out << "<xf numFmtId=\"" << format_id << "\" fontId=\"" << (key.bold ? 1 : 0)
            << "\" fillId=\"0\" borderId=\"" << (key.top_border ? 1 : 0) << "\" xfId=\"0\"";
        if (format_id != 0) out << " applyNumberFormat=\"1\"";
        if (key.bold) out << " applyFont=\"1\"";
        if (key.top_border) out << " applyBorder=\"1\"";
        out << "/>";
    }
    out << "</cellXfs>";
    out << "</styleSheet>\n";
    return out.str();
}

std::string worksheet_xml(const Sheet& sheet, const StylePalette& palette) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n";
    out << "<worksheet xmlns=\"" << kMainNs << "\" xmlns:r=\"" << kRelNs << "\">";
    if (!sheet.column_widths.empty()) {
        out << "<cols>";
        for (std::size_t i = 0; i < sheet.column_widths.size(); ++i) {
            out << "<col min=\"" << (i + 1) << "\" max=\"" << (i + 1) << "\" width=\""
                << double_to_text(sheet.column_widths[i]) << "\" customWidth=\"1\"/>";
        }
        out << "</cols>";
    }
    out << "<sheetData>";
    int open_row = 0;
    for (const auto& [position, content] : sheet.cells) {
        const auto& [row, column] = position;
        if (row != open_row) {
            if (open_row != 0) out << "</row>";
            out << "<row r=\"" << row << "\">";
            open_row = row;
        }
        std::string reference = column_letters(column) + std::to_string(row);
        if (const auto* text = std::get_if<TextCell>(&content)) {
            int style = style_index_for(text->bold, text->top_border,
                                        NumberFormat::general(), palette);
            out << inline_string_cell(reference, style, text->text);
        } else if (const auto* number = std::get_if<NumberCell>(&content)) {
            int style = style_index_for(number->bold, number->top_border, number->format,
                                        palette);
            out << "<c r=\"" << reference << "\"";
            if (style != 0) out << " s=\"" << style << "\"";
            out << "><v>" << double_to_text(number->value) << "</v></c>";
        } else if (const auto* formula = std::get_if<FormulaCell>(&content)) {
            int style = style_index_for(formula->bold, formula->top_border, formula->format,
                                        palette);
            std::string body = formula->text;
            if (!body.empty() && body[0] == '=') body.erase(0, 1);
            out << "<c r=\"" << reference << "\"";
            if (style != 0) out << " s=\"" << style << "\"";
            out << "><f>" << xml_escape(body) << "</f>";
            if (formula->cached) out << "<v>" << double_to_text(*formula->cached) << "</v>";
            out << "</c>";
        }
    }
    if (open_row != 0) out << "</row>";
    out << "</sheetData>";
    out << "</worksheet>\n";
    return out.str();
}

std::string workbook_xml(const WorkbookPlan& plan) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n";
    out << "<workbook xmlns=\"" << kMainNs << "\" xmlns:r=\"" << kRelNs << "\">";
    out << "<sheets>";
    for (std::size_t i = 0; i < plan.sheets.size(); ++i) {
        out << "<sheet name=\"" << xml_escape(plan.sheets[i].name) << "\" sheetId=\""
            << (i + 1) << "\" r:id=\"rId" << (i + 1) << "\"/>";
    }
    out << "</sheets>";
    if (!plan.defined_names.empty()) {
        out << "<definedNames>";
        for (const auto& defined : plan.defined_names) {
            out << "<definedName name=\"" << xml_escape(defined.name) << "\">"
                << xml_escape(defined.target.absolute()) << "</definedName>";
        }
        out << "</definedNames>";
    }
    out << "<calcPr fullCalcOnLoad=\"1\"/>";
    out << "</workbook>\n";
    return out.str();
}

std::string content_types_xml(const WorkbookPlan& plan) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n";
    out << "<Types xmlns=\"http://schemas.openxmlformats.org/package/2006/content-types\">";
    out << "<Default Extension=\"rels\" "
           "ContentType=\"application/vnd.openxmlformats-package.relationships+xml\"/>";
    out << "<Default Extension=\"xml\" ContentType=\"application/xml\"/>";
    out << "<Override PartName=\"/xl/workbook.xml\" "
           "ContentType=\"application/"
           "vnd.openxmlformats-officedocument.spreadsheetml.sheet.main+xml\"/>";
    for (std::size_t i = 0; i < plan.sheets.size(); ++i) {
        out << "<Override PartName=\"/xl/worksheets/sheet" << (i + 1)
            << ".xml\" ContentType=\"application/"
               "vnd.openxmlformats-officedocument.spreadsheetml.worksheet+xml\"/>";
    }
    out << "<Override PartName=\"/xl/styles.xml\" "
           "ContentType=\"application/"
           "vnd.openxmlformats-officedocument.spreadsheetml.styles+xml\"/>";
    out << "</Types>\n";
    return out.str();
}

std::string root_rels_xml() {
    return "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n"
           "<Relationships "
           "xmlns=\"http://schemas.openxmlformats.org/package/2006/relationships\">"
           "<Relationship Id=\"rId1\" "
           "Type=\"http://schemas.openxmlformats.org/officeDocument/2006/relationships/"
           "officeDocument\" Target=\"xl/workbook.xml\"/>"
           "</Relationships>\n";
}

std::string workbook_rels_xml(const WorkbookPlan& plan) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"yes\"?>\n";
    out << "<Relationships "
           "xmlns=\"http://schemas.openxmlformats.org/package/2006/relationships\">";
    for (std::size_t i = 0; i < plan.sheets.size(); ++i) {
        out << "<Relationship Id=\"rId" << (i + 1)
            << "\" Type=\"http://schemas.openxmlformats.org/officeDocument/2006/"
               "relationships/worksheet\" Target=\"worksheets/sheet"
            << (i + 1) << ".xml\"/>";
    }
    out << "<Relationship Id=\"rId" << (plan.sheets.size() + 1)
        << "\" Type=\"http://schemas.openxmlformats.org/officeDocument/2006/relationships/"
           "styles\" Target=\"styles.xml\"/>";
    out << "</Relationships>\n";
    return out.str();
}

std::string deflate_raw(const std::string& data) {
    z_stream stream{};
    if (deflateInit2(&stream, Z_BEST_COMPRESSION, Z_DEFLATED, -15, 8, Z_DEFAULT_STRATEGY) !=
        Z_OK)
        throw std::runtime_error("deflate initialization failed");
    uLong bound = deflateBound(&stream, static_cast<uLong>(data.size()));
    if (bound == 0 || bound > (1u << 30)) {  // parts are far below the 32-bit ZIP limits
        deflateEnd(&stream);
        throw std::runtime_error("package part too large");
    }
    std::vector<char> out(static_cast<std::size_t>(bound));
    stream.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    stream.avail_in = static_cast<uInt>(data.size());
    stream.next_out = reinterpret_cast<Bytef*>(out.data());
    stream.avail_out = static_cast<uInt>(out.size());
    int rc = deflate(&stream, Z_FINISH);
    std::size_t leftover = stream.avail_out;
    deflateEnd(&stream);
    if (rc != Z_STREAM_END || leftover > out.size())
        throw std::runtime_error("deflate failed");
    return std::string(out.data(), out.size() - leftover);
}

void put16(std::string& out, std::uint16_t value) {
    out += static_cast<char>(value & 0xff);
    out += static_cast<char>((value >> 8) & 0xff);
}

void put32(std::string& out, std::uint32_t value) {
    out += static_cast<char>(value & 0xff);
    out += static_cast<char>((value >> 8) & 0xff);
    out += static_cast<char>((value >> 16) & 0xff);
    out += static_cast<char>((value >> 24) & 0xff);
}

// Fixed DOS timestamp: 1980-01-01 00:00:00, for byte-identical rebuilds.
constexpr std::uint16_t kDosTime = 0x0000;
constexpr std::uint16_t kDosDate = 0x0021;

}  // namespace

void package_zip(const std::vector<std::pair<std::string, std::string>>& parts,
                 const std::string& destination) {
    if (parts.empty()) throw std::invalid_argument("empty package");
    std::set<std::string> seen;
    for (const auto& [path, bytes] : parts) {
        (void)bytes;
        if (!seen.insert(path).second)
            throw std::invalid_argument("duplicate package part '" + path + "'");
    }

    std::string archive;
    struct Entry {
        std::string path;
        std::uint32_t crc = 0;
        std::uint32_t compressed = 0;
        std::uint32_t uncompressed = 0;
        std::uint32_t offset = 0;
    };
    std::vector<Entry> entries;
    for (const auto& [path, bytes] : parts) {
        Entry entry;
        entry.path = path;
        entry.offset = static_cast<std::uint32_t>(archive.size());
        entry.crc = static_cast<std::uint32_t>(
            crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()),
                  static_cast<uInt>(bytes.size())));
        entry.uncompressed = static_cast<std::uint32_t>(bytes.size());
        std::string compressed = deflate_raw(bytes);
        entry.compressed = static_cast<std::uint32_t>(compressed.size());

        put32(archive, 0x04034b50);  // local file header
        put16(archive, 20);          // version needed
        put16(archive, 0);           // flags
        put16(archive, 8);           // deflate
        put16(archive, kDosTime);
        put16(archive, kDosDate);
        put32(archive, entry.crc);
        put32(archive, entry.compressed);
        put32(archive, entry.uncompressed);
        put16(archive, static_cast<std::uint16_t>(path.size()));
        put16(archive, 0);  // extra length
        archive += path;
        archive += compressed;
        entries.push_back(std::move(entry));
    }

    std::uint32_t directory_offset = static_cast<std::uint32_t>(archive.size());
    for (const auto& entry : entries) {
        put32(archive, 0x02014b50);  // central directory header
        put16(archive, 20);          // version made by
        put16(archive, 20);          // version needed
        put16(archive, 0);           // flags
        put16(archive, 8);           // deflate
        put16(archive, kDosTime);
        put16(archive, kDosDate);
        put32(archive, entry.crc);
        put32(archive, entry.compressed);
        put32(archive, entry.uncompressed);
        put16(archive, static_cast<std::uint16_t>(entry.path.size()));
        put16(archive, 0);  // extra
        put16(archive, 0);  // comment
        put16(archive, 0);  // disk number
        put16(archive, 0);  // internal attributes
        put32(archive, 0);  // external attributes
        put32(archive, entry.offset);
        archive += entry.path;
    }
    std::uint32_t directory_size = static_cast<std::uint32_t>(archive.size()) - directory_offset;

    put32(archive, 0x06054b50);  // end of central directory
    put16(archive, 0);           // disk
    put16(archive, 0);           // directory disk
    put16(archive, static_cast<std::uint16_t>(entries.size()));
    put16(archive, static_cast<std::uint16_t>(entries.size()));
    put32(archive, directory_size);
    put32(archive, directory_offset);
    put16(archive, 0);  // comment length

    std::ofstream file(destination, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open '" + destination + "' for writing");
    file.write(archive.data(), static_cast<std::streamsize>(archive.size()));
    if (!file) throw std::runtime_error("failed writing '" + destination + "'");
}

std::vector<std::pair<std::string, std::string>> build_package_parts(
    const WorkbookPlan& plan, const XlsxOptions& options) {
    StylePalette palette = build_palette(plan, options);
    std::vector<std::pair<std::string, std::string>> parts;
    parts.emplace_back("[Content_Types].xml", content_types_xml(plan));
    parts.emplace_back("_rels/.rels", root_rels_xml());
    parts.emplace_back("xl/workbook.xml", workbook_xml(plan));
    parts.emplace_back("xl/_rels/workbook.xml.rels", workbook_rels_xml(plan));
    parts.emplace_back("xl/styles.xml", styles_xml(palette));
    for (std::size_t i = 0; i < plan.sheets.size(); ++i) {
        parts.emplace_back("xl/worksheets/sheet" + std::to_string(i + 1) + ".xml",
                           worksheet_xml(plan.sheets[i], palette));
    }
    return parts;
}

void emit_xlsx(const WorkbookPlan& plan, const std::string& destination,
               const XlsxOptions& options) {
    package_zip(build_package_parts(plan, options), destination);
}

}  // namespace ssmi

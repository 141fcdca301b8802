#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace insidernet::csv {

// Minimal RFC 4180 subset: quoted fields with "" escapes, no embedded newlines.
inline bool split_line(std::string_view line, std::vector<std::string>& out) {
    out.clear();
    std::string field;
    bool quoted = false;
    bool field_was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
            field_was_quoted = false;
        } else if (c == '"' && field.empty() && !field_was_quoted) {
            quoted = true;
            field_was_quoted = true;
        } else {
            field.push_back(c);
        }
    }
    if (quoted)
        return false;
    out.push_back(std::move(field));
    return true;
}

inline std::string quote(std::string_view field) {
    if (field.find_first_of(",\"") == std::string_view::npos)
        return std::string(field);
    std::string q = "\"";
    for (char c : field) {
        if (c == '"')
            q.push_back('"');
        q.push_back(c);
    }
    q.push_back('"');
    return q;
}

/// Reads lines, dropping a trailing '\r' and a leading UTF-8 BOM.
inline std::vector<std::string> read_lines(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        lines.push_back(std::move(line));
    }
    if (!lines.empty() && lines.front().starts_with("\xEF\xBB\xBF"))
        lines.front().erase(0, 3);
    return lines;
}

} // namespace insidernet::csv

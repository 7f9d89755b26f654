#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace popcount::io
{
    struct CsvTable
    {
        std::vector<std::string> header;
        std::vector<std::vector<std::string>> rows;

        friend bool operator==(const CsvTable&, const CsvTable&) = default;
    };

    // A field is quoted only when it has to be, so parse -> write reproduces the bytes
    // of anything write_csv produced.
    inline bool needs_quoting(std::string_view field)
    {
        return field.find_first_of(",\"\r\n") != std::string_view::npos;
    }

    inline void append_field(std::string& out, std::string_view field)
    {
        if (!needs_quoting(field))
        {
            out += field;
            return;
        }
        out += '"';
        for (char ch : field)
        {
            if (ch == '"')
                out += '"';
            out += ch;
        }
        out += '"';
    }

    inline void append_record(std::string& out, const std::vector<std::string>& fields)
    {
        for (std::size_t i = 0; i < fields.size(); ++i)
        {
            if (i > 0)
                out += ',';
            append_field(out, fields[i]);
        }
        out += '\n';
    }

    /// Comma-separated, header first, '\n' line ends, RFC 4180 quoting.
    inline std::string write_csv(const CsvTable& table)
    {
        std::string out;
        append_record(out, table.header);
        for (const auto& row : table.rows)
        {
            if (row.size() != table.header.size())
                throw std::invalid_argument("csv: row width differs from header width");
            append_record(out, row);
        }
        return out;
    }

    inline CsvTable parse_csv(std::string_view text)
    {
        std::vector<std::vector<std::string>> records;
        std::vector<std::string> record;
        std::string field;
        bool quoted = false;
        bool field_started = false;
        std::size_t i = 0;
        auto end_field = [&] {
            record.push_back(std::move(field));
            field.clear();
            field_started = false;
        };
        auto end_record = [&] {
            end_field();
            records.push_back(std::move(record));
            record.clear();
        };
        while (i < text.size())
        {
            const char ch = text[i];
            if (quoted)
            {
                if (ch == '"')
                {
                    if (i + 1 < text.size() && text[i + 1] == '"')
                    {
                        field += '"';
                        i += 2;
                        continue;
                    }
                    quoted = false;
                    ++i;
                    if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
                        throw std::invalid_argument("csv: text after closing quote");
                    continue;
                }
                field += ch;
                ++i;
                continue;
            }
            switch (ch)
            {
            case '"':
                if (field_started)
                    throw std::invalid_argument("csv: quote inside unquoted field");
                quoted = true;
                field_started = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n')
                    ++i;
                end_record();
                break;
            case '\n':
                end_record();
                break;
            default:
                field += ch;
                field_started = true;
            }
            ++i;
        }
        if (quoted)
            throw std::invalid_argument("csv: unterminated quoted field");
        if (field_started || !record.empty())
            end_record();

        CsvTable table;
        if (records.empty())
            return table;
        table.header = std::move(records.front());
        for (std::size_t r = 1; r < records.size(); ++r)
        {
            if (records[r].size() != table.header.size())
                throw std::invalid_argument("csv: record " + std::to_string(r) + " has " +
                                            std::to_string(records[r].size()) + " fields, header has " +
                                            std::to_string(table.header.size()));
            table.rows.push_back(std::move(records[r]));
        }
        return table;
    }
} // namespace popcount::io

#include "provex/csv.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "provex/error.hpp"

namespace provex {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool any_field = false;

    const std::size_t n = text.size();
    for (std::size_t i = 0; i < n; ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < n && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                any_field = true;
                break;
            case ',':
                record.push_back(std::move(field));
                field.clear();
                any_field = true;
                break;
            case '\r':
                break;
            case '\n':
                if (any_field || !field.empty() || !record.empty()) {
                    record.push_back(std::move(field));
                    field.clear();
                    records.push_back(std::move(record));
                    record.clear();
                    any_field = false;
                }
                break;
            default:
                field.push_back(c);
                any_field = true;
                break;
        }
    }
    if (in_quotes) throw InputError("csv: unterminated quoted field");
    if (any_field || !field.empty() || !record.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    return records;
}

Table load_table_text(const std::string& csv_text, const TableDecl& decl,
                      const std::string& origin) {
    const auto records = parse_csv(csv_text);
    if (records.empty()) {
        throw InputError(origin + ": missing header row for table " + decl.name);
    }

    const auto& header = records.front();
    if (header.size() != decl.columns.size()) {
        throw InputError(origin + ": header has " + std::to_string(header.size()) +
                         " columns, declaration of " + decl.name + " has " +
                         std::to_string(decl.columns.size()));
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] != decl.columns[i].name) {
            throw InputError(origin + ": header column " + std::to_string(i + 1) + " is '" +
                             header[i] + "', declared as '" + decl.columns[i].name + "'");
        }
    }

    Table table;
    table.name = decl.name;
    table.columns = decl.columns;
    for (const auto& pk_attr : decl.primary_key) {
        const int idx = table.column_index(pk_attr);
        if (idx < 0) {
            throw InputError(origin + ": primary key attribute '" + pk_attr +
                             "' not declared in table " + decl.name);
        }
        table.primary_key.push_back(idx);
    }

    std::unordered_set<std::string> seen_keys;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        const std::size_t row_no = r;  // 1-based data row
        if (rec.size() != decl.columns.size()) {
            throw InputError(origin + ": row " + std::to_string(row_no) + " has " +
                             std::to_string(rec.size()) + " fields, expected " +
                             std::to_string(decl.columns.size()));
        }
        std::vector<Value> row(rec.size());
        for (std::size_t c = 0; c < rec.size(); ++c) {
            auto parsed = parse_cell(rec[c], decl.columns[c].kind);
            if (!parsed) {
                throw InputError(origin + ": row " + std::to_string(row_no) + ", column '" +
                                 decl.columns[c].name + "': cannot parse '" + rec[c] +
                                 "' as numeric");
            }
            row[c] = std::move(*parsed);
        }
        if (!table.primary_key.empty()) {
            std::string key;
            for (const int pk : table.primary_key) {
                if (is_null(row[pk])) {
                    throw InputError(origin + ": row " + std::to_string(row_no) +
                                     ": null in primary key column '" +
                                     table.columns[pk].name + "'");
                }
                key += value_key(row[pk]);
                key.push_back('\x1f');
            }
            if (!seen_keys.insert(key).second) {
                throw InputError(origin + ": row " + std::to_string(row_no) +
                                 ": duplicate primary key in table " + decl.name);
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

Table load_table(const std::string& csv_path, const TableDecl& decl) {
    std::ifstream in(csv_path, std::ios::binary);
    if (!in) throw InputError("cannot open csv file: " + csv_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_table_text(buf.str(), decl, csv_path);
}

std::size_t Table::distinct_count(int col) const {
    std::unordered_set<std::string> keys;
    for (const auto& row : rows) {
        if (!is_null(row[col])) keys.insert(value_key(row[col]));
    }
    return keys.size();
}

}  // namespace provex

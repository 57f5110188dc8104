#pragma once

#include <string>
#include <vector>

#include "provex/table.hpp"

namespace provex {

/// Declares how a CSV file maps onto a typed relation.
struct TableDecl {
    std::string name;
    std::vector<Column> columns;
    std::vector<std::string> primary_key;  // attribute names, may be empty
};

/// RFC-4180-style parser: quoted fields, embedded commas/quotes/newlines.
/// Returns one record per row, header included.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

/// Loads and type-checks a CSV file against its declaration.
/// Throws InputError naming the offending row for: header mismatch,
/// arity mismatch, numeric parse failure, null in or duplicate primary key.
Table load_table(const std::string& csv_path, const TableDecl& decl);

/// Same, from an in-memory CSV string ("<name>" used in messages).
Table load_table_text(const std::string& csv_text, const TableDecl& decl,
                      const std::string& origin = "<string>");

}  // namespace provex

#pragma once

#include <map>
#include <string>
#include <vector>

#include "provex/value.hpp"

namespace provex {

struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::categorical;
};

/// An in-memory relation. Immutable after loading; row index is the
/// stable row id used by provenance bookkeeping.
struct Table {
    std::string name;
    std::vector<Column> columns;
    std::vector<int> primary_key;  // column indices, may be empty
    std::vector<std::vector<Value>> rows;

    int column_index(const std::string& attr) const {
        for (int i = 0; i < static_cast<int>(columns.size()); ++i) {
            if (columns[i].name == attr) return i;
        }
        return -1;
    }

    bool has_column(const std::string& attr) const { return column_index(attr) >= 0; }

    /// Number of distinct non-null values in a column.
    std::size_t distinct_count(int col) const;
};

struct Database {
    std::map<std::string, Table> tables;

    const Table* find_table(const std::string& name) const {
        auto it = tables.find(name);
        return it == tables.end() ? nullptr : &it->second;
    }
};

}  // namespace provex

#pragma once

#include <string>
#include <vector>

#include "provex/query.hpp"

namespace provex {

/// One column of the provenance table: a base column of an accessed
/// relation occurrence, exposed under the name "prov_<alias>.<attr>".
struct PtColumn {
    std::string name;
    std::string alias;  // query alias of the owning relation
    std::string attr;   // base column name
    ColumnKind kind = ColumnKind::categorical;
    int rel = -1;  // index into Query::relations
    int col = -1;  // column index within the base table
    bool group_by = false;
};

/// One provenance row: the ids of the base rows it is built from,
/// plus the result tuple it contributes to.
struct PtRow {
    std::vector<std::int32_t> base_rows;  // one id per relation occurrence
    std::int32_t result = -1;             // index into ProvenanceTable::results
};

/// The why-provenance of an aggregate group-by query: all satisfying
/// cross-product rows over the accessed relations, partitioned by the
/// result tuple they belong to. Immutable after construction.
struct ProvenanceTable {
    std::vector<PtColumn> columns;
    std::vector<PtRow> rows;
    std::vector<ResultTuple> results;           // ordered by group key
    std::vector<std::vector<std::int32_t>> rows_of_result;  // PT row ids per result

    std::size_t result_size(int result) const { return rows_of_result[result].size(); }

    int column_index(const std::string& name) const {
        for (int i = 0; i < static_cast<int>(columns.size()); ++i) {
            if (columns[i].name == name) return i;
        }
        return -1;
    }

    /// Value of a PT cell, read through to the base table.
    const Value& value_at(const Database& db, const Query& q, const PtRow& row, int col) const;

    /// Find the unique result tuple matching the given (key position, value)
    /// constraints. Returns -1 when none matches, -2 when ambiguous.
    int find_result(const std::vector<std::pair<int, Value>>& constraints) const;
};

/// Evaluate the query: one ResultTuple per non-empty group, ordered by key.
std::vector<ResultTuple> evaluate(const Query& q, const Database& db);

/// Evaluate and keep the satisfying cross-product rows with back-references.
ProvenanceTable provenance(const Query& q, const Database& db);

}  // namespace provex

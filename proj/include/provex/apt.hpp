#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "provex/join_graph.hpp"
#include "provex/provenance.hpp"

namespace provex {

/// Columnar storage for one APT column. Categorical columns are
/// dictionary-encoded (code -1 = null); numeric columns hold doubles
/// with a null mask.
struct AptColumn {
    std::string name;
    ColumnKind kind = ColumnKind::categorical;
    std::string origin;  // "PT" or a join-graph node alias
    bool group_by = false;

    std::vector<std::int32_t> codes;
    std::vector<std::string> dict;
    std::vector<double> nums;
    std::vector<std::uint8_t> null_mask;

    std::int32_t code_of(const std::string& text) const {
        auto it = dict_index_.find(text);
        return it == dict_index_.end() ? -2 : it->second;
    }

    void push_cat(const Value& v);
    void push_num(const Value& v);

private:
    std::unordered_map<std::string, std::int32_t> dict_index_;
};

/// Contiguous row range [begin, end).
struct RowRange {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::uint32_t size() const { return end - begin; }
    bool empty() const { return begin == end; }
};

/// A maximal run of APT rows sharing (result, PT row).
struct AptRun {
    std::int32_t result = -1;
    std::int32_t pt_row = -1;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
};

/// The augmented provenance table for one join graph: PT columns
/// followed by each non-PT node's columns, join-duplicate columns
/// removed. Rows are grouped by owning result tuple, then by
/// originating PT row. Immutable after materialization.
class AptTable {
public:
    std::vector<AptColumn> columns;
    std::size_t n_rows = 0;

    std::vector<std::int32_t> pt_row_of;  // per APT row
    std::vector<AptRun> runs;
    std::vector<RowRange> run_range_of_result;   // indices into runs
    std::vector<RowRange> row_range_of_result;   // indices into rows

    std::size_t n_results = 0;
    std::vector<std::size_t> pt_size_of_result;          // |PT(t)| per result
    std::vector<std::vector<std::int32_t>> pt_rows_of_result;

    /// Resolves a column by its kept name or by the name of a column
    /// that was removed as a join duplicate. -1 when unknown.
    int column_index(const std::string& name) const;

    RowRange slice(int result) const { return row_range_of_result[result]; }

    /// Extension rows of one PT row; empty when it has no join partners
    /// or the id is unknown.
    RowRange slice(int result, std::int32_t pt_row) const;

    bool is_null(int col, std::uint32_t row) const {
        const auto& c = columns[col];
        return c.kind == ColumnKind::categorical ? c.codes[row] < 0 : c.null_mask[row] != 0;
    }

    std::string cell_text(int col, std::uint32_t row) const;

    /// CSV dump in column order, RFC-4180 quoting.
    std::string to_csv() const;

private:
    friend AptTable materialize(const Query&, const Database&, const ProvenanceTable&,
                                const JoinGraph&, const SchemaGraph&, std::size_t);
    std::unordered_map<std::string, int> column_lookup_;     // kept + dropped names
    std::vector<RowRange> pt_extent_;                        // per PT row id
};

/// Materializes the APT for a join graph. Throws LimitError when the
/// row count exceeds `row_cap`.
AptTable materialize(const Query& q, const Database& db, const ProvenanceTable& pt,
                     const JoinGraph& jg, const SchemaGraph& schema,
                     std::size_t row_cap = 5'000'000);

}  // namespace provex

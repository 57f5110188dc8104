#pragma once

#include <optional>
#include <string>
#include <vector>

#include "provex/table.hpp"

namespace provex {

/// A resolved attribute: relation occurrence + column within it.
struct AttrRef {
    int rel = -1;  // index into Query::relations
    int col = -1;  // column index within that relation's table

    bool operator==(const AttrRef& o) const { return rel == o.rel && col == o.col; }
};

struct QueryRelation {
    std::string table;
    std::string alias;  // defaults to the table name
};

struct Selection {
    AttrRef attr;
    CmpOp op = CmpOp::eq;
    Value constant;
};

struct JoinPredicate {
    AttrRef left;
    AttrRef right;
};

enum class AggFn { count, sum, avg };

struct Aggregate {
    AggFn fn = AggFn::count;
    bool star = true;                // count(*)
    std::optional<AttrRef> attr;    // set unless star
    std::string out_alias;          // result column name
};

/// Single-block aggregate group-by query over equality joins and
/// constant selections (=, <=, >=).
struct Query {
    std::vector<QueryRelation> relations;
    std::vector<JoinPredicate> join_predicates;
    std::vector<Selection> selections;
    std::vector<AttrRef> group_by;
    std::vector<std::string> group_out_aliases;  // per group_by entry
    Aggregate aggregate;

    int relation_by_alias(const std::string& alias) const {
        for (int i = 0; i < static_cast<int>(relations.size()); ++i) {
            if (relations[i].alias == alias) return i;
        }
        return -1;
    }
};

struct ResultTuple {
    std::vector<Value> key;  // values over group_by attributes, in order
    Value aggregate;
};

}  // namespace provex

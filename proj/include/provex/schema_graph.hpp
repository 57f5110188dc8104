#pragma once

#include <string>
#include <vector>

#include "provex/table.hpp"

namespace provex {

/// One attribute equality inside a join condition. Sides refer to the
/// edge's endpoint roles, not to node identity.
struct CondEq {
    std::string left_attr;
    std::string right_attr;
};

/// A conjunctive equi-join condition between the two endpoint relations.
struct JoinCondition {
    std::vector<CondEq> eqs;
};

struct SchemaEdge {
    std::string left;   // relation name
    std::string right;  // relation name (may equal left: self-edge)
    std::vector<JoinCondition> conditions;
};

/// Permissible-join graph over the database relations. Edges are
/// undirected; the left/right roles only anchor condition sides.
struct SchemaGraph {
    std::vector<SchemaEdge> edges;

    /// Checks edge endpoints and attributes against the database.
    /// Throws InputError on unknown tables/attributes or empty condition lists.
    void validate(const Database& db) const;
};

}  // namespace provex

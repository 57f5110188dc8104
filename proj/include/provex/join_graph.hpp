#pragma once

#include <optional>
#include <string>
#include <vector>

#include "provex/provenance.hpp"
#include "provex/schema_graph.hpp"

namespace provex {

/// A join-graph node: either the distinguished PT node or an aliased
/// occurrence of a relation (k-th occurrence of R gets alias "R_k").
struct JoinGraphNode {
    bool is_pt = false;
    std::string relation;  // empty for PT
    std::string alias;     // "PT" or "R_k"
};

/// An edge instantiates one schema-edge condition between two nodes.
/// `a_is_left` records which endpoint plays the condition's left role;
/// `pt_alias` binds the PT-side relation occurrence to a query alias.
struct JoinGraphEdge {
    int a = 0;
    int b = 0;
    int schema_edge = -1;
    int condition = -1;
    bool a_is_left = true;
    std::string pt_alias;  // set when one endpoint is PT
};

/// One possible augmentation plan: a multigraph with exactly one PT node.
struct JoinGraph {
    std::vector<JoinGraphNode> nodes;
    std::vector<JoinGraphEdge> edges;

    static JoinGraph pt_only() {
        JoinGraph g;
        g.nodes.push_back(JoinGraphNode{true, "", "PT"});
        return g;
    }

    int pt_node() const {
        for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
            if (nodes[i].is_pt) return i;
        }
        return -1;
    }

    std::size_t edge_count() const { return edges.size(); }

    /// Canonical signature: equal exactly for graphs that are identical up
    /// to renaming node ids within equal labels. Stable across runs and
    /// safe to pass on a command line.
    std::string signature(const SchemaGraph& schema) const;
};

struct CostEstimate {
    double estimated_rows = 0.0;
    std::vector<double> node_fanouts;  // one per non-PT node, in node order
};

enum class Verdict { valid, pk_uncovered, cost };

struct ValidityResult {
    bool valid = false;
    Verdict reason = Verdict::valid;
    std::string detail;
    CostEstimate cost;
};

/// All single-edge extensions of a join graph permitted by the schema
/// graph: fresh-node attachments plus edges between existing nodes that
/// do not duplicate an identical condition on the same node pair.
std::vector<JoinGraph> extend_jg(const SchemaGraph& schema, const JoinGraph& jg, const Query& q);

/// Iterated extension from the PT-only graph up to `max_edges` edges,
/// deduplicated by signature, emitted in non-decreasing edge count
/// (ties ordered by signature). Includes the PT-only graph itself.
std::vector<JoinGraph> enumerate_join_graphs(const SchemaGraph& schema, const Query& q,
                                             int max_edges);

/// Estimated APT row count: |PT| times a per-node fanout. A node's fanout
/// is |R| over the product of distinct counts of its join attributes on
/// edges charged to it (the edge that introduced it plus cycle edges),
/// floored at 1 so that growing a graph never shrinks the estimate;
/// empty relations get fanout 0.
CostEstimate estimate_cost(const JoinGraph& jg, const Database& db, const Query& q,
                           const SchemaGraph& schema, std::size_t pt_rows);

/// A graph is mined only if every non-PT node has its full primary key
/// covered by incident edge conditions (PT is exempt) and the cost
/// estimate stays within the threshold.
ValidityResult is_valid(const JoinGraph& jg, const Database& db, const Query& q,
                        const SchemaGraph& schema, std::size_t pt_rows, double cost_threshold);

/// Human-readable description of one edge ("PT.g.year=Game_1.year AND ...").
std::string edge_condition_text(const JoinGraph& jg, const JoinGraphEdge& e,
                                const SchemaGraph& schema);

}  // namespace provex

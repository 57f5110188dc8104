#pragma once

#include <string>
#include <vector>

#include "provex/apt.hpp"
#include "provex/provenance.hpp"
#include "provex/rng.hpp"
#include "provex/sql.hpp"

namespace testsupport {

/// A seeded synthetic workload: a fact table with a group column and a
/// joinable dimension table, plus a planted categorical/numeric signal
/// distinguishing the two question groups.
struct SynthInstance {
    provex::Database db;
    provex::SchemaGraph schema;
    provex::Query q;
    provex::ProvenanceTable pt;
    int t1 = 0;
    int t2 = 1;
    provex::JoinGraph graph;  // PT-only or PT joined to the dimension
};

struct SynthOptions {
    int fact_rows = 120;
    int dim_rows = 20;
    int cat_domain = 5;        // distinct values per categorical attribute
    int num_domain = 40;       // numeric values drawn from [0, num_domain)
    bool with_dimension = true;
    double signal = 0.7;       // skew of the planted value in group B
    bool numeric_shift = true; // shift group B's numeric column upward
};

inline SynthInstance make_synth(std::uint64_t seed, const SynthOptions& opt = SynthOptions{}) {
    provex::Rng rng(provex::mix_seed(seed, "synth-db"));
    SynthInstance inst;

    provex::Table dim;
    dim.name = "Dim";
    dim.columns = {{"id", provex::ColumnKind::numeric},
                   {"d1", provex::ColumnKind::categorical},
                   {"d2", provex::ColumnKind::numeric}};
    dim.primary_key = {0};
    for (int i = 0; i < opt.dim_rows; ++i) {
        std::vector<provex::Value> row;
        row.push_back(provex::Value{std::int64_t{i}});
        row.push_back(provex::Value{"d" + std::to_string(rng.next_below(opt.cat_domain))});
        row.push_back(provex::Value{std::int64_t(rng.next_below(opt.num_domain))});
        dim.rows.push_back(std::move(row));
    }

    provex::Table fact;
    fact.name = "Fact";
    fact.columns = {{"grp", provex::ColumnKind::categorical},
                    {"fk", provex::ColumnKind::numeric},
                    {"c1", provex::ColumnKind::categorical},
                    {"c2", provex::ColumnKind::categorical},
                    {"n1", provex::ColumnKind::numeric}};
    // Group B rows skew c1 toward "a0" and n1 upward; group A stays uniform.
    for (int i = 0; i < opt.fact_rows; ++i) {
        const bool in_b = i % 2 == 1;
        std::vector<provex::Value> row;
        row.push_back(provex::Value{in_b ? "B" : "A"});
        row.push_back(provex::Value{std::int64_t(rng.next_below(opt.dim_rows))});
        if (in_b && rng.bernoulli(opt.signal)) {
            row.push_back(provex::Value{"a0"});
        } else {
            row.push_back(provex::Value{"a" + std::to_string(rng.next_below(opt.cat_domain))});
        }
        row.push_back(provex::Value{"b" + std::to_string(rng.next_below(opt.cat_domain))});
        const std::int64_t base = (in_b && opt.numeric_shift) ? opt.num_domain / 2 : 0;
        row.push_back(provex::Value{base + std::int64_t(rng.next_below(opt.num_domain))});
        fact.rows.push_back(std::move(row));
    }

    inst.db.tables.emplace("Fact", std::move(fact));
    inst.db.tables.emplace("Dim", std::move(dim));
    inst.schema.edges.push_back(
        provex::SchemaEdge{"Fact", "Dim", {provex::JoinCondition{{{"fk", "id"}}}}});

    inst.q = provex::parse_query("SELECT grp, count(*) AS n FROM Fact GROUP BY grp", inst.db);
    inst.pt = provex::provenance(inst.q, inst.db);
    inst.t1 = 0;  // group A sorts first
    inst.t2 = 1;

    inst.graph = provex::JoinGraph::pt_only();
    if (opt.with_dimension) {
        inst.graph.nodes.push_back(provex::JoinGraphNode{false, "Dim", "Dim_1"});
        inst.graph.edges.push_back(provex::JoinGraphEdge{0, 1, 0, 0, true, "Fact"});
    }
    return inst;
}

/// Random pattern over the eligible attributes of an APT, built from the
/// active domains / simple numeric cut points. May be empty.
inline provex::Pattern random_pattern(const provex::AptTable& apt, provex::Rng& rng,
                                      int max_preds) {
    provex::Pattern p;
    std::vector<int> eligible;
    for (int c = 0; c < static_cast<int>(apt.columns.size()); ++c) {
        if (!apt.columns[c].group_by) eligible.push_back(c);
    }
    if (eligible.empty() || apt.n_rows == 0) return p;
    const int want = 1 + static_cast<int>(rng.next_below(std::max(1, max_preds)));
    for (int i = 0; i < want; ++i) {
        const int col = eligible[rng.next_below(eligible.size())];
        const auto& column = apt.columns[col];
        provex::Predicate pred;
        pred.attr = column.name;
        if (column.kind == provex::ColumnKind::categorical) {
            if (column.dict.empty()) continue;
            pred.op = provex::CmpOp::eq;
            pred.constant = provex::Value{column.dict[rng.next_below(column.dict.size())]};
        } else {
            const std::uint32_t row = static_cast<std::uint32_t>(rng.next_below(apt.n_rows));
            if (column.null_mask[row]) continue;
            pred.op = rng.bernoulli(0.5) ? provex::CmpOp::le : provex::CmpOp::ge;
            pred.constant = provex::Value{column.nums[row]};
        }
        p.predicates[pred.attr] = pred;
    }
    return p;
}

/// A strict refinement of `base`: adds 1..2 predicates on currently
/// wildcarded attributes (when possible).
inline provex::Pattern random_refinement(const provex::Pattern& base,
                                         const provex::AptTable& apt, provex::Rng& rng) {
    provex::Pattern out = base;
    std::vector<int> free_cols;
    for (int c = 0; c < static_cast<int>(apt.columns.size()); ++c) {
        if (apt.columns[c].group_by) continue;
        if (!base.constrains(apt.columns[c].name)) free_cols.push_back(c);
    }
    if (free_cols.empty() || apt.n_rows == 0) return out;
    const int extra = 1 + static_cast<int>(rng.next_below(2));
    for (int i = 0; i < extra && !free_cols.empty(); ++i) {
        const std::size_t pick = rng.next_below(free_cols.size());
        const int col = free_cols[pick];
        free_cols.erase(free_cols.begin() + static_cast<std::ptrdiff_t>(pick));
        const auto& column = apt.columns[col];
        provex::Predicate pred;
        pred.attr = column.name;
        if (column.kind == provex::ColumnKind::categorical) {
            if (column.dict.empty()) continue;
            pred.op = provex::CmpOp::eq;
            pred.constant = provex::Value{column.dict[rng.next_below(column.dict.size())]};
        } else {
            const std::uint32_t row = static_cast<std::uint32_t>(rng.next_below(apt.n_rows));
            if (column.null_mask[row]) continue;
            pred.op = rng.bernoulli(0.5) ? provex::CmpOp::le : provex::CmpOp::ge;
            pred.constant = provex::Value{column.nums[row]};
        }
        out.predicates[pred.attr] = pred;
    }
    return out;
}

}  // namespace testsupport

#include "provex/apt.hpp"

#include <algorithm>

#include "provex/error.hpp"

namespace provex {

void AptColumn::push_cat(const Value& v) {
    if (provex::is_null(v)) {
        codes.push_back(-1);
        return;
    }
    const std::string text = value_display(v);
    auto [it, inserted] = dict_index_.try_emplace(text, static_cast<std::int32_t>(dict.size()));
    if (inserted) dict.push_back(text);
    codes.push_back(it->second);
}

void AptColumn::push_num(const Value& v) {
    if (provex::is_null(v)) {
        nums.push_back(0.0);
        null_mask.push_back(1);
    } else {
        nums.push_back(as_number(v));
        null_mask.push_back(0);
    }
}

int AptTable::column_index(const std::string& name) const {
    auto it = column_lookup_.find(name);
    return it == column_lookup_.end() ? -1 : it->second;
}

RowRange AptTable::slice(int result, std::int32_t pt_row) const {
    if (pt_row < 0 || pt_row >= static_cast<std::int32_t>(pt_extent_.size())) return RowRange{};
    const RowRange r = pt_extent_[pt_row];
    if (r.empty()) return r;
    // A PT row belongs to exactly one result; reject mismatched lookups.
    const RowRange owner = row_range_of_result[result];
    if (r.begin < owner.begin || r.end > owner.end) return RowRange{};
    return r;
}

std::string AptTable::cell_text(int col, std::uint32_t row) const {
    const auto& c = columns[col];
    if (c.kind == ColumnKind::categorical) {
        return c.codes[row] < 0 ? "" : c.dict[c.codes[row]];
    }
    if (c.null_mask[row]) return "";
    return value_display(Value{c.nums[row]});
}

std::string AptTable::to_csv() const {
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
        std::string out = "\"";
        for (const char ch : s) {
            if (ch == '"') out += "\"\"";
            else out.push_back(ch);
        }
        out.push_back('"');
        return out;
    };
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c) out.push_back(',');
        out += quote(columns[c].name);
    }
    out.push_back('\n');
    for (std::uint32_t r = 0; r < n_rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out.push_back(',');
            out += quote(cell_text(static_cast<int>(c), r));
        }
        out.push_back('\n');
    }
    return out;
}

namespace {

struct NodeJoin {
    // One equality driving the hash join of a node: probe-side source and
    // the column index within the node's relation.
    struct Probe {
        bool from_pt = false;
        int pt_rel = -1;   // query relation occurrence (PT side)
        int pt_col = -1;
        int node = -1;     // non-PT source node (otherwise)
        int node_col = -1;
    };
    std::vector<Probe> probes;
    std::vector<int> build_cols;  // columns of the joined relation
};

std::string pt_col_name(const std::string& alias, const std::string& attr) {
    return "prov_" + alias + "." + attr;
}

}  // namespace

AptTable materialize(const Query& q, const Database& db, const ProvenanceTable& pt,
                     const JoinGraph& jg, const SchemaGraph& schema, std::size_t row_cap) {
    AptTable apt;
    const int n_nodes = static_cast<int>(jg.nodes.size());

    std::vector<const Table*> node_table(n_nodes, nullptr);
    for (int n = 0; n < n_nodes; ++n) {
        if (jg.nodes[n].is_pt) continue;
        node_table[n] = db.find_table(jg.nodes[n].relation);
        if (!node_table[n]) {
            throw InputError("join graph references unknown table: " + jg.nodes[n].relation);
        }
    }

    // Group the join equalities by the node they instantiate (the later
    // endpoint of each edge, matching the construction order).
    std::vector<NodeJoin> joins(n_nodes);
    for (const auto& e : jg.edges) {
        const int hi = std::max(e.a, e.b);
        const int lo = std::min(e.a, e.b);
        const auto& cond = schema.edges[e.schema_edge].conditions[e.condition];
        const bool hi_is_left = (e.a == hi) ? e.a_is_left : !e.a_is_left;
        for (const auto& eq : cond.eqs) {
            const std::string& hi_attr = hi_is_left ? eq.left_attr : eq.right_attr;
            const std::string& lo_attr = hi_is_left ? eq.right_attr : eq.left_attr;
            NodeJoin::Probe probe;
            if (jg.nodes[lo].is_pt) {
                probe.from_pt = true;
                probe.pt_rel = q.relation_by_alias(e.pt_alias);
                if (probe.pt_rel < 0) {
                    throw InputError("join graph binds unknown query alias: " + e.pt_alias);
                }
                const Table& t = *db.find_table(q.relations[probe.pt_rel].table);
                probe.pt_col = t.column_index(lo_attr);
                if (probe.pt_col < 0) {
                    throw InputError("join condition references unknown attribute " +
                                     q.relations[probe.pt_rel].table + "." + lo_attr);
                }
            } else {
                probe.node = lo;
                probe.node_col = node_table[lo]->column_index(lo_attr);
                if (probe.node_col < 0) {
                    throw InputError("join condition references unknown attribute " +
                                     jg.nodes[lo].relation + "." + lo_attr);
                }
            }
            const int build_col = node_table[hi]->column_index(hi_attr);
            if (build_col < 0) {
                throw InputError("join condition references unknown attribute " +
                                 jg.nodes[hi].relation + "." + hi_attr);
            }
            joins[hi].probes.push_back(probe);
            joins[hi].build_cols.push_back(build_col);
        }
    }

    // Join node by node. Each partial row is (PT row id, base row per node).
    struct Partial {
        std::int32_t pt_row;
        std::vector<std::int32_t> node_rows;
    };
    std::vector<Partial> partial;
    partial.reserve(pt.rows.size());
    for (std::size_t res = 0; res < pt.results.size(); ++res) {
        for (const auto pt_row : pt.rows_of_result[res]) {
            partial.push_back(Partial{pt_row, {}});
        }
    }

    auto probe_value = [&](const Partial& p, const NodeJoin::Probe& pr) -> const Value& {
        if (pr.from_pt) {
            const Table& t = *db.find_table(q.relations[pr.pt_rel].table);
            return t.rows[pt.rows[p.pt_row].base_rows[pr.pt_rel]][pr.pt_col];
        }
        return node_table[pr.node]->rows[p.node_rows[pr.node - 1]][pr.node_col];
    };

    for (int n = 1; n < n_nodes; ++n) {
        const Table& t = *node_table[n];
        const auto& nj = joins[n];
        std::unordered_map<std::string, std::vector<std::int32_t>> index;
        for (std::int32_t r = 0; r < static_cast<std::int32_t>(t.rows.size()); ++r) {
            std::string key;
            bool has_null = false;
            for (const int c : nj.build_cols) {
                const Value& v = t.rows[r][c];
                if (provex::is_null(v)) {
                    has_null = true;
                    break;
                }
                key += value_key(v);
                key.push_back('\x1f');
            }
            if (!has_null) index[key].push_back(r);
        }

        std::vector<Partial> next;
        for (const auto& p : partial) {
            std::string key;
            bool has_null = false;
            for (const auto& pr : nj.probes) {
                const Value& v = probe_value(p, pr);
                if (provex::is_null(v)) {
                    has_null = true;
                    break;
                }
                key += value_key(v);
                key.push_back('\x1f');
            }
            if (has_null) continue;
            auto it = index.find(key);
            if (it == index.end()) continue;
            for (const auto r : it->second) {
                Partial np = p;
                np.node_rows.push_back(r);
                next.push_back(std::move(np));
                if (next.size() > row_cap) {
                    throw LimitError("apt exceeds row cap of " + std::to_string(row_cap));
                }
            }
        }
        partial = std::move(next);
    }
    if (partial.size() > row_cap) {
        throw LimitError("apt exceeds row cap of " + std::to_string(row_cap));
    }

    // Column layout: all PT columns, then each node's columns, minus the
    // join-duplicate side. For each equality the extension-point side
    // wins; the far side's column is removed and its name aliased.
    std::unordered_map<std::string, std::string> alias_of;
    auto resolve = [&](std::string name) {
        while (true) {
            auto it = alias_of.find(name);
            if (it == alias_of.end()) return name;
            name = it->second;
        }
    };
    auto side_name = [&](int node, const std::string& attr, const std::string& pt_alias) {
        if (jg.nodes[node].is_pt) return pt_col_name(pt_alias, attr);
        return jg.nodes[node].alias + "." + attr;
    };
    for (const auto& e : jg.edges) {
        const auto& cond = schema.edges[e.schema_edge].conditions[e.condition];
        for (const auto& eq : cond.eqs) {
            const int keep_node = e.a;
            const int drop_node = e.b;
            const bool keep_is_left = e.a_is_left;
            const std::string keep =
                resolve(side_name(keep_node, keep_is_left ? eq.left_attr : eq.right_attr,
                                  e.pt_alias));
            const std::string drop =
                resolve(side_name(drop_node, keep_is_left ? eq.right_attr : eq.left_attr,
                                  e.pt_alias));
            if (keep != drop) alias_of[drop] = keep;
        }
    }

    struct Source {
        bool from_pt;
        int pt_col;    // index into pt.columns
        int node;      // non-PT node id
        int node_col;  // column in that node's table
    };
    std::vector<Source> sources;

    for (int c = 0; c < static_cast<int>(pt.columns.size()); ++c) {
        const auto& pc = pt.columns[c];
        if (alias_of.count(pc.name)) continue;
        AptColumn col;
        col.name = pc.name;
        col.kind = pc.kind;
        col.origin = "PT";
        col.group_by = pc.group_by;
        apt.column_lookup_[col.name] = static_cast<int>(apt.columns.size());
        apt.columns.push_back(std::move(col));
        sources.push_back(Source{true, c, -1, -1});
    }
    for (int n = 1; n < n_nodes; ++n) {
        const Table& t = *node_table[n];
        for (int c = 0; c < static_cast<int>(t.columns.size()); ++c) {
            const std::string name = jg.nodes[n].alias + "." + t.columns[c].name;
            if (alias_of.count(name)) continue;
            AptColumn col;
            col.name = name;
            col.kind = t.columns[c].kind;
            col.origin = jg.nodes[n].alias;
            col.group_by = false;
            apt.column_lookup_[col.name] = static_cast<int>(apt.columns.size());
            apt.columns.push_back(std::move(col));
            sources.push_back(Source{false, -1, n, c});
        }
    }
    for (const auto& [dropped, target] : alias_of) {
        auto it = apt.column_lookup_.find(resolve(target));
        if (it != apt.column_lookup_.end()) apt.column_lookup_[dropped] = it->second;
    }

    // Fill the columnar data in the grouped row order.
    apt.n_rows = partial.size();
    apt.pt_row_of.reserve(partial.size());
    apt.n_results = pt.results.size();
    apt.pt_size_of_result.resize(pt.results.size());
    apt.pt_rows_of_result = pt.rows_of_result;
    for (std::size_t res = 0; res < pt.results.size(); ++res) {
        apt.pt_size_of_result[res] = pt.rows_of_result[res].size();
    }
    apt.pt_extent_.assign(pt.rows.size(), RowRange{});
    apt.row_range_of_result.assign(pt.results.size(), RowRange{});
    apt.run_range_of_result.assign(pt.results.size(), RowRange{});

    for (const auto& p : partial) {
        const std::uint32_t row = static_cast<std::uint32_t>(apt.pt_row_of.size());
        apt.pt_row_of.push_back(p.pt_row);
        for (std::size_t s = 0; s < sources.size(); ++s) {
            const auto& src = sources[s];
            const Value* v;
            if (src.from_pt) {
                v = &pt.value_at(db, q, pt.rows[p.pt_row], src.pt_col);
            } else {
                v = &node_table[src.node]->rows[p.node_rows[src.node - 1]][src.node_col];
            }
            if (apt.columns[s].kind == ColumnKind::categorical) {
                apt.columns[s].push_cat(*v);
            } else {
                apt.columns[s].push_num(*v);
            }
        }
        (void)row;
    }

    // Runs and per-result ranges. Partial rows were generated PT-row by
    // PT-row in (result, pt row) order, so rows of one PT row are adjacent.
    std::uint32_t i = 0;
    for (std::size_t res = 0; res < pt.results.size(); ++res) {
        const std::uint32_t row_begin = i;
        const std::uint32_t run_begin = static_cast<std::uint32_t>(apt.runs.size());
        while (i < apt.n_rows) {
            const std::int32_t pt_row = apt.pt_row_of[i];
            if (pt.rows[pt_row].result != static_cast<std::int32_t>(res)) break;
            AptRun run;
            run.result = static_cast<std::int32_t>(res);
            run.pt_row = pt_row;
            run.begin = i;
            while (i < apt.n_rows && apt.pt_row_of[i] == pt_row) ++i;
            run.end = i;
            apt.pt_extent_[pt_row] = RowRange{run.begin, run.end};
            apt.runs.push_back(run);
        }
        apt.row_range_of_result[res] = RowRange{row_begin, i};
        apt.run_range_of_result[res] =
            RowRange{run_begin, static_cast<std::uint32_t>(apt.runs.size())};
    }
    return apt;
}

}  // namespace provex

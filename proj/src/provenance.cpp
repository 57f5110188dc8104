#include "provex/provenance.hpp"

#include <algorithm>
#include <unordered_map>

#include "provex/error.hpp"

namespace provex {

namespace {

bool cmp_holds(const Value& lhs, CmpOp op, const Value& rhs) {
    if (is_null(lhs) || is_null(rhs)) return false;  // null never matches
    switch (op) {
        case CmpOp::eq: return value_eq(lhs, rhs);
        case CmpOp::le:
            if (is_numeric(lhs) && is_numeric(rhs)) return as_number(lhs) <= as_number(rhs);
            if (is_text(lhs) && is_text(rhs)) {
                return std::get<std::string>(lhs) <= std::get<std::string>(rhs);
            }
            return false;
        case CmpOp::ge:
            if (is_numeric(lhs) && is_numeric(rhs)) return as_number(lhs) >= as_number(rhs);
            if (is_text(lhs) && is_text(rhs)) {
                return std::get<std::string>(lhs) >= std::get<std::string>(rhs);
            }
            return false;
    }
    return false;
}

const Table& table_of(const Database& db, const Query& q, int rel) {
    const Table* t = db.find_table(q.relations[rel].table);
    if (!t) throw InputError("unknown relation: " + q.relations[rel].table);
    return *t;
}

/// Row ids of one relation surviving its single-table selections.
std::vector<std::int32_t> filtered_rows(const Database& db, const Query& q, int rel) {
    const Table& t = table_of(db, q, rel);
    std::vector<std::int32_t> out;
    out.reserve(t.rows.size());
    for (std::int32_t r = 0; r < static_cast<std::int32_t>(t.rows.size()); ++r) {
        bool ok = true;
        for (const auto& sel : q.selections) {
            if (sel.attr.rel != rel) continue;
            if (!cmp_holds(t.rows[r][sel.attr.col], sel.op, sel.constant)) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(r);
    }
    return out;
}

std::string join_key(const Table& t, std::int32_t row, const std::vector<int>& cols,
                     bool* has_null) {
    std::string key;
    for (const int c : cols) {
        const Value& v = t.rows[row][c];
        if (is_null(v)) {
            *has_null = true;
            return key;
        }
        key += value_key(v);
        key.push_back('\x1f');
    }
    *has_null = false;
    return key;
}

}  // namespace

const Value& ProvenanceTable::value_at(const Database& db, const Query& q, const PtRow& row,
                                       int col) const {
    const PtColumn& pc = columns[col];
    const Table& t = *db.find_table(q.relations[pc.rel].table);
    return t.rows[row.base_rows[pc.rel]][pc.col];
}

int ProvenanceTable::find_result(const std::vector<std::pair<int, Value>>& constraints) const {
    int found = -1;
    for (int i = 0; i < static_cast<int>(results.size()); ++i) {
        bool ok = true;
        for (const auto& [pos, v] : constraints) {
            if (!value_eq(results[i].key[pos], v)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        if (found >= 0) return -2;
        found = i;
    }
    return found;
}

ProvenanceTable provenance(const Query& q, const Database& db) {
    if (q.relations.empty()) throw InputError("query accesses no relations");
    if (q.group_by.empty()) throw InputError("query has no group-by attributes");

    ProvenanceTable pt;
    for (int rel = 0; rel < static_cast<int>(q.relations.size()); ++rel) {
        const Table& t = table_of(db, q, rel);
        for (int col = 0; col < static_cast<int>(t.columns.size()); ++col) {
            PtColumn pc;
            pc.alias = q.relations[rel].alias;
            pc.attr = t.columns[col].name;
            pc.name = "prov_" + pc.alias + "." + pc.attr;
            pc.kind = t.columns[col].kind;
            pc.rel = rel;
            pc.col = col;
            for (const auto& g : q.group_by) {
                if (g.rel == rel && g.col == col) pc.group_by = true;
            }
            pt.columns.push_back(std::move(pc));
        }
    }

    // Left-deep join in FROM order; equality predicates whose one side is
    // already bound drive a hash join, the rest are checked as filters.
    std::vector<std::vector<std::int32_t>> partial;  // one entry per bound relation
    std::vector<bool> bound(q.relations.size(), false);
    std::vector<bool> pred_done(q.join_predicates.size(), false);

    for (int rel = 0; rel < static_cast<int>(q.relations.size()); ++rel) {
        const Table& t = table_of(db, q, rel);
        std::vector<int> new_cols;   // columns of `rel` used as hash key
        std::vector<AttrRef> olds;   // matching bound-side attributes
        std::vector<int> residual;   // predicate ids with both sides in `rel`
        for (int p = 0; p < static_cast<int>(q.join_predicates.size()); ++p) {
            if (pred_done[p]) continue;
            const auto& jp = q.join_predicates[p];
            const AttrRef* mine = nullptr;
            const AttrRef* other = nullptr;
            if (jp.left.rel == rel) {
                mine = &jp.left;
                other = &jp.right;
            } else if (jp.right.rel == rel) {
                mine = &jp.right;
                other = &jp.left;
            } else {
                continue;
            }
            if (other->rel == rel) {
                residual.push_back(p);
                pred_done[p] = true;
            } else if (bound[other->rel]) {
                new_cols.push_back(mine->col);
                olds.push_back(*other);
                pred_done[p] = true;
            }
        }

        auto candidates = filtered_rows(db, q, rel);
        if (!residual.empty()) {
            std::vector<std::int32_t> kept;
            for (const auto r : candidates) {
                bool ok = true;
                for (const int p : residual) {
                    const auto& jp = q.join_predicates[p];
                    if (!value_eq(t.rows[r][jp.left.col], t.rows[r][jp.right.col])) {
                        ok = false;
                        break;
                    }
                }
                if (ok) kept.push_back(r);
            }
            candidates = std::move(kept);
        }

        std::vector<std::vector<std::int32_t>> next;
        if (rel == 0) {
            for (const auto r : candidates) next.push_back({r});
        } else if (new_cols.empty()) {
            // No applicable equality: plain cross product.
            for (const auto& pr : partial) {
                for (const auto r : candidates) {
                    auto row = pr;
                    row.push_back(r);
                    next.push_back(std::move(row));
                }
            }
        } else {
            std::unordered_map<std::string, std::vector<std::int32_t>> index;
            for (const auto r : candidates) {
                bool has_null = false;
                auto key = join_key(t, r, new_cols, &has_null);
                if (!has_null) index[key].push_back(r);
            }
            for (const auto& pr : partial) {
                std::string key;
                bool has_null = false;
                for (const auto& old : olds) {
                    const Table& ot = table_of(db, q, old.rel);
                    const Value& v = ot.rows[pr[old.rel]][old.col];
                    if (is_null(v)) {
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
                    auto row = pr;
                    row.push_back(r);
                    next.push_back(std::move(row));
                }
            }
        }
        partial = std::move(next);
        bound[rel] = true;
        if (partial.empty()) break;
    }

    // Any predicate not consumed above (possible with odd FROM orders)
    // is applied as a final filter.
    for (int p = 0; p < static_cast<int>(q.join_predicates.size()); ++p) {
        if (pred_done[p] || partial.empty()) continue;
        const auto& jp = q.join_predicates[p];
        const Table& lt = table_of(db, q, jp.left.rel);
        const Table& rt = table_of(db, q, jp.right.rel);
        std::vector<std::vector<std::int32_t>> kept;
        for (auto& row : partial) {
            if (value_eq(lt.rows[row[jp.left.rel]][jp.left.col],
                         rt.rows[row[jp.right.rel]][jp.right.col])) {
                kept.push_back(std::move(row));
            }
        }
        partial = std::move(kept);
    }

    // Group the satisfying rows by their group-by key.
    struct Group {
        std::vector<Value> key;
        std::vector<std::vector<std::int32_t>> member_rows;
        double sum = 0.0;
        std::int64_t agg_count = 0;  // non-null inputs for sum/avg, rows for count(*)
    };
    std::unordered_map<std::string, std::size_t> group_index;
    std::vector<Group> groups;

    for (auto& row : partial) {
        std::string gkey;
        std::vector<Value> key_vals;
        key_vals.reserve(q.group_by.size());
        for (const auto& g : q.group_by) {
            const Table& t = table_of(db, q, g.rel);
            const Value& v = t.rows[row[g.rel]][g.col];
            key_vals.push_back(v);
            gkey += value_key(v);
            gkey.push_back('\x1f');
        }
        auto [it, inserted] = group_index.try_emplace(gkey, groups.size());
        if (inserted) {
            groups.push_back(Group{std::move(key_vals), {}, 0.0, 0});
        }
        Group& grp = groups[it->second];
        const auto& agg = q.aggregate;
        if (agg.star) {
            ++grp.agg_count;
        } else {
            const Table& t = table_of(db, q, agg.attr->rel);
            const Value& v = t.rows[row[agg.attr->rel]][agg.attr->col];
            if (!is_null(v)) {
                ++grp.agg_count;
                if (agg.fn != AggFn::count) grp.sum += as_number(v);
            }
        }
        grp.member_rows.push_back(std::move(row));
    }

    std::vector<std::size_t> order(groups.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ka = groups[a].key;
        const auto& kb = groups[b].key;
        for (std::size_t i = 0; i < ka.size(); ++i) {
            const int c = value_cmp(ka[i], kb[i]);
            if (c != 0) return c < 0;
        }
        return false;
    });

    for (const auto gi : order) {
        Group& grp = groups[gi];
        ResultTuple rt;
        rt.key = grp.key;
        switch (q.aggregate.fn) {
            case AggFn::count: rt.aggregate = Value{grp.agg_count}; break;
            case AggFn::sum:
                rt.aggregate = grp.agg_count > 0 ? Value{grp.sum} : Value{std::monostate{}};
                break;
            case AggFn::avg:
                rt.aggregate = grp.agg_count > 0
                                   ? Value{grp.sum / static_cast<double>(grp.agg_count)}
                                   : Value{std::monostate{}};
                break;
        }
        const auto result_idx = static_cast<std::int32_t>(pt.results.size());
        pt.results.push_back(std::move(rt));
        pt.rows_of_result.emplace_back();
        for (auto& base_rows : grp.member_rows) {
            pt.rows_of_result.back().push_back(static_cast<std::int32_t>(pt.rows.size()));
            pt.rows.push_back(PtRow{std::move(base_rows), result_idx});
        }
    }
    return pt;
}

std::vector<ResultTuple> evaluate(const Query& q, const Database& db) {
    return provenance(q, db).results;
}

}  // namespace provex

#include "provex/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "provex/error.hpp"
#include "provex/fragments.hpp"

namespace provex {
namespace oracle {

ConstantPools ConstantPools::from_apt(const AptTable& apt, int fragments, bool numeric_eq) {
    ConstantPools pools;
    pools.numeric_eq = numeric_eq;
    for (int c = 0; c < static_cast<int>(apt.columns.size()); ++c) {
        const auto& col = apt.columns[c];
        if (col.group_by) continue;
        if (col.kind == ColumnKind::categorical) {
            CatPool p;
            p.attr = col.name;
            p.values = col.dict;
            std::sort(p.values.begin(), p.values.end());
            if (!p.values.empty()) pools.categorical.push_back(std::move(p));
        } else {
            NumPool p;
            p.attr = col.name;
            p.boundaries = fragment_boundaries(apt, c, fragments);
            if (!p.boundaries.empty()) pools.numeric.push_back(std::move(p));
        }
    }
    return pools;
}

std::size_t ConstantPools::pattern_space(int max_attrs) const {
    // Sum over predicate counts 1..max_attrs of the products of per-attribute
    // option counts; computed by a bounded subset-size DP.
    std::vector<std::size_t> options;
    for (const auto& p : categorical) options.push_back(p.values.size());
    const std::size_t n_ops = numeric_eq ? 3 : 2;
    for (const auto& p : numeric) options.push_back(p.boundaries.size() * n_ops);

    const int cap = std::min<int>(max_attrs, static_cast<int>(options.size()));
    if (cap <= 0) return 0;
    constexpr std::size_t kOverflow = ~static_cast<std::size_t>(0);
    std::vector<std::size_t> by_size(static_cast<std::size_t>(cap) + 1, 0);
    by_size[0] = 1;
    for (const std::size_t o : options) {
        for (int s = cap; s >= 1; --s) {
            const std::size_t add = by_size[static_cast<std::size_t>(s - 1)];
            if (add == 0) continue;
            if (add > kOverflow / std::max<std::size_t>(o, 1)) return kOverflow;
            by_size[static_cast<std::size_t>(s)] += add * o;
        }
    }
    std::size_t total = 0;
    for (int s = 1; s <= cap; ++s) total += by_size[static_cast<std::size_t>(s)];
    return total;
}

namespace {

// The oracle's own predicate/matching machinery, written from first
// principles and sharing nothing with CompiledPattern.
struct OraclePred {
    int col = -1;
    bool categorical = true;
    CmpOp op = CmpOp::eq;
    std::string text;
    double number = 0.0;
};

bool row_matches(const AptTable& apt, std::uint32_t row, const std::vector<OraclePred>& preds) {
    for (const auto& p : preds) {
        const auto& col = apt.columns[p.col];
        if (p.categorical) {
            const std::int32_t code = col.codes[row];
            if (code < 0) return false;
            if (col.dict[static_cast<std::size_t>(code)] != p.text) return false;
        } else {
            if (col.null_mask[row]) return false;
            const double v = col.nums[row];
            if (p.op == CmpOp::eq && v != p.number) return false;
            if (p.op == CmpOp::le && v > p.number) return false;
            if (p.op == CmpOp::ge && v < p.number) return false;
        }
    }
    return true;
}

std::int64_t covered_pt_rows(const AptTable& apt, int result,
                             const std::vector<OraclePred>& preds) {
    std::int64_t covered = 0;
    const RowRange runs = apt.run_range_of_result[result];
    for (std::uint32_t i = runs.begin; i < runs.end; ++i) {
        for (std::uint32_t r = apt.runs[i].begin; r < apt.runs[i].end; ++r) {
            if (row_matches(apt, r, preds)) {
                ++covered;
                break;
            }
        }
    }
    return covered;
}

MetricSet eval_counts(const AptTable& apt, const std::vector<OraclePred>& preds, int primary,
                      std::optional<int> secondary) {
    MetricSet m;
    m.tp = covered_pt_rows(apt, primary, preds);
    m.fn = static_cast<std::int64_t>(apt.pt_size_of_result[primary]) - m.tp;
    m.fp = 0;
    if (secondary) {
        m.fp = covered_pt_rows(apt, *secondary, preds);
    } else {
        for (std::size_t res = 0; res < apt.n_results; ++res) {
            if (static_cast<int>(res) == primary) continue;
            m.fp += covered_pt_rows(apt, static_cast<int>(res), preds);
        }
    }
    m.precision = (m.tp + m.fp) > 0 ? double(m.tp) / double(m.tp + m.fp) : 0.0;
    m.recall = (m.tp + m.fn) > 0 ? double(m.tp) / double(m.tp + m.fn) : 0.0;
    m.fscore = (m.precision > 0 && m.recall > 0)
                   ? 2 * m.precision * m.recall / (m.precision + m.recall)
                   : 0.0;
    return m;
}

struct PoolAttr {
    std::string attr;
    int col;
    bool categorical;
    std::vector<std::string> values;
    std::vector<double> boundaries;
};

Pattern to_pattern(const AptTable& apt, const std::vector<OraclePred>& preds) {
    Pattern out;
    for (const auto& p : preds) {
        Predicate pred;
        pred.attr = apt.columns[p.col].name;
        pred.op = p.op;
        pred.constant = p.categorical ? Value{p.text} : Value{p.number};
        out.predicates.emplace(pred.attr, std::move(pred));
    }
    return out;
}

}  // namespace

MetricSet exact_metrics(const AptTable& apt, const Pattern& p, int primary,
                        std::optional<int> secondary) {
    std::vector<OraclePred> preds;
    for (const auto& [attr, pred] : p.predicates) {
        OraclePred op;
        op.col = apt.column_index(attr);
        if (op.col < 0) throw InputError("oracle: unknown APT attribute: " + attr);
        op.categorical = apt.columns[op.col].kind == ColumnKind::categorical;
        op.op = pred.op;
        if (op.categorical) op.text = value_display(pred.constant);
        else op.number = as_number(pred.constant);
        preds.push_back(std::move(op));
    }
    return eval_counts(apt, preds, primary, secondary);
}

std::vector<ScoredPattern> brute_force_top_k(const AptTable& apt,
                                             const std::vector<int>& targets, int max_attrs,
                                             const ConstantPools& pools, int k,
                                             std::size_t guard) {
    const std::size_t space = pools.pattern_space(max_attrs);
    if (space > guard) {
        throw LimitError("oracle pattern space " + std::to_string(space) +
                         " exceeds guard " + std::to_string(guard));
    }

    std::vector<PoolAttr> attrs;
    for (const auto& p : pools.categorical) {
        const int col = apt.column_index(p.attr);
        if (col < 0) throw InputError("oracle: unknown APT attribute: " + p.attr);
        attrs.push_back(PoolAttr{p.attr, col, true, p.values, {}});
    }
    for (const auto& p : pools.numeric) {
        const int col = apt.column_index(p.attr);
        if (col < 0) throw InputError("oracle: unknown APT attribute: " + p.attr);
        attrs.push_back(PoolAttr{p.attr, col, false, {}, p.boundaries});
    }

    const bool two_point = targets.size() == 2;
    auto better = [](const ScoredPattern& a, const ScoredPattern& b) {
        if (a.metrics.fscore != b.metrics.fscore) return a.metrics.fscore > b.metrics.fscore;
        const std::string ca = a.pattern.canonical();
        const std::string cb = b.pattern.canonical();
        if (ca != cb) return ca < cb;
        return a.target < b.target;
    };

    std::vector<ScoredPattern> best;
    auto offer = [&](ScoredPattern sp) {
        best.push_back(std::move(sp));
        std::sort(best.begin(), best.end(), better);
        if (static_cast<int>(best.size()) > k) best.resize(static_cast<std::size_t>(k));
    };

    std::vector<OraclePred> current;
    auto walk = [&](auto&& self, std::size_t from, int depth) -> void {
        if (!current.empty()) {
            for (std::size_t ti = 0; ti < targets.size(); ++ti) {
                ScoredPattern sp;
                sp.target = targets[ti];
                sp.metrics = eval_counts(apt, current, targets[ti],
                                         two_point ? std::optional<int>(targets[1 - ti])
                                                   : std::nullopt);
                sp.pattern = to_pattern(apt, current);
                offer(std::move(sp));
            }
        }
        if (depth == max_attrs) return;
        for (std::size_t a = from; a < attrs.size(); ++a) {
            const auto& pa = attrs[a];
            if (pa.categorical) {
                for (const auto& v : pa.values) {
                    current.push_back(OraclePred{pa.col, true, CmpOp::eq, v, 0.0});
                    self(self, a + 1, depth + 1);
                    current.pop_back();
                }
            } else {
                for (const double b : pa.boundaries) {
                    for (const CmpOp op : {CmpOp::le, CmpOp::ge, CmpOp::eq}) {
                        if (op == CmpOp::eq && !pools.numeric_eq) continue;
                        current.push_back(OraclePred{pa.col, false, op, "", b});
                        self(self, a + 1, depth + 1);
                        current.pop_back();
                    }
                }
            }
        }
    };
    walk(walk, 0, 0);
    return best;
}

namespace {

std::string naive_cell(const Value& v) {
    return is_null(v) ? std::string("\x01null") : value_key(v);
}

}  // namespace

NaiveApt naive_apt(const Query& q, const Database& db, const ProvenanceTable& pt,
                   const JoinGraph& jg, const SchemaGraph& schema, std::size_t guard) {
    NaiveApt out;
    const int n_nodes = static_cast<int>(jg.nodes.size());
    std::vector<const Table*> node_table(n_nodes, nullptr);
    double cross = static_cast<double>(pt.rows.size());
    for (int n = 1; n < n_nodes; ++n) {
        node_table[n] = db.find_table(jg.nodes[n].relation);
        if (!node_table[n]) throw InputError("naive apt: unknown table " + jg.nodes[n].relation);
        cross *= static_cast<double>(std::max<std::size_t>(1, node_table[n]->rows.size()));
    }
    if (cross > static_cast<double>(guard)) {
        throw LimitError("naive apt cross product exceeds guard");
    }

    // Independent re-derivation of the duplicate-column rule: walk edges
    // in insertion order, drop the far side of each equality.
    auto col_name = [&](int node, const std::string& attr, const std::string& pt_alias) {
        if (jg.nodes[node].is_pt) return "prov_" + pt_alias + "." + attr;
        return jg.nodes[node].alias + "." + attr;
    };
    std::map<std::string, std::string> alias_of;
    auto resolve = [&](std::string n) {
        while (alias_of.count(n)) n = alias_of[n];
        return n;
    };
    for (const auto& e : jg.edges) {
        const auto& cond = schema.edges[e.schema_edge].conditions[e.condition];
        for (const auto& eq : cond.eqs) {
            const std::string keep =
                resolve(col_name(e.a, e.a_is_left ? eq.left_attr : eq.right_attr, e.pt_alias));
            const std::string drop =
                resolve(col_name(e.b, e.a_is_left ? eq.right_attr : eq.left_attr, e.pt_alias));
            if (keep != drop) alias_of[drop] = keep;
        }
    }

    struct Cell {
        int node;  // 0 = PT
        int pt_col;
        int node_col;
    };
    std::vector<Cell> cells;
    for (int c = 0; c < static_cast<int>(pt.columns.size()); ++c) {
        if (alias_of.count(pt.columns[c].name)) continue;
        out.columns.push_back(pt.columns[c].name);
        cells.push_back(Cell{0, c, -1});
    }
    for (int n = 1; n < n_nodes; ++n) {
        for (int c = 0; c < static_cast<int>(node_table[n]->columns.size()); ++c) {
            const std::string name = jg.nodes[n].alias + "." + node_table[n]->columns[c].name;
            if (alias_of.count(name)) continue;
            out.columns.push_back(name);
            cells.push_back(Cell{n, -1, c});
        }
    }

    // Odometer over the node relations for every PT row.
    std::vector<std::size_t> sizes(n_nodes, 0);
    for (int n = 1; n < n_nodes; ++n) sizes[n] = node_table[n]->rows.size();

    auto side_value = [&](const PtRow& pt_row, const std::vector<std::size_t>& pick, int node,
                          const std::string& attr, const std::string& pt_alias) -> const Value& {
        if (jg.nodes[node].is_pt) {
            const int rel = q.relation_by_alias(pt_alias);
            const Table& t = *db.find_table(q.relations[rel].table);
            return t.rows[pt_row.base_rows[rel]][t.column_index(attr)];
        }
        const Table& t = *node_table[node];
        return t.rows[pick[node]][t.column_index(attr)];
    };

    for (std::size_t pr = 0; pr < pt.rows.size(); ++pr) {
        const PtRow& pt_row = pt.rows[pr];
        std::vector<std::size_t> pick(n_nodes, 0);
        bool exhausted = false;
        for (int n = 1; n < n_nodes; ++n) {
            if (sizes[n] == 0) exhausted = true;
        }
        while (!exhausted) {
            bool ok = true;
            for (const auto& e : jg.edges) {
                const auto& cond = schema.edges[e.schema_edge].conditions[e.condition];
                for (const auto& eq : cond.eqs) {
                    const Value& l = side_value(pt_row, pick, e.a_is_left ? e.a : e.b,
                                                eq.left_attr, e.pt_alias);
                    const Value& r = side_value(pt_row, pick, e.a_is_left ? e.b : e.a,
                                                eq.right_attr, e.pt_alias);
                    if (!value_eq(l, r)) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) break;
            }
            if (ok) {
                std::string enc = std::to_string(pr);
                for (const auto& cell : cells) {
                    enc.push_back('\x1f');
                    if (cell.node == 0) {
                        enc += naive_cell(pt.value_at(db, q, pt_row, cell.pt_col));
                    } else {
                        enc += naive_cell(node_table[cell.node]->rows[pick[cell.node]][cell.node_col]);
                    }
                }
                out.rows.push_back(std::move(enc));
            }
            // advance odometer; a node-less graph emits the bare PT row once
            int n = n_nodes - 1;
            for (; n >= 1; --n) {
                if (++pick[n] < sizes[n]) break;
                pick[n] = 0;
            }
            if (n < 1) exhausted = true;
        }
    }
    std::sort(out.rows.begin(), out.rows.end());
    return out;
}

std::vector<std::string> encode_apt(const AptTable& apt) {
    std::vector<std::string> rows;
    rows.reserve(apt.n_rows);
    for (std::uint32_t r = 0; r < apt.n_rows; ++r) {
        std::string enc = std::to_string(apt.pt_row_of[r]);
        for (std::size_t c = 0; c < apt.columns.size(); ++c) {
            enc.push_back('\x1f');
            const auto& col = apt.columns[c];
            if (col.kind == ColumnKind::categorical) {
                enc += col.codes[r] < 0 ? std::string("\x01null")
                                        : value_key(Value{col.dict[col.codes[r]]});
            } else {
                enc += col.null_mask[r] ? std::string("\x01null") : value_key(Value{col.nums[r]});
            }
        }
        rows.push_back(std::move(enc));
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

namespace {

/// Edge rendered under a node relabeling; independent of the signature
/// implementation.
std::string mapped_edge(const JoinGraph& g, const JoinGraphEdge& e, const SchemaGraph& schema,
                        const std::vector<int>& map) {
    const auto& cond = schema.edges[e.schema_edge].conditions[e.condition];
    const int l = e.a_is_left ? e.a : e.b;
    const int r = e.a_is_left ? e.b : e.a;
    std::vector<std::string> parts;
    for (const auto& eq : cond.eqs) {
        std::string ls = std::to_string(map[l]) + ":" +
                         (g.nodes[l].is_pt ? e.pt_alias + "/" : "") + eq.left_attr;
        std::string rs = std::to_string(map[r]) + ":" +
                         (g.nodes[r].is_pt ? e.pt_alias + "/" : "") + eq.right_attr;
        if (rs < ls) std::swap(ls, rs);
        parts.push_back(ls + "~" + rs);
    }
    std::sort(parts.begin(), parts.end());
    std::string out;
    for (const auto& p : parts) {
        out += p;
        out.push_back('|');
    }
    return out;
}

std::vector<std::string> mapped_edges(const JoinGraph& g, const SchemaGraph& schema,
                                      const std::vector<int>& map) {
    std::vector<std::string> out;
    for (const auto& e : g.edges) out.push_back(mapped_edge(g, e, schema, map));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

bool isomorphic(const JoinGraph& a, const JoinGraph& b, const SchemaGraph& schema) {
    if (a.nodes.size() != b.nodes.size() || a.edges.size() != b.edges.size()) return false;

    std::map<std::string, std::vector<int>> groups_a, groups_b;
    for (int i = 0; i < static_cast<int>(a.nodes.size()); ++i) {
        groups_a[a.nodes[i].is_pt ? "\x02PT" : a.nodes[i].relation].push_back(i);
    }
    for (int i = 0; i < static_cast<int>(b.nodes.size()); ++i) {
        groups_b[b.nodes[i].is_pt ? "\x02PT" : b.nodes[i].relation].push_back(i);
    }
    if (groups_a.size() != groups_b.size()) return false;
    for (const auto& [label, members] : groups_a) {
        auto it = groups_b.find(label);
        if (it == groups_b.end() || it->second.size() != members.size()) return false;
    }

    std::vector<int> map_b(b.nodes.size());
    for (std::size_t i = 0; i < map_b.size(); ++i) map_b[i] = static_cast<int>(i);
    const auto edges_b = mapped_edges(b, schema, map_b);

    // Try every label-preserving bijection from a's nodes onto b's.
    std::vector<std::pair<std::vector<int>, std::vector<int>>> grouped;
    for (auto& [label, members] : groups_a) grouped.emplace_back(members, groups_b[label]);

    std::vector<int> map_a(a.nodes.size(), -1);
    auto attempt = [&](auto&& self, std::size_t gi) -> bool {
        if (gi == grouped.size()) return mapped_edges(a, schema, map_a) == edges_b;
        auto& [from, to] = grouped[gi];
        std::vector<int> perm = to;
        std::sort(perm.begin(), perm.end());
        do {
            for (std::size_t i = 0; i < from.size(); ++i) map_a[from[i]] = perm[i];
            if (self(self, gi + 1)) return true;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return false;
    };
    return attempt(attempt, 0);
}

std::vector<JoinGraph> exhaustive_join_graphs(const SchemaGraph& schema, const Query& q,
                                              int max_edges) {
    std::vector<JoinGraph> all;
    all.push_back(JoinGraph::pt_only());
    std::vector<JoinGraph> prev{all.front()};

    for (int level = 1; level <= max_edges; ++level) {
        std::vector<JoinGraph> next;
        for (const auto& g : prev) {
            // Independent attachment enumeration: every node, every
            // adjacent schema condition, attach to a fresh node or to any
            // existing same-label node not already joined the same way.
            for (int v = 0; v < static_cast<int>(g.nodes.size()); ++v) {
                std::vector<std::pair<std::string, std::string>> rels;
                if (g.nodes[v].is_pt) {
                    for (const auto& qr : q.relations) rels.emplace_back(qr.table, qr.alias);
                } else {
                    rels.emplace_back(g.nodes[v].relation, "");
                }
                for (const auto& [rel, qalias] : rels) {
                    for (int se = 0; se < static_cast<int>(schema.edges.size()); ++se) {
                        const auto& edge = schema.edges[se];
                        std::vector<bool> v_left_options;
                        if (edge.left == rel) v_left_options.push_back(true);
                        if (edge.right == rel) v_left_options.push_back(false);
                        for (const bool v_left : v_left_options) {
                            const std::string& far = v_left ? edge.right : edge.left;
                            for (int c = 0; c < static_cast<int>(edge.conditions.size()); ++c) {
                                // fresh node
                                {
                                    JoinGraph g2 = g;
                                    int count = 0;
                                    for (const auto& n : g.nodes) {
                                        if (!n.is_pt && n.relation == far) ++count;
                                    }
                                    g2.nodes.push_back(JoinGraphNode{
                                        false, far, far + "_" + std::to_string(count + 1)});
                                    g2.edges.push_back(JoinGraphEdge{
                                        v, static_cast<int>(g2.nodes.size()) - 1, se, c,
                                        v_left, qalias});
                                    next.push_back(std::move(g2));
                                }
                                // existing nodes
                                for (int u = 0; u < static_cast<int>(g.nodes.size()); ++u) {
                                    if (u == v || g.nodes[u].is_pt ||
                                        g.nodes[u].relation != far) {
                                        continue;
                                    }
                                    JoinGraph g2 = g;
                                    g2.edges.push_back(
                                        JoinGraphEdge{v, u, se, c, v_left, qalias});
                                    // re-added identical condition on the
                                    // same pair collapses to the original
                                    JoinGraph without = g;
                                    bool dup = false;
                                    for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
                                        JoinGraph probe = g;
                                        probe.edges = {g.edges[ei]};
                                        JoinGraph candidate = g;
                                        candidate.edges = {g2.edges.back()};
                                        const bool same_pair =
                                            (g.edges[ei].a == v && g.edges[ei].b == u) ||
                                            (g.edges[ei].a == u && g.edges[ei].b == v);
                                        if (same_pair &&
                                            isomorphic(probe, candidate, schema)) {
                                            dup = true;
                                            break;
                                        }
                                    }
                                    (void)without;
                                    if (!dup) next.push_back(std::move(g2));
                                }
                            }
                        }
                    }
                }
            }
        }
        // Pairwise isomorphism dedup within the level.
        std::vector<JoinGraph> unique;
        for (auto& g : next) {
            bool dup = false;
            for (const auto& u : unique) {
                if (isomorphic(g, u, schema)) {
                    dup = true;
                    break;
                }
            }
            if (!dup) unique.push_back(std::move(g));
        }
        for (const auto& g : unique) all.push_back(g);
        prev = std::move(unique);
        if (prev.empty()) break;
    }
    return all;
}

RankingComparison ranking_quality(const std::vector<std::pair<std::string, double>>& reference,
                                  const std::vector<std::string>& candidate, std::size_t n) {
    RankingComparison out;

    std::map<std::string, std::size_t> ref_pos;
    std::map<std::string, double> ref_score;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        ref_pos.emplace(reference[i].first, i);
        ref_score.emplace(reference[i].first, reference[i].second);
    }

    // Kendall tau over items present in both rankings.
    std::vector<std::size_t> common;  // reference positions in candidate order
    for (const auto& item : candidate) {
        auto it = ref_pos.find(item);
        if (it != ref_pos.end()) common.push_back(it->second);
    }
    out.kendall_tau = 0;
    for (std::size_t i = 0; i < common.size(); ++i) {
        for (std::size_t j = i + 1; j < common.size(); ++j) {
            if (common[i] > common[j]) ++out.kendall_tau;
        }
    }

    auto gain = [&](const std::string& item) {
        auto it = ref_score.find(item);
        return it == ref_score.end() ? 0.0 : it->second;
    };
    double dcg = 0.0;
    for (std::size_t i = 0; i < candidate.size() && i < n; ++i) {
        dcg += gain(candidate[i]) / std::log2(static_cast<double>(i) + 2.0);
    }
    double idcg = 0.0;
    for (std::size_t i = 0; i < reference.size() && i < n; ++i) {
        idcg += reference[i].second / std::log2(static_cast<double>(i) + 2.0);
    }
    out.ndcg = idcg > 0.0 ? dcg / idcg : 1.0;
    return out;
}

}  // namespace oracle
}  // namespace provex

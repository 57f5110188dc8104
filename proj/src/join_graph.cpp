#include "provex/join_graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

#include "provex/error.hpp"

namespace provex {

void SchemaGraph::validate(const Database& db) const {
    for (const auto& e : edges) {
        const Table* lt = db.find_table(e.left);
        const Table* rt = db.find_table(e.right);
        if (!lt) throw InputError("schema edge references unknown table: " + e.left);
        if (!rt) throw InputError("schema edge references unknown table: " + e.right);
        if (e.conditions.empty()) {
            throw InputError("schema edge " + e.left + "-" + e.right + " has no conditions");
        }
        for (const auto& cond : e.conditions) {
            if (cond.eqs.empty()) {
                throw InputError("schema edge " + e.left + "-" + e.right +
                                 " has an empty condition");
            }
            for (const auto& eq : cond.eqs) {
                if (!lt->has_column(eq.left_attr)) {
                    throw InputError("schema edge condition references unknown attribute " +
                                     e.left + "." + eq.left_attr);
                }
                if (!rt->has_column(eq.right_attr)) {
                    throw InputError("schema edge condition references unknown attribute " +
                                     e.right + "." + eq.right_attr);
                }
            }
        }
    }
}

namespace {

/// Side-qualified attribute for signature purposes. PT sides carry the
/// bound query alias so that different bindings stay distinct.
std::string side_token(const JoinGraph& jg, int node, const std::string& pt_alias,
                       const std::string& attr, const std::vector<int>& canon) {
    std::string t = std::to_string(canon[node]);
    t.push_back('.');
    if (jg.nodes[node].is_pt) {
        t += pt_alias;
        t.push_back('.');
    }
    t += attr;
    return t;
}

std::string edge_string(const JoinGraph& jg, const JoinGraphEdge& e, const SchemaGraph& schema,
                        const std::vector<int>& canon) {
    const auto& cond = schema.edges[e.schema_edge].conditions[e.condition];
    const int left_node = e.a_is_left ? e.a : e.b;
    const int right_node = e.a_is_left ? e.b : e.a;
    std::vector<std::string> eqs;
    eqs.reserve(cond.eqs.size());
    for (const auto& eq : cond.eqs) {
        std::string l = side_token(jg, left_node, e.pt_alias, eq.left_attr, canon);
        std::string r = side_token(jg, right_node, e.pt_alias, eq.right_attr, canon);
        if (r < l) std::swap(l, r);  // symmetric conditions normalize
        eqs.push_back(l + "=" + r);
    }
    std::sort(eqs.begin(), eqs.end());
    std::string out;
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        if (i) out.push_back('&');
        out += eqs[i];
    }
    return out;
}

std::string encode(const JoinGraph& jg, const SchemaGraph& schema,
                   const std::vector<int>& canon) {
    std::vector<std::string> edge_strs;
    edge_strs.reserve(jg.edges.size());
    for (const auto& e : jg.edges) edge_strs.push_back(edge_string(jg, e, schema, canon));
    std::sort(edge_strs.begin(), edge_strs.end());
    std::string out;
    for (std::size_t i = 0; i < edge_strs.size(); ++i) {
        if (i) out.push_back(';');
        out += edge_strs[i];
    }
    return out;
}

/// Identical semantic condition between the same two nodes (using
/// concrete node ids); used by the re-add guard.
std::string concrete_edge_key(const JoinGraph& jg, const JoinGraphEdge& e,
                              const SchemaGraph& schema) {
    std::vector<int> identity(jg.nodes.size());
    for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = static_cast<int>(i);
    return edge_string(jg, e, schema, identity);
}

}  // namespace

std::string JoinGraph::signature(const SchemaGraph& schema) const {
    // Group non-PT nodes by label; canonical ids are assigned per group in
    // label order, minimizing the edge encoding over within-group
    // permutations. Graphs are tiny, so this is exact and cheap.
    std::map<std::string, std::vector<int>> groups;
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
        if (!nodes[i].is_pt) groups[nodes[i].relation].push_back(i);
    }

    std::vector<int> canon(nodes.size(), 0);
    const int pt = pt_node();
    canon[pt] = 0;

    std::string labels = "PT";
    int next_id = 1;
    std::vector<std::vector<int>> group_members;
    std::vector<int> group_base;
    for (auto& [label, members] : groups) {
        for (std::size_t i = 0; i < members.size(); ++i) {
            labels += ",";
            labels += label;
        }
        group_base.push_back(next_id);
        group_members.push_back(members);
        next_id += static_cast<int>(members.size());
    }

    std::string best;
    bool have_best = false;
    // Odometer over per-group permutations.
    std::vector<std::vector<int>> perms = group_members;
    auto assign = [&]() {
        for (std::size_t g = 0; g < perms.size(); ++g) {
            for (std::size_t i = 0; i < perms[g].size(); ++i) {
                canon[perms[g][i]] = group_base[g] + static_cast<int>(i);
            }
        }
        std::string enc = encode(*this, schema, canon);
        if (!have_best || enc < best) {
            best = std::move(enc);
            have_best = true;
        }
    };
    for (auto& p : perms) std::sort(p.begin(), p.end());
    std::size_t g = 0;
    auto recurse = [&](auto&& self, std::size_t gi) -> void {
        if (gi == perms.size()) {
            assign();
            return;
        }
        auto& p = perms[gi];
        std::sort(p.begin(), p.end());
        do {
            self(self, gi + 1);
        } while (std::next_permutation(p.begin(), p.end()));
    };
    recurse(recurse, g);
    if (!have_best) best = "";

    return "n=" + labels + "|e=" + best;
}

namespace {

std::string fresh_alias(const JoinGraph& jg, const std::string& relation) {
    int count = 0;
    for (const auto& n : jg.nodes) {
        if (!n.is_pt && n.relation == relation) ++count;
    }
    return relation + "_" + std::to_string(count + 1);
}

void add_edge_variants(const SchemaGraph& schema, const JoinGraph& jg, int v,
                       const std::string& end_relation, int schema_edge, int condition,
                       bool v_is_left, const std::string& pt_alias,
                       std::vector<JoinGraph>& out) {
    // Variant 1: attach a fresh node labeled with the end relation.
    {
        JoinGraph g = jg;
        JoinGraphNode n;
        n.relation = end_relation;
        n.alias = fresh_alias(jg, end_relation);
        g.nodes.push_back(n);
        JoinGraphEdge e;
        e.a = v;
        e.b = static_cast<int>(g.nodes.size()) - 1;
        e.schema_edge = schema_edge;
        e.condition = condition;
        e.a_is_left = v_is_left;
        e.pt_alias = pt_alias;
        g.edges.push_back(e);
        out.push_back(std::move(g));
    }

    // Variant 2: connect to each existing node with that label, unless an
    // edge with the identical condition already joins the pair. The two
    // endpoints of a schema edge are distinct relation copies, so no
    // self-loops.
    for (int u = 0; u < static_cast<int>(jg.nodes.size()); ++u) {
        if (u == v || jg.nodes[u].is_pt || jg.nodes[u].relation != end_relation) continue;
        JoinGraphEdge e;
        e.a = v;
        e.b = u;
        e.schema_edge = schema_edge;
        e.condition = condition;
        e.a_is_left = v_is_left;
        e.pt_alias = pt_alias;

        JoinGraph probe = jg;  // key computation needs the node table only
        const std::string key = concrete_edge_key(probe, e, schema);
        bool duplicate = false;
        for (const auto& old : jg.edges) {
            const bool same_pair = (old.a == e.a && old.b == e.b) || (old.a == e.b && old.b == e.a);
            if (same_pair && concrete_edge_key(probe, old, schema) == key) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) continue;
        JoinGraph g = jg;
        g.edges.push_back(e);
        out.push_back(std::move(g));
    }
}

}  // namespace

std::vector<JoinGraph> extend_jg(const SchemaGraph& schema, const JoinGraph& jg,
                                 const Query& q) {
    std::vector<JoinGraph> out;
    for (int v = 0; v < static_cast<int>(jg.nodes.size()); ++v) {
        // The PT node stands for every relation occurrence in the query.
        std::vector<std::pair<std::string, std::string>> rels;  // (relation, pt alias)
        if (jg.nodes[v].is_pt) {
            for (const auto& qr : q.relations) rels.emplace_back(qr.table, qr.alias);
        } else {
            rels.emplace_back(jg.nodes[v].relation, "");
        }
        for (const auto& [rel, qalias] : rels) {
            for (int se = 0; se < static_cast<int>(schema.edges.size()); ++se) {
                const auto& edge = schema.edges[se];
                for (int c = 0; c < static_cast<int>(edge.conditions.size()); ++c) {
                    if (edge.left == rel) {
                        add_edge_variants(schema, jg, v, edge.right, se, c,
                                          /*v_is_left=*/true, qalias, out);
                    }
                    if (edge.right == rel && edge.left != edge.right) {
                        add_edge_variants(schema, jg, v, edge.left, se, c,
                                          /*v_is_left=*/false, qalias, out);
                    }
                    if (edge.right == rel && edge.left == edge.right) {
                        // Self-edge: the far endpoint plays the opposite role.
                        add_edge_variants(schema, jg, v, edge.left, se, c,
                                          /*v_is_left=*/false, qalias, out);
                    }
                }
            }
        }
    }
    return out;
}

std::vector<JoinGraph> enumerate_join_graphs(const SchemaGraph& schema, const Query& q,
                                             int max_edges) {
    std::vector<JoinGraph> result;
    std::unordered_set<std::string> seen;

    JoinGraph root = JoinGraph::pt_only();
    seen.insert(root.signature(schema));
    result.push_back(root);

    std::vector<JoinGraph> prev{root};
    for (int level = 1; level <= max_edges; ++level) {
        std::vector<std::pair<std::string, JoinGraph>> fresh;
        for (const auto& g : prev) {
            for (auto& ext : extend_jg(schema, g, q)) {
                auto sig = ext.signature(schema);
                if (seen.insert(sig).second) fresh.emplace_back(std::move(sig), std::move(ext));
            }
        }
        std::sort(fresh.begin(), fresh.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        prev.clear();
        for (auto& [sig, g] : fresh) {
            result.push_back(g);
            prev.push_back(std::move(g));
        }
        if (prev.empty()) break;
    }
    return result;
}

namespace {

/// Attributes a node contributes to an edge condition, on its own side.
std::vector<std::string> node_side_attrs(const JoinGraphEdge& e, int node,
                                         const SchemaGraph& schema) {
    const auto& cond = schema.edges[e.schema_edge].conditions[e.condition];
    const bool node_is_left = (e.a == node) ? e.a_is_left : !e.a_is_left;
    std::vector<std::string> attrs;
    for (const auto& eq : cond.eqs) {
        attrs.push_back(node_is_left ? eq.left_attr : eq.right_attr);
    }
    return attrs;
}

}  // namespace

CostEstimate estimate_cost(const JoinGraph& jg, const Database& db, const Query& q,
                           const SchemaGraph& schema, std::size_t pt_rows) {
    (void)q;
    CostEstimate est;
    double total = static_cast<double>(pt_rows);

    // Each edge is charged to its later-added endpoint, so appending a new
    // node never changes existing fanouts (keeps the estimate monotone).
    std::vector<std::set<std::string>> charged_attrs(jg.nodes.size());
    for (const auto& e : jg.edges) {
        const int charged = std::max(e.a, e.b);
        for (auto& a : node_side_attrs(e, charged, schema)) {
            charged_attrs[charged].insert(std::move(a));
        }
    }

    for (int n = 0; n < static_cast<int>(jg.nodes.size()); ++n) {
        if (jg.nodes[n].is_pt) continue;
        const Table* t = db.find_table(jg.nodes[n].relation);
        if (!t) throw InputError("join graph references unknown table: " + jg.nodes[n].relation);
        double fanout;
        if (t->rows.empty()) {
            fanout = 0.0;
        } else {
            double denom = 1.0;
            for (const auto& attr : charged_attrs[n]) {
                const int col = t->column_index(attr);
                denom *= static_cast<double>(std::max<std::size_t>(1, t->distinct_count(col)));
            }
            fanout = std::max(1.0, static_cast<double>(t->rows.size()) / denom);
        }
        est.node_fanouts.push_back(fanout);
        total *= fanout;
    }
    est.estimated_rows = total;
    return est;
}

ValidityResult is_valid(const JoinGraph& jg, const Database& db, const Query& q,
                        const SchemaGraph& schema, std::size_t pt_rows, double cost_threshold) {
    ValidityResult res;
    for (int n = 0; n < static_cast<int>(jg.nodes.size()); ++n) {
        if (jg.nodes[n].is_pt) continue;  // PT is a query result, not a base relation
        const Table* t = db.find_table(jg.nodes[n].relation);
        if (!t) throw InputError("join graph references unknown table: " + jg.nodes[n].relation);
        std::set<std::string> joined;
        for (const auto& e : jg.edges) {
            if (e.a != n && e.b != n) continue;
            for (auto& a : node_side_attrs(e, n, schema)) joined.insert(std::move(a));
        }
        for (const int pk_col : t->primary_key) {
            const std::string& attr = t->columns[pk_col].name;
            if (!joined.count(attr)) {
                res.valid = false;
                res.reason = Verdict::pk_uncovered;
                res.detail = jg.nodes[n].alias + "." + attr + " not joined";
                res.cost = estimate_cost(jg, db, q, schema, pt_rows);
                return res;
            }
        }
    }
    res.cost = estimate_cost(jg, db, q, schema, pt_rows);
    if (res.cost.estimated_rows > cost_threshold) {
        res.valid = false;
        res.reason = Verdict::cost;
        res.detail = "estimated rows " + std::to_string(res.cost.estimated_rows) +
                     " exceed threshold";
        return res;
    }
    res.valid = true;
    res.reason = Verdict::valid;
    return res;
}

std::string edge_condition_text(const JoinGraph& jg, const JoinGraphEdge& e,
                                const SchemaGraph& schema) {
    const auto& cond = schema.edges[e.schema_edge].conditions[e.condition];
    const int left_node = e.a_is_left ? e.a : e.b;
    const int right_node = e.a_is_left ? e.b : e.a;
    auto side = [&](int node, const std::string& attr) {
        if (jg.nodes[node].is_pt) return "prov_" + e.pt_alias + "." + attr;
        return jg.nodes[node].alias + "." + attr;
    };
    std::string out;
    for (std::size_t i = 0; i < cond.eqs.size(); ++i) {
        if (i) out += " AND ";
        out += side(left_node, cond.eqs[i].left_attr) + "=" +
               side(right_node, cond.eqs[i].right_attr);
    }
    return out;
}

}  // namespace provex

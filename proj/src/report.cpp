#include "provex/report.hpp"

#include <cmath>
#include <cstdio>

namespace provex {

using nlohmann::ordered_json;

double round4(double x) { return std::round(x * 10000.0) / 10000.0; }

namespace {

ordered_json value_json(const Value& v) {
    if (is_null(v)) return nullptr;
    if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
    if (const auto* d = std::get_if<double>(&v)) return *d;
    return std::get<std::string>(v);
}

std::string key_text(const ProvenanceTable& pt, const Query& q, int result) {
    std::string out = "(";
    for (std::size_t g = 0; g < q.group_by.size(); ++g) {
        if (g) out += ", ";
        out += q.group_out_aliases[g] + "=" + value_display(pt.results[result].key[g]);
    }
    out += ")";
    return out;
}

}  // namespace

ordered_json result_key_json(const ProvenanceTable& pt, const Query& q, int result) {
    ordered_json j = ordered_json::object();
    for (std::size_t g = 0; g < q.group_by.size(); ++g) {
        j[q.group_out_aliases[g]] = value_json(pt.results[result].key[g]);
    }
    return j;
}

ordered_json explanation_json(const Explanation& e, const ProvenanceTable& pt, const Query& q,
                              const SchemaGraph& schema, int rank) {
    ordered_json j;
    j["rank"] = rank;
    j["fscore"] = round4(e.metrics.fscore);
    j["precision"] = round4(e.metrics.precision);
    j["recall"] = round4(e.metrics.recall);
    j["primary"] = result_key_json(pt, q, e.primary);
    j["secondary"] =
        e.secondary ? result_key_json(pt, q, *e.secondary) : ordered_json("rest");
    j["support"] = {{"v1", e.v1}, {"a1", e.a1}, {"v2", e.v2}, {"a2", e.a2}};
    j["pattern"] = ordered_json::array();
    for (const auto& [attr, pred] : e.pattern.predicates) {
        j["pattern"].push_back({{"attr", attr},
                                {"op", cmp_op_name(pred.op)},
                                {"value", value_json(pred.constant)}});
    }
    ordered_json nodes = ordered_json::array();
    for (std::size_t n = 0; n < e.graph.nodes.size(); ++n) {
        nodes.push_back({{"id", n}, {"label", e.graph.nodes[n].is_pt
                                                  ? std::string("PT")
                                                  : e.graph.nodes[n].alias}});
    }
    ordered_json edges = ordered_json::array();
    for (const auto& edge : e.graph.edges) {
        edges.push_back({{"from", edge.a},
                         {"to", edge.b},
                         {"condition", edge_condition_text(e.graph, edge, schema)}});
    }
    j["join_graph"] = {{"signature", e.signature}, {"nodes", nodes}, {"edges", edges}};
    return j;
}

ordered_json report_json(const std::vector<Explanation>& explanations,
                         const std::string& query_text, const QuestionInfo& question,
                         const ProvenanceTable& pt, const Query& q, const SchemaGraph& schema,
                         const MiningParams& params) {
    ordered_json j;
    j["query"] = query_text;
    ordered_json qj;
    qj["type"] = question.single_point ? "single-point" : "two-point";
    if (question.single_point) {
        qj["t"] = result_key_json(pt, q, question.targets.at(0));
        if (!question.dir.empty()) qj["dir"] = question.dir;
    } else {
        qj["t1"] = result_key_json(pt, q, question.targets.at(0));
        qj["t2"] = result_key_json(pt, q, question.targets.at(1));
    }
    j["question"] = std::move(qj);
    j["params"] = {{"k", params.k},
                   {"k_cat", params.k_cat},
                   {"max_edges", params.max_edges},
                   {"sel_attrs", params.sel_attrs},
                   {"max_num_attrs", params.max_num_attrs},
                   {"pat_sample", params.pat_sample},
                   {"f1_sample", params.f1_sample},
                   {"recall_threshold", params.recall_threshold},
                   {"fragments", params.fragments},
                   {"cost_threshold", params.cost_threshold},
                   {"seed", params.seed},
                   {"feature_filter", params.feature_filter}};
    j["explanations"] = ordered_json::array();
    int rank = 1;
    for (const auto& e : explanations) {
        j["explanations"].push_back(explanation_json(e, pt, q, schema, rank++));
    }
    return j;
}

std::string report_text(const std::vector<Explanation>& explanations,
                        const ProvenanceTable& pt, const Query& q, const SchemaGraph& schema) {
    std::string out;
    if (explanations.empty()) {
        out = "no explanations found\n";
        return out;
    }
    int rank = 1;
    char buf[64];
    for (const auto& e : explanations) {
        std::snprintf(buf, sizeof(buf), "%.4f", e.metrics.fscore);
        out += std::to_string(rank++) + ". [fscore " + buf + "] " + e.pattern.canonical() + "\n";
        out += "   join graph: ";
        if (e.graph.edges.empty()) {
            out += "PT only";
        } else {
            bool first = true;
            for (const auto& edge : e.graph.edges) {
                if (!first) out += "; ";
                first = false;
                const auto& a = e.graph.nodes[edge.a];
                const auto& b = e.graph.nodes[edge.b];
                out += (a.is_pt ? "PT" : a.alias) + std::string("--") +
                       (b.is_pt ? "PT" : b.alias) + " [" +
                       edge_condition_text(e.graph, edge, schema) + "]";
            }
        }
        out += "\n   pattern holds in " + std::to_string(e.v1) + " out of " +
               std::to_string(e.a1) + " provenance rows of " + key_text(pt, q, e.primary);
        out += " vs " + std::to_string(e.v2) + " out of " + std::to_string(e.a2) + " rows of ";
        out += e.secondary ? key_text(pt, q, *e.secondary) : std::string("the remaining tuples");
        out += "\n";
    }
    return out;
}

}  // namespace provex

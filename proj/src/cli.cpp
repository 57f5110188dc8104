#include "provex/cli.hpp"

#include <fstream>
#include <functional>
#include <ostream>

#include "provex/error.hpp"

namespace provex {

LoadedProject load_project(const std::string& config_path) {
    LoadedProject p;
    p.config = ProjectConfig::load(config_path);
    p.db = p.config.load_database(parent_dir(config_path));
    p.schema = p.config.schema_graph();
    p.schema.validate(p.db);
    return p;
}

std::vector<std::pair<std::string, std::string>> parse_kv_list(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string part =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!part.empty()) {
            const auto eq = part.find('=');
            if (eq == std::string::npos || eq == 0) {
                throw InputError("expected key=value, got '" + part + "'");
            }
            out.emplace_back(part.substr(0, eq), part.substr(eq + 1));
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw InputError("empty tuple specification");
    return out;
}

int resolve_result(const std::vector<std::pair<std::string, std::string>>& kv, const Query& q,
                   const ProvenanceTable& pt, const Database& db) {
    std::vector<std::pair<int, Value>> constraints;
    for (const auto& [key, raw] : kv) {
        int pos = -1;
        for (std::size_t g = 0; g < q.group_by.size(); ++g) {
            const Table& t = *db.find_table(q.relations[q.group_by[g].rel].table);
            const std::string& attr = t.columns[q.group_by[g].col].name;
            const std::string qualified = q.relations[q.group_by[g].rel].alias + "." + attr;
            if (key == q.group_out_aliases[g] || key == attr || key == qualified) {
                pos = static_cast<int>(g);
                break;
            }
        }
        if (pos < 0) {
            std::string keys;
            for (std::size_t g = 0; g < q.group_out_aliases.size(); ++g) {
                if (g) keys += ", ";
                keys += q.group_out_aliases[g];
            }
            throw InputError("'" + key + "' is not a group-by attribute (available: " + keys +
                             ")");
        }
        const Table& t = *db.find_table(q.relations[q.group_by[pos].rel].table);
        auto parsed = parse_cell(raw, t.columns[q.group_by[pos].col].kind);
        if (!parsed) throw InputError("cannot parse '" + raw + "' for key " + key);
        constraints.emplace_back(pos, std::move(*parsed));
    }

    const int found = pt.find_result(constraints);
    if (found == -2) throw InputError("question tuple is ambiguous, add more key=value pairs");
    if (found < 0) {
        std::string available = "available result tuples:";
        for (std::size_t r = 0; r < pt.results.size(); ++r) {
            available += "\n  ";
            for (std::size_t g = 0; g < q.group_by.size(); ++g) {
                if (g) available += ", ";
                available += q.group_out_aliases[g] + "=" + value_display(pt.results[r].key[g]);
            }
        }
        throw InputError("question tuple not found in the query result; " + available);
    }
    return found;
}

namespace {

int guard(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace

int cmd_explain(const ExplainArgs& args, std::ostream& out, std::ostream& err) {
    return guard(err, [&]() {
        LoadedProject project = load_project(args.config_path);
        const Query q = parse_query(args.query_text, project.db);
        const ProvenanceTable pt = provenance(q, project.db);

        QuestionInfo question;
        question.single_point = args.question.single_point();
        question.dir = args.question.dir;
        if (question.single_point) {
            question.targets.push_back(
                resolve_result(args.question.t, q, pt, project.db));
        } else {
            if (args.question.t1.empty() || args.question.t2.empty()) {
                throw InputError("two-point questions need both --t1 and --t2");
            }
            question.targets.push_back(resolve_result(args.question.t1, q, pt, project.db));
            question.targets.push_back(resolve_result(args.question.t2, q, pt, project.db));
            if (question.targets[0] == question.targets[1]) {
                throw InputError("--t1 and --t2 resolve to the same result tuple");
            }
        }

        auto explanations =
            explain(project.db, project.schema, q, pt, question.targets, args.params);

        out << report_text(explanations, pt, q, project.schema);
        if (!args.out_path.empty()) {
            const auto j = report_json(explanations, args.query_text, question, pt, q,
                                       project.schema, args.params);
            std::ofstream f(args.out_path);
            if (!f) throw InputError("cannot write report to " + args.out_path);
            f << j.dump(2) << "\n";
        }
        return kExitOk;
    });
}

int cmd_enumerate(const EnumerateArgs& args, std::ostream& out, std::ostream& err) {
    return guard(err, [&]() {
        LoadedProject project = load_project(args.config_path);
        const Query q = parse_query(args.query_text, project.db);
        const ProvenanceTable pt = provenance(q, project.db);

        const auto graphs = enumerate_join_graphs(project.schema, q, args.max_edges);
        out << graphs.size() << " join graphs (max edges " << args.max_edges << ")\n";
        for (const auto& jg : graphs) {
            const auto validity = is_valid(jg, project.db, q, project.schema, pt.rows.size(),
                                           args.cost_threshold);
            out << "- signature: " << jg.signature(project.schema) << "\n";
            out << "  nodes:";
            for (const auto& n : jg.nodes) out << " " << (n.is_pt ? "PT" : n.alias);
            out << "\n";
            for (const auto& e : jg.edges) {
                const auto& a = jg.nodes[e.a];
                const auto& b = jg.nodes[e.b];
                out << "  edge: " << (a.is_pt ? "PT" : a.alias) << "--"
                    << (b.is_pt ? "PT" : b.alias) << " ["
                    << edge_condition_text(jg, e, project.schema) << "]\n";
            }
            out << "  estimate: " << validity.cost.estimated_rows << " rows\n";
            if (validity.valid) {
                out << "  verdict: accepted\n";
            } else if (validity.reason == Verdict::pk_uncovered) {
                out << "  verdict: rejected: pk-uncovered (" << validity.detail << ")\n";
            } else {
                out << "  verdict: rejected: cost\n";
            }
        }
        return kExitOk;
    });
}

namespace {

std::optional<JoinGraph> find_graph(const SchemaGraph& schema, const Query& q, int max_edges,
                                    const std::string& signature) {
    for (const auto& jg : enumerate_join_graphs(schema, q, max_edges)) {
        if (jg.signature(schema) == signature) return jg;
    }
    return std::nullopt;
}

}  // namespace

int cmd_inspect(const InspectArgs& args, std::ostream& out, std::ostream& err) {
    return guard(err, [&]() {
        LoadedProject project = load_project(args.config_path);
        const Query q = parse_query(args.query_text, project.db);
        const ProvenanceTable pt = provenance(q, project.db);

        auto jg = find_graph(project.schema, q, args.max_edges, args.signature);
        if (!jg) {
            throw InputError("unknown join graph signature (run the enumerate command): " +
                             args.signature);
        }
        const AptTable apt = materialize(q, project.db, pt, *jg, project.schema);
        out << "rows: " << apt.n_rows << "\n";
        out << "columns:";
        for (const auto& c : apt.columns) {
            out << " " << c.name << (c.group_by ? "[group-by]" : "");
        }
        out << "\n";
        for (std::size_t res = 0; res < apt.n_results; ++res) {
            out << "slice";
            for (std::size_t g = 0; g < q.group_by.size(); ++g) {
                out << " " << q.group_out_aliases[g] << "="
                    << value_display(pt.results[res].key[g]);
            }
            out << ": " << apt.slice(static_cast<int>(res)).size() << " rows over "
                << apt.pt_size_of_result[res] << " provenance rows\n";
        }
        if (!args.dump_apt_path.empty()) {
            std::ofstream f(args.dump_apt_path);
            if (!f) throw InputError("cannot write apt dump to " + args.dump_apt_path);
            f << apt.to_csv();
            out << "apt written to " << args.dump_apt_path << "\n";
        }
        return kExitOk;
    });
}

int cmd_dev_oracle(const DevOracleArgs& args, std::ostream& out, std::ostream& err) {
    return guard(err, [&]() {
        LoadedProject project = load_project(args.config_path);
        const Query q = parse_query(args.query_text, project.db);
        const ProvenanceTable pt = provenance(q, project.db);

        JoinGraph jg = JoinGraph::pt_only();
        if (!args.signature.empty()) {
            auto found = find_graph(project.schema, q, args.max_edges, args.signature);
            if (!found) throw InputError("unknown join graph signature: " + args.signature);
            jg = *found;
        }

        std::vector<int> targets;
        if (args.question.single_point()) {
            targets.push_back(resolve_result(args.question.t, q, pt, project.db));
        } else {
            targets.push_back(resolve_result(args.question.t1, q, pt, project.db));
            targets.push_back(resolve_result(args.question.t2, q, pt, project.db));
        }

        const AptTable apt = materialize(q, project.db, pt, jg, project.schema);
        const auto pools = oracle::ConstantPools::from_apt(apt, args.fragments);
        const auto top =
            oracle::brute_force_top_k(apt, targets, args.max_attrs, pools, args.k);
        int rank = 1;
        char buf[64];
        for (const auto& sp : top) {
            std::snprintf(buf, sizeof(buf), "%.4f", sp.metrics.fscore);
            out << rank++ << ". [fscore " << buf << "] " << sp.pattern.canonical()
                << " primary=";
            for (std::size_t g = 0; g < q.group_by.size(); ++g) {
                if (g) out << ",";
                out << value_display(pt.results[sp.target].key[g]);
            }
            out << " tp=" << sp.metrics.tp << " fp=" << sp.metrics.fp
                << " fn=" << sp.metrics.fn << "\n";
        }
        return kExitOk;
    });
}

}  // namespace provex

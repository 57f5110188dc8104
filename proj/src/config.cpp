#include "provex/config.hpp"

#include <fstream>

#include "provex/error.hpp"

namespace provex {

using nlohmann::ordered_json;

namespace {

ColumnKind parse_kind(const std::string& s) {
    if (s == "categorical") return ColumnKind::categorical;
    if (s == "numeric") return ColumnKind::numeric;
    throw InputError("unknown column type '" + s + "' (use categorical or numeric)");
}

CondEq parse_condition_eq(const std::string& text, const std::string& left_table,
                          const std::string& right_table) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
        throw InputError("schema edge condition missing '=': " + text);
    }
    auto split = [&](const std::string& side) -> std::pair<std::string, std::string> {
        const auto dot = side.find('.');
        if (dot == std::string::npos) {
            throw InputError("schema edge condition side must be Table.attr: " + side);
        }
        return {side.substr(0, dot), side.substr(dot + 1)};
    };
    const auto [q1, a1] = split(text.substr(0, eq));
    const auto [q2, a2] = split(text.substr(eq + 1));
    // Self-edges are ambiguous by name; the first operand is the left side.
    if (left_table == right_table) {
        if (q1 != left_table || q2 != left_table) {
            throw InputError("condition '" + text + "' does not match edge tables");
        }
        return CondEq{a1, a2};
    }
    if (q1 == left_table && q2 == right_table) return CondEq{a1, a2};
    if (q1 == right_table && q2 == left_table) return CondEq{a2, a1};
    throw InputError("condition '" + text + "' does not match edge tables " + left_table +
                     "/" + right_table);
}

}  // namespace

ProjectConfig ProjectConfig::parse(const ordered_json& j) {
    ProjectConfig cfg;
    if (!j.is_object()) throw InputError("config must be a JSON object");
    if (!j.contains("tables") || !j["tables"].is_array()) {
        throw InputError("config needs a 'tables' array");
    }
    for (const auto& tj : j["tables"]) {
        TableConfig tc;
        tc.decl.name = tj.at("name").get<std::string>();
        tc.csv = tj.at("csv").get<std::string>();
        for (const auto& cj : tj.at("columns")) {
            Column col;
            col.name = cj.at("name").get<std::string>();
            col.kind = parse_kind(cj.at("type").get<std::string>());
            tc.decl.columns.push_back(std::move(col));
        }
        if (tj.contains("primary_key")) {
            for (const auto& pk : tj["primary_key"]) {
                tc.decl.primary_key.push_back(pk.get<std::string>());
            }
        }
        if (tj.contains("foreign_keys")) {
            for (const auto& fj : tj["foreign_keys"]) {
                ForeignKey fk;
                for (const auto& c : fj.at("columns")) fk.columns.push_back(c.get<std::string>());
                fk.ref_table = fj.at("ref_table").get<std::string>();
                for (const auto& c : fj.at("ref_columns")) {
                    fk.ref_columns.push_back(c.get<std::string>());
                }
                if (fk.columns.size() != fk.ref_columns.size() || fk.columns.empty()) {
                    throw InputError("foreign key of " + tc.decl.name +
                                     " needs matching non-empty column lists");
                }
                tc.foreign_keys.push_back(std::move(fk));
            }
        }
        cfg.tables.push_back(std::move(tc));
    }

    if (j.contains("schema_edges")) {
        for (const auto& ej : j["schema_edges"]) {
            SchemaEdge edge;
            edge.left = ej.at("left").get<std::string>();
            edge.right = ej.at("right").get<std::string>();
            for (const auto& cond_list : ej.at("conditions")) {
                JoinCondition cond;
                for (const auto& eq : cond_list) {
                    cond.eqs.push_back(
                        parse_condition_eq(eq.get<std::string>(), edge.left, edge.right));
                }
                edge.conditions.push_back(std::move(cond));
            }
            cfg.explicit_edges.push_back(std::move(edge));
        }
    }
    if (j.contains("defaults")) {
        if (!j["defaults"].is_object()) throw InputError("'defaults' must be an object");
        cfg.defaults = j["defaults"];
    } else {
        cfg.defaults = ordered_json::object();
    }
    return cfg;
}

ProjectConfig ProjectConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("config parse error in " + path + ": " + e.what());
    }
    return parse(j);
}

ordered_json ProjectConfig::to_json() const {
    ordered_json j;
    j["tables"] = ordered_json::array();
    for (const auto& tc : tables) {
        ordered_json tj;
        tj["name"] = tc.decl.name;
        tj["csv"] = tc.csv;
        tj["columns"] = ordered_json::array();
        for (const auto& col : tc.decl.columns) {
            tj["columns"].push_back(
                {{"name", col.name},
                 {"type", col.kind == ColumnKind::numeric ? "numeric" : "categorical"}});
        }
        tj["primary_key"] = tc.decl.primary_key;
        if (!tc.foreign_keys.empty()) {
            tj["foreign_keys"] = ordered_json::array();
            for (const auto& fk : tc.foreign_keys) {
                tj["foreign_keys"].push_back({{"columns", fk.columns},
                                              {"ref_table", fk.ref_table},
                                              {"ref_columns", fk.ref_columns}});
            }
        }
        j["tables"].push_back(std::move(tj));
    }
    j["schema_edges"] = ordered_json::array();
    for (const auto& e : explicit_edges) {
        ordered_json ej;
        ej["left"] = e.left;
        ej["right"] = e.right;
        ej["conditions"] = ordered_json::array();
        for (const auto& cond : e.conditions) {
            ordered_json cj = ordered_json::array();
            for (const auto& eq : cond.eqs) {
                cj.push_back(e.left + "." + eq.left_attr + "=" + e.right + "." + eq.right_attr);
            }
            ej["conditions"].push_back(std::move(cj));
        }
        j["schema_edges"].push_back(std::move(ej));
    }
    j["defaults"] = defaults;
    return j;
}

Database ProjectConfig::load_database(const std::string& base_dir) const {
    Database db;
    for (const auto& tc : tables) {
        std::string path = tc.csv;
        if (!path.empty() && path.front() != '/') path = base_dir + "/" + path;
        Table table = load_table(path, tc.decl);
        if (db.tables.count(table.name)) {
            throw InputError("duplicate table declaration: " + table.name);
        }
        db.tables.emplace(table.name, std::move(table));
    }
    return db;
}

SchemaGraph ProjectConfig::schema_graph() const {
    SchemaGraph g;
    g.edges = explicit_edges;
    // Foreign keys derive one edge condition each; merged into an existing
    // edge between the same tables when present.
    for (const auto& tc : tables) {
        for (const auto& fk : tc.foreign_keys) {
            JoinCondition cond;
            for (std::size_t i = 0; i < fk.columns.size(); ++i) {
                cond.eqs.push_back(CondEq{fk.columns[i], fk.ref_columns[i]});
            }
            SchemaEdge* host = nullptr;
            for (auto& e : g.edges) {
                if (e.left == tc.decl.name && e.right == fk.ref_table) {
                    host = &e;
                    break;
                }
            }
            if (!host) {
                g.edges.push_back(SchemaEdge{tc.decl.name, fk.ref_table, {}});
                host = &g.edges.back();
            }
            bool duplicate = false;
            for (const auto& existing : host->conditions) {
                if (existing.eqs.size() != cond.eqs.size()) continue;
                bool same = true;
                for (std::size_t i = 0; i < cond.eqs.size(); ++i) {
                    if (existing.eqs[i].left_attr != cond.eqs[i].left_attr ||
                        existing.eqs[i].right_attr != cond.eqs[i].right_attr) {
                        same = false;
                        break;
                    }
                }
                if (same) {
                    duplicate = true;
                    break;
                }
            }
            if (!duplicate) host->conditions.push_back(std::move(cond));
        }
    }
    return g;
}

void ProjectConfig::apply_defaults(MiningParams& params) const {
    for (const auto& [key, value] : defaults.items()) {
        if (key == "k") params.k = value.get<int>();
        else if (key == "k_cat") params.k_cat = value.get<int>();
        else if (key == "max_edges") params.max_edges = value.get<int>();
        else if (key == "sel_attrs") params.sel_attrs = value.get<int>();
        else if (key == "max_num_attrs") params.max_num_attrs = value.get<int>();
        else if (key == "pat_sample") params.pat_sample = value.get<double>();
        else if (key == "f1_sample") params.f1_sample = value.get<double>();
        else if (key == "recall_threshold") params.recall_threshold = value.get<double>();
        else if (key == "fragments") params.fragments = value.get<int>();
        else if (key == "cost_threshold") params.cost_threshold = value.get<double>();
        else if (key == "seed") params.seed = value.get<std::uint64_t>();
        else if (key == "feature_filter") params.feature_filter = value.get<bool>();
        else if (key == "numeric_eq_refinements")
            params.numeric_eq_refinements = value.get<bool>();
        else if (key == "lca_row_cap") params.lca_row_cap = value.get<int>();
        else if (key == "apt_row_cap") params.apt_row_cap = value.get<std::size_t>();
        else throw InputError("unknown key in config defaults: " + key);
    }
}

std::string parent_dir(const std::string& path) {
    const auto pos = path.find_last_of('/');
    if (pos == std::string::npos) return ".";
    if (pos == 0) return "/";
    return path.substr(0, pos);
}

}  // namespace provex

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "provex/csv.hpp"
#include "provex/mining.hpp"
#include "provex/schema_graph.hpp"

namespace provex {

struct ForeignKey {
    std::vector<std::string> columns;
    std::string ref_table;
    std::vector<std::string> ref_columns;
};

struct TableConfig {
    TableDecl decl;
    std::string csv;  // path, relative to the config file
    std::vector<ForeignKey> foreign_keys;
};

/// The project file: table declarations, schema-graph edges, parameter
/// defaults. JSON on disk; parse/serialize round-trips identically.
struct ProjectConfig {
    std::vector<TableConfig> tables;
    std::vector<SchemaEdge> explicit_edges;
    nlohmann::ordered_json defaults;  // MiningParams overrides

    static ProjectConfig parse(const nlohmann::ordered_json& j);
    static ProjectConfig load(const std::string& path);
    nlohmann::ordered_json to_json() const;

    Database load_database(const std::string& base_dir) const;

    /// Explicit edges plus edges auto-derived from foreign keys
    /// (duplicate conditions merged).
    SchemaGraph schema_graph() const;

    void apply_defaults(MiningParams& params) const;
};

/// Directory part of a path ("." when none).
std::string parent_dir(const std::string& path);

}  // namespace provex

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "provex/config.hpp"
#include "provex/oracle.hpp"
#include "provex/report.hpp"

namespace provex {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;

struct LoadedProject {
    ProjectConfig config;
    Database db;
    SchemaGraph schema;
};

LoadedProject load_project(const std::string& config_path);

/// Raw question from the command line: group-key attribute/value pairs.
struct QuestionSpec {
    std::vector<std::pair<std::string, std::string>> t1;
    std::vector<std::pair<std::string, std::string>> t2;
    std::vector<std::pair<std::string, std::string>> t;
    std::string dir;  // high|low, single-point only

    bool single_point() const { return !t.empty(); }
};

/// "k=v,k=v" -> pairs. Throws InputError on malformed input.
std::vector<std::pair<std::string, std::string>> parse_kv_list(const std::string& text);

/// Resolves one tuple spec to a result index. Keys match a group-by
/// attribute by output alias, bare name, or alias-qualified name.
int resolve_result(const std::vector<std::pair<std::string, std::string>>& kv, const Query& q,
                   const ProvenanceTable& pt, const Database& db);

struct ExplainArgs {
    std::string config_path;
    std::string query_text;
    QuestionSpec question;
    MiningParams params;      // flags already merged over config defaults
    std::string out_path;     // JSON report destination, empty: skip
};

int cmd_explain(const ExplainArgs& args, std::ostream& out, std::ostream& err);

struct EnumerateArgs {
    std::string config_path;
    std::string query_text;
    int max_edges = 3;
    double cost_threshold = 1'000'000.0;
};

int cmd_enumerate(const EnumerateArgs& args, std::ostream& out, std::ostream& err);

struct InspectArgs {
    std::string config_path;
    std::string query_text;
    std::string signature;
    std::string dump_apt_path;  // empty: print stats only
    int max_edges = 3;
};

int cmd_inspect(const InspectArgs& args, std::ostream& out, std::ostream& err);

struct DevOracleArgs {
    std::string config_path;
    std::string query_text;
    QuestionSpec question;
    std::string signature;  // empty: PT-only graph
    int max_attrs = 2;
    int k = 10;
    int fragments = 4;
    int max_edges = 3;
};

int cmd_dev_oracle(const DevOracleArgs& args, std::ostream& out, std::ostream& err);

}  // namespace provex

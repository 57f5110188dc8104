#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "provex/cli.hpp"
#include "provex/error.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot open query file: " << path << "\n";
        std::exit(provex::kExitInput);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CommonOpts {
    std::string config;
    std::string query;
    std::string query_file;

    void attach(CLI::App* app) {
        app->add_option("--config", config, "project config file (JSON)")->required();
        app->add_option("--query", query, "query text");
        app->add_option("--query-file", query_file, "file containing the query text");
    }

    std::string query_text() const {
        if (!query.empty() && !query_file.empty()) {
            std::cerr << "error: pass either --query or --query-file, not both\n";
            std::exit(provex::kExitInput);
        }
        if (!query.empty()) return query;
        if (!query_file.empty()) return read_file(query_file);
        std::cerr << "error: a query is required (--query or --query-file)\n";
        std::exit(provex::kExitInput);
    }
};

std::uint64_t env_seed_fallback(std::uint64_t fallback) {
    const char* env = std::getenv("EXPLAIN_JOINS_SEED");
    if (!env) return fallback;
    try {
        return std::stoull(env);
    } catch (...) {
        std::cerr << "error: EXPLAIN_JOINS_SEED is not a number\n";
        std::exit(provex::kExitInput);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"query-explanation engine over join-augmented provenance"};
    app.require_subcommand(1);

    // explain
    auto* explain = app.add_subcommand("explain", "mine top-k explanations for a question");
    CommonOpts explain_common;
    explain_common.attach(explain);
    std::string t1, t2, t, dir, out_path;
    bool exact = false, no_feature_filter = false, numeric_eq = false;
    bool seed_given = false;
    provex::MiningParams flags;
    explain->add_option("--t1", t1, "primary tuple, key=value[,key=value...]");
    explain->add_option("--t2", t2, "secondary tuple");
    explain->add_option("--t", t, "single-point tuple");
    explain->add_option("--dir", dir, "high|low annotation for --t")
        ->check(CLI::IsMember({"high", "low"}));
    explain->add_option("--k", flags.k, "explanations per join graph");
    explain->add_option("--k-cat", flags.k_cat, "categorical shortlist size");
    explain->add_option("--max-edges", flags.max_edges, "join graph edge budget");
    explain->add_option("--sel-attrs", flags.sel_attrs, "attributes kept by relevance filter");
    explain->add_option("--max-num-attrs", flags.max_num_attrs,
                        "numeric predicates per pattern");
    explain->add_option("--pat-sample", flags.pat_sample, "LCA sample rate");
    explain->add_option("--f1-sample", flags.f1_sample, "metric sample rate");
    explain->add_option("--recall-threshold", flags.recall_threshold, "recall pruning bound");
    explain->add_option("--fragments", flags.fragments, "numeric domain fragments");
    explain->add_option("--cost-threshold", flags.cost_threshold,
                        "estimated APT row budget per join graph");
    explain->add_option("--seed", flags.seed, "RNG seed")->each([&](const std::string&) {
        seed_given = true;
    });
    explain->add_option("--out", out_path, "write the JSON report here");
    explain->add_flag("--no-feature-filter", no_feature_filter,
                      "keep all attributes (skip relevance filter and clustering)");
    explain->add_flag("--numeric-eq", numeric_eq, "also generate '=' numeric refinements");
    explain->add_flag("--exact", exact, "force both sample rates to 1.0");

    // enumerate
    auto* enumerate = app.add_subcommand("enumerate", "list join graphs with verdicts");
    CommonOpts enum_common;
    enum_common.attach(enumerate);
    provex::EnumerateArgs enum_args;
    enumerate->add_option("--max-edges", enum_args.max_edges, "join graph edge budget");
    enumerate->add_option("--cost-threshold", enum_args.cost_threshold,
                          "estimated APT row budget");

    // inspect
    auto* inspect = app.add_subcommand("inspect", "materialize one join graph's APT");
    CommonOpts inspect_common;
    inspect_common.attach(inspect);
    provex::InspectArgs inspect_args;
    inspect->add_option("--graph", inspect_args.signature, "join graph signature")->required();
    inspect->add_option("--dump-apt", inspect_args.dump_apt_path, "write the APT as CSV");
    inspect->add_option("--max-edges", inspect_args.max_edges, "enumeration bound for lookup");

    // dev oracle
    auto* dev = app.add_subcommand("dev", "development helpers");
    auto* dev_oracle = dev->add_subcommand("oracle", "brute-force top-k for comparison");
    CommonOpts oracle_common;
    oracle_common.attach(dev_oracle);
    provex::DevOracleArgs oracle_args;
    std::string ot1, ot2, ot;
    dev_oracle->add_option("--t1", ot1, "primary tuple");
    dev_oracle->add_option("--t2", ot2, "secondary tuple");
    dev_oracle->add_option("--t", ot, "single-point tuple");
    dev_oracle->add_option("--graph", oracle_args.signature, "join graph signature");
    dev_oracle->add_option("--max-attrs", oracle_args.max_attrs, "max predicates per pattern");
    dev_oracle->add_option("--k", oracle_args.k, "result size");
    dev_oracle->add_option("--fragments", oracle_args.fragments, "numeric domain fragments");
    dev_oracle->add_option("--max-edges", oracle_args.max_edges, "enumeration bound");

    CLI11_PARSE(app, argc, argv);

    try {
        if (explain->parsed()) {
            provex::ExplainArgs args;
            args.config_path = explain_common.config;
            args.query_text = explain_common.query_text();
            args.out_path = out_path;

            // Config defaults sit under the flags: start from them, then
            // overwrite whatever was passed explicitly.
            provex::MiningParams merged;
            provex::ProjectConfig cfg = provex::ProjectConfig::load(args.config_path);
            cfg.apply_defaults(merged);
            auto set = [&](const std::string& name) { return explain->count(name) > 0; };
            if (set("--k")) merged.k = flags.k;
            if (set("--k-cat")) merged.k_cat = flags.k_cat;
            if (set("--max-edges")) merged.max_edges = flags.max_edges;
            if (set("--sel-attrs")) merged.sel_attrs = flags.sel_attrs;
            if (set("--max-num-attrs")) merged.max_num_attrs = flags.max_num_attrs;
            if (set("--pat-sample")) merged.pat_sample = flags.pat_sample;
            if (set("--f1-sample")) merged.f1_sample = flags.f1_sample;
            if (set("--recall-threshold")) merged.recall_threshold = flags.recall_threshold;
            if (set("--fragments")) merged.fragments = flags.fragments;
            if (set("--cost-threshold")) merged.cost_threshold = flags.cost_threshold;
            merged.seed = seed_given ? flags.seed : env_seed_fallback(merged.seed);
            if (no_feature_filter) merged.feature_filter = false;
            if (numeric_eq) merged.numeric_eq_refinements = true;
            if (exact) {
                merged.pat_sample = 1.0;
                merged.f1_sample = 1.0;
            }
            args.params = merged;

            args.question.dir = dir;
            if (!t.empty()) args.question.t = provex::parse_kv_list(t);
            if (!t1.empty()) args.question.t1 = provex::parse_kv_list(t1);
            if (!t2.empty()) args.question.t2 = provex::parse_kv_list(t2);
            if (args.question.t.empty() && (t1.empty() || t2.empty())) {
                std::cerr << "error: pass --t1/--t2 or --t\n";
                return provex::kExitInput;
            }
            return provex::cmd_explain(args, std::cout, std::cerr);
        }
        if (enumerate->parsed()) {
            enum_args.config_path = enum_common.config;
            enum_args.query_text = enum_common.query_text();
            return provex::cmd_enumerate(enum_args, std::cout, std::cerr);
        }
        if (inspect->parsed()) {
            inspect_args.config_path = inspect_common.config;
            inspect_args.query_text = inspect_common.query_text();
            return provex::cmd_inspect(inspect_args, std::cout, std::cerr);
        }
        if (dev_oracle->parsed()) {
            oracle_args.config_path = oracle_common.config;
            oracle_args.query_text = oracle_common.query_text();
            if (!ot.empty()) oracle_args.question.t = provex::parse_kv_list(ot);
            if (!ot1.empty()) oracle_args.question.t1 = provex::parse_kv_list(ot1);
            if (!ot2.empty()) oracle_args.question.t2 = provex::parse_kv_list(ot2);
            return provex::cmd_dev_oracle(oracle_args, std::cout, std::cerr);
        }
    } catch (const provex::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return provex::kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return provex::kExitInternal;
    }
    return provex::kExitInput;
}

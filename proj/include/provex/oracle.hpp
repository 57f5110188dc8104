#pragma once

#include <optional>
#include <string>
#include <vector>

#include "provex/mining.hpp"

namespace provex {
namespace oracle {

/// Constant pools the brute-force search draws from. Kept explicit so
/// tests can align them with (or extend beyond) the pipeline's pools.
struct ConstantPools {
    struct CatPool {
        std::string attr;
        std::vector<std::string> values;
    };
    struct NumPool {
        std::string attr;
        std::vector<double> boundaries;
    };
    std::vector<CatPool> categorical;
    std::vector<NumPool> numeric;
    bool numeric_eq = false;

    /// Full active domains for categorical attributes, fragment
    /// boundaries for numeric ones; group-by attributes excluded.
    static ConstantPools from_apt(const AptTable& apt, int fragments, bool numeric_eq = false);

    /// Number of candidate patterns with 1..max_attrs predicates.
    std::size_t pattern_space(int max_attrs) const;
};

/// Exhaustive search: exact metrics for every pattern with up to
/// max_attrs predicates over the pools, each question target evaluated
/// as primary; global top-k by fscore with canonical tie-break.
/// Refuses (LimitError, message carries the count) when the space
/// exceeds `guard`. Matching and metrics are computed here from first
/// principles, independent of the pipeline's code paths.
std::vector<ScoredPattern> brute_force_top_k(const AptTable& apt,
                                             const std::vector<int>& targets,
                                             int max_attrs, const ConstantPools& pools,
                                             int k, std::size_t guard = 10'000'000);

/// Exact metrics of one pattern via the oracle's own evaluation.
MetricSet exact_metrics(const AptTable& apt, const Pattern& p, int primary,
                        std::optional<int> secondary);

/// Literal sigma-over-cross-product APT: every PT row paired with every
/// combination of node rows, filtered by the join conjunction. Rows are
/// value-encoded strings, sorted, for multiset comparison against a
/// materialized table (see encode_apt).
struct NaiveApt {
    std::vector<std::string> columns;
    std::vector<std::string> rows;  // sorted encodings
};
NaiveApt naive_apt(const Query& q, const Database& db, const ProvenanceTable& pt,
                   const JoinGraph& jg, const SchemaGraph& schema,
                   std::size_t guard = 2'000'000);

/// Encoding of a materialized AptTable in the same format.
std::vector<std::string> encode_apt(const AptTable& apt);

/// All join graphs reachable by single-edge attachment, deduplicated by
/// pairwise isomorphism checks rather than signatures.
std::vector<JoinGraph> exhaustive_join_graphs(const SchemaGraph& schema, const Query& q,
                                              int max_edges);

bool isomorphic(const JoinGraph& a, const JoinGraph& b, const SchemaGraph& schema);

struct RankingComparison {
    std::int64_t kendall_tau = 0;  // discordant pairs over common items
    double ndcg = 1.0;             // graded relevance = reference score
};

/// Compares a candidate ranking against a reference ranking of scored
/// items. Items are matched by key; missing items have relevance 0.
RankingComparison ranking_quality(const std::vector<std::pair<std::string, double>>& reference,
                                  const std::vector<std::string>& candidate, std::size_t n);

}  // namespace oracle
}  // namespace provex

#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "provex/apt.hpp"
#include "provex/metrics.hpp"
#include "provex/relevance.hpp"

namespace provex {

/// Tuning knobs of the mining pipeline. Field defaults are the defaults
/// of the CLI flags of the same name.
struct MiningParams {
    int k = 10;                      // result size per join graph
    int k_cat = 30;                  // categorical shortlist size per target
    int max_edges = 3;               // join-graph edge budget
    int sel_attrs = 3;               // attributes kept by the relevance filter
    int max_num_attrs = 3;           // numeric predicates per pattern
    double pat_sample = 0.1;         // sample rate for LCA candidate generation
    int lca_row_cap = 1000;          // row cap of the LCA sample
    double f1_sample = 0.3;          // sample rate for metric estimation
    double recall_threshold = 0.1;   // patterns below are pruned
    int fragments = 4;               // numeric domain fragments (quartiles)
    double cost_threshold = 1'000'000.0;  // estimated APT rows
    std::size_t apt_row_cap = 5'000'000;  // hard materialization cap
    std::uint64_t seed = 1;
    bool feature_filter = true;
    bool numeric_eq_refinements = false;  // '=' on fragment boundaries

    void validate() const;  // throws InputError on out-of-range values
};

/// A pattern candidate from LCA generalization with its generation
/// multiplicity.
struct LcaCandidate {
    Pattern pattern;
    std::int64_t frequency = 0;
};

/// A candidate evaluated against the question targets.
struct MinedCandidate {
    Pattern pattern;
    std::int64_t frequency = 0;
    std::vector<double> est_recall;     // per target position
    std::vector<std::uint8_t> shortlisted;  // per target position
};

struct ScoredPattern {
    Pattern pattern;
    int target = 0;  // result index the metrics describe
    MetricSet metrics;
};

struct Explanation {
    std::string signature;
    JoinGraph graph;
    int graph_edges = 0;
    Pattern pattern;
    int primary = 0;                  // result index
    std::optional<int> secondary;     // nullopt: the rest of the results
    MetricSet metrics;
    std::int64_t v1 = 0, a1 = 0, v2 = 0, a2 = 0;  // support counts
};

/// Debug/verification hook: what the recall threshold pruned.
struct MiningTrace {
    struct Pruned {
        Pattern pattern;
        int target;
        double est_recall;
    };
    std::vector<Pruned> pruned;
    std::vector<LcaCandidate> lca_pool;  // deduplicated LCA output
};

/// Pairwise generalization of the sample rows: keep '=' on categorical
/// attributes both rows agree on (non-null), wildcard elsewhere. The
/// all-wildcard pattern is discarded; duplicates merge with counted
/// frequency. Candidates are returned in canonical order.
std::vector<LcaCandidate> lca_candidates(const AptTable& apt,
                                         const std::vector<std::uint32_t>& sample_rows,
                                         const std::vector<int>& categorical_cols);

/// Per target: keep candidates with estimated recall >= the threshold,
/// rank by (recall desc, frequency desc, canonical asc), truncate to
/// k_cat. Prunings are recorded in the trace when given.
std::vector<MinedCandidate> pick_top_k_cat(const std::vector<LcaCandidate>& candidates,
                                           int k_cat, const AptTable& apt,
                                           const std::vector<int>& targets,
                                           const PtSample& sample, double recall_threshold,
                                           MiningTrace* trace);

/// One-step numeric refinements of a pattern: every wildcard numeric
/// representative, every fragment boundary, ops {<=, >=} plus '=' when
/// enabled. Respects the numeric-predicate budget.
std::vector<Pattern> refine(const Pattern& base, const std::vector<int>& numeric_cols,
                            const std::vector<std::vector<double>>& boundaries,
                            const AptTable& apt, int max_num_attrs, bool with_eq);

/// Similarity penalty between two patterns, in [-2, 1]: per constrained
/// attribute of `phi`, +1 when `other` wildcards it, -0.3 when both
/// constrain it differently, -2 on an identical condition.
double match_score(const Pattern& phi, const Pattern& other, const std::string& attr);
double diversity_score(const Pattern& phi, const Pattern& other);

/// Greedy diverse top-k: the first pick maximizes fscore; each further
/// pick maximizes fscore + min diversity against the picks so far.
/// Exact (pattern, target) duplicates are never selected twice.
std::vector<ScoredPattern> diversity_top_k(const std::vector<ScoredPattern>& scored, int k);

/// The per-join-graph pipeline: materialize, sample, filter attributes,
/// LCA, shortlist, refinement with recall pruning, diversity top-k.
/// `targets` holds 2 result indices for a two-point question or 1 for a
/// single-point question (false positives then come from all other
/// results). Each explanation records the better-scoring target as its
/// primary tuple.
std::vector<Explanation> mine_apt(const Database& db, const Query& q, const ProvenanceTable& pt,
                                  const JoinGraph& jg, const SchemaGraph& schema,
                                  const std::vector<int>& targets, const MiningParams& params,
                                  MiningTrace* trace = nullptr);

/// Cross-graph driver: enumerate join graphs, mine every valid one,
/// union the per-graph top-k lists, deduplicate and rank by fscore
/// (ties: fewer edges, canonical pattern, signature).
std::vector<Explanation> explain(const Database& db, const SchemaGraph& schema, const Query& q,
                                 const ProvenanceTable& pt, const std::vector<int>& targets,
                                 const MiningParams& params, MiningTrace* trace = nullptr);

}  // namespace provex

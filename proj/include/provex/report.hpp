#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "provex/mining.hpp"
#include "provex/sql.hpp"

namespace provex {

/// Half-even-free rounding to 4 decimal places for serialized ratios.
double round4(double x);

struct QuestionInfo {
    bool single_point = false;
    std::vector<int> targets;  // result indices; [t1, t2] or [t]
    std::string dir;           // "high"/"low" annotation for single-point
};

/// Group-key object of one result tuple, keyed by the query's output
/// aliases.
nlohmann::ordered_json result_key_json(const ProvenanceTable& pt, const Query& q, int result);

nlohmann::ordered_json explanation_json(const Explanation& e, const ProvenanceTable& pt,
                                        const Query& q, const SchemaGraph& schema, int rank);

/// The machine-readable report; identical inputs and seed produce a
/// byte-identical serialization.
nlohmann::ordered_json report_json(const std::vector<Explanation>& explanations,
                                   const std::string& query_text, const QuestionInfo& question,
                                   const ProvenanceTable& pt, const Query& q,
                                   const SchemaGraph& schema, const MiningParams& params);

std::string report_text(const std::vector<Explanation>& explanations,
                        const ProvenanceTable& pt, const Query& q, const SchemaGraph& schema);

}  // namespace provex

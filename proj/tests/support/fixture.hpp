#pragma once

#include <string>

#include "provex/cli.hpp"
#include "provex/sql.hpp"

namespace testsupport {

inline std::string fixture_dir() { return PROVEX_FIXTURE_DIR; }
inline std::string nba_config() { return fixture_dir() + "/nba/config.json"; }
inline std::string nba_config_strict_pk() { return fixture_dir() + "/nba/config_strict_pk.json"; }

inline const char* kQ1 =
    "SELECT winner AS team, season, count(*) AS win "
    "FROM Game g WHERE winner = 'GSW' GROUP BY winner, season";

/// The running-example database with its query loaded and the two
/// question tuples resolved.
struct NbaFixture {
    provex::LoadedProject project;
    provex::Query q;
    provex::ProvenanceTable pt;
    int t_2012;  // (GSW, 2012-13)
    int t_2013;  // (GSW, 2013-14)
    int t_2015;  // (GSW, 2015-16)

    explicit NbaFixture(bool strict_pk = false)
        : project(provex::load_project(strict_pk ? nba_config_strict_pk() : nba_config())),
          q(provex::parse_query(kQ1, project.db)),
          pt(provex::provenance(q, project.db)) {
        t_2012 = provex::resolve_result({{"season", "2012-13"}}, q, pt, project.db);
        t_2013 = provex::resolve_result({{"season", "2013-14"}}, q, pt, project.db);
        t_2015 = provex::resolve_result({{"season", "2015-16"}}, q, pt, project.db);
    }

    /// PT joined with PlayerGameScoring on the game key (first condition
    /// of the first schema edge).
    provex::JoinGraph omega1() const {
        provex::JoinGraph jg = provex::JoinGraph::pt_only();
        jg.nodes.push_back(provex::JoinGraphNode{false, "PlayerGameScoring",
                                                 "PlayerGameScoring_1"});
        provex::JoinGraphEdge e;
        e.a = 0;
        e.b = 1;
        e.schema_edge = 0;
        e.condition = 0;
        e.a_is_left = false;  // PT stands on the Game side of the condition
        e.pt_alias = "g";
        jg.edges.push_back(e);
        return jg;
    }

    /// The star-player pattern: player = 'S.Curry' and pts >= 23.
    provex::Pattern phi1() const {
        provex::Pattern p;
        p.predicates["PlayerGameScoring_1.player"] =
            provex::Predicate{"PlayerGameScoring_1.player", provex::CmpOp::eq,
                              provex::Value{std::string("S.Curry")}};
        p.predicates["PlayerGameScoring_1.pts"] =
            provex::Predicate{"PlayerGameScoring_1.pts", provex::CmpOp::ge,
                              provex::Value{std::int64_t{23}}};
        return p;
    }
};

}  // namespace testsupport
